"""Ensemble aggregation: moments of the lowest-eigenvalue distribution,
exponent extraction for the centroid/width scaling ansatz, histogram fits
against the reference distributions, and spacing statistics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .distributions import (
    gumbel_pdf,
    gumbel_standardize,
    spacing_reference,
    tracy_widom_standardized,
)

GUMBEL_MU_RANGE = (0.2, 50.0)
GUMBEL_MU_TOL = 1e-3
HIST_RANGE = (-5.0, 4.0)
HIST_BINS = 40
SPACING_RANGE = (0.0, 5.0)


@dataclass(frozen=True)
class EnsembleRecord:
    """Per-member extremal data."""

    member_index: int
    lambda0: float
    lambda1: float
    spectrum_mean: float
    spectrum_variance: float
    q_member: float

    def __post_init__(self) -> None:
        if self.lambda0 > self.lambda1:
            raise ValueError(
                f"lambda0={self.lambda0} exceeds lambda1={self.lambda1}"
            )


@dataclass(frozen=True)
class MomentSummary:
    """First four moments of a sample (kurtosis is the full m4/m2^2)."""

    centroid: float
    width: float
    skewness: float
    kurtosis: float
    count: int


@dataclass(frozen=True)
class Histogram:
    """Normalized histogram (densities integrate to one)."""

    centers: np.ndarray
    densities: np.ndarray
    widths: np.ndarray
    n_samples: int

    @property
    def bins(self) -> int:
        return self.centers.size


@dataclass(frozen=True)
class FitReport:
    """Residual sum of squares of one candidate distribution."""

    kind: str
    mu: float | None
    rss: float
    bins: int
    n_samples: int

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "rss": self.rss,
            "bins": self.bins,
            "n_samples": self.n_samples,
        }
        if self.mu is not None:
            out["mu"] = self.mu
        return out


def moments(values: Sequence[float]) -> MomentSummary:
    """Sample moments: mean, sqrt of unbiased variance, m3/m2^1.5, m4/m2^2.

    Central sums use math.fsum, so the result is independent of input order
    to the last bit.
    """
    x = [float(v) for v in values]
    n = len(x)
    if n < 4:
        raise ValueError(f"need at least 4 values, got {n}")
    mean = math.fsum(x) / n
    c = [v - mean for v in x]
    m2 = math.fsum(v * v for v in c) / n
    if m2 == 0.0:
        raise ValueError("sample has zero variance")
    m3 = math.fsum(v ** 3 for v in c) / n
    m4 = math.fsum(v ** 4 for v in c) / n
    var_unbiased = m2 * n / (n - 1)
    return MomentSummary(
        centroid=mean,
        width=math.sqrt(var_unbiased),
        skewness=m3 / m2 ** 1.5,
        kurtosis=m4 / (m2 * m2),
        count=n,
    )


def scale_lowest(lam: float, centroid: float, width: float) -> float:
    """Standardized lowest eigenvalue (lam - centroid) / width."""
    if width <= 0:
        raise ValueError(f"width must be > 0, got {width}")
    return (lam - centroid) / width


def alpha_from_centroid(
    centroid: float, q: float, variance_coeff: float, beta: int
) -> float:
    """Exponent alpha solving centroid = -2 (beta Lam0)^alpha / sqrt(1 - q)."""
    if centroid >= 0:
        raise ValueError(f"centroid must be negative, got {centroid}")
    if not 0.0 <= q < 1.0:
        raise ValueError(f"q must lie in [0, 1), got {q}")
    base = beta * variance_coeff
    if base <= 1.0:
        raise ValueError(f"beta * Lam0 must exceed 1, got {base}")
    return math.log(-centroid * math.sqrt(1.0 - q) / 2.0) / math.log(base)


def alpha_ergodic(
    records: Sequence[EnsembleRecord], variance_coeff: float, beta: int
) -> tuple[float, int]:
    """Ergodicity-corrected exponent alpha and the number of excluded members.

    Each member contributes lambda0_i * sqrt(1 - q_i); members with
    q_i >= 1 (possible at small dimension) are excluded and counted.
    """
    base = beta * variance_coeff
    if base <= 1.0:
        raise ValueError(f"beta * Lam0 must exceed 1, got {base}")
    usable = [r for r in records if r.q_member < 1.0]
    excluded = len(records) - len(usable)
    if not usable:
        raise ValueError("no members with q_member < 1")
    centroid = math.fsum(
        r.lambda0 * math.sqrt(1.0 - r.q_member) for r in usable
    ) / len(usable)
    if centroid >= 0:
        raise ValueError(f"corrected centroid must be negative, got {centroid}")
    return math.log(-centroid / 2.0) / math.log(base), excluded


def width_exponents(
    width: float, variance_coeff: float, k_dim: int
) -> tuple[float, float]:
    """Exponents (mu1, mu2) of the two width parameterizations

    width = Lam0^mu1  and  width = Lam0^mu2 * d_k^(-1/2).
    """
    if width <= 0:
        raise ValueError(f"width must be > 0, got {width}")
    if variance_coeff <= 1.0:
        raise ValueError(f"Lam0 must exceed 1, got {variance_coeff}")
    if k_dim < 1:
        raise ValueError(f"d_k must be >= 1, got {k_dim}")
    log_lam = math.log(variance_coeff)
    mu1 = math.log(width) / log_lam
    mu2 = (math.log(width) + 0.5 * math.log(k_dim)) / log_lam
    return mu1, mu2


def histogram(
    values: Sequence[float],
    bins: int = HIST_BINS,
    hist_range: tuple[float, float] | None = None,
) -> Histogram:
    """Normalized histogram; sum(density * width) is 1 up to rounding."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if x.size < bins:
        raise ValueError(f"need at least as many samples ({x.size}) as bins ({bins})")
    densities, edges = np.histogram(x, bins=bins, range=hist_range, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    return Histogram(
        centers=centers,
        densities=densities,
        widths=widths,
        n_samples=int(x.size),
    )


def _rss(hist: Histogram, pdf_values: np.ndarray) -> float:
    diff = hist.densities - pdf_values
    return float(np.dot(diff, diff))


def _gumbel_rss(hist: Histogram, mu: float) -> float:
    return _rss(hist, gumbel_pdf(hist.centers, gumbel_standardize(mu)))


def _fit_gumbel(hist: Histogram) -> tuple[float, float]:
    """Best G_mu on the search range: bracket scan, then golden section
    refined below GUMBEL_MU_TOL, then a local polish.
    """
    lo, hi = GUMBEL_MU_RANGE
    scan = np.geomspace(lo, hi, 64)
    rss_scan = np.array([_gumbel_rss(hist, mu) for mu in scan])

    interior = [
        i
        for i in range(1, len(scan) - 1)
        if rss_scan[i] < rss_scan[i - 1] and rss_scan[i] < rss_scan[i + 1]
    ]
    if len(interior) > 1:
        warnings.warn(
            "multiple local RSS minima in the Gumbel mu scan: "
            + ", ".join(f"mu={scan[i]:.3g}" for i in interior),
            stacklevel=3,
        )

    best = int(np.argmin(rss_scan))
    a = scan[max(best - 1, 0)]
    b = scan[min(best + 1, len(scan) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = _gumbel_rss(hist, c), _gumbel_rss(hist, d)
    while b - a > GUMBEL_MU_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _gumbel_rss(hist, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _gumbel_rss(hist, d)

    res = minimize_scalar(
        lambda mu: _gumbel_rss(hist, mu),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-12},
    )
    mu_best = float(res.x)
    return mu_best, _gumbel_rss(hist, mu_best)


def fit_distribution(hist: Histogram, kind: str, beta: int = 1) -> FitReport:
    """RSS of one candidate against a standardized histogram.

    gaussian and tw are parameter free; gumbel optimizes mu on
    GUMBEL_MU_RANGE.
    """
    if kind == "gaussian":
        pdf = np.exp(-0.5 * hist.centers ** 2) / math.sqrt(2.0 * math.pi)
        return FitReport("gaussian", None, _rss(hist, pdf), hist.bins, hist.n_samples)
    if kind == "tw":
        table = tracy_widom_standardized(beta, reflected=True)
        return FitReport(
            "tw", None, _rss(hist, table.pdf_at(hist.centers)), hist.bins, hist.n_samples
        )
    if kind == "gumbel":
        mu, rss = _fit_gumbel(hist)
        return FitReport("gumbel", mu, rss, hist.bins, hist.n_samples)
    raise ValueError(f"unknown fit kind {kind!r}")


def fit_spacing(hist: Histogram, kind: str) -> FitReport:
    """RSS of a spacing reference (poisson / wigner_goe / wigner_gue)."""
    pdf = spacing_reference(kind, hist.centers)
    return FitReport(kind, None, _rss(hist, pdf), hist.bins, hist.n_samples)


def spacing_sample(records: Sequence[EnsembleRecord]) -> np.ndarray:
    """Normalized spacings s_i = (lambda1_i - lambda0_i) / mean gap."""
    if len(records) < 2:
        raise ValueError("need at least 2 members")
    gaps = np.array([r.lambda1 - r.lambda0 for r in records], dtype=float)
    mean_gap = gaps.mean()
    if mean_gap == 0.0:
        raise ValueError("zero mean spacing")
    return gaps / mean_gap
