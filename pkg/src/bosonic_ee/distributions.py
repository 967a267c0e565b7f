"""Standardized reference distributions for extreme-value comparisons.

Provides the standard Gaussian, the Tracy-Widom laws for beta = 1, 2
computed from the Painleve II representation, the modified Gumbel family
G_mu, and the nearest-neighbor spacing references (Poisson and the Wigner
surmises for GOE/GUE).

Tracy-Widom construction: with Q the Hastings-McLeod solution of
Q'' = s Q + 2 Q^3 (Q ~ Ai at +infinity),

    F2(x) = exp( -int_x^inf (s - x) Q(s)^2 ds ),
    F1(x) = exp( -1/2 int_x^inf Q(s) ds ) * sqrt(F2(x)).

The ODE is integrated from s = +10 (Airy initial data, with the exact
closed-form tail integrals) down to s = -10 at local tolerance 1e-12,
accumulating the three quadratures alongside; outside this window both CDFs
differ from {0, 1} by far less than 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import airy, digamma, gammainc, gammaincinv, gammaln, itairy, ndtr, polygamma

GRID_STEP = 0.01
TW_WINDOW = 10.0
TW_ODE_RTOL = 1e-12
# Far below the Airy initial data Q(10) ~ 1e-10: the backward trajectory
# rides the separatrix solution of Painleve II, and any absolute-tolerance
# slack there seeds a relative error that grows to a pole near s ~ -6.
TW_ODE_ATOL = 1e-30
# Perturbations of the separatrix grow like exp((2 sqrt2/3)|s|^{3/2}) in both
# directions below the turning point, so the initial-value integration stops
# here and the far left tail (cumulative mass < 1e-20) switches to the
# locally evaluated s -> -inf expansion, which does not amplify errors.
TW_MATCH_POINT = -8.0
TW_MATCH_TOL = 1e-2


@dataclass(frozen=True)
class DistributionTable:
    """Tabulated standardizable distribution on an ascending grid.

    moments = (mean, variance, skewness, full kurtosis), computed from the
    table by trapezoidal quadrature at construction.
    """

    grid: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray
    moments: tuple[float, float, float, float]

    @classmethod
    def from_arrays(cls, grid, pdf, cdf) -> "DistributionTable":
        grid = np.asarray(grid, dtype=float)
        pdf = np.asarray(pdf, dtype=float)
        cdf = np.asarray(cdf, dtype=float)
        moments = _table_moments(grid, pdf)
        table = cls(grid=grid, pdf=pdf, cdf=cdf, moments=moments)
        table._validate()
        for arr in (grid, pdf, cdf):
            arr.flags.writeable = False
        return table

    def _validate(self) -> None:
        if not (np.diff(self.grid) > 0).all():
            raise ValueError("grid must be strictly ascending")
        if (self.pdf < 0).any():
            raise ValueError("pdf has negative entries")
        if (np.diff(self.cdf) < 0).any():
            raise ValueError("cdf is not non-decreasing")
        if not (self.cdf[0] < 1e-6 and self.cdf[-1] > 1 - 1e-6):
            raise ValueError(
                f"cdf endpoints {self.cdf[0]}, {self.cdf[-1]} do not span [0, 1]"
            )
        mass = np.trapezoid(self.pdf, self.grid)
        if abs(mass - 1.0) > 1e-6:
            raise ValueError(f"pdf integrates to {mass}, expected 1")

    def pdf_at(self, x) -> np.ndarray:
        """Linear interpolation of the density; zero outside the grid."""
        return np.interp(x, self.grid, self.pdf, left=0.0, right=0.0)

    def cdf_at(self, x) -> np.ndarray:
        return np.interp(x, self.grid, self.cdf, left=0.0, right=1.0)

    def quantile(self, p) -> np.ndarray:
        """Inverse CDF by interpolation on the strictly increasing part."""
        keep = np.concatenate(([True], np.diff(self.cdf) > 0))
        return np.interp(p, self.cdf[keep], self.grid[keep])

    def standardized(self) -> "DistributionTable":
        """Affine transform of the table to zero mean and unit variance."""
        mean, var = self.moments[0], self.moments[1]
        sig = math.sqrt(var)
        return DistributionTable.from_arrays(
            (self.grid - mean) / sig, self.pdf * sig, self.cdf
        )

    def reflected(self) -> "DistributionTable":
        """Mirror image x -> -x (lowest- vs largest-eigenvalue convention)."""
        return DistributionTable.from_arrays(
            -self.grid[::-1], self.pdf[::-1], (1.0 - self.cdf)[::-1]
        )

    def to_csv(self, path) -> None:
        """Write x, pdf, cdf rows; moments go into '#'-prefixed header lines."""
        mean, var, skew, kurt = self.moments
        with open(path, "w") as fh:
            fh.write(f"# mean={mean!r}\n")
            fh.write(f"# variance={var!r}\n")
            fh.write(f"# skewness={skew!r}\n")
            fh.write(f"# kurtosis={kurt!r}\n")
            fh.write("x,pdf,cdf\n")
            for x, p, c in zip(self.grid, self.pdf, self.cdf):
                fh.write(f"{x!r},{p!r},{c!r}\n")


def _table_moments(grid: np.ndarray, pdf: np.ndarray) -> tuple[float, float, float, float]:
    mean = np.trapezoid(grid * pdf, grid)
    c = grid - mean
    m2 = np.trapezoid(c * c * pdf, grid)
    m3 = np.trapezoid(c ** 3 * pdf, grid)
    m4 = np.trapezoid(c ** 4 * pdf, grid)
    return (float(mean), float(m2), float(m3 / m2 ** 1.5), float(m4 / (m2 * m2)))


def gaussian_std() -> DistributionTable:
    """Standard normal tabulated on [-6, 6]."""
    grid = np.linspace(-6.0, 6.0, int(round(12.0 / GRID_STEP)) + 1)
    pdf = np.exp(-0.5 * grid * grid) / math.sqrt(2.0 * math.pi)
    return DistributionTable.from_arrays(grid, pdf, ndtr(grid))


def _painleve_rhs(s, y):
    q, qp, _, _, _ = y
    return (qp, s * q + 2.0 * q ** 3, -q * q, -s * q * q, -q)


def _airy_tail_integrals(s: float) -> tuple[float, float, float]:
    """Closed forms of int_s^inf Ai^2, t Ai^2 and Ai dt."""
    ai, aip, _, _ = airy(s)
    i1 = aip * aip - s * ai * ai
    i2 = (s * aip * aip - s * s * ai * ai - ai * aip) / 3.0
    apt, _, _, _ = itairy(s)  # int_0^s Ai dt
    i3 = 1.0 / 3.0 - apt
    return float(i1), float(i2), float(i3)


def _left_asymptotic(s: float) -> tuple[float, float]:
    """Hastings-McLeod Q and Q' from the s -> -inf expansion

    Q(s) = sqrt(-s/2) (1 + s^-3/8 - (73/128) s^-6 + (10657/1024) s^-9 + ...),

    accurate to ~1e-8 relative at s = -10; the residual decays moving into
    the integration domain.
    """
    u = math.sqrt(-s / 2.0)
    p = 1.0 + s ** -3 / 8.0 - (73.0 / 128.0) * s ** -6 + (10657.0 / 1024.0) * s ** -9
    dp = -3.0 / 8.0 * s ** -4 + (438.0 / 128.0) * s ** -7 - (95913.0 / 1024.0) * s ** -10
    q = u * p
    qp = -p / (4.0 * u) + u * dp
    return q, qp


def _solve_tracy_widom() -> dict[str, np.ndarray]:
    s0 = TW_WINDOW
    sm = TW_MATCH_POINT
    ai, aip, _, _ = airy(s0)
    i1, i2, i3 = _airy_tail_integrals(s0)
    down = solve_ivp(
        _painleve_rhs,
        (s0, sm),
        (float(ai), float(aip), i1, i2, i3),
        method="LSODA",
        rtol=TW_ODE_RTOL,
        atol=TW_ODE_ATOL,
        dense_output=True,
    )
    if not down.success:
        raise RuntimeError(f"Painleve II integration failed: {down.message}")

    mismatch = abs(down.y[0, -1] - _left_asymptotic(sm)[0])
    if mismatch > TW_MATCH_TOL:
        raise RuntimeError(
            f"integrated Q and the left expansion disagree at s={sm}: |dQ| = {mismatch:.3e}"
        )

    grid = np.linspace(-TW_WINDOW, TW_WINDOW, int(round(2 * TW_WINDOW / GRID_STEP)) + 1)
    right = grid >= sm
    vals = np.empty((5, grid.size))
    vals[:, right] = down.sol(grid[right])

    # Left tail from the expansion, with the three integrals continued from
    # their matched values by cumulative trapezoid on the fine grid (the
    # total mass below the match point is ~1e-21, so this the accuracy here
    # is far beyond what the moments can see).
    left = grid[~right]
    ext = np.append(left, sm)
    q_left = np.array([_left_asymptotic(s)[0] for s in ext])
    vals[0, ~right] = q_left[:-1]
    vals[1, ~right] = [_left_asymptotic(s)[1] for s in left]
    i_match = down.y[2:, -1]
    for row, integrand in ((2, q_left ** 2), (3, ext * q_left ** 2), (4, q_left)):
        seg = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(ext)
        # I(x) = I(sm) + int_x^{sm}
        vals[row, ~right] = i_match[row - 2] + (np.cumsum(seg[::-1])[::-1])
    _, _, int_q2, int_sq2, int_q = vals
    f2 = np.exp(-(int_sq2 - grid * int_q2))
    theta = -0.5 * int_q
    f1 = np.exp(theta) * np.sqrt(f2)
    # Both CDFs are strictly increasing analytically; the running max only
    # irons out sub-tolerance interpolation wiggles in the flat tails.
    f1 = np.maximum.accumulate(np.clip(f1, 0.0, 1.0))
    f2 = np.maximum.accumulate(np.clip(f2, 0.0, 1.0))
    return {"grid": grid, "F1": f1, "F2": f2}


_tw_solution_cache: dict[str, np.ndarray] | None = None
_tw_table_cache: dict[tuple, DistributionTable] = {}


def tracy_widom(beta: int, reflected: bool = False) -> DistributionTable:
    """Tracy-Widom table for the largest (or, reflected, lowest) eigenvalue.

    The density is obtained by differentiating a cubic spline of the CDF
    table (step 0.01).  Tables are cached per process and bit-stable across
    calls.
    """
    if beta not in (1, 2):
        raise ValueError(f"beta must be 1 or 2, got {beta}")
    key = (beta, reflected)
    if key in _tw_table_cache:
        return _tw_table_cache[key]

    global _tw_solution_cache
    if _tw_solution_cache is None:
        _tw_solution_cache = _solve_tracy_widom()
    sol = _tw_solution_cache

    cdf = sol[f"F{beta}"]
    grid = sol["grid"]
    pdf = np.clip(CubicSpline(grid, cdf).derivative()(grid), 0.0, None)
    table = DistributionTable.from_arrays(grid, pdf, cdf)
    if reflected:
        table = table.reflected()
    _tw_table_cache[key] = table
    return table


def tracy_widom_standardized(beta: int, reflected: bool = True) -> DistributionTable:
    """Standardized (zero-mean, unit-variance) Tracy-Widom table, cached."""
    key = (beta, reflected, "std")
    if key not in _tw_table_cache:
        _tw_table_cache[key] = tracy_widom(beta, reflected).standardized()
    return _tw_table_cache[key]


def tw_normalize(e_min: float, dim: int, beta: int) -> float:
    """Edge variable D^(1/6) * (E_min + 2 sqrt(beta D)) compared against TW."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    return dim ** (1.0 / 6.0) * (e_min + 2.0 * math.sqrt(beta * dim))


@dataclass(frozen=True)
class GumbelParams:
    """Location/scale/normalization of the standardized modified Gumbel G_mu.

    In z = (E - u)/v the density is proportional to exp(mu z - mu e^z); the
    parameters are fixed so the E-density has mean 0 and variance 1.  The
    normalization is kept as log_w = ln(mu^mu / (v Gamma(mu))), which stays
    finite for large mu where w itself overflows.
    """

    mu: float
    u: float
    v: float
    log_w: float

    @property
    def w(self) -> float:
        return math.exp(self.log_w)


def gumbel_standardize(mu: float) -> GumbelParams:
    """Parameters of the zero-mean unit-variance G_mu (left-skewed, v > 0).

    With t = mu e^z Gamma(mu)-distributed, z has mean psi(mu) - ln(mu) and
    variance psi'(mu), which fixes v = 1/sqrt(psi'(mu)) and
    u = -v (psi(mu) - ln mu).
    """
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    v = 1.0 / math.sqrt(polygamma(1, mu))
    u = -v * (digamma(mu) - math.log(mu))
    log_w = mu * math.log(mu) - gammaln(mu) - math.log(v)
    return GumbelParams(mu=mu, u=u, v=v, log_w=float(log_w))


def gumbel_pdf(e, params: GumbelParams):
    """Density of the modified Gumbel G_mu at e (vectorized).

    Underflow in the double exponential is mapped to an exact zero.
    """
    e = np.asarray(e, dtype=float)
    scalar = e.ndim == 0
    z = (e - params.u) / params.v
    with np.errstate(over="ignore", under="ignore"):
        log_pdf = params.log_w + params.mu * z - params.mu * np.exp(z)
        out = np.exp(log_pdf)
    out = np.where(np.isfinite(out), out, 0.0)
    return float(out) if scalar else out


def gumbel_cdf(e, params: GumbelParams):
    """CDF of G_mu via the regularized incomplete gamma function."""
    e = np.asarray(e, dtype=float)
    z = (e - params.u) / params.v
    with np.errstate(over="ignore"):
        t = params.mu * np.exp(z)
    return gammainc(params.mu, np.where(np.isfinite(t), t, np.finfo(float).max))


def gumbel_table(mu: float, tail: float = 1e-8) -> DistributionTable:
    """Tabulated standardized G_mu between its tail quantiles."""
    params = gumbel_standardize(mu)
    z_lo = math.log(gammaincinv(params.mu, tail) / params.mu)
    z_hi = math.log(gammaincinv(params.mu, 1.0 - tail) / params.mu)
    lo = params.u + params.v * z_lo
    hi = params.u + params.v * z_hi
    n = max(2001, int(math.ceil((hi - lo) / GRID_STEP)) + 1)
    grid = np.linspace(lo, hi, n)
    return DistributionTable.from_arrays(
        grid, gumbel_pdf(grid, params), gumbel_cdf(grid, params)
    )


def spacing_reference(kind: str, s):
    """Reference nearest-neighbor spacing densities with unit mean spacing.

    poisson:     exp(-s)
    wigner_goe:  (pi/2) s exp(-pi s^2 / 4)
    wigner_gue:  (32/pi^2) s^2 exp(-4 s^2 / pi)
    """
    s = np.asarray(s, dtype=float)
    if (s < 0).any():
        raise ValueError("spacings must be non-negative")
    scalar = s.ndim == 0
    if kind == "poisson":
        out = np.exp(-s)
    elif kind == "wigner_goe":
        out = (math.pi / 2.0) * s * np.exp(-math.pi * s * s / 4.0)
    elif kind == "wigner_gue":
        out = (32.0 / math.pi ** 2) * s * s * np.exp(-4.0 * s * s / math.pi)
    else:
        raise ValueError(f"unknown spacing reference {kind!r}")
    return float(out) if scalar else out
