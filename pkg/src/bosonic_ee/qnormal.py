"""q-numbers, the q-normal density, q-Hermite polynomials and the closed
form of the fourth-moment parameter q(N, m, k) for k-body boson ensembles.

The q-normal family f(x|q) is a standardized (zero mean, unit variance)
density on the symmetric interval (-2/sqrt(1-q), +2/sqrt(1-q)).  It is the
semicircle at q = 0, the Gaussian at q = 1, and the orthogonality weight of
the q-Hermite polynomials in between.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .fock import dimension

# Tail bound for truncating the infinite products of the q-normal density:
# factors beyond the first index K with q^(K+1) < PRODUCT_TAIL differ from 1
# by less than machine epsilon.
PRODUCT_TAIL = 1e-16

# Above this the truncated products would need millions of factors; the
# density is within discretization error of the Gaussian limit already.
GAUSSIAN_CUTOFF = 1.0 - 1e-8


def q_number(n: int, q: float) -> float:
    """[n]_q = 1 + q + ... + q^(n-1), with [0]_q = 0.

    Evaluated by direct summation, which stays accurate at q -> 1 where the
    (1 - q^n)/(1 - q) form degenerates.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    total = 0.0
    power = 1.0
    for _ in range(n):
        total += power
        power *= q
    return total


def q_factorial(n: int, q: float) -> float:
    """[n]_q! = prod_{j=1..n} [j]_q, with [0]_q! = 1."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = 1.0
    for j in range(1, n + 1):
        out *= q_number(j, q)
    return out


def q_support(q: float) -> tuple[float, float]:
    """Support interval of the q-normal density; (-inf, inf) at q = 1."""
    _check_q(q)
    if q >= 1.0:
        return (-math.inf, math.inf)
    half = 2.0 / math.sqrt(1.0 - q)
    return (-half, half)


def _check_q(q: float) -> None:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")


def _product_cutoff(q: float) -> int:
    """Smallest K with q^(K+1) < PRODUCT_TAIL (K = 0 at q = 0)."""
    if q == 0.0:
        return 0
    return max(0, math.ceil(math.log(PRODUCT_TAIL) / math.log(q)) - 1)


def q_normal_pdf(x, q: float):
    """Standardized q-normal density f(x|q); zero outside the support.

    Both infinite products are truncated at the first index where the factor
    is 1 to machine precision.  q = 1 (and q within 1e-8 of it) evaluates the
    Gaussian limit in closed form.
    """
    _check_q(q)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    if q >= GAUSSIAN_CUTOFF:
        out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    else:
        lo, hi = q_support(q)
        inside = (x > lo) & (x < hi)
        out = np.zeros_like(x)
        xin = x[inside]
        disc = 4.0 - (1.0 - q) * xin * xin

        cutoff = _product_cutoff(q)
        const = math.sqrt(1.0 - q)
        poly = np.ones_like(xin)
        power = 1.0  # q^k'
        for _ in range(cutoff + 1):
            const *= 1.0 - q * power
            poly *= (1.0 + power) ** 2 - (1.0 - q) * power * xin * xin
            power *= q
        out[inside] = const * poly / (2.0 * math.pi * np.sqrt(disc))

    return float(out[0]) if scalar else out


def q_hermite(n: int, x, q: float):
    """q-Hermite polynomial H_n(x|q) from the three-term recursion

    H_{n+1} = x H_n - [n]_q H_{n-1},  H_0 = 1,  H_{-1} = 0.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    for j in range(n):
        h, h_prev = x * h - q_number(j, q) * h_prev, h
    return float(h) if scalar else h


def _comb0(n: int, k: int) -> int:
    """Binomial coefficient that is zero for negative or oversized lower index."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def propagation_factor(n_levels: int, n_bosons: int, rank: int, nu: int) -> int:
    """C(m - nu, r) * C(N + m + nu - 1, r), exact integer.

    At nu = 0 this is the ensemble-averaged spectral variance of the
    embedded k-body ensemble with rank r (unit off-diagonal variance).
    """
    if min(n_levels, n_bosons, rank, nu) < 0:
        raise ValueError("all arguments must be non-negative")
    return _comb0(n_bosons - nu, rank) * _comb0(n_levels + n_bosons + nu - 1, rank)


def unitary_block_dimension(n_levels: int, nu: int) -> int:
    """Dimension C(N+nu-1, nu)^2 - C(N+nu-2, nu-1)^2 of the nu-th U(N) block."""
    if n_levels < 1 or nu < 0:
        raise ValueError("need n_levels >= 1 and nu >= 0")
    return _comb0(n_levels + nu - 1, nu) ** 2 - _comb0(n_levels + nu - 2, nu - 1) ** 2


def spectral_variance(n_levels: int, n_bosons: int, rank: int) -> int:
    """Ensemble-averaged spectral variance, i.e. the nu = 0 propagation factor."""
    return propagation_factor(n_levels, n_bosons, rank, 0)


def q_parameter(n_levels: int, n_bosons: int, rank: int) -> float:
    """Fourth-moment parameter q(N, m, k) of the eigenvalue density.

    q = C(N+m-1, m)^-1 * sum_{nu=0}^{min(k, m-k)}
        Lam^nu(N,m,m-k) Lam^nu(N,m,k) d(g_nu) / Lam^0(N,m,k)^2

    evaluated with exact big-integer binomials and a single final division.
    The excess kurtosis of the density is q - 1.  The closed form is accurate
    for k >= 2; it is known to deviate at k = 1, where the Monte Carlo
    estimate (q_from_eigenvalues averaged over members) should be preferred.
    """
    if not 1 <= rank <= n_bosons:
        raise ValueError(f"need 1 <= rank <= n_bosons, got rank={rank}, m={n_bosons}")
    nu_max = min(rank, n_bosons - rank)
    total = 0
    for nu in range(nu_max + 1):
        total += (
            propagation_factor(n_levels, n_bosons, n_bosons - rank, nu)
            * propagation_factor(n_levels, n_bosons, rank, nu)
            * unitary_block_dimension(n_levels, nu)
        )
    lam0 = propagation_factor(n_levels, n_bosons, rank, 0)
    value = Fraction(total, dimension(n_levels, n_bosons) * lam0 * lam0)
    q = float(value)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q({n_levels},{n_bosons},{rank}) = {q} outside (0, 1]")
    return q


def q_from_eigenvalues(eigenvalues: np.ndarray) -> float:
    """Per-spectrum q estimate: excess kurtosis of the eigenvalues plus one.

    May fall outside [0, 1] for small dimensions; the value is returned
    unclamped so callers can detect and exclude such members.
    """
    e = np.asarray(eigenvalues, dtype=float)
    if e.size < 4:
        raise ValueError(f"need at least 4 eigenvalues, got {e.size}")
    c = e - e.mean()
    m2 = np.mean(c * c)
    if m2 == 0.0:
        raise ValueError("zero spectral variance; q is undefined")
    m4 = np.mean(c ** 4)
    return m4 / (m2 * m2) - 2.0
