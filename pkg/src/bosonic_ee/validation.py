"""Self-contained invariant suite behind the `bee validate` subcommand.

Each check returns (name, passed, detail).  The suite covers the library's
structural invariants on small systems and finishes in well under two
minutes.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .distributions import (
    gumbel_pdf,
    gumbel_standardize,
    spacing_reference,
    tracy_widom,
)
from .ensemble import embed_kbody, embedding_plan, sample_kbody
from .eigen import eigenvalues_selfadjoint
from .fock import apply_pair_monomial, dimension, enumerate_basis, index_state, state_index
from .qnormal import (
    q_factorial,
    q_hermite,
    q_normal_pdf,
    q_parameter,
    q_support,
)
from .runner import compute_records

Check = tuple[str, bool, str]


def _basis_bijection() -> Check:
    for n in range(1, 6):
        for p in range(0, 9):
            basis = enumerate_basis(n, p)
            if len(basis) != dimension(n, p):
                return ("basis_bijection", False, f"wrong count at N={n}, p={p}")
            for i, state in enumerate(basis):
                if state_index(state) != i or index_state(i, n, p) != state:
                    return ("basis_bijection", False, f"roundtrip broken at N={n}, p={p}")
    return ("basis_bijection", True, "N <= 5, p <= 8")


def _monomial_single_level() -> Check:
    for m in range(0, 13):
        for k in range(0, m + 1):
            out = apply_pair_monomial((m,), (k,), (k,))
            assert out is not None
            state, amp = out
            if state != (m,) or amp != float(math.comb(m, k)):
                return ("monomial_single_level", False, f"m={m}, k={k}: amp={amp}")
    return ("monomial_single_level", True, "diagonal amplitude equals C(m, k)")


def _embedding_oracle() -> Check:
    rng = np.random.default_rng(99)
    for n in range(1, 4):
        for m in range(1, 5):
            for k in range(1, m + 1):
                plan = embedding_plan(n, m, k)
                labels = enumerate_basis(n, k)
                states = enumerate_basis(n, m)
                v = rng.standard_normal((plan.dim_k, plan.dim_k))
                v = v + v.T
                h = embed_kbody(v, plan)
                slow = np.zeros_like(h)
                for a, lab_a in enumerate(labels):
                    for b, lab_b in enumerate(labels):
                        for col, ket in enumerate(states):
                            out = apply_pair_monomial(ket, lab_b, lab_a)
                            if out is None:
                                continue
                            bra, amp = out
                            slow[state_index(bra), col] += v[a, b] * amp
                if not np.allclose(h, slow, rtol=0, atol=1e-12 * max(1.0, abs(slow).max())):
                    return ("embedding_oracle", False, f"mismatch at N={n}, m={m}, k={k}")
    return ("embedding_oracle", True, "matches monomial-by-monomial action, N<=3, m<=4")


def _embedding_selfadjoint() -> Check:
    rng = np.random.default_rng(7)
    for beta in (1, 2):
        v = sample_kbody(4, 2, beta, 1234)
        h = embed_kbody(v, embedding_plan(4, 5, 2))
        if not np.array_equal(h, h.conj().T):
            return ("embedding_selfadjoint", False, f"beta={beta} not bit-exact")
    plan = embedding_plan(3, 3, 3)
    v = rng.standard_normal((plan.dim_k, plan.dim_k))
    v = v + v.T
    if not np.array_equal(embed_kbody(v, plan), v):
        return ("embedding_selfadjoint", False, "k=m embedding is not the identity")
    return ("embedding_selfadjoint", True, "bit-exact self-adjointness; k=m identity")


def _qnormal_normalization() -> Check:
    for q in np.round(np.arange(0.0, 1.01, 0.1), 10):
        lo, hi = q_support(float(q))
        if math.isinf(hi):
            lo, hi = -12.0, 12.0
        mass, _ = quad(lambda x: q_normal_pdf(x, float(q)), lo, hi, limit=200)
        var, _ = quad(lambda x: x * x * q_normal_pdf(x, float(q)), lo, hi, limit=200)
        if abs(mass - 1.0) > 1e-8:
            return ("qnormal_normalization", False, f"q={q}: mass={mass}")
        if abs(var - 1.0) > 1e-8:
            return ("qnormal_normalization", False, f"q={q}: variance={var}")
    return ("qnormal_normalization", True, "unit mass and variance, q = 0 .. 1")


def _qhermite_orthogonality() -> Check:
    for q in (0.0, 0.3, 0.7):
        lo, hi = q_support(q)
        for n in range(5):
            for m in range(n, 5):
                val, _ = quad(
                    lambda x: q_hermite(n, x, q) * q_hermite(m, x, q) * q_normal_pdf(x, q),
                    lo,
                    hi,
                    limit=200,
                )
                expect = q_factorial(n, q) if n == m else 0.0
                if abs(val - expect) > 1e-6:
                    return (
                        "qhermite_orthogonality",
                        False,
                        f"q={q}, (n,m)=({n},{m}): {val} vs {expect}",
                    )
    return ("qhermite_orthogonality", True, "[n]_q! delta_nm, n,m <= 4")


def _q_parameter_km() -> Check:
    for n, m in ((4, 4), (5, 6), (3, 7)):
        expect = 1.0 / dimension(n, m) ** 2
        got = q_parameter(n, m, m)
        if abs(got - expect) > 1e-15 * expect:
            return ("q_parameter_km", False, f"(N,m)=({n},{m}): {got} vs {expect}")
    return ("q_parameter_km", True, "q(N, m, m) = 1/d_m^2")


def _eigensolver_traces() -> Check:
    rng = np.random.default_rng(11)
    a = rng.standard_normal((50, 50))
    try:
        eigenvalues_selfadjoint((a + a.T) / 2)
        b = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
        eigenvalues_selfadjoint((b + b.conj().T) / 2)
    except RuntimeError as exc:
        return ("eigensolver_traces", False, str(exc))
    return ("eigensolver_traces", True, "trace identities hold online")


def _scheduling_determinism() -> Check:
    base, _ = compute_records(4, 5, 2, 1, 8, master_seed=321, workers=1)
    again, _ = compute_records(4, 5, 2, 1, 8, master_seed=321, workers=1)
    parallel, _ = compute_records(4, 5, 2, 1, 8, master_seed=321, workers=2)
    if base != again:
        return ("scheduling_determinism", False, "rerun differs")
    if base != parallel:
        return ("scheduling_determinism", False, "worker count changes results")
    return ("scheduling_determinism", True, "records invariant under reruns and workers")


def _tracy_widom_tables() -> Check:
    for beta in (1, 2):
        t1 = tracy_widom(beta, reflected=True)
        t2 = tracy_widom(beta, reflected=True)
        if t1 is not t2:
            return ("tracy_widom_tables", False, "cache returned distinct tables")
        if (np.diff(t1.cdf) < 0).any():
            return ("tracy_widom_tables", False, f"beta={beta} cdf not monotone")
        mass = np.trapezoid(t1.pdf, t1.grid)
        if abs(mass - 1.0) > 1e-6:
            return ("tracy_widom_tables", False, f"beta={beta} mass={mass}")
    return ("tracy_widom_tables", True, "cached, normalized, monotone")


def _gumbel_standardization() -> Check:
    for mu in (1.0, math.pi / 2, 5.0):
        params = gumbel_standardize(mu)
        mean, _ = quad(lambda e: e * gumbel_pdf(e, params), -60, 10, limit=400)
        var, _ = quad(lambda e: e * e * gumbel_pdf(e, params), -60, 10, limit=400)
        if abs(mean) > 1e-8 or abs(var - 1.0) > 1e-8:
            return ("gumbel_standardization", False, f"mu={mu}: mean={mean}, var={var}")
    return ("gumbel_standardization", True, "zero mean, unit variance by quadrature")


def _spacing_unit_mean() -> Check:
    for kind in ("poisson", "wigner_goe", "wigner_gue"):
        mean, _ = quad(lambda s: s * spacing_reference(kind, s), 0, 50, limit=400)
        if abs(mean - 1.0) > 1e-8:
            return ("spacing_unit_mean", False, f"{kind}: mean={mean}")
    return ("spacing_unit_mean", True, "all references have unit mean spacing")


ALL_CHECKS = (
    _basis_bijection,
    _monomial_single_level,
    _embedding_oracle,
    _embedding_selfadjoint,
    _qnormal_normalization,
    _qhermite_orthogonality,
    _q_parameter_km,
    _eigensolver_traces,
    _scheduling_determinism,
    _tracy_widom_tables,
    _gumbel_standardization,
    _spacing_unit_mean,
)


def run_validation() -> list[Check]:
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashed check is a failed check
            results.append((check.__name__.lstrip("_"), False, f"raised {exc!r}"))
    return results
