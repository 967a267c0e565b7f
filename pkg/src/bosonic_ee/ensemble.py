"""Sampling of k-body GOE/GUE interaction matrices and their embedding into
the m-boson space.

Conventions for the defining k-particle matrix v:

* beta = 1 (orthogonal): real symmetric, independent Gaussians with variance
  2 on the diagonal and 1 off the diagonal.
* beta = 2 (unitary): complex Hermitian, off-diagonal real and imaginary
  parts each of variance 1; the diagonal is real with variance 2 so both
  symmetry classes share <|v_ij|^2> = 1 + delta_ij in the off-diagonal
  normalization.

Both are realized as (G + G^dagger)/sqrt(2) from an i.i.d. standard normal
(complex for beta = 2) square matrix G, which is self-adjoint bit-exactly.

The embedded matrix is

    H[A, B] = sum_{a, b} v[a, b] <A| B+(a) B(b) |B>,

accumulated by summing, over intermediate (m-k)-boson states c, rank-d_k
scatter updates with amplitudes prod_i sqrt(C(c_i + a_i, a_i)).  This costs
O(d_{m-k} * d_k^2) per member instead of the naive O(d_k^2 * d_m^2).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .fock import creation_amplitude_sq, dimension, enumerate_basis
from .kernels import accumulate_embedding

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def member_seed(master_seed: int, member_index: int) -> int:
    """Sub-seed for one ensemble member: splitmix64 output.

    The splitmix64 stream is seeded at master_seed and advanced
    member_index + 1 steps; the finalizer mix of that state is returned.
    Deterministic, 64-bit, and independent of evaluation order, so members
    can be generated in parallel with reproducible results.
    """
    if member_index < 0:
        raise ValueError(f"member_index must be >= 0, got {member_index}")
    z = (master_seed + (member_index + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of one embedded ensemble."""

    n_levels: int
    n_bosons: int
    rank: int
    beta: int
    members: int
    master_seed: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= self.n_bosons:
            raise ValueError(
                f"need 1 <= rank <= n_bosons, got rank={self.rank}, m={self.n_bosons}"
            )
        if self.beta not in (1, 2):
            raise ValueError(f"beta must be 1 or 2, got {self.beta}")
        if self.members < 1:
            raise ValueError(f"members must be >= 1, got {self.members}")


@dataclass(frozen=True)
class EmbeddedHamiltonian:
    """Dense self-adjoint m-boson matrix with its provenance."""

    matrix: np.ndarray
    n_levels: int
    n_bosons: int
    rank: int
    beta: int
    member_seed: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def sample_kbody(n_levels: int, rank: int, beta: int, seed: int) -> np.ndarray:
    """Draw one defining k-particle matrix (GOE for beta=1, GUE for beta=2).

    Deterministic function of the seed (PCG64 stream, standard normal
    variates in row-major order).
    """
    if beta not in (1, 2):
        raise ValueError(f"beta must be 1 or 2, got {beta}")
    d = dimension(n_levels, rank)
    rng = np.random.default_rng(seed)
    if beta == 1:
        g = rng.standard_normal((d, d))
        return (g + g.T) / np.sqrt(2.0)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / np.sqrt(2.0)


@dataclass(frozen=True)
class EmbeddingPlan:
    """Precomputed scatter structure of the embedding for fixed (N, m, k).

    Row c of (target, amplitude) describes the intermediate (m-k)-boson
    state c: adding the j-th k-boson label to c lands on m-state
    target[c, j] with amplitude amplitude[c, j].
    """

    n_levels: int
    n_bosons: int
    rank: int
    target: np.ndarray     # (d_inter, d_k) int64 indices into the m-basis
    amplitude: np.ndarray  # (d_inter, d_k) float64 positive amplitudes
    dim_m: int
    dim_k: int


@lru_cache(maxsize=None)
def embedding_plan(n_levels: int, n_bosons: int, rank: int) -> EmbeddingPlan:
    if not 1 <= rank <= n_bosons:
        raise ValueError(
            f"need 1 <= rank <= n_bosons, got rank={rank}, m={n_bosons}"
        )
    labels = enumerate_basis(n_levels, rank)
    inter = enumerate_basis(n_levels, n_bosons - rank)
    m_index = {state: i for i, state in enumerate(enumerate_basis(n_levels, n_bosons))}

    d_k = len(labels)
    d_i = len(inter)
    target = np.empty((d_i, d_k), dtype=np.int64)
    amplitude = np.empty((d_i, d_k), dtype=np.float64)
    for c, low in enumerate(inter):
        for j, lab in enumerate(labels):
            reached = tuple(n + a for n, a in zip(low, lab))
            target[c, j] = m_index[reached]
            amplitude[c, j] = np.sqrt(creation_amplitude_sq(low, lab))

    target.flags.writeable = False
    amplitude.flags.writeable = False
    return EmbeddingPlan(
        n_levels=n_levels,
        n_bosons=n_bosons,
        rank=rank,
        target=target,
        amplitude=amplitude,
        dim_m=dimension(n_levels, n_bosons),
        dim_k=d_k,
    )


def _mirror_lower(h: np.ndarray) -> np.ndarray:
    """Self-adjoint matrix from the lower triangle of h (bit-exact symmetry)."""
    strict = np.tril(h, -1)
    diag = h.diagonal()
    if np.iscomplexobj(h):
        return strict + strict.conj().T + np.diag(diag.real.astype(complex))
    return strict + strict.T + np.diag(diag)


def embed_kbody(v: np.ndarray, plan: EmbeddingPlan) -> np.ndarray:
    """Embed a defining k-body matrix into the m-boson space.

    The lower triangle is accumulated and mirrored, so the output is exactly
    self-adjoint.  The map is linear in v, and reduces to the identity (in
    the fixed basis ordering) when rank = n_bosons.
    """
    v = np.ascontiguousarray(v)
    if v.shape != (plan.dim_k, plan.dim_k):
        raise ValueError(
            f"v has shape {v.shape}, expected ({plan.dim_k}, {plan.dim_k})"
        )
    h = np.zeros((plan.dim_m, plan.dim_m), dtype=v.dtype)
    accumulate_embedding(h, plan.amplitude, plan.target, v)
    return _mirror_lower(h)


def embed(
    n_levels: int, n_bosons: int, rank: int, v: np.ndarray, *,
    beta: int = 1, seed: int = 0,
) -> EmbeddedHamiltonian:
    """Convenience wrapper building the plan and returning the full record."""
    plan = embedding_plan(n_levels, n_bosons, rank)
    h = embed_kbody(v, plan)
    h.flags.writeable = False
    return EmbeddedHamiltonian(
        matrix=h,
        n_levels=n_levels,
        n_bosons=n_bosons,
        rank=rank,
        beta=beta,
        member_seed=seed,
    )


def generate_ensemble(spec: EnsembleSpec) -> Iterator[EmbeddedHamiltonian]:
    """Stream the ensemble members, one embedded Hamiltonian at a time.

    Member i is a deterministic function of member_seed(master_seed, i), so
    the stream is reproducible and independent of how it is consumed.
    """
    plan = embedding_plan(spec.n_levels, spec.n_bosons, spec.rank)
    for i in range(spec.members):
        seed = member_seed(spec.master_seed, i)
        v = sample_kbody(spec.n_levels, spec.rank, spec.beta, seed)
        h = embed_kbody(v, plan)
        h.flags.writeable = False
        yield EmbeddedHamiltonian(
            matrix=h,
            n_levels=spec.n_levels,
            n_bosons=spec.n_bosons,
            rank=spec.rank,
            beta=spec.beta,
            member_seed=seed,
        )


def dump_kbody_csv(v: np.ndarray, path) -> None:
    """Audit dump of a sampled k-body matrix (columns: row, col, real, imag)."""
    v = np.asarray(v)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "real", "imag"])
        for i in range(v.shape[0]):
            for j in range(v.shape[1]):
                z = complex(v[i, j])
                writer.writerow([i, j, repr(z.real), repr(z.imag)])
