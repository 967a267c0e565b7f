"""Bosonic occupation-number bases and normalized particle-monomial operators.

States of p spinless bosons on N degenerate single-particle levels are
occupation vectors (n_1, ..., n_N) with sum n_i = p.  The basis ordering is
descending lexicographic on the occupation vector, which is deterministic
across runs and platforms.  Normalized creation monomials act as

    B+(nu) |n> = prod_i sqrt(C(n_i + nu_i, nu_i)) |n + nu>,

with B(nu) the adjoint, so that B+(nu)|0> is a unit-norm state.
"""

from __future__ import annotations

import math
from functools import lru_cache

# Occupation totals above this are rejected: every amplitude is the square
# root of a product of exact integer binomials, and the bound keeps those
# integers well inside float range before the final sqrt.
MAX_BOSONS = 64


def dimension(n_levels: int, n_particles: int) -> int:
    """Dimension C(N + p - 1, p) of the p-boson space on N levels.

    Exact integer arithmetic (Python integers never wrap around).
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1, got {n_levels}")
    if n_particles < 0:
        raise ValueError(f"n_particles must be >= 0, got {n_particles}")
    return math.comb(n_levels + n_particles - 1, n_particles)


@lru_cache(maxsize=None)
def enumerate_basis(n_levels: int, n_particles: int) -> tuple[tuple[int, ...], ...]:
    """All occupation vectors of n_particles bosons on n_levels levels.

    Ordered by descending lexicographic occupation vector, e.g.
    (2, 2) -> (2,0), (1,1), (0,2).
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1, got {n_levels}")
    if n_particles < 0:
        raise ValueError(f"n_particles must be >= 0, got {n_particles}")
    if n_particles > MAX_BOSONS:
        raise ValueError(
            f"n_particles={n_particles} exceeds supported bound {MAX_BOSONS}"
        )

    states: list[tuple[int, ...]] = []

    def fill(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            states.append(prefix + (remaining,))
            return
        for count in range(remaining, -1, -1):
            fill(prefix + (count,), remaining - count, slots - 1)

    fill((), n_particles, n_levels)
    assert len(states) == dimension(n_levels, n_particles)
    return tuple(states)


@lru_cache(maxsize=None)
def _index_table(n_levels: int, n_particles: int) -> dict[tuple[int, ...], int]:
    basis = enumerate_basis(n_levels, n_particles)
    return {state: i for i, state in enumerate(basis)}


def _validate_state(state: tuple[int, ...]) -> tuple[int, int]:
    """Return (n_levels, n_particles) of a well-formed occupation vector."""
    if len(state) < 1:
        raise ValueError("occupation vector must have length >= 1")
    if any((not isinstance(n, int)) or n < 0 for n in state):
        raise ValueError(f"occupations must be non-negative integers, got {state}")
    total = sum(state)
    if total > MAX_BOSONS:
        raise ValueError(f"particle number {total} exceeds supported bound {MAX_BOSONS}")
    return len(state), total


def state_index(state: tuple[int, ...]) -> int:
    """Position of an occupation vector in its basis enumeration."""
    n_levels, n_particles = _validate_state(tuple(state))
    table = _index_table(n_levels, n_particles)
    return table[tuple(state)]


def index_state(index: int, n_levels: int, n_particles: int) -> tuple[int, ...]:
    """Inverse of state_index for the (n_levels, n_particles) basis."""
    basis = enumerate_basis(n_levels, n_particles)
    if not 0 <= index < len(basis):
        raise ValueError(f"index {index} outside [0, {len(basis)})")
    return basis[index]


def creation_amplitude_sq(base: tuple[int, ...], add: tuple[int, ...]) -> int:
    """Squared amplitude <base+add| B+(add) |base> as an exact integer.

    Equals prod_i C(base_i + add_i, add_i).
    """
    if len(base) != len(add):
        raise ValueError("occupation vectors live on different level counts")
    amp_sq = 1
    for n, nu in zip(base, add):
        amp_sq *= math.comb(n + nu, nu)
    return amp_sq


def apply_pair_monomial(
    state: tuple[int, ...],
    annihilate: tuple[int, ...],
    create: tuple[int, ...],
) -> tuple[tuple[int, ...], float] | None:
    """Act with B+(create) B(annihilate) on a number state.

    Returns (resulting state, amplitude), or None when some occupation of
    `state` is below the corresponding entry of `annihilate` (the operator
    annihilates the state).  The amplitude is

        sqrt( prod_i C(n_i, a_i) * prod_i C(n_i - a_i + c_i, c_i) ),

    the integer product being evaluated exactly before the single square
    root, and is strictly positive whenever defined.
    """
    state = tuple(state)
    annihilate = tuple(annihilate)
    create = tuple(create)
    n_levels, _ = _validate_state(state)
    for label in (annihilate, create):
        levels, _ = _validate_state(label)
        if levels != n_levels:
            raise ValueError(
                f"level count mismatch: state has {n_levels}, label has {levels}"
            )

    if any(n < a for n, a in zip(state, annihilate)):
        return None

    lowered = tuple(n - a for n, a in zip(state, annihilate))
    amp_sq = creation_amplitude_sq(lowered, annihilate)  # annihilation factor
    amp_sq *= creation_amplitude_sq(lowered, create)
    result = tuple(n + c for n, c in zip(lowered, create))
    return result, math.sqrt(amp_sq)
