"""Full-spectrum dense self-adjoint diagonalization with online checks.

Every diagonalization is verified against the two cheap trace identities
tr H = sum(lambda) and tr H^2 = sum(lambda^2); failures raise instead of
propagating silently corrupted spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import EmbeddedHamiltonian

TRACE_RTOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues of one embedded Hamiltonian."""

    eigenvalues: np.ndarray
    n_levels: int | None = None
    n_bosons: int | None = None
    rank: int | None = None
    beta: int | None = None
    member_seed: int | None = None

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def eigenvalues_selfadjoint(h: EmbeddedHamiltonian | np.ndarray) -> Spectrum:
    """Complete sorted spectrum of a self-adjoint matrix.

    Accepts an EmbeddedHamiltonian (metadata is carried over) or a bare
    array.  Raises on non-finite entries and on trace-identity violations.
    """
    if isinstance(h, EmbeddedHamiltonian):
        matrix = h.matrix
        meta = dict(
            n_levels=h.n_levels,
            n_bosons=h.n_bosons,
            rank=h.rank,
            beta=h.beta,
            member_seed=h.member_seed,
        )
    else:
        matrix = np.asarray(h)
        meta = {}

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix.real)) or (
        np.iscomplexobj(matrix) and not np.all(np.isfinite(matrix.imag))
    ):
        raise ValueError("matrix contains non-finite entries")

    eigs = np.linalg.eigvalsh(matrix)

    d = matrix.shape[0]
    scale = d * max(np.abs(matrix).max(), 1.0)
    trace = float(matrix.trace().real)
    if abs(eigs.sum() - trace) > TRACE_RTOL * scale:
        raise RuntimeError(
            f"trace identity violated: sum(eig)={eigs.sum():.17g} vs tr={trace:.17g}"
        )
    trace2 = float(np.vdot(matrix, matrix).real)  # tr(H^2) = ||H||_F^2
    sum2 = float(np.sum(eigs * eigs))
    if abs(sum2 - trace2) > TRACE_RTOL * max(trace2, 1e-300):
        raise RuntimeError(
            f"second trace identity violated: sum(eig^2)={sum2:.17g} vs tr(H^2)={trace2:.17g}"
        )

    eigs.flags.writeable = False
    return Spectrum(eigenvalues=eigs, **meta)


def lowest_two(spectrum: Spectrum) -> tuple[float, float]:
    """The two smallest eigenvalues (lambda0 <= lambda1)."""
    if spectrum.dim < 2:
        raise ValueError(f"need dimension >= 2, got {spectrum.dim}")
    e = spectrum.eigenvalues
    return float(e[0]), float(e[1])
