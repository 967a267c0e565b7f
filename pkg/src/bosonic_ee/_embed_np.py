"""NumPy fallback for the embedding accumulation kernel.

Semantics match the compiled kernel in _embed_cy bit for bit on the lower
triangle: intermediate states are visited in ascending index order and each
contribution is evaluated as (amplitude_i * v_ij) * amplitude_j.  Only the
lower triangle of the output is meaningful; callers mirror it.
"""

from __future__ import annotations

import numpy as np


def accumulate_embedding(
    h: np.ndarray,
    amplitude: np.ndarray,
    target: np.ndarray,
    v: np.ndarray,
) -> None:
    for c in range(target.shape[0]):
        idx = target[c]
        amp = amplitude[c]
        h[np.ix_(idx, idx)] += (amp[:, None] * v) * amp[None, :]
