"""Selection of the embedding accumulation kernel.

The compiled Cython kernel is used when the extension built; otherwise the
NumPy fallback takes over transparently.  Setting the environment variable
BOSONIC_EE_PURE_PYTHON=1 before import forces the fallback (used by the
benchmark and by tests comparing the two paths).
"""

from __future__ import annotations

import os

from . import _embed_np

if os.environ.get("BOSONIC_EE_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _embed_cy as _compiled
    except ImportError:
        _compiled = None

USING_COMPILED_KERNEL = _compiled is not None

accumulate_embedding = (
    _compiled.accumulate_embedding if _compiled is not None
    else _embed_np.accumulate_embedding
)

accumulate_embedding_numpy = _embed_np.accumulate_embedding
accumulate_embedding_compiled = (
    _compiled.accumulate_embedding if _compiled is not None else None
)
