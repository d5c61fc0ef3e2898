"""Hot kernels, compiled when available.

The Cython extension ``_core`` is preferred; ``_fallback`` provides the same
functions in numpy / plain Python. Set ``PERPSYS_PURE_PYTHON=1`` to force the
fallback.
"""
import os

if os.environ.get("PERPSYS_PURE_PYTHON", "") not in ("", "0"):
    from ._fallback import (antiflag_counts, common_neighbours, pairs_opposite,
                            rank, rref, rref_batch)
    BACKEND = "python"
else:
    try:
        from ._core import (antiflag_counts, common_neighbours, pairs_opposite,
                            rank, rref, rref_batch)
        BACKEND = "cython"
    except ImportError:
        from ._fallback import (antiflag_counts, common_neighbours,
                                pairs_opposite, rank, rref, rref_batch)
        BACKEND = "python"

__all__ = ["BACKEND", "rref", "rank", "rref_batch", "pairs_opposite",
           "antiflag_counts", "common_neighbours"]
