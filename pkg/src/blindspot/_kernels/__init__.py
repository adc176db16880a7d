"""Hot-loop kernels with a compiled fast path.

The Cython extension is optional; the pure numpy implementation in
``_pure`` is selected when the extension is missing or when the
``BLINDSPOT_PURE`` environment variable is set to a non-empty value.
``BACKEND`` records which one is active.
"""

import os

from . import _pure

if os.environ.get("BLINDSPOT_PURE"):
    BACKEND = "pure"
    count_excluded = _pure.count_excluded
    best_threshold = _pure.best_threshold
else:
    try:
        from . import _fast  # type: ignore[attr-defined]

        BACKEND = "cython"
        count_excluded = _fast.count_excluded
        best_threshold = _fast.best_threshold
    except ImportError:
        BACKEND = "pure"
        count_excluded = _pure.count_excluded
        best_threshold = _pure.best_threshold

KIND_RANK = 0
KIND_MASS = 1

__all__ = [
    "BACKEND",
    "KIND_RANK",
    "KIND_MASS",
    "count_excluded",
    "best_threshold",
]
