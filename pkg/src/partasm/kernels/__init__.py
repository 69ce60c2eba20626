"""Hot point-cloud kernels: compiled extension with a pure-numpy fallback.

The compiled module is selected at import when available; set
``PARTASM_FORCE_FALLBACK=1`` to force the numpy implementation. Both
backends produce bit-identical results (``benchmarks/bench_kernels.py``
compares their speed).
"""

import os

import numpy as np

from ..errors import DegenerateInputError, ShapeError
from . import _fallback

if os.environ.get("PARTASM_FORCE_FALLBACK") == "1":
    _impl = _fallback
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = "native" if _impl.__name__.endswith("_native") else "fallback"


def _as_points(a, name):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != 3:
        raise ShapeError(f"{name} must be an n-by-3 array, got {a.shape}")
    if a.shape[0] == 0:
        raise DegenerateInputError(f"{name} is empty")
    return a


def nearest_sq_dist(x, y):
    """For each row of ``x``, the squared distance to the nearest row of ``y``.

    Returns ``(dist, idx)`` where ``idx[i]`` is the index of the nearest row
    (first index on ties).
    """
    return _impl.nearest_sq_dist(_as_points(x, "x"), _as_points(y, "y"))


def farthest_point_indices(points, k, start=0):
    """Greedy max-min selection of ``k`` distinct indices, seeded at ``start``."""
    points = _as_points(points, "points")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise DegenerateInputError(f"k={k} out of range for {n} points")
    if not 0 <= start < n:
        raise DegenerateInputError(f"start={start} out of range for {n} points")
    return _impl.farthest_point_indices(points, int(k), int(start))
