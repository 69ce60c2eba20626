"""Pure-numpy implementations of the hot point-cloud kernels.

Kept bit-identical to the compiled versions in ``_native.pyx``: same
operation order, same first-index tie breaking, no FMA contraction.
"""

import numpy as np

# X-rows per broadcast block; bounds the (chunk, m, 3) temporary.
_CHUNK = 256


def nearest_sq_dist(x, y):
    """Per row of ``x``: squared distance to, and index of, its nearest row of ``y``."""
    n = x.shape[0]
    dist = np.empty(n, dtype=np.float64)
    idx = np.empty(n, dtype=np.int64)
    for s in range(0, n, _CHUNK):
        e = min(s + _CHUNK, n)
        diff = x[s:e, None, :] - y[None, :, :]
        d2 = (diff * diff).sum(axis=2)
        j = d2.argmin(axis=1)
        idx[s:e] = j
        dist[s:e] = d2[np.arange(e - s), j]
    return dist, idx


def farthest_point_indices(points, k, start):
    """Greedy max-min selection of ``k`` point indices starting at ``start``."""
    out = np.empty(k, dtype=np.int64)
    out[0] = start
    diff = points - points[start]
    dmin = (diff * diff).sum(axis=1)
    dmin[start] = -1.0  # selected points can never win again
    for t in range(1, k):
        nxt = int(dmin.argmax())
        out[t] = nxt
        diff = points - points[nxt]
        cand = (diff * diff).sum(axis=1)
        np.minimum(dmin, cand, out=dmin)
        dmin[nxt] = -1.0
    return out
