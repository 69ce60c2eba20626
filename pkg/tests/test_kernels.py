import numpy as np
import pytest

from partasm import kernels
from partasm.errors import DegenerateInputError, ShapeError
from partasm.kernels import _fallback


def brute_nearest(x, y):
    n, m = len(x), len(y)
    dist = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    for i in range(n):
        best, best_j = np.inf, 0
        for j in range(m):
            d = (
                (x[i, 0] - y[j, 0]) ** 2
                + (x[i, 1] - y[j, 1]) ** 2
                + (x[i, 2] - y[j, 2]) ** 2
            )
            if d < best:
                best, best_j = d, j
        dist[i], idx[i] = best, best_j
    return dist, idx


def test_nearest_matches_brute_force_exactly():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((40, 3))
    y = rng.standard_normal((25, 3))
    d, i = kernels.nearest_sq_dist(x, y)
    bd, bi = brute_nearest(x, y)
    np.testing.assert_array_equal(d, bd)
    np.testing.assert_array_equal(i, bi)


def test_nearest_tie_takes_first_index():
    x = np.array([[0.0, 0.0, 0.0]])
    y = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    _, i = kernels.nearest_sq_dist(x, y)
    assert i[0] == 0


def test_input_validation():
    with pytest.raises(ShapeError):
        kernels.nearest_sq_dist(np.ones((2, 2)), np.ones((2, 3)))
    with pytest.raises(DegenerateInputError):
        kernels.nearest_sq_dist(np.ones((1, 3)), np.empty((0, 3)))
    with pytest.raises(DegenerateInputError):
        kernels.farthest_point_indices(np.ones((4, 3)), 5)


def test_fps_square_corners_picks_opposite():
    pts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=float)
    idx = kernels.farthest_point_indices(pts, 2, start=0)
    assert idx[0] == 0 and idx[1] == 3


def test_fps_full_is_permutation():
    rng = np.random.default_rng(1)
    pts = rng.standard_normal((17, 3))
    idx = kernels.farthest_point_indices(pts, 17, start=4)
    assert sorted(idx) == list(range(17))


def test_fps_deterministic():
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((60, 3))
    a = kernels.farthest_point_indices(pts, 20, start=7)
    b = kernels.farthest_point_indices(pts, 20, start=7)
    np.testing.assert_array_equal(a, b)


@pytest.mark.skipif(kernels.BACKEND != "native", reason="compiled backend not built")
def test_backends_bit_identical():
    from partasm.kernels import _native

    rng = np.random.default_rng(3)
    x = rng.standard_normal((123, 3))
    y = rng.standard_normal((77, 3))
    dn, jn = _native.nearest_sq_dist(x, y)
    df, jf = _fallback.nearest_sq_dist(x, y)
    np.testing.assert_array_equal(dn, df)
    np.testing.assert_array_equal(jn, jf)

    fn = _native.farthest_point_indices(x, 60, 11)
    ff = _fallback.farthest_point_indices(x, 60, 11)
    np.testing.assert_array_equal(fn, ff)
