"""Unit-quaternion helpers (w, x, y, z convention, Hamilton product).

``q`` and ``-q`` describe the same rotation; nothing here canonicalizes the
sign, callers that care compare rotations through point distances instead.
"""

import numpy as np

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def rotation_matrix(q):
    """3x3 rotation matrix for a unit quaternion (w, x, y, z)."""
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def rotation_matrix_partials(q):
    """Partial derivatives of ``rotation_matrix`` w.r.t. each component.

    Valid for the quadratic matrix formula as written (no renormalization),
    which is what the differentiable rotation op computes.
    """
    w, x, y, z = q
    dw = 2.0 * np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]], dtype=np.float64)
    dx = 2.0 * np.array([[0, y, z], [y, -2 * x, -w], [z, w, -2 * x]])
    dy = 2.0 * np.array([[-2 * y, x, w], [x, 0, z], [-w, z, -2 * y]])
    dz = 2.0 * np.array([[-2 * z, -w, x], [w, -2 * z, y], [x, y, 0]], dtype=np.float64)
    return dw, dx, dy, dz


def multiply(a, b):
    """Hamilton product a*b; composing rotations: (a*b) rotates by b then a."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def conjugate(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def from_matrix(m):
    """Unit quaternion for a rotation matrix (Shepperd's method, w >= 0)."""
    t = np.trace(m)
    if t > 0:
        s = np.sqrt(t + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        )
    else:
        i = int(np.argmax(np.diag(m)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = np.sqrt(max(1.0 + m[i, i] - m[j, j] - m[k, k], 0.0)) * 2.0
        q = np.empty(4)
        q[0] = (m[k, j] - m[j, k]) / s
        q[1 + i] = 0.25 * s
        q[1 + j] = (m[j, i] + m[i, j]) / s
        q[1 + k] = (m[k, i] + m[i, k]) / s
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)
