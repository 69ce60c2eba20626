"""Dense float64 tensors with reverse-mode differentiation on an explicit tape.

Every differentiable computation in the package runs through this module.
A :class:`Tape` records operations in creation order (which is a valid
topological order); :meth:`Tape.backward` walks the records once in reverse.
Tapes are rebuilt per training step; tensors are treated as immutable while
their tape is alive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels, quat
from .errors import DegenerateInputError, ShapeError

_F64 = np.float64


class _Node:
    __slots__ = ("parents", "backward_fn", "learnable")

    def __init__(self, parents=(), backward_fn=None, learnable=False):
        self.parents = parents
        self.backward_fn = backward_fn
        self.learnable = learnable


class Tensor:
    """Immutable view onto a float64 array plus its position on a tape."""

    __slots__ = ("data", "tape", "index")

    def __init__(self, data, tape, index):
        self.data = data
        self.tape = tape
        self.index = index

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, node={self.index})"

    def __matmul__(self, other):
        return matmul(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)


class Gradients:
    """Gradient table from one backward pass, keyed by learnable leaf tensor."""

    def __init__(self, tape, table):
        self._tape = tape
        self._table = table

    def __getitem__(self, t: Tensor):
        if t.tape is not self._tape:
            raise ShapeError("tensor does not belong to the differentiated tape")
        if not self._tape._nodes[t.index].learnable:
            raise KeyError(f"node {t.index} is not a learnable leaf")
        g = self._table.get(t.index)
        if g is None:
            return np.zeros_like(t.data)
        return g


class Tape:
    """Append-only record of operations; owns every tensor created on it."""

    __slots__ = ("_nodes",)

    def __init__(self):
        self._nodes: list[_Node] = []

    def __len__(self):
        return len(self._nodes)

    def _record(self, data, parents=(), backward_fn=None, learnable=False) -> Tensor:
        node = _Node(parents, backward_fn, learnable)
        self._nodes.append(node)
        return Tensor(data, self, len(self._nodes) - 1)

    def leaf(self, data, learnable=False) -> Tensor:
        arr = np.asarray(data, dtype=_F64)
        if not np.all(np.isfinite(arr)):
            raise DegenerateInputError("leaf tensor contains non-finite values")
        return self._record(arr, learnable=learnable)

    def constant(self, data) -> Tensor:
        return self.leaf(data, learnable=False)

    def backward(self, root: Tensor) -> Gradients:
        """Gradient of a scalar ``root`` w.r.t. every learnable leaf.

        Visits nodes in reverse creation order exactly once; nodes that do
        not influence the root are skipped (their gradient stays zero).
        """
        if root.tape is not self:
            raise ShapeError("root tensor is not on this tape")
        if root.data.size != 1:
            raise ShapeError(f"backward root must be scalar, got shape {root.data.shape}")
        nodes = self._nodes
        grads: list = [None] * (root.index + 1)
        grads[root.index] = np.ones_like(root.data)
        for i in range(root.index, -1, -1):
            g = grads[i]
            node = nodes[i]
            if g is None or not node.parents:
                continue
            for p, pg in zip(node.parents, node.backward_fn(g)):
                if pg is None:
                    continue
                if grads[p] is None:
                    grads[p] = pg
                else:
                    grads[p] = grads[p] + pg
        table = {
            i: grads[i]
            for i in range(root.index + 1)
            if nodes[i].learnable and grads[i] is not None
        }
        return Gradients(self, table)


def _shared_tape(*tensors) -> Tape:
    tape = tensors[0].tape
    for t in tensors[1:]:
        if t.tape is not tape:
            raise ShapeError("operands live on different tapes")
    return tape


# ---------------------------------------------------------------------------
# primitives


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2 or a.data.shape[1] != b.data.shape[0]:
        raise ShapeError(f"matmul shapes incompatible: {a.data.shape} x {b.data.shape}")
    tape = _shared_tape(a, b)
    ad, bd = a.data, b.data

    def bwd(g):
        return g @ bd.T, ad.T @ g

    return tape._record(ad @ bd, (a.index, b.index), bwd)


def _elementwise_binary(a, b, fwd, bwd_pair, bwd_scalar, name):
    if isinstance(b, Tensor):
        if a.data.shape != b.data.shape:
            raise ShapeError(f"{name} shapes differ: {a.data.shape} vs {b.data.shape}")
        tape = _shared_tape(a, b)
        out = fwd(a.data, b.data)
        return tape._record(out, (a.index, b.index), bwd_pair(a.data, b.data))
    c = float(b)
    out = fwd(a.data, c)
    return a.tape._record(out, (a.index,), bwd_scalar(a.data, c))


def add(a: Tensor, b) -> Tensor:
    return _elementwise_binary(
        a, b, lambda x, y: x + y,
        lambda x, y: lambda g: (g, g),
        lambda x, c: lambda g: (g,),
        "add",
    )


def sub(a: Tensor, b) -> Tensor:
    return _elementwise_binary(
        a, b, lambda x, y: x - y,
        lambda x, y: lambda g: (g, -g),
        lambda x, c: lambda g: (g,),
        "sub",
    )


def mul(a: Tensor, b) -> Tensor:
    return _elementwise_binary(
        a, b, lambda x, y: x * y,
        lambda x, y: lambda g: (g * y, g * x),
        lambda x, c: lambda g: (g * c,),
        "mul",
    )


def scale(a: Tensor, c: float) -> Tensor:
    c = float(c)
    return a.tape._record(a.data * c, (a.index,), lambda g: (g * c,))


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0  # gradient 0 at the kink
    return a.tape._record(np.where(mask, a.data, 0.0), (a.index,), lambda g: (g * mask,))


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)
    return a.tape._record(out, (a.index,), lambda g: (g * (1.0 - out * out),))


def sigmoid(a: Tensor) -> Tensor:
    x = a.data
    e = np.exp(-np.abs(x))
    out = np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return a.tape._record(out, (a.index,), lambda g: (g * out * (1.0 - out),))


def recip(a: Tensor) -> Tensor:
    out = 1.0 / a.data
    return a.tape._record(out, (a.index,), lambda g: (-g * out * out,))


def reduce(a: Tensor, kind: str, axis=None) -> Tensor:
    """Reduce ``a`` with sum/mean/max over one axis (or all, ``axis=None``).

    For max, gradient is routed to the first winning element only.
    """
    data = a.data
    if axis is not None and not -data.ndim <= axis < data.ndim:
        raise ShapeError(f"axis {axis} out of range for rank {data.ndim}")
    shape = data.shape

    if kind == "sum" or kind == "mean":
        count = data.size if axis is None else shape[axis]
        factor = 1.0 if kind == "sum" else 1.0 / count
        out = np.asarray(data.sum(axis=axis) * factor)

        def bwd(g):
            if axis is None:
                return (np.broadcast_to(g * factor, shape),)
            return (np.broadcast_to(np.expand_dims(g * factor, axis), shape),)

        return a.tape._record(out, (a.index,), bwd)

    if kind == "max":
        if axis is None:
            flat_idx = int(np.argmax(data))
            out = np.asarray(data.reshape(-1)[flat_idx])

            def bwd(g):
                z = np.zeros(data.size)
                z[flat_idx] = g
                return (z.reshape(shape),)

            return a.tape._record(out, (a.index,), bwd)
        idx = np.argmax(data, axis=axis)
        out = np.take_along_axis(data, np.expand_dims(idx, axis), axis=axis).squeeze(axis)

        def bwd(g):
            z = np.zeros(shape)
            np.put_along_axis(z, np.expand_dims(idx, axis), np.expand_dims(g, axis), axis=axis)
            return (z,)

        return a.tape._record(out, (a.index,), bwd)

    raise ValueError(f"unknown reduce kind {kind!r}")


def concat(parts, axis=0) -> Tensor:
    parts = list(parts)
    if not parts:
        raise DegenerateInputError("concat of zero tensors")
    tape = _shared_tape(*parts)
    datas = [p.data for p in parts]
    try:
        out = np.concatenate(datas, axis=axis)
    except ValueError as e:
        raise ShapeError(f"concat shapes incompatible: {[d.shape for d in datas]}") from e
    sizes = [d.shape[axis] for d in datas]
    offsets = np.cumsum([0] + sizes)

    def bwd(g):
        return tuple(
            np.take(g, range(offsets[i], offsets[i + 1]), axis=axis) for i in range(len(sizes))
        )

    return tape._record(out, tuple(p.index for p in parts), bwd)


def narrow(a: Tensor, axis: int, start: int, length: int) -> Tensor:
    """Contiguous slice ``[start, start+length)`` along one axis."""
    data = a.data
    if not 0 <= axis < data.ndim:
        raise ShapeError(f"axis {axis} out of range for rank {data.ndim}")
    if not (0 <= start and start + length <= data.shape[axis]):
        raise ShapeError(
            f"narrow [{start}:{start + length}] out of range for dim {data.shape[axis]}"
        )
    sl = tuple(slice(None) if d != axis else slice(start, start + length) for d in range(data.ndim))
    out = data[sl]

    def bwd(g):
        z = np.zeros(data.shape)
        z[sl] = g
        return (z,)

    return a.tape._record(out, (a.index,), bwd)


def reshape(a: Tensor, shape) -> Tensor:
    old = a.data.shape
    return a.tape._record(a.data.reshape(shape), (a.index,), lambda g: (g.reshape(old),))


def repeat_rows(a: Tensor, k: int) -> Tensor:
    """Each row repeated k times in place: out[i*k + t] = a[i]."""
    n = a.data.shape[0]
    out = np.repeat(a.data, k, axis=0)

    def bwd(g):
        return (g.reshape((n, k) + a.data.shape[1:]).sum(axis=1),)

    return a.tape._record(out, (a.index,), bwd)


def tile_rows(a: Tensor, k: int) -> Tensor:
    """Whole array stacked k times: out[t*n + i] = a[i]."""
    n = a.data.shape[0]
    out = np.tile(a.data, (k,) + (1,) * (a.data.ndim - 1))

    def bwd(g):
        return (g.reshape((k, n) + a.data.shape[1:]).sum(axis=0),)

    return a.tape._record(out, (a.index,), bwd)


def expand_last(a: Tensor, k: int) -> Tensor:
    """Broadcast-copy along a new trailing axis of size k."""
    out = np.repeat(a.data[..., None], k, axis=-1)
    return a.tape._record(out, (a.index,), lambda g: (g.sum(axis=-1),))


def scale_rows(a: Tensor, s: Tensor) -> Tensor:
    """Multiply row i of ``a`` by scalar ``s[i]``."""
    if s.data.ndim != 1 or s.data.shape[0] != a.data.shape[0]:
        raise ShapeError(f"scale_rows needs s of shape ({a.data.shape[0]},), got {s.data.shape}")
    tape = _shared_tape(a, s)
    sr = s.data.reshape((-1,) + (1,) * (a.data.ndim - 1))
    ad = a.data

    def bwd(g):
        gs = (g * ad).reshape(ad.shape[0], -1).sum(axis=1)
        return g * sr, gs

    return tape._record(ad * sr, (a.index, s.index), bwd)


def l2_normalize(v: Tensor, eps: float = 1e-8) -> Tensor:
    """v / max(||v||, eps), treating the whole tensor as one vector."""
    if v.data.size < 1:
        raise DegenerateInputError("cannot normalize an empty tensor")
    x = v.data
    norm = float(np.sqrt((x * x).sum()))
    r = max(norm, eps)
    out = x / r

    def bwd(g):
        if norm <= eps:
            return (g / eps,)
        dot = float((x * g).sum())
        return (g / r - x * (dot / r**3),)

    return v.tape._record(out, (v.index,), bwd)


def normalize_rows(a: Tensor, eps: float = 1e-8) -> Tensor:
    """Row-wise l2_normalize of a 2-D tensor."""
    x = a.data
    if x.ndim != 2:
        raise ShapeError(f"normalize_rows expects a matrix, got shape {x.shape}")
    norms = np.sqrt((x * x).sum(axis=1))
    r = np.maximum(norms, eps)
    out = x / r[:, None]

    def bwd(g):
        grad = g / r[:, None]
        var = norms > eps
        dots = (x * g).sum(axis=1)
        corr = x * (dots / r**3)[:, None]
        grad = np.where(var[:, None], grad - corr, grad)
        return (grad,)

    return a.tape._record(out, (a.index,), bwd)


def linear(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """x @ w + b with the bias row broadcast over rows of x."""
    if x.data.ndim != 2 or w.data.ndim != 2 or x.data.shape[1] != w.data.shape[0]:
        raise ShapeError(f"linear shapes incompatible: {x.data.shape} x {w.data.shape}")
    if b.data.shape != (w.data.shape[1],):
        raise ShapeError(f"linear bias shape {b.data.shape} != ({w.data.shape[1]},)")
    tape = _shared_tape(x, w, b)
    xd, wd = x.data, w.data

    def bwd(g):
        return g @ wd.T, xd.T @ g, g.sum(axis=0)

    return tape._record(xd @ wd + b.data, (x.index, w.index, b.index), bwd)


def add_rowvec(x: Tensor, v: Tensor) -> Tensor:
    """Add a vector to every row of a matrix."""
    if x.data.ndim != 2 or v.data.shape != (x.data.shape[1],):
        raise ShapeError(f"add_rowvec shapes incompatible: {x.data.shape} + {v.data.shape}")
    tape = _shared_tape(x, v)
    return tape._record(
        x.data + v.data, (x.index, v.index), lambda g: (g, g.sum(axis=0))
    )


def row_min_sq_dist(x: Tensor, y: Tensor) -> Tensor:
    """Per row of x: squared distance to the nearest row of y.

    The nearest index is fixed during the forward pass; the backward pass
    differentiates through the selected pair only (first index on ties).
    """
    dist, idx = kernels.nearest_sq_dist(x.data, y.data)
    tape = _shared_tape(x, y)
    xd, yd = x.data, y.data

    def bwd(g):
        diff = xd - yd[idx]
        gx = 2.0 * diff * g[:, None]
        gy = np.zeros_like(yd)
        np.add.at(gy, idx, -gx)
        return gx, gy

    return tape._record(dist, (x.index, y.index), bwd)


def rotate_points(q: Tensor, points: np.ndarray) -> Tensor:
    """Rotate constant points by a unit quaternion tensor (w, x, y, z).

    Gradient flows to the quaternion; the points are plain data.
    """
    if q.data.shape != (4,):
        raise ShapeError(f"quaternion must have shape (4,), got {q.data.shape}")
    pts = np.asarray(points, dtype=_F64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ShapeError(f"points must be n-by-3, got {pts.shape}")
    r = quat.rotation_matrix(q.data)
    partials = quat.rotation_matrix_partials(q.data)

    def bwd(g):
        m = g.T @ pts
        return (np.array([(dk * m).sum() for dk in partials]),)

    return q.tape._record(pts @ r.T, (q.index,), bwd)


# ---------------------------------------------------------------------------
# optimizer and gradient checking


@dataclass
class AdamState:
    """First/second moment estimates per parameter plus the step counter."""

    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    step: int = 0

    @classmethod
    def for_params(cls, params):
        return cls(
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
        )


def adam_step(params, grads, state: AdamState, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
    """One Adam update with bias correction; mutates params and state in place."""
    state.step += 1
    t = state.step
    c1 = 1.0 - beta1**t
    c2 = 1.0 - beta2**t
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeError(f"gradient shape {g.shape} != parameter shape {p.shape} for {name}")
        m = state.m[name]
        v = state.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)
    return params, state


def grad_check(fn, params, h=1e-4):
    """Worst relative error between tape gradients and central differences.

    ``fn(tape, leaves)`` must build and return a scalar tensor from the
    dict of learnable leaves. Relative error uses a 1e-12 denominator floor.
    """
    params = {k: np.asarray(v, dtype=_F64).copy() for k, v in params.items()}

    def evaluate():
        tape = Tape()
        leaves = {k: tape.leaf(v, learnable=True) for k, v in params.items()}
        root = fn(tape, leaves)
        val = float(root.data)
        if not np.isfinite(val):
            raise DegenerateInputError("grad_check function returned a non-finite value")
        return tape, leaves, root, val

    tape, leaves, root, _ = evaluate()
    table = tape.backward(root)
    analytic = {k: np.asarray(table[leaf], dtype=_F64).copy() for k, leaf in leaves.items()}

    worst = 0.0
    for name, arr in params.items():
        flat = arr.reshape(-1)
        ana = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            f_plus = evaluate()[3]
            flat[i] = orig - h
            f_minus = evaluate()[3]
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * h)
            denom = max(1e-12, abs(ana[i]), abs(numeric))
            worst = max(worst, abs(ana[i] - numeric) / denom)
    return worst
