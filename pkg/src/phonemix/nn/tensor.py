"""Reverse-mode automatic differentiation over float64 numpy arrays.

Deliberately small: only the primitives the model needs, each with an
explicit backward closure. Graphs are built per forward pass and freed
afterwards; backward uses an iterative topological sort so deep
recurrences cannot hit the interpreter recursion limit.
"""

from __future__ import annotations

import numpy as np


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False, parents=(), backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def _accumulate(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self):
        """Backpropagate from a scalar, accumulating into ``.grad`` fields."""
        if self.data.size != 1:
            raise ValueError(f"backward() needs a scalar, got shape {self.shape}")
        topo = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None:
                node._backward(node.grad)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __matmul__(self, other):
        return matmul(self, other)

    def __neg__(self):
        return scale(self, -1.0)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


def tensor(data, requires_grad=False) -> Tensor:
    return Tensor(data, requires_grad=requires_grad)


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a gradient down to the shape the operand had before broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _make(data, parents, backward):
    needs = any(p.requires_grad or p._parents for p in parents)
    if not needs:
        return Tensor(data)
    return Tensor(data, parents=parents, backward=backward)


def add(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data + b.data

    def backward(g):
        a._accumulate(_unbroadcast(g, a.data.shape))
        b._accumulate(_unbroadcast(g, b.data.shape))

    return _make(out_data, (a, b), backward)


def sub(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data - b.data

    def backward(g):
        a._accumulate(_unbroadcast(g, a.data.shape))
        b._accumulate(_unbroadcast(-g, b.data.shape))

    return _make(out_data, (a, b), backward)


def mul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data * b.data

    def backward(g):
        a._accumulate(_unbroadcast(g * b.data, a.data.shape))
        b._accumulate(_unbroadcast(g * a.data, b.data.shape))

    return _make(out_data, (a, b), backward)


def scale(a: Tensor, factor: float) -> Tensor:
    def backward(g):
        a._accumulate(g * factor)

    return _make(a.data * factor, (a,), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.shape[-1] != b.data.shape[0]:
        raise ValueError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    out_data = a.data @ b.data

    def backward(g):
        a._accumulate(g @ b.data.T)
        b._accumulate(a.data.T @ g)

    return _make(out_data, (a, b), backward)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def backward(g):
        a._accumulate(g * (1.0 - out_data**2))

    return _make(out_data, (a,), backward)


def sigmoid(a: Tensor) -> Tensor:
    out_data = 1.0 / (1.0 + np.exp(-a.data))

    def backward(g):
        a._accumulate(g * out_data * (1.0 - out_data))

    return _make(out_data, (a,), backward)


def exp(a: Tensor) -> Tensor:
    out_data = np.exp(a.data)

    def backward(g):
        a._accumulate(g * out_data)

    return _make(out_data, (a,), backward)


def log(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(g / a.data)

    return _make(np.log(a.data), (a,), backward)


def absolute(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(g * np.sign(a.data))

    return _make(np.abs(a.data), (a,), backward)


def sum_all(a: Tensor) -> Tensor:
    def backward(g):
        a._accumulate(np.full_like(a.data, float(g)))

    return _make(a.data.sum(), (a,), backward)


def mean_all(a: Tensor) -> Tensor:
    n = a.data.size

    def backward(g):
        a._accumulate(np.full_like(a.data, float(g) / n))

    return _make(a.data.mean(), (a,), backward)


def sum_rows(a: Tensor) -> Tensor:
    """Sum a matrix over its time axis, leaving one vector."""

    def backward(g):
        a._accumulate(np.broadcast_to(g, a.data.shape).copy())

    return _make(a.data.sum(axis=0), (a,), backward)


def reshape(a: Tensor, shape) -> Tensor:
    def backward(g):
        a._accumulate(g.reshape(a.data.shape))

    return _make(a.data.reshape(shape), (a,), backward)


def concat(tensors: list[Tensor], axis: int = 0) -> Tensor:
    tensors = [_as_tensor(t) for t in tensors]
    out_data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.data.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, start, stop in zip(tensors, offsets[:-1], offsets[1:]):
            index = [slice(None)] * g.ndim
            index[axis] = slice(start, stop)
            t._accumulate(g[tuple(index)])

    return _make(out_data, tuple(tensors), backward)


def slice_rows(a: Tensor, start: int, stop: int) -> Tensor:
    def backward(g):
        full = np.zeros_like(a.data)
        full[start:stop] = g
        a._accumulate(full)

    return _make(a.data[start:stop], (a,), backward)


def gather_rows(table: Tensor, ids) -> Tensor:
    """Embedding lookup: rows of ``table`` selected by integer ids."""
    ids = np.asarray(ids, dtype=np.int64)
    if ids.ndim != 1:
        raise ValueError("gather_rows expects a 1-D id list")
    if len(ids) and (ids.min() < 0 or ids.max() >= table.data.shape[0]):
        raise IndexError(
            f"id out of range [0, {table.data.shape[0]}): {ids.min()}..{ids.max()}"
        )

    def backward(g):
        full = np.zeros_like(table.data)
        np.add.at(full, ids, g)
        table._accumulate(full)

    return _make(table.data[ids], (table,), backward)


def conv1d(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    """Same-length 1-D convolution over time.

    ``x`` is [time, in_dims], ``weight`` is [kernel, in_dims, out_dims]
    with odd kernel width, and the output is [time, out_dims] using zero
    padding at both ends.
    """
    k, c_in, c_out = weight.data.shape
    if k % 2 == 0:
        raise ValueError(f"kernel width must be odd, got {k}")
    if x.data.ndim != 2 or x.data.shape[1] != c_in:
        raise ValueError(
            f"conv1d input shape {x.shape} does not match weight {weight.shape}"
        )
    t = x.data.shape[0]
    pad = k // 2
    xp = np.zeros((t + 2 * pad, c_in))
    xp[pad : pad + t] = x.data
    out_data = np.zeros((t, c_out))
    for j in range(k):
        out_data += xp[j : j + t] @ weight.data[j]
    if bias is not None:
        out_data = out_data + bias.data

    parents = (x, weight) if bias is None else (x, weight, bias)

    def backward(g):
        gxp = np.zeros_like(xp)
        gw = np.zeros_like(weight.data)
        for j in range(k):
            gxp[j : j + t] += g @ weight.data[j].T
            gw[j] = xp[j : j + t].T @ g
        x._accumulate(gxp[pad : pad + t])
        weight._accumulate(gw)
        if bias is not None:
            bias._accumulate(g.sum(axis=0))

    return _make(out_data, parents, backward)


def masked_softmax(logits: Tensor, active: int) -> Tensor:
    """Softmax over the first ``active`` slots of a vector; the rest are 0."""
    if logits.data.ndim != 1:
        raise ValueError(f"masked_softmax expects a vector, got {logits.shape}")
    n = logits.data.shape[0]
    if not 1 <= active <= n:
        raise ValueError(f"active slot count must be in [1, {n}], got {active}")
    live = logits.data[:active]
    shifted = np.exp(live - live.max())
    p_live = shifted / shifted.sum()
    out_data = np.zeros(n)
    out_data[:active] = p_live

    def backward(g):
        g_live = g[:active]
        dot = float(g_live @ p_live)
        full = np.zeros(n)
        full[:active] = p_live * (g_live - dot)
        logits._accumulate(full)

    return _make(out_data, (logits,), backward)


def softmax_rows(x: Tensor) -> Tensor:
    """Row-wise softmax of a matrix (used by the attention encoder)."""
    shifted = x.data - x.data.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    out_data = e / e.sum(axis=1, keepdims=True)

    def backward(g):
        dot = (g * out_data).sum(axis=1, keepdims=True)
        x._accumulate(out_data * (g - dot))

    return _make(out_data, (x,), backward)


def repeat_rows(x: Tensor, counts) -> Tensor:
    """Repeat row i of ``x`` counts[i] times (the length regulator core)."""
    counts = np.asarray(counts, dtype=np.int64)
    if counts.ndim != 1 or len(counts) != x.data.shape[0]:
        raise ValueError(
            f"need one count per row: {len(counts)} counts, {x.data.shape[0]} rows"
        )
    if np.any(counts < 0):
        raise ValueError("repeat counts must be >= 0")
    indices = np.repeat(np.arange(len(counts)), counts)

    def backward(g):
        full = np.zeros_like(x.data)
        np.add.at(full, indices, g)
        x._accumulate(full)

    return _make(x.data[indices], (x,), backward)
