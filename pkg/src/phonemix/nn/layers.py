"""Parameterized layers on top of the autodiff tensor.

Parameters live in a :class:`ParameterSet` keyed by dotted names; layer
functions take the set plus a name prefix so sub-networks stay
addressable in checkpoints. Initialization is uniform in
``+/- sqrt(1/fan_in)`` from a caller-supplied seeded generator.
"""

from __future__ import annotations

import math

import numpy as np

from .tensor import (
    Tensor,
    add,
    concat,
    matmul,
    mul,
    scale,
    sigmoid,
    slice_rows,
    softmax_rows,
    sub,
    tanh,
)


class ParameterSet:
    """Named map of trainable tensors with deterministic iteration order."""

    def __init__(self):
        self._tensors: dict[str, Tensor] = {}

    def add(self, name: str, data: np.ndarray) -> Tensor:
        if name in self._tensors:
            raise ValueError(f"parameter {name!r} already exists")
        t = Tensor(np.array(data, dtype=np.float64), requires_grad=True)
        self._tensors[name] = t
        return t

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self._tensors

    def names(self) -> list[str]:
        return sorted(self._tensors)

    def items(self):
        for name in self.names():
            yield name, self._tensors[name]

    def zero_grad(self):
        for t in self._tensors.values():
            t.grad = None

    def size(self) -> int:
        return sum(t.data.size for t in self._tensors.values())


def uniform_init(rng: np.random.Generator, shape: tuple, fan_in: int) -> np.ndarray:
    bound = math.sqrt(1.0 / max(1, fan_in))
    return rng.uniform(-bound, bound, size=shape)


def init_linear(params: ParameterSet, rng, prefix: str, d_in: int, d_out: int,
                bias: bool = True):
    params.add(f"{prefix}.w", uniform_init(rng, (d_in, d_out), d_in))
    if bias:
        params.add(f"{prefix}.b", uniform_init(rng, (d_out,), d_in))


def linear(params: ParameterSet, prefix: str, x: Tensor) -> Tensor:
    out = matmul(x, params[f"{prefix}.w"])
    if f"{prefix}.b" in params:
        out = add(out, params[f"{prefix}.b"])
    return out


def init_embedding(params: ParameterSet, rng, prefix: str, vocab: int, dim: int):
    params.add(f"{prefix}.table", uniform_init(rng, (vocab, dim), dim))


def init_gru(params: ParameterSet, rng, prefix: str, d_in: int, hidden: int):
    for gate in ("z", "r", "c"):
        params.add(f"{prefix}.w{gate}", uniform_init(rng, (d_in, hidden), d_in))
        params.add(f"{prefix}.u{gate}", uniform_init(rng, (hidden, hidden), hidden))
        params.add(f"{prefix}.b{gate}", np.zeros(hidden))


def gru_step(params: ParameterSet, prefix: str, x: Tensor, h: Tensor) -> Tensor:
    """One gated recurrent update.

    z = sigmoid(x Wz + h Uz + bz)
    r = sigmoid(x Wr + h Ur + br)
    c = tanh(x Wc + (r * h) Uc + bc)
    h' = (1 - z) * h + z * c
    """
    z = sigmoid(add(add(matmul(x, params[f"{prefix}.wz"]),
                        matmul(h, params[f"{prefix}.uz"])),
                    params[f"{prefix}.bz"]))
    r = sigmoid(add(add(matmul(x, params[f"{prefix}.wr"]),
                        matmul(h, params[f"{prefix}.ur"])),
                    params[f"{prefix}.br"]))
    c = tanh(add(add(matmul(x, params[f"{prefix}.wc"]),
                     matmul(mul(r, h), params[f"{prefix}.uc"])),
                 params[f"{prefix}.bc"]))
    return add(mul(sub(Tensor(np.ones(1)), z), h), mul(z, c))


def init_bidirectional(params: ParameterSet, rng, prefix: str, d_in: int, hidden: int):
    if hidden % 2 != 0:
        raise ValueError(f"bidirectional hidden size must be even, got {hidden}")
    init_gru(params, rng, f"{prefix}.cell", d_in, hidden // 2)


def bidirectional_recurrent(params: ParameterSet, prefix: str, x: Tensor) -> Tensor:
    """Run one shared gated cell forward and backward, concatenated per step.

    Sharing the cell across directions keeps the layer symmetric: for a
    single-step input both halves are identical by construction.
    """
    t = x.data.shape[0]
    if t < 1:
        raise ValueError("recurrent layer needs at least one time step")
    half = params[f"{prefix}.cell.bz"].data.shape[0]
    h = Tensor(np.zeros((1, half)))
    forward = []
    for i in range(t):
        h = gru_step(params, f"{prefix}.cell", slice_rows(x, i, i + 1), h)
        forward.append(h)
    h = Tensor(np.zeros((1, half)))
    backward = [None] * t
    for i in reversed(range(t)):
        h = gru_step(params, f"{prefix}.cell", slice_rows(x, i, i + 1), h)
        backward[i] = h
    rows = [concat([f, b], axis=1) for f, b in zip(forward, backward)]
    return concat(rows, axis=0)


def sinusoidal_positions(t: int, dim: int) -> np.ndarray:
    """Fixed sine/cosine position table of shape [t, dim]."""
    positions = np.arange(t)[:, None]
    div = np.exp(np.arange(0, dim, 2) * (-math.log(10000.0) / dim))
    table = np.zeros((t, dim))
    table[:, 0::2] = np.sin(positions * div)
    table[:, 1::2] = np.cos(positions * div[: table[:, 1::2].shape[1]])
    return table


def init_attention(params: ParameterSet, rng, prefix: str, d_in: int, hidden: int):
    for name in ("q", "k", "v"):
        params.add(f"{prefix}.w{name}", uniform_init(rng, (d_in, hidden), d_in))
    params.add(f"{prefix}.wo", uniform_init(rng, (hidden, hidden), hidden))


def attention_encoder(params: ParameterSet, prefix: str, x: Tensor) -> Tensor:
    """Single-head scaled dot-product attention with fixed positions."""
    t, d = x.data.shape
    if t < 1:
        raise ValueError("attention layer needs at least one time step")
    xp = add(x, Tensor(sinusoidal_positions(t, d)))
    q = matmul(xp, params[f"{prefix}.wq"])
    k = matmul(xp, params[f"{prefix}.wk"])
    v = matmul(xp, params[f"{prefix}.wv"])
    hidden = q.data.shape[1]
    scores = scale(matmul(q, transpose(k)), 1.0 / math.sqrt(hidden))
    weights = softmax_rows(scores)
    return matmul(matmul(weights, v), params[f"{prefix}.wo"])


def transpose(x: Tensor) -> Tensor:
    from .tensor import _make

    def backward(g):
        x._accumulate(g.T)

    return _make(x.data.T, (x,), backward)


ENCODER_KINDS = ("recurrent", "attention")


def init_encoder(params: ParameterSet, rng, prefix: str, kind: str,
                 d_in: int, hidden: int):
    if kind == "recurrent":
        init_bidirectional(params, rng, prefix, d_in, hidden)
    elif kind == "attention":
        init_attention(params, rng, prefix, d_in, hidden)
    else:
        raise ValueError(f"unknown encoder kind {kind!r}; expected {ENCODER_KINDS}")


def run_encoder(params: ParameterSet, prefix: str, kind: str, x: Tensor) -> Tensor:
    if kind == "recurrent":
        return bidirectional_recurrent(params, prefix, x)
    if kind == "attention":
        return attention_encoder(params, prefix, x)
    raise ValueError(f"unknown encoder kind {kind!r}; expected {ENCODER_KINDS}")


def init_conv_stack(params: ParameterSet, rng, prefix: str, d_in: int,
                    channels: int, layers: int, kernel: int):
    d = d_in
    for i in range(layers):
        params.add(
            f"{prefix}.conv{i}.w",
            uniform_init(rng, (kernel, d, channels), kernel * d),
        )
        params.add(f"{prefix}.conv{i}.b", np.zeros(channels))
        d = channels


def conv_stack(params: ParameterSet, prefix: str, layers: int, x: Tensor) -> Tensor:
    """Stack of same-length convolutions with tanh between layers."""
    from .tensor import conv1d

    out = x
    for i in range(layers):
        out = conv1d(out, params[f"{prefix}.conv{i}.w"], params[f"{prefix}.conv{i}.b"])
        out = tanh(out)
    return out
