"""Binary checkpoint container: named float64 tensors plus optimizer state.

Layout (all integers little-endian):

    b"phonemix-ckpt/1\\n"
    u32 metadata length, then that many bytes of JSON (sorted keys)
    u32 tensor count, then per tensor in sorted name order:
        u16 name length, name (utf-8), u8 ndim, u32 per dim, float64 data
    u8 optimizer flag; if 1: f64 lr/beta1/beta2/eps, u64 step, then per
        tensor in the same order: float64 m array, float64 v array

Round-trips are bit-exact because data is stored raw.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .layers import ParameterSet
from .optim import AdamState

MAGIC = b"phonemix-ckpt/1\n"


def _pack_array(array: np.ndarray) -> bytes:
    dims = array.shape
    out = struct.pack("<B", len(dims))
    for d in dims:
        out += struct.pack("<I", d)
    return out + array.astype("<f8").tobytes(order="C")


class _Reader:
    def __init__(self, raw: bytes):
        self.raw = raw
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.raw):
            raise ValueError("checkpoint is truncated")
        chunk = self.raw[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def array(self) -> np.ndarray:
        (ndim,) = self.unpack("<B")
        dims = tuple(self.unpack("<I")[0] for _ in range(ndim))
        count = int(np.prod(dims)) if dims else 1
        data = np.frombuffer(self.take(8 * count), dtype="<f8")
        return data.reshape(dims).astype(np.float64)


def save_checkpoint(
    path: str | Path,
    params: ParameterSet,
    optimizer: AdamState | None = None,
    metadata: dict | None = None,
):
    meta = json.dumps(metadata or {}, sort_keys=True).encode("utf-8")
    out = bytearray(MAGIC)
    out += struct.pack("<I", len(meta)) + meta
    names = params.names()
    out += struct.pack("<I", len(names))
    for name in names:
        encoded = name.encode("utf-8")
        out += struct.pack("<H", len(encoded)) + encoded
        out += _pack_array(params[name].data)
    if optimizer is None:
        out += struct.pack("<B", 0)
    else:
        out += struct.pack("<B", 1)
        out += struct.pack(
            "<dddd", optimizer.learning_rate, optimizer.beta1,
            optimizer.beta2, optimizer.eps,
        )
        out += struct.pack("<Q", optimizer.step)
        for name in names:
            out += _pack_array(optimizer.m[name])
            out += _pack_array(optimizer.v[name])
    Path(path).write_bytes(bytes(out))


def load_checkpoint(path: str | Path):
    """Returns ``(params, optimizer_or_none, metadata)``."""
    raw = Path(path).read_bytes()
    if not raw.startswith(MAGIC):
        raise ValueError(f"{path}: not a {MAGIC.strip().decode()} checkpoint")
    reader = _Reader(raw)
    reader.take(len(MAGIC))
    (meta_len,) = reader.unpack("<I")
    metadata = json.loads(reader.take(meta_len).decode("utf-8"))
    (count,) = reader.unpack("<I")
    params = ParameterSet()
    names = []
    for _ in range(count):
        (name_len,) = reader.unpack("<H")
        name = reader.take(name_len).decode("utf-8")
        names.append(name)
        params.add(name, reader.array())
    (has_optimizer,) = reader.unpack("<B")
    optimizer = None
    if has_optimizer:
        lr, beta1, beta2, eps = reader.unpack("<dddd")
        (step,) = reader.unpack("<Q")
        optimizer = AdamState(
            learning_rate=lr, beta1=beta1, beta2=beta2, eps=eps, step=step
        )
        for name in names:
            optimizer.m[name] = reader.array()
            optimizer.v[name] = reader.array()
    return params, optimizer, metadata
