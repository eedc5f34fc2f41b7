"""
Model file persistence
Little-endian binary layout: header, then per layer the two sizes, biases and row-major weights
"""

import logging
import struct
from pathlib import Path

import numpy as np

from src.config import MODEL_MAGIC, MODEL_VERSION
from src.crrbm.layer import BINARY, GAUSSIAN, RbmParams
from src.errors import (
    BadMagicError,
    DimensionMismatchError,
    InconsistentModelError,
    TruncatedFileError,
    VersionMismatchError,
)
from src.network.ucrdnet import BINARY_INPUT, REAL_VALUED, UcrdNet

logger = logging.getLogger(__name__)

INPUT_MODE_CODES = {REAL_VALUED: 0, BINARY_INPUT: 1}
VISIBLE_KIND_CODES = {BINARY: 0, GAUSSIAN: 1}

_HEADER = struct.Struct("<4sIBI")
_LAYER = struct.Struct("<BII")
_FLOAT = np.dtype("<f8")


def to_bytes(net: UcrdNet) -> bytes:
    chunks = [_HEADER.pack(MODEL_MAGIC, MODEL_VERSION, INPUT_MODE_CODES[net.input_mode], net.n_layers)]
    for layer in net.layers:
        chunks.append(_LAYER.pack(VISIBLE_KIND_CODES[layer.visible_kind], layer.n_visible, layer.n_hidden))
        chunks.append(layer.a.astype(_FLOAT).tobytes())
        chunks.append(layer.b.astype(_FLOAT).tobytes())
        chunks.append(np.ascontiguousarray(layer.W, dtype=_FLOAT).tobytes())
    return b"".join(chunks)


def save(net: UcrdNet, path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(to_bytes(net))
    logger.info(f"[ModelIO] ✅ Saved {net.n_layers}-layer model to {out}")
    return out


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n_bytes: int, what: str) -> bytes:
        end = self.offset + n_bytes
        if end > len(self.data):
            raise TruncatedFileError(
                f"file ends at byte {len(self.data)} while reading {what} (needs {end})"
            )
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def unpack(self, fmt: struct.Struct, what: str) -> tuple:
        return fmt.unpack(self.take(fmt.size, what))

    def floats(self, count: int, what: str) -> np.ndarray:
        return np.frombuffer(self.take(count * _FLOAT.itemsize, what), dtype=_FLOAT).astype(np.float64)


def _decode_code(codes: dict, value: int, what: str) -> str:
    for name, code in codes.items():
        if code == value:
            return name
    raise InconsistentModelError(f"unknown {what} code {value}")


def from_bytes(data: bytes) -> UcrdNet:
    magic = data[:len(MODEL_MAGIC)]
    if magic != MODEL_MAGIC:
        if len(data) < len(MODEL_MAGIC) and MODEL_MAGIC.startswith(data):
            raise TruncatedFileError("file ends inside the magic bytes")
        raise BadMagicError(f"bad magic {magic!r}, expected {MODEL_MAGIC!r}")

    reader = _Reader(data)
    _, version, mode_code, n_layers = reader.unpack(_HEADER, "header")
    if version != MODEL_VERSION:
        raise VersionMismatchError(f"model version {version}, this build reads {MODEL_VERSION}")
    input_mode = _decode_code(INPUT_MODE_CODES, mode_code, "input mode")
    if n_layers < 1:
        raise InconsistentModelError("model declares zero layers")

    layers = []
    for t in range(n_layers):
        kind_code, M, M_hidden = reader.unpack(_LAYER, f"layer {t} header")
        kind = _decode_code(VISIBLE_KIND_CODES, kind_code, "visible kind")
        a = reader.floats(M, f"layer {t} visible biases")
        b = reader.floats(M_hidden, f"layer {t} hidden biases")
        W = reader.floats(M * M_hidden, f"layer {t} weights").reshape(M, M_hidden)
        try:
            layers.append(RbmParams(W=W, a=a, b=b, visible_kind=kind))
        except ValueError as e:
            raise InconsistentModelError(f"layer {t}: {e}")

    if reader.offset != len(data):
        raise InconsistentModelError(f"{len(data) - reader.offset} trailing bytes after the last layer")
    try:
        return UcrdNet(layers=tuple(layers), input_mode=input_mode)
    except (ValueError, DimensionMismatchError) as e:
        raise InconsistentModelError(str(e))


def load(path: str) -> UcrdNet:
    file_path = Path(path)
    if not file_path.is_file():
        raise FileNotFoundError(f"model file not found: {path}")
    net = from_bytes(file_path.read_bytes())
    logger.info(f"[ModelIO] ✅ Loaded {net.input_mode} model {file_path.name}: sizes={net.layer_sizes}")
    return net
