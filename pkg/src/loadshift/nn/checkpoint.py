"""Binary checkpoints for networks, optimizer state, and RNG state.

Layout (all integers little-endian, no pickle):

    bytes 0-3   magic "LSQN"
    uint32      format version (currently 1)
    uint32      length of the UTF-8 JSON header that follows
    bytes       header: {"config": {...}, "rng_state": ... or null, "extra": {...}}
    uint32      array count
    per array:  uint16 name length, name bytes,
                uint8 dtype code (1=float32, 2=float64, 3=int64, 4=uint8),
                uint8 ndim, uint32 per dimension,
                raw C-order little-endian data

Array names are "net.<layer>.<param>" for parameters and running statistics
and "opt.<layer>.<param>" for optimizer accumulators.  Loading reproduces
every array bit for bit.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .network import NetworkConfig, QNetwork
from .optim import RMSProp

MAGIC = b"LSQN"
VERSION = 1

_DTYPE_CODES = {
    np.dtype("<f4"): 1,
    np.dtype("<f8"): 2,
    np.dtype("<i8"): 3,
    np.dtype("u1"): 4,
}
_CODE_DTYPES = {code: dt for dt, code in _DTYPE_CODES.items()}


class CheckpointError(ValueError):
    """Raised for unreadable or malformed checkpoint files."""


@dataclass
class Checkpoint:
    config: NetworkConfig
    arrays: dict[str, np.ndarray]
    rng_state: dict | None
    extra: dict

    def build_network(self, dtype=np.float32) -> QNetwork:
        net = QNetwork(self.config, rng=np.random.default_rng(0), dtype=dtype)
        net.load_state_arrays(
            {k[len("net.") :]: v for k, v in self.arrays.items() if k.startswith("net.")}
        )
        return net

    def optimizer_arrays(self) -> dict[str, np.ndarray]:
        return {k[len("opt.") :]: v for k, v in self.arrays.items() if k.startswith("opt.")}


def _write_array(fh, name: str, arr: np.ndarray) -> None:
    arr = np.ascontiguousarray(arr)
    le = arr.dtype.newbyteorder("<") if arr.dtype.byteorder == ">" else arr.dtype
    arr = arr.astype(le, copy=False)
    code = _DTYPE_CODES.get(arr.dtype)
    if code is None:
        raise CheckpointError(f"array {name}: unsupported dtype {arr.dtype}")
    name_b = name.encode("utf-8")
    fh.write(struct.pack("<H", len(name_b)))
    fh.write(name_b)
    fh.write(struct.pack("<BB", code, arr.ndim))
    fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
    fh.write(arr.tobytes())


def _read_exact(fh, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise CheckpointError("truncated checkpoint file")
    return data


def _read_array(fh) -> tuple[str, np.ndarray]:
    (name_len,) = struct.unpack("<H", _read_exact(fh, 2))
    name = _read_exact(fh, name_len).decode("utf-8")
    code, ndim = struct.unpack("<BB", _read_exact(fh, 2))
    if code not in _CODE_DTYPES:
        raise CheckpointError(f"array {name}: unknown dtype code {code}")
    shape = struct.unpack(f"<{ndim}I", _read_exact(fh, 4 * ndim))
    dtype = _CODE_DTYPES[code]
    count = int(np.prod(shape, dtype=np.int64)) if ndim else 1
    raw = _read_exact(fh, count * dtype.itemsize)
    return name, np.frombuffer(raw, dtype=dtype).reshape(shape).copy()


def save_checkpoint(
    path: str | Path,
    network: QNetwork,
    optimizer: RMSProp | None = None,
    rng_state: dict | None = None,
    extra: dict | None = None,
) -> None:
    header = json.dumps(
        {
            "config": network.config.to_dict(),
            "rng_state": rng_state,
            "extra": extra or {},
        }
    ).encode("utf-8")
    arrays: list[tuple[str, np.ndarray]] = [
        (f"net.{name}", arr) for name, arr in network.parameters() + network.buffers()
    ]
    if optimizer is not None:
        arrays.extend((f"opt.{name}", arr) for name, arr in optimizer.state_arrays().items())
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(struct.pack("<I", len(arrays)))
        for name, arr in arrays:
            _write_array(fh, name, arr)


def load_checkpoint(path: str | Path) -> Checkpoint:
    with open(path, "rb") as fh:
        if _read_exact(fh, 4) != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        (version,) = struct.unpack("<I", _read_exact(fh, 4))
        if version != VERSION:
            raise CheckpointError(f"{path}: unsupported version {version}")
        (header_len,) = struct.unpack("<I", _read_exact(fh, 4))
        header = json.loads(_read_exact(fh, header_len).decode("utf-8"))
        (count,) = struct.unpack("<I", _read_exact(fh, 4))
        arrays = dict(_read_array(fh) for _ in range(count))
    config = NetworkConfig(**header["config"])
    return Checkpoint(
        config=config,
        arrays=arrays,
        rng_state=header.get("rng_state"),
        extra=header.get("extra", {}),
    )
