"""Binary weight container: the ADSW file format.

Layout (all integers little-endian):

    magic "ADSW" | u32 version = 1 | u32 entry count |
    per entry: u16 name length, name UTF-8, u8 ndim, u32 per dim,
               payload float32 LE row-major |
    u32 CRC32 over everything after the magic

Readers reject bad magic, bad CRC, truncation, duplicate names.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import WeightFormatError

MAGIC = b"ADSW"
VERSION = 1


class WeightStore:
    """Ordered, named float32 tensors. Insertion order is preserved on save."""

    def __init__(self):
        self._entries: dict[str, np.ndarray] = {}

    def add(self, name: str, values) -> None:
        if name in self._entries:
            raise WeightFormatError(f"duplicate tensor name: {name!r}")
        self._entries[name] = np.ascontiguousarray(values, dtype=np.float32)

    def get(self, name: str) -> np.ndarray:
        if name not in self._entries:
            raise WeightFormatError(f"missing tensor: {name!r}")
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def items(self):
        return self._entries.items()


def save_weights(store: WeightStore) -> bytes:
    body = bytearray(struct.pack("<II", VERSION, len(store)))
    for name, values in store.items():
        encoded = name.encode("utf-8")
        body += struct.pack("<H", len(encoded))
        body += encoded
        body += struct.pack("<B", values.ndim)
        for dim in values.shape:
            body += struct.pack("<I", dim)
        body += values.astype("<f4", copy=False).tobytes()
    crc = zlib.crc32(bytes(body)) & 0xFFFFFFFF
    return MAGIC + bytes(body) + struct.pack("<I", crc)


def load_weights(data: bytes) -> WeightStore:
    if len(data) < 4 or data[:4] != MAGIC:
        raise WeightFormatError("bad magic: not an ADSW weight file")
    if len(data) < 16:
        raise WeightFormatError("truncated file: missing header or checksum")
    body, (stored_crc,) = data[4:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) & 0xFFFFFFFF != stored_crc:
        raise WeightFormatError("checksum mismatch: file corrupted")

    offset = 0

    def take(n: int, context: str) -> bytes:
        nonlocal offset
        if offset + n > len(body):
            raise WeightFormatError(f"truncated payload while reading {context}")
        chunk = body[offset:offset + n]
        offset += n
        return chunk

    version, count = struct.unpack("<II", take(8, "header"))
    if version != VERSION:
        raise WeightFormatError(f"unsupported format version {version}")

    store = WeightStore()
    for _ in range(count):
        (name_len,) = struct.unpack("<H", take(2, "name length"))
        name = take(name_len, "name").decode("utf-8")
        (ndim,) = struct.unpack("<B", take(1, f"{name!r} rank"))
        shape = tuple(
            struct.unpack("<I", take(4, f"{name!r} dims"))[0]
            for _ in range(ndim)
        )
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        payload = take(4 * size, f"{name!r} values")
        values = np.frombuffer(payload, dtype="<f4").reshape(shape)
        store.add(name, values)
    if offset != len(body):
        raise WeightFormatError(f"{len(body) - offset} trailing bytes after last entry")
    return store
