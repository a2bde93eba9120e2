"""Little-endian framing shared by the model and classifier file formats.

Layout: 4-byte magic, u16 version, u8 kind, u32 length + UTF-8 JSON
metadata, u16 block count, blocks, u32 CRC-32 of everything before it.
A block is: u8 name length, name, u8 dtype code, u8 ndim, u32 per dim,
raw data.
"""

import io
import json
import struct
import zlib

import numpy as np

from .errors import FormatError

_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<i4"), 2: np.dtype("<f8")}
_CODES = {v: k for k, v in _DTYPES.items()}


def pack(magic, version, kind, meta, blocks):
    """Serialize ``blocks`` (list of (name, array)) with the given header."""
    out = io.BytesIO()
    out.write(magic)
    out.write(struct.pack("<HB", version, kind))
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")
    out.write(struct.pack("<I", len(meta_bytes)))
    out.write(meta_bytes)
    out.write(struct.pack("<H", len(blocks)))
    for name, arr in blocks:
        arr = np.ascontiguousarray(arr)
        dt = arr.dtype.newbyteorder("<")
        if dt not in _CODES:
            raise TypeError(f"block {name!r}: unsupported dtype {arr.dtype}")
        nb = name.encode("utf-8")
        out.write(struct.pack("<B", len(nb)))
        out.write(nb)
        out.write(struct.pack("<BB", _CODES[dt], arr.ndim))
        out.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        out.write(arr.astype(dt, copy=False).tobytes())
    body = out.getvalue()
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise FormatError("file is truncated")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def unpack(data, magic, versions):
    """Inverse of :func:`pack`. Returns (version, kind, meta, {name: array})."""
    r = _Reader(data)
    if r.take(len(magic)) != magic:
        raise FormatError(f"bad magic: expected {magic!r}")
    version, kind = r.unpack("<HB")
    if version not in versions:
        raise FormatError(f"unsupported format version {version}")
    (meta_len,) = r.unpack("<I")
    try:
        meta = json.loads(r.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"corrupt metadata block: {exc}") from None
    (count,) = r.unpack("<H")
    blocks = {}
    for _ in range(count):
        (nlen,) = r.unpack("<B")
        name = r.take(nlen).decode("utf-8", errors="replace")
        code, ndim = r.unpack("<BB")
        if code not in _DTYPES:
            raise FormatError(f"block {name!r}: unknown dtype code {code}")
        shape = r.unpack(f"<{ndim}I")
        dt = _DTYPES[code]
        n = int(np.prod(shape, dtype=np.int64)) if ndim else 1
        arr = np.frombuffer(r.take(n * dt.itemsize), dtype=dt).reshape(shape)
        blocks[name] = arr.copy()
    body_end = r.pos
    (crc,) = r.unpack("<I")
    if r.pos != len(data):
        raise FormatError("trailing bytes after checksum")
    if zlib.crc32(data[:body_end]) != crc:
        raise FormatError("checksum mismatch")
    return version, kind, meta, blocks
