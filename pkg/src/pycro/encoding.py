"""Canonical byte encoding: length-prefixed big-endian integers.

Every serialized object in this package (ciphertexts, keys, partial
decryptions, wire messages) is built from the primitives below, so two
equal values always serialize to identical bytes.
"""

import struct

from .errors import PycroError

_LEN = struct.Struct(">I")


def pack_int(value: int) -> bytes:
    """Signed integer -> 4-byte length + minimal big-endian two's complement."""
    n = (value.bit_length() + 8) // 8 or 1
    return _LEN.pack(n) + value.to_bytes(n, "big", signed=True)


def unpack_int(buf: bytes, offset: int) -> tuple[int, int]:
    (n,) = _LEN.unpack_from(buf, offset)
    offset += 4
    return int.from_bytes(buf[offset : offset + n], "big", signed=True), offset + n


def pack_bytes(data: bytes) -> bytes:
    return _LEN.pack(len(data)) + data


def unpack_bytes(buf: bytes, offset: int) -> tuple[bytes, int]:
    (n,) = _LEN.unpack_from(buf, offset)
    offset += 4
    return buf[offset : offset + n], offset + n


def pack_ints(tag: bytes, *values: int) -> bytes:
    """Tagged record of integers; the workhorse for ciphertext payloads."""
    return tag + b"".join(pack_int(v) for v in values)


def unpack_ints(tag: bytes, data: bytes, count: int) -> list[int]:
    if not data.startswith(tag):
        raise PycroError(f"bad serialization tag: expected {tag!r}")
    out = []
    offset = len(tag)
    for _ in range(count):
        v, offset = unpack_int(data, offset)
        out.append(v)
    if offset != len(data):
        raise PycroError("trailing bytes in serialized record")
    return out
