"""Message body encoding for controller-to-controller traffic.

A body is a nested structure of None, bools, ints, strings, bytes and
lists/tuples. Encoding is canonical (same structure, same bytes), which
the determinism and byte-accounting guarantees rely on.
"""

from .encoding import pack_bytes, pack_int, unpack_bytes, unpack_int
from .errors import TransportError


def encode(obj) -> bytes:
    out = bytearray()
    _enc(obj, out)
    return bytes(out)


def _enc(obj, out):
    if obj is None:
        out += b"N"
    elif obj is True:
        out += b"T"
    elif obj is False:
        out += b"F"
    elif isinstance(obj, int):
        out += b"I"
        out += pack_int(obj)
    elif isinstance(obj, str):
        out += b"S"
        out += pack_bytes(obj.encode())
    elif isinstance(obj, (bytes, bytearray)):
        out += b"B"
        out += pack_bytes(bytes(obj))
    elif isinstance(obj, (list, tuple)):
        out += b"L"
        out += pack_int(len(obj))
        for item in obj:
            _enc(item, out)
    else:
        raise TransportError(f"cannot encode {type(obj).__name__} on the wire")


def decode(data: bytes):
    obj, offset = _dec(data, 0)
    if offset != len(data):
        raise TransportError("trailing bytes in message body")
    return obj


def _dec(data, offset):
    tag = data[offset : offset + 1]
    offset += 1
    if tag == b"N":
        return None, offset
    if tag == b"T":
        return True, offset
    if tag == b"F":
        return False, offset
    if tag == b"I":
        return unpack_int(data, offset)
    if tag == b"S":
        raw, offset = unpack_bytes(data, offset)
        return raw.decode(), offset
    if tag == b"B":
        return unpack_bytes(data, offset)
    if tag == b"L":
        count, offset = unpack_int(data, offset)
        items = []
        for _ in range(count):
            item, offset = _dec(data, offset)
            items.append(item)
        return items, offset
    raise TransportError(f"unknown wire tag {tag!r}")
