"""Transparent test backend: the same two-scheme interface, no security.

A "ciphertext" is (value, nonce). All algebra happens directly on the
value, so protocol-logic tests run in milliseconds, while the fresh nonce
keeps re-randomization observable and makes serializations distinct.

Serialized payloads XOR the value with a pad derived from the nonce.
That is trivially invertible (this backend hides nothing from code that
holds the object), but it keeps raw plaintext byte patterns out of
recorded message traffic, so the privacy audits that string-scan
envelopes measure what the protocol actually sends, not an artifact of
the test backend.
"""

import hashlib

from ..encoding import pack_ints, unpack_ints
from ..errors import PlaintextRangeError

# Additive plaintexts live in Z_M; M only needs to dwarf every blinded
# protocol value (|m| up to 2^kappa * (B+1)).
ADD_SPACE = (1 << 127) - 1

# Multiplicative elements live in Z_P* for a safe prime P = 2Q+1, so every
# element except +-1 has order at least Q ~ 2^63 and random exponents never
# collapse a non-identity ratio to 1.
MUL_PRIME = 18446744073709554719
MUL_SUBGROUP = (MUL_PRIME - 1) // 2

TAG_ADD = b"ta"
TAG_MUL = b"tm"
TAG_ADD_PARTIAL = b"tA"
TAG_MUL_PARTIAL = b"tM"


def _pad(nonce):
    return int.from_bytes(hashlib.sha256(b"pycro.pad" + nonce.to_bytes(8, "big")).digest(), "big")


def _pack(tag, value, nonce, extra=()):
    return pack_ints(tag, value ^ _pad(nonce), nonce, *extra)


def _unpack(tag, data, n_extra=0):
    fields = unpack_ints(tag, data, 2 + n_extra)
    masked, nonce = fields[0], fields[1]
    return (masked ^ _pad(nonce), nonce, *fields[2:])


class _TransparentBase:
    def __init__(self, n_parties, rng):
        self.n_parties = n_parties
        self.rng = rng

    def _nonce(self):
        return self.rng.getrandbits(64)

    def rerandomize(self, a):
        return (a[0], self._nonce())

    # pd payload: (value, nonce, partial_party); the finishing side checks
    # party distinctness at the facade level.
    def make_partial(self, secret, c):
        return (c[0], self._nonce())

    def finish(self, pd_payload, partial_party, secret, party):
        return pd_payload[0]


class TransparentAddScheme(_TransparentBase):
    scheme = "add"
    key_id = b"tadd0000"
    space = ADD_SPACE

    def public_material(self):
        return pack_ints(b"PK", ADD_SPACE, self.n_parties)

    def encrypt(self, m):
        return (m % ADD_SPACE, self._nonce())

    def add(self, a, b):
        return ((a[0] + b[0]) % ADD_SPACE, self._nonce())

    def scale(self, a, k):
        return (a[0] * k % ADD_SPACE, self._nonce())

    def cipher_bytes(self, payload):
        return _pack(TAG_ADD, *payload)

    def cipher_from_bytes(self, data):
        return _unpack(TAG_ADD, data)

    def partial_bytes(self, payload):
        return _pack(TAG_ADD_PARTIAL, *payload)

    def partial_from_bytes(self, data):
        return _unpack(TAG_ADD_PARTIAL, data)


class TransparentMulScheme(_TransparentBase):
    scheme = "mul"
    key_id = b"tmul0000"
    identity = 1
    group_order = MUL_PRIME - 1

    def public_material(self):
        return pack_ints(b"PK", MUL_PRIME, self.n_parties)

    def embed(self, m):
        if m % MUL_PRIME == 0:
            raise PlaintextRangeError("integer maps to 0, not a group element")
        return m % MUL_PRIME

    def is_element(self, e):
        return 0 < e < MUL_PRIME

    def elem_inverse(self, e):
        return pow(e, -1, MUL_PRIME)

    def encrypt(self, elem):
        if not self.is_element(elem):
            raise PlaintextRangeError("value is not in the plaintext group")
        return (elem, self._nonce())

    def mul(self, a, b):
        return (a[0] * b[0] % MUL_PRIME, self._nonce())

    def pow(self, a, r):
        return (pow(a[0], r % (MUL_PRIME - 1), MUL_PRIME), self._nonce())

    def cipher_bytes(self, payload):
        return _pack(TAG_MUL, *payload)

    def cipher_from_bytes(self, data):
        return _unpack(TAG_MUL, data)

    def partial_bytes(self, payload):
        return _pack(TAG_MUL_PARTIAL, *payload)

    def partial_from_bytes(self, data):
        return _unpack(TAG_MUL_PARTIAL, data)
