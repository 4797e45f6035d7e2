"""Two threshold homomorphic cryptosystems behind one facade.

The additive scheme encrypts signed integers in [-B, B]; the
multiplicative scheme encrypts group elements (see codebook). Private
keys are (N,2)-shared: decryption takes one partial_decrypt plus one
finish_decrypt by a different party. The `backend` parameter of
PublicParams picks real cryptography or the transparent test backend;
protocol code never branches on it.
"""

import random
from dataclasses import dataclass

from ..errors import (
    ConfigurationError,
    CorruptionError,
    PlaintextRangeError,
    SchemeMismatchError,
    ThresholdError,
)
from .codebook import NULL_PARENT, NodeCodebook
from .elgamal import elgamal_keygen
from .paillier import paillier_keygen
from .transparent import TransparentAddScheme, TransparentMulScheme

BACKEND_REAL = "real"
BACKEND_TRANSPARENT = "transparent"

DEFAULT_PLAINTEXT_BOUND = 1 << 48


@dataclass(frozen=True)
class PublicParams:
    security_bits: int = 1024
    plaintext_bound: int = DEFAULT_PLAINTEXT_BOUND
    backend: str = BACKEND_TRANSPARENT

    def __post_init__(self):
        if self.backend not in (BACKEND_REAL, BACKEND_TRANSPARENT):
            raise ConfigurationError(f"unknown backend {self.backend!r}")
        if self.plaintext_bound < 2:
            raise ConfigurationError("plaintext bound must be at least 2")


@dataclass(frozen=True)
class PublicKey:
    scheme: str  # "add" | "mul"
    material: bytes


@dataclass(frozen=True)
class KeyShare:
    party_id: int
    scheme: str
    secret: int
    key_id: bytes


@dataclass(frozen=True)
class SharePair:
    add: KeyShare
    mul: KeyShare


@dataclass(frozen=True)
class AddCipher:
    payload: object
    key_id: bytes
    scheme = "add"


@dataclass(frozen=True)
class MulCipher:
    payload: object
    key_id: bytes
    scheme = "mul"


@dataclass(frozen=True)
class PartialDecryption:
    scheme: str
    party_id: int
    payload: object
    key_id: bytes


class CryptoSystem:
    """Public material plus every operation either scheme supports."""

    def __init__(self, params, add_scheme, mul_scheme):
        self.params = params
        self.bound = params.plaintext_bound
        self._add = add_scheme
        self._mul = mul_scheme
        if 2 * self.bound + 1 > add_scheme.space >> 8:
            raise ConfigurationError("plaintext bound too large for the additive scheme")

    # -- public key / group facts --

    @property
    def backend(self):
        return self.params.backend

    def public_keys(self):
        return (
            PublicKey("add", self._add.public_material()),
            PublicKey("mul", self._mul.public_material()),
        )

    @property
    def add_space(self):
        return self._add.space

    @property
    def mul_group_order(self):
        return self._mul.group_order

    @property
    def mul_identity(self):
        return self._mul.identity

    def random_mul_exponent(self):
        """Uniform exponent in [0, group order - 1], from the crypto RNG."""
        return self._mul.rng.randrange(self._mul.group_order)

    def embed(self, m):
        return self._mul.embed(m)

    def elem_inverse(self, e):
        return self._mul.elem_inverse(e)

    def make_codebook(self, node_ids):
        return NodeCodebook(self._mul, node_ids)

    # -- encryption --

    def encrypt_add(self, m, check_range=True):
        if check_range and abs(m) > self.bound:
            raise PlaintextRangeError(f"|{m}| exceeds the plaintext bound {self.bound}")
        return AddCipher(self._add.encrypt(m), self._add.key_id)

    def encrypt_mul(self, elem):
        return MulCipher(self._mul.encrypt(elem), self._mul.key_id)

    # -- homomorphic operations --

    def hom_add(self, a, b):
        self._expect(a, AddCipher)
        self._expect(b, AddCipher)
        return AddCipher(self._add.add(a.payload, b.payload), a.key_id)

    def hom_scale(self, a, k):
        self._expect(a, AddCipher)
        return AddCipher(self._add.scale(a.payload, k), a.key_id)

    def hom_sub(self, a, b):
        return self.hom_add(a, self.hom_scale(b, -1))

    def hom_mul(self, a, b):
        self._expect(a, MulCipher)
        self._expect(b, MulCipher)
        return MulCipher(self._mul.mul(a.payload, b.payload), a.key_id)

    def hom_pow(self, a, r):
        self._expect(a, MulCipher)
        return MulCipher(self._mul.pow(a.payload, r), a.key_id)

    def rerandomize(self, c):
        scheme = self._scheme_for(c)
        return type(c)(scheme.rerandomize(c.payload), c.key_id)

    # -- threshold decryption --

    def partial_decrypt(self, share, c):
        scheme = self._scheme_for(c)
        if share.scheme != c.scheme or share.key_id != c.key_id:
            raise SchemeMismatchError("key share does not match the ciphertext")
        return PartialDecryption(c.scheme, share.party_id, scheme.make_partial(share.secret, c.payload), c.key_id)

    def finish_decrypt(self, pd, share):
        """Complete a decryption; signed integer for the additive scheme,
        group element for the multiplicative one."""
        raw = self.finish_decrypt_raw(pd, share)
        if pd.scheme == "add":
            return self.decode_signed(raw)
        return raw

    def finish_decrypt_raw(self, pd, share):
        if share.scheme != pd.scheme or share.key_id != pd.key_id:
            raise SchemeMismatchError("key share does not match the partial decryption")
        if share.party_id == pd.party_id:
            raise ThresholdError("two distinct parties are required to decrypt")
        scheme = self._add if pd.scheme == "add" else self._mul
        return scheme.finish(pd.payload, pd.party_id, share.secret, share.party_id)

    def finish_decrypt_centered(self, pd, share):
        """Midpoint-signed decode, for blinded comparison residues whose
        magnitude legitimately exceeds the protocol plaintext bound."""
        residue = self.finish_decrypt_raw(pd, share)
        if pd.scheme != "add":
            raise SchemeMismatchError("centered decode only applies to the additive scheme")
        space = self._add.space
        return residue if residue <= space // 2 else residue - space

    def decode_signed(self, residue):
        space = self._add.space
        if residue <= self.bound:
            return residue
        if residue >= space - self.bound:
            return residue - space
        raise CorruptionError("residue in the dead zone; ciphertext corrupted")

    # -- serialization --

    def cipher_bytes(self, c):
        return self._scheme_for(c).cipher_bytes(c.payload)

    def cipher_from_bytes(self, data):
        tag = data[:2]
        if tag == b"PA" or tag == b"ta":
            return AddCipher(self._add.cipher_from_bytes(data), self._add.key_id)
        if tag == b"EG" or tag == b"tm":
            return MulCipher(self._mul.cipher_from_bytes(data), self._mul.key_id)
        raise SchemeMismatchError(f"unrecognized ciphertext tag {tag!r}")

    def pd_bytes(self, pd):
        scheme = self._add if pd.scheme == "add" else self._mul
        return scheme.partial_bytes(pd.payload) + pd.party_id.to_bytes(2, "big")

    def pd_from_bytes(self, data):
        body, party = data[:-2], int.from_bytes(data[-2:], "big")
        tag = body[:2]
        if tag == b"PP" or tag == b"tA":
            return PartialDecryption("add", party, self._add.partial_from_bytes(body), self._add.key_id)
        if tag == b"EP" or tag == b"tM":
            return PartialDecryption("mul", party, self._mul.partial_from_bytes(body), self._mul.key_id)
        raise SchemeMismatchError(f"unrecognized partial decryption tag {tag!r}")

    # -- internals --

    def _scheme_for(self, c):
        if isinstance(c, AddCipher):
            if c.key_id != self._add.key_id:
                raise SchemeMismatchError("ciphertext from a different additive key")
            return self._add
        if isinstance(c, MulCipher):
            if c.key_id != self._mul.key_id:
                raise SchemeMismatchError("ciphertext from a different multiplicative key")
            return self._mul
        raise SchemeMismatchError(f"not a ciphertext: {type(c).__name__}")

    def _expect(self, c, cls):
        if not isinstance(c, cls):
            raise SchemeMismatchError(f"expected {cls.__name__}, got {type(c).__name__}")
        self._scheme_for(c)


def keygen(n_parties, params, seed):
    """Deal both schemes' keys; returns (CryptoSystem, one SharePair per party)."""
    if n_parties < 2:
        raise ConfigurationError("threshold decryption needs at least 2 parties")
    keygen_rng = random.Random(f"pycro.keygen.{seed}")
    ops_rng = random.Random(f"pycro.crypto-ops.{seed}")
    if params.backend == BACKEND_TRANSPARENT:
        add_scheme = TransparentAddScheme(n_parties, ops_rng)
        mul_scheme = TransparentMulScheme(n_parties, ops_rng)
        add_secrets = [keygen_rng.getrandbits(64) for _ in range(n_parties)]
        mul_secrets = [keygen_rng.getrandbits(64) for _ in range(n_parties)]
    else:
        add_scheme, add_secrets = paillier_keygen(n_parties, params.security_bits, keygen_rng, ops_rng)
        mul_scheme, mul_secrets = elgamal_keygen(n_parties, params.security_bits, keygen_rng, ops_rng)
    system = CryptoSystem(params, add_scheme, mul_scheme)
    shares = [
        SharePair(
            KeyShare(i, "add", add_secrets[i], add_scheme.key_id),
            KeyShare(i, "mul", mul_secrets[i], mul_scheme.key_id),
        )
        for i in range(n_parties)
    ]
    return system, shares
