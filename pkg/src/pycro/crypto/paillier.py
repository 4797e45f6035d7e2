"""Additively homomorphic threshold cryptosystem (Paillier family).

Keys are dealt by a trusted setup: the decryption exponent d (d = 1 mod n,
d = 0 mod lambda(n)) is Shamir-split with threshold 2 over Z_{n*lambda}.
A party's partial decryption of c is c^(2*delta*s_i) mod n^2 with
delta = n_parties!; any two distinct partials combine through integer
Lagrange coefficients, so no party ever reconstructs d itself.

Primes are probable primes, not safe primes: the semihonest setting here
needs no robustness proofs, and key generation stays sub-second.
"""

import hashlib
import math

import gmpy2

from ..encoding import pack_ints, unpack_ints
from ..errors import ConfigurationError

TAG_CIPHER = b"PA"
TAG_PARTIAL = b"PP"


def _random_prime(rng, bits):
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        p = int(gmpy2.next_prime(candidate))
        if p.bit_length() == bits:
            return p


class PaillierScheme:
    """Public side of one threshold Paillier instance plus its RNG."""

    scheme = "add"

    def __init__(self, n, n_parties, rng):
        self.n = n
        self.n2 = n * n
        self.n_parties = n_parties
        self.delta = math.factorial(n_parties)
        self.rng = rng
        self.key_id = hashlib.sha256(b"paillier" + pack_ints(b"", n)).digest()[:8]

    @property
    def space(self):
        return self.n

    def public_material(self):
        return pack_ints(b"PK", self.n, self.n_parties)

    # -- encryption / homomorphic ops (payload = int in Z_{n^2}) --

    def encrypt(self, m):
        r = self._unit()
        return (1 + (m % self.n) * self.n) % self.n2 * gmpy2.powmod(r, self.n, self.n2) % self.n2

    def _unit(self):
        while True:
            r = self.rng.randrange(1, self.n)
            if math.gcd(r, self.n) == 1:
                return r

    def add(self, a, b):
        return a * b % self.n2

    def scale(self, a, k):
        return int(gmpy2.powmod(a, k, self.n2))

    def rerandomize(self, a):
        return a * gmpy2.powmod(self._unit(), self.n, self.n2) % self.n2

    # -- threshold decryption --

    def make_partial(self, secret, c):
        return (c, int(gmpy2.powmod(c, 2 * self.delta * secret, self.n2)))

    def finish(self, pd_payload, partial_party, secret, party):
        c, partial_value = pd_payload
        own = int(gmpy2.powmod(c, 2 * self.delta * secret, self.n2))
        xi, xj = partial_party + 1, party + 1
        lam_i = self.delta * xj // (xj - xi)
        lam_j = self.delta * xi // (xi - xj)
        combined = (
            gmpy2.powmod(partial_value, 2 * lam_i, self.n2)
            * gmpy2.powmod(own, 2 * lam_j, self.n2)
            % self.n2
        )
        ell = (combined - 1) // self.n
        mu = gmpy2.invert(4 * self.delta * self.delta, self.n)
        return int(ell * mu % self.n)

    # -- serialization --

    def cipher_bytes(self, payload):
        return pack_ints(TAG_CIPHER, payload)

    def cipher_from_bytes(self, data):
        (payload,) = unpack_ints(TAG_CIPHER, data, 1)
        return payload

    def partial_bytes(self, payload):
        c, value = payload
        return pack_ints(TAG_PARTIAL, c, value)

    def partial_from_bytes(self, data):
        c, value = unpack_ints(TAG_PARTIAL, data, 2)
        return (c, value)


def paillier_keygen(n_parties, bits, keygen_rng, ops_rng):
    """Deal one threshold Paillier instance; returns (scheme, secret per party)."""
    if bits < 256:
        raise ConfigurationError(f"modulus of {bits} bits is below the supported minimum")
    p = _random_prime(keygen_rng, bits // 2)
    q = _random_prime(keygen_rng, bits // 2)
    while q == p:
        q = _random_prime(keygen_rng, bits // 2)
    n = p * q
    lam = int(gmpy2.lcm(p - 1, q - 1))
    if math.gcd(lam, n) != 1:
        raise ConfigurationError("degenerate prime pair; pick another seed")
    d = lam * int(gmpy2.invert(lam, n)) % (n * lam)
    slope = keygen_rng.randrange(n * lam)
    secrets = [(d + slope * (i + 1)) % (n * lam) for i in range(n_parties)]
    return PaillierScheme(n, n_parties, ops_rng), secrets
