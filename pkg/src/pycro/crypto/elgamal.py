"""Multiplicatively homomorphic threshold cryptosystem (ElGamal).

Works in the prime-order subgroup of quadratic residues of a fixed safe
prime (the classic MODP groups), generated by g = 2. The secret exponent
is Shamir-split with threshold 2 over the subgroup order q, so Lagrange
recombination happens in a proper field.

Integers (node identities, the in-tree symbols 2 and 1/2) enter the
plaintext group through the squaring map m -> m^2 mod p, which is
injective on small positive integers and preserves products and inverses.
"""

import hashlib

import gmpy2

from ..encoding import pack_ints, unpack_ints
from ..errors import ConfigurationError, PlaintextRangeError

TAG_CIPHER = b"EG"
TAG_PARTIAL = b"EP"

# Safe primes p = 2q+1 with q prime and p = 7 mod 8, so 2 generates the
# quadratic-residue subgroup of order q.
MODP_GROUPS = {
    1024: int(
        "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
        "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
        "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
        "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE65381FFFFFFFFFFFFFFFF",
        16,
    ),
    1536: int(
        "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
        "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
        "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
        "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
        "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
        "9ED529077096966D670C354E4ABC9804F1746C08CA237327FFFFFFFFFFFFFFFF",
        16,
    ),
    2048: int(
        "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
        "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
        "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
        "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
        "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
        "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
        "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
        "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF",
        16,
    ),
}

GENERATOR = 2


class ElgamalScheme:
    """Public side of one threshold ElGamal instance plus its RNG."""

    scheme = "mul"

    def __init__(self, p, y, n_parties, rng):
        self.p = p
        self.q = (p - 1) // 2
        self.g = GENERATOR
        self.y = y
        self.n_parties = n_parties
        self.rng = rng
        self.key_id = hashlib.sha256(b"elgamal" + pack_ints(b"", p, y)).digest()[:8]

    @property
    def group_order(self):
        return self.q

    @property
    def identity(self):
        return 1

    def public_material(self):
        return pack_ints(b"PK", self.p, self.y, self.n_parties)

    # -- plaintext embedding --

    def embed(self, m):
        if m % self.p == 0:
            raise PlaintextRangeError("integer maps to 0, not a group element")
        return int(gmpy2.powmod(m, 2, self.p))

    def is_element(self, e):
        return 0 < e < self.p and gmpy2.powmod(e, self.q, self.p) == 1

    def elem_inverse(self, e):
        return int(gmpy2.invert(e, self.p))

    # -- encryption / homomorphic ops (payload = (c1, c2)) --

    def encrypt(self, elem):
        if not self.is_element(elem):
            raise PlaintextRangeError("value is not in the plaintext group")
        k = self.rng.randrange(1, self.q)
        return (
            int(gmpy2.powmod(self.g, k, self.p)),
            elem * gmpy2.powmod(self.y, k, self.p) % self.p,
        )

    def mul(self, a, b):
        return (a[0] * b[0] % self.p, a[1] * b[1] % self.p)

    def pow(self, a, r):
        return (int(gmpy2.powmod(a[0], r, self.p)), int(gmpy2.powmod(a[1], r, self.p)))

    def rerandomize(self, a):
        t = self.rng.randrange(1, self.q)
        return (
            a[0] * gmpy2.powmod(self.g, t, self.p) % self.p,
            a[1] * gmpy2.powmod(self.y, t, self.p) % self.p,
        )

    # -- threshold decryption --

    def make_partial(self, secret, c):
        return (c[0], c[1], int(gmpy2.powmod(c[0], secret, self.p)))

    def finish(self, pd_payload, partial_party, secret, party):
        c1, c2, partial_value = pd_payload
        c = (c1, c2)
        own = gmpy2.powmod(c[0], secret, self.p)
        xi, xj = partial_party + 1, party + 1
        lam_i = xj * gmpy2.invert(xj - xi, self.q) % self.q
        lam_j = xi * gmpy2.invert(xi - xj, self.q) % self.q
        blind = gmpy2.powmod(partial_value, lam_i, self.p) * gmpy2.powmod(own, lam_j, self.p) % self.p
        return int(c[1] * gmpy2.invert(blind, self.p) % self.p)

    # -- serialization --

    def cipher_bytes(self, payload):
        return pack_ints(TAG_CIPHER, *payload)

    def cipher_from_bytes(self, data):
        c1, c2 = unpack_ints(TAG_CIPHER, data, 2)
        return (c1, c2)

    def partial_bytes(self, payload):
        c1, c2, value = payload
        return pack_ints(TAG_PARTIAL, c1, c2, value)

    def partial_from_bytes(self, data):
        return tuple(unpack_ints(TAG_PARTIAL, data, 3))


def elgamal_keygen(n_parties, bits, keygen_rng, ops_rng):
    """Deal one threshold ElGamal instance; returns (scheme, secret per party)."""
    if bits not in MODP_GROUPS:
        raise ConfigurationError(
            f"no fixed group for {bits}-bit keys; choose one of {sorted(MODP_GROUPS)}"
        )
    p = MODP_GROUPS[bits]
    q = (p - 1) // 2
    x = keygen_rng.randrange(1, q)
    y = int(gmpy2.powmod(GENERATOR, x, p))
    slope = keygen_rng.randrange(q)
    secrets = [(x + slope * (i + 1)) % q for i in range(n_parties)]
    return ElgamalScheme(p, y, n_parties, ops_rng), secrets
