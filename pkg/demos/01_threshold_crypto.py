"""Tour of the two threshold cryptosystems.

Four controllers share each private key with threshold 2: one partial
decryption plus one finishing step from a different party reveals a
plaintext; a single share reveals nothing. The additive scheme carries
signed integers, the multiplicative one carries group elements drawn
from a public codebook.
"""

from pycro import PublicParams, keygen

params = PublicParams(security_bits=1024, backend="real")
system, shares = keygen(4, params, seed=2024)

print("== additive scheme ==")
c = system.encrypt_add(-42)
print("ciphertext bytes:", len(system.cipher_bytes(c)))
pd = system.partial_decrypt(shares[0].add, c)
print("party 0 partial + party 3 finish ->", system.finish_decrypt(pd, shares[3].add))

a, b = system.encrypt_add(1), system.encrypt_add(2)
s = system.hom_add(a, b)
pd = system.partial_decrypt(shares[1].add, s)
print("E(1) + E(2) decrypts to", system.finish_decrypt(pd, shares[2].add))

tripled = system.hom_scale(system.encrypt_add(7), 3)
pd = system.partial_decrypt(shares[0].add, tripled)
print("3 * E(7) decrypts to", system.finish_decrypt(pd, shares[1].add))

print("\n== re-randomization ==")
r = system.rerandomize(c)
print("bytes change:", system.cipher_bytes(r) != system.cipher_bytes(c))
pd = system.partial_decrypt(shares[2].add, r)
print("plaintext preserved:", system.finish_decrypt(pd, shares[0].add))

print("\n== multiplicative scheme ==")
codebook = system.make_codebook([("D1", "gw1"), ("D2", "gw2")])
flag_out = system.encrypt_mul(codebook.two)
flag_in = system.encrypt_mul(codebook.half)
prod = system.hom_mul(flag_out, flag_in)
pd = system.partial_decrypt(shares[0].mul, prod)
print("2 * 1/2 decrypts to the identity:", system.finish_decrypt(pd, shares[1].mul) == codebook.one)

parent = system.encrypt_mul(codebook.element(("D2", "gw2")))
pd = system.partial_decrypt(shares[3].mul, parent)
print("parent decodes back to:", codebook.node(system.finish_decrypt(pd, shares[0].mul)))
