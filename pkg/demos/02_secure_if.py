"""The Secure-If primitive and the comparison subprotocols.

A Secure-If hands a helper a partially decrypted condition plus two
ciphertext tuples; the helper returns a re-randomization of one of them
depending on whether the condition plaintext equals x. The construction
coins mean the helper's view is uninformative either way.
"""

import pathlib

from pycro import parse_topology, spawn_network
from pycro.secif import SecIfParams, osc, run_secif, sc

net = parse_topology((pathlib.Path(__file__).parent.parent / "tests/data/toy1.topo").read_text())
pnet = spawn_network(net, seed=7)
session = pnet.new_session("demo")
crypto = pnet.crypto
cb = crypto.make_codebook([("D1", "a")])

print("== a bare Secure-If ==")
t0 = crypto.encrypt_mul(cb.one)  # condition element equals x = 1
params = SecIfParams("demo", "mul", cb.one, t0, (crypto.encrypt_add(111),), (crypto.encrypt_add(222),))
out = run_secif(pnet, session, 0, params)
print("condition met -> branch decrypts", pnet.full_decrypt(out[0]))

print("\n== sc: encrypted >= comparison ==")
for a, b in ((5, 5), (2, 7), (9, 1)):
    verdict = pnet.full_decrypt(sc(pnet, session, 0, crypto.encrypt_add(a), crypto.encrypt_add(b)))
    print(f"sc({a}, {b}) -> {verdict:+d}")

print("\n== osc: strict total order with public index tie-break ==")
for a, ai, b, bi in ((3, 1, 3, 2), (3, 2, 3, 1), (2, 9, 5, 1)):
    verdict = pnet.full_decrypt(osc(pnet, session, 0, crypto.encrypt_add(a), ai, crypto.encrypt_add(b), bi))
    print(f"osc(({a},{ai}), ({b},{bi})) -> {verdict:+d}")

print("\nexchanges:", session.secif_count, "secure-ifs,", session.cmp_count, "comparisons")
