"""Secure-If operations and the two-party comparison subprotocols.

A Secure-If is one request/response exchange: the coordinator partially
decrypts a condition ciphertext t0 and ships it with two candidate
tuples; the helper finishes the decryption and returns a slot-wise
re-randomization of t1 if the plaintext equals x, of t2 otherwise. A
uniform coin consumed at construction swaps the roles of t1/t2 (and
complements t0), so the helper's observation of "condition met" carries
no information.

The comparison sc(a, b) -> E(+1 if a >= b else -1) is a blinded-difference
subprotocol: the coordinator forms r*(a-b)+u (or its sign-flipped
complement -r*(a-b)-1-u) homomorphically with r in [1, 2^KAPPA],
u in [0, r-1], and the helper only ever sees the sign of that masked
value. osc() extends sc with public edge indices into a strict total
order. Leakage: the helper learns one masked sign per call; the sign
coin hides the direction and u hides exact equality.
"""

from dataclasses import dataclass

from .errors import ConfigurationError
from .runtime import handler

KAPPA = 40


@dataclass(frozen=True)
class Indicators:
    """Per-node encrypted triple: in-tree flag (mul), distance (add),
    parent identity (mul)."""

    in_tree: object
    dist: object
    parent: object

    def astuple(self):
        return (self.in_tree, self.dist, self.parent)


@dataclass(frozen=True)
class SecIfParams:
    label: str
    x_scheme: str  # scheme of t0 / x: "add" | "mul"
    x_value: int  # signed int (add) or group element (mul)
    t0: object
    t1: tuple
    t2: tuple
    roles: tuple = ("t1", "t2")  # debug-only names for the two branches

    def __post_init__(self):
        if len(self.t1) != len(self.t2):
            raise ConfigurationError("branch tuples must have identical shape")
        for a, b in zip(self.t1, self.t2):
            if a.scheme != b.scheme:
                raise ConfigurationError("branch tuples disagree on scheme tags")


def run_secif(pnet, session, coordinator, params, helper=None):
    """One Secure-If exchange; returns the delivered ciphertext tuple."""
    crypto = pnet.crypto
    shares = pnet.controllers[coordinator].shares
    share = shares.add if params.x_scheme == "add" else shares.mul
    pd = crypto.partial_decrypt(share, params.t0)
    if helper is None:
        helper = session.pick_helper(coordinator)
    want_debug = session.debug_events is not None
    body = (
        params.label,
        params.x_scheme,
        int(params.x_value),
        crypto.pd_bytes(pd),
        [crypto.cipher_bytes(c) for c in params.t1],
        [crypto.cipher_bytes(c) for c in params.t2],
        want_debug,
    )
    session.secif_count += 1
    blobs, branch = pnet.transport.request(coordinator, helper, "SECIF_REQ", body)
    if want_debug:
        role = params.roles[branch - 1]
        session.debug_events.append(("secif", params.label, role, branch == 1))
    return tuple(crypto.cipher_from_bytes(b) for b in blobs)


@handler("SECIF_REQ")
def _secif_helper(ctrl, body):
    label, x_scheme, x_value, pd_blob, t1_blobs, t2_blobs, want_debug = body
    crypto = ctrl.crypto
    pd = crypto.pd_from_bytes(pd_blob)
    share = ctrl.shares.add if x_scheme == "add" else ctrl.shares.mul
    dt0 = crypto.finish_decrypt(pd, share)  # dead zone -> CorruptionError
    satisfied = dt0 == x_value
    chosen = t1_blobs if satisfied else t2_blobs
    out = [
        crypto.cipher_bytes(crypto.rerandomize(crypto.cipher_from_bytes(blob)))
        for blob in chosen
    ]
    return (out, (1 if satisfied else 2) if want_debug else None)


# -- comparison subprotocols --


def _blind_difference(crypto, session, a, b):
    """Mask a-b as m with sign coin s: decode(m) >= 0 iff (a >= b) xor s."""
    s = session.coin()
    r = session.rng.randrange(1, (1 << KAPPA) + 1)
    u = session.rng.randrange(r)
    diff = crypto.hom_sub(a, b)
    if s == 0:
        masked = crypto.hom_add(crypto.hom_scale(diff, r), crypto.encrypt_add(u, check_range=False))
    else:
        masked = crypto.hom_add(
            crypto.hom_scale(diff, -r), crypto.encrypt_add(-1 - u, check_range=False)
        )
    return s, masked


def sc(pnet, session, coordinator, a, b, helper=None):
    """Encrypted comparison: decrypts to +1 iff plaintext(a) >= plaintext(b)."""
    crypto = pnet.crypto
    s, masked = _blind_difference(crypto, session, a, b)
    pd = crypto.partial_decrypt(pnet.controllers[coordinator].shares.add, masked)
    if helper is None:
        helper = session.pick_helper(coordinator)
    session.cmp_count += 1
    want_debug = session.debug_events is not None
    blob, observed = pnet.transport.request(
        coordinator, helper, "SC_REQ", (crypto.pd_bytes(pd), want_debug)
    )
    if want_debug:
        session.debug_events.append(("sc", observed))
    result = crypto.cipher_from_bytes(blob)
    if s == 1:
        result = crypto.hom_scale(result, -1)
    return crypto.rerandomize(result)


@handler("SC_REQ")
def _sc_helper(ctrl, body):
    pd_blob, want_debug = body
    crypto = ctrl.crypto
    pd = crypto.pd_from_bytes(pd_blob)
    m = crypto.finish_decrypt_centered(pd, ctrl.shares.add)
    value = 1 if m >= 0 else -1
    blob = crypto.cipher_bytes(crypto.rerandomize(crypto.encrypt_add(value)))
    return (blob, value if want_debug else None)


def plain_ge(pnet, session, coordinator, a, b, helper=None):
    """Blinded comparison with a plaintext verdict at the coordinator:
    True iff plaintext(a) >= plaintext(b). Stands in for a dedicated
    plaintext-output comparison protocol between capacity/candidate
    holders; the helper sees only the masked sign."""
    crypto = pnet.crypto
    s, masked = _blind_difference(crypto, session, a, b)
    pd = crypto.partial_decrypt(pnet.controllers[coordinator].shares.add, masked)
    if helper is None:
        helper = session.pick_helper(coordinator)
    session.cmp_count += 1
    nonneg = pnet.transport.request(coordinator, helper, "SC_PLAIN_REQ", crypto.pd_bytes(pd))
    return nonneg if s == 0 else not nonneg


@handler("SC_PLAIN_REQ")
def _sc_plain_helper(ctrl, body):
    crypto = ctrl.crypto
    pd = crypto.pd_from_bytes(body)
    return crypto.finish_decrypt_centered(pd, ctrl.shares.add) >= 0


def osc(pnet, session, coordinator, a, a_idx, b, b_idx):
    """Strict total order over (value, public index) pairs: decrypts to +1
    iff (a, a_idx) < (b, b_idx) lexicographically, else -1."""
    if a_idx == b_idx:
        raise ConfigurationError("osc needs two distinct edge indices")
    crypto = pnet.crypto
    sc_ab = sc(pnet, session, coordinator, a, b)
    sc_ba = sc(pnet, session, coordinator, b, a)
    theta = crypto.hom_sub(crypto.hom_add(sc_ab, sc_ba), crypto.encrypt_add(1))
    idx_const = crypto.encrypt_add(1 if a_idx < b_idx else -1)
    coin = session.coin()
    if coin == 0:
        params = SecIfParams("osc", "add", 1, theta, (idx_const,), (sc_ba,), ("tie-index", "order"))
    else:
        params = SecIfParams(
            "osc", "add", 1, crypto.hom_scale(theta, -1), (sc_ba,), (idx_const,), ("order", "tie-index")
        )
    return run_secif(pnet, session, coordinator, params)[0]


# -- parameter constructions for the tree protocol's three Secure-Ifs --


def secif0_params(crypto, codebook, f_v, f_w, g_v, g_w, e_vw, sentinel, coin):
    """Condition "both endpoints share in-tree status": deliver the
    sentinel then; otherwise the masked tentative distance g(v)+g(v')+e."""
    r = crypto.random_mul_exponent()
    distance = crypto.rerandomize(crypto.hom_add(crypto.hom_add(g_v, g_w), e_vw))
    if coin == 0:
        t0 = crypto.hom_pow(crypto.hom_mul(f_v, crypto.hom_pow(f_w, -1)), r)
        t1, t2 = (crypto.encrypt_add(sentinel),), (distance,)
        roles = ("sentinel", "distance")
    else:
        t0 = crypto.hom_pow(crypto.hom_mul(f_v, f_w), -r)
        t1, t2 = (distance,), (crypto.encrypt_add(sentinel),)
        roles = ("distance", "sentinel")
    return SecIfParams("secif0", "mul", codebook.one, t0, t1, t2, roles)


def secif2_params(crypto, codebook, v, w, ind_v, ind_w, alpha, coin):
    """Condition "v is not in the tree yet": pick which endpoint the
    winning edge update applies to. Branch tuples carry all six
    indicators (new values for the joining endpoint, re-randomizations
    for the other)."""
    half = codebook.half
    update_v = (
        crypto.encrypt_mul(half),
        crypto.rerandomize(alpha),
        crypto.encrypt_mul(codebook.element(w)),
        crypto.rerandomize(ind_w.in_tree),
        crypto.rerandomize(ind_w.dist),
        crypto.rerandomize(ind_w.parent),
    )
    update_w = (
        crypto.rerandomize(ind_v.in_tree),
        crypto.rerandomize(ind_v.dist),
        crypto.rerandomize(ind_v.parent),
        crypto.encrypt_mul(half),
        crypto.rerandomize(alpha),
        crypto.encrypt_mul(codebook.element(v)),
    )
    if coin == 0:
        t0 = crypto.rerandomize(ind_v.in_tree)
        t1, t2 = update_v, update_w
        roles = ("update-first", "update-second")
    else:
        t0 = crypto.rerandomize(crypto.hom_pow(ind_v.in_tree, -1))
        t1, t2 = update_w, update_v
        roles = ("update-second", "update-first")
    return SecIfParams("secif2", "mul", codebook.two, t0, t1, t2, roles)


def secif1_params(pnet, session, coordinator, alphas, k, t_a, ind_v, ind_w, coin):
    """Condition "edge k holds the lexicographically smallest tentative
    distance": deliver the SecIf2 outcome then, otherwise re-randomized
    originals. Runs the osc tournament of edge k against every other
    edge, so it talks to helpers before the final exchange."""
    crypto = pnet.crypto
    alpha_k = alphas[k]
    gamma = crypto.encrypt_add(0)
    for i in sorted(alphas):
        if i == k:
            continue
        gamma = crypto.hom_add(gamma, osc(pnet, session, coordinator, alpha_k, k, alphas[i], i))
    zeta = len(alphas) - 1
    epsilon = sc(pnet, session, coordinator, gamma, crypto.encrypt_add(zeta))
    t_b = (
        crypto.rerandomize(ind_v.in_tree),
        crypto.rerandomize(ind_v.dist),
        crypto.rerandomize(ind_v.parent),
        crypto.rerandomize(ind_w.in_tree),
        crypto.rerandomize(ind_w.dist),
        crypto.rerandomize(ind_w.parent),
    )
    if coin == 0:
        return SecIfParams("secif1", "add", 1, epsilon, t_a, t_b, ("winner", "keep"))
    return SecIfParams("secif1", "add", 1, crypto.hom_scale(epsilon, -1), t_b, t_a, ("keep", "winner"))
