"""Controller processes, counted message transport, and metrics.

One controller per domain. All protocol traffic is request/response over
a Transport that serializes every body, counts bytes both ways (plus a
fixed 16-byte header per envelope), and appends to a trace. The default
transport dispatches in-process and is fully deterministic; a TCP
loopback transport exists for multi-process style runs.
"""

import random
import socket
import struct
import threading
from dataclasses import dataclass, field

from . import wire
from .crypto import PublicParams, keygen
from .errors import AuthorizationError, ConfigurationError, ProtocolAbortError, TransportError
from .topology import quote_pairs

HEADER_BYTES = 16


@dataclass(frozen=True)
class Envelope:
    sender: int
    recipient: int
    kind: str
    payload: bytes

    @property
    def size(self):
        return len(self.payload) + HEADER_BYTES


# protocol modules register message handlers here: kind -> fn(controller, body)
HANDLERS = {}


def handler(kind):
    def register(fn):
        HANDLERS[kind] = fn
        return fn

    return register


@dataclass(frozen=True)
class PublicInfo:
    """What every controller may know: the public side of the network."""

    c_max: int
    domain_ids: tuple
    inter_links: tuple  # (u, v, cost, capacity) with SwitchIds
    gateways: tuple


class Controller:
    """Sequential state machine for one domain controller."""

    def __init__(self, cid, domain, policy, public, shares, crypto):
        self.cid = cid
        self.domain = domain
        self.policy = policy
        self.public = public
        self.shares = shares
        self.crypto = crypto
        self.sessions = {}
        self.forwarding = {}  # (SwitchId, flow_id) -> SwitchId next hop

    @property
    def domain_id(self):
        return self.domain.domain_id

    def session_state(self, session_id):
        return self.sessions.setdefault(session_id, {})

    def quotes_for(self, significant, flow_group=None):
        return quote_pairs(self.domain, self.policy, self.public.c_max, significant, flow_group)

    def install(self, switch, flow_id, next_hop):
        if switch.domain != self.domain_id:
            raise AuthorizationError(
                f"controller {self.domain_id} may not install entries at {switch}"
            )
        self.forwarding[(switch, flow_id)] = next_hop

    def handle(self, sender, kind, body):
        fn = HANDLERS.get(kind)
        if fn is None:
            raise TransportError(f"no handler for message kind {kind!r}")
        return fn(self, body)


class InProcTransport:
    """Synchronous in-process delivery: FIFO, reliable, deterministic."""

    def __init__(self, record_trace=True):
        self.controllers = {}
        self.bytes_sent = {}
        self.bytes_received = {}
        self.messages = {}
        self.trace = [] if record_trace else None

    def attach(self, controller):
        self.controllers[controller.cid] = controller
        self.bytes_sent[controller.cid] = 0
        self.bytes_received[controller.cid] = 0
        self.messages[controller.cid] = 0

    def _account(self, env):
        if env.recipient not in self.controllers:
            raise TransportError(f"unknown recipient controller {env.recipient}")
        self.bytes_sent[env.sender] += env.size
        self.bytes_received[env.recipient] += env.size
        self.messages[env.sender] += 1
        if self.trace is not None:
            self.trace.append(env)

    def send(self, sender, recipient, kind, body):
        """One-way message; the handler's return value is discarded."""
        env = Envelope(sender, recipient, kind, wire.encode(body))
        self._account(env)
        self.controllers[recipient].handle(sender, kind, wire.decode(env.payload))

    def request(self, sender, recipient, kind, body):
        env = Envelope(sender, recipient, kind, wire.encode(body))
        self._account(env)
        reply = self.controllers[recipient].handle(sender, kind, wire.decode(env.payload))
        renv = Envelope(recipient, sender, kind + "_RESP", wire.encode(reply))
        self._account(renv)
        return wire.decode(renv.payload)

    def close(self):
        pass


class SocketTransport:
    """TCP loopback transport; one listener thread per controller.

    Each request opens a fresh connection: 2-byte sender, length-prefixed
    kind and body, then one length-prefixed reply frame (status byte +
    body). Counters match the in-process transport.
    """

    def __init__(self, host="127.0.0.1"):
        self.host = host
        self.controllers = {}
        self.ports = {}
        self.bytes_sent = {}
        self.bytes_received = {}
        self.messages = {}
        self.trace = None
        self._lock = threading.Lock()
        self._servers = []

    def attach(self, controller):
        cid = controller.cid
        self.controllers[cid] = controller
        self.bytes_sent[cid] = 0
        self.bytes_received[cid] = 0
        self.messages[cid] = 0
        srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        srv.bind((self.host, 0))
        srv.listen(16)
        self.ports[cid] = srv.getsockname()[1]
        self._servers.append(srv)
        thread = threading.Thread(target=self._serve, args=(srv, controller), daemon=True)
        thread.start()

    def _serve(self, srv, controller):
        while True:
            try:
                conn, _ = srv.accept()
            except OSError:
                return
            with conn:
                try:
                    sender = struct.unpack(">H", _read_exact(conn, 2))[0]
                    kind = _read_frame(conn).decode()
                    payload = _read_frame(conn)
                    with self._lock:
                        self.bytes_sent[sender] += len(payload) + HEADER_BYTES
                        self.bytes_received[controller.cid] += len(payload) + HEADER_BYTES
                        self.messages[sender] += 1
                    try:
                        reply = controller.handle(sender, kind, wire.decode(payload))
                        frame = b"\x00" + wire.encode(reply)
                    except Exception as exc:  # ferried back to the caller
                        frame = b"\x01" + f"{type(exc).__name__}: {exc}".encode()
                    with self._lock:
                        self.bytes_sent[controller.cid] += len(frame) - 1 + HEADER_BYTES
                        self.bytes_received[sender] += len(frame) - 1 + HEADER_BYTES
                        self.messages[controller.cid] += 1
                    conn.sendall(struct.pack(">I", len(frame)) + frame)
                except OSError:
                    pass

    def request(self, sender, recipient, kind, body):
        if recipient not in self.ports:
            raise TransportError(f"unknown recipient controller {recipient}")
        payload = wire.encode(body)
        with socket.create_connection((self.host, self.ports[recipient])) as conn:
            conn.sendall(struct.pack(">H", sender))
            conn.sendall(struct.pack(">I", len(kind.encode())) + kind.encode())
            conn.sendall(struct.pack(">I", len(payload)) + payload)
            frame = _read_frame(conn)
        if frame[:1] == b"\x01":
            raise ProtocolAbortError(frame[1:].decode())
        return wire.decode(frame[1:])

    def send(self, sender, recipient, kind, body):
        self.request(sender, recipient, kind, body)

    def close(self):
        for srv in self._servers:
            try:
                srv.close()
            except OSError:
                pass


def _read_exact(conn, n):
    buf = b""
    while len(buf) < n:
        chunk = conn.recv(n - len(buf))
        if not chunk:
            raise OSError("connection closed early")
        buf += chunk
    return buf


def _read_frame(conn):
    (n,) = struct.unpack(">I", _read_exact(conn, 4))
    return _read_exact(conn, n)


class Session:
    """Counters and seeded decision randomness for one protocol run."""

    def __init__(self, pnet, label, helper_policy=None):
        self.pnet = pnet
        self.session_id = f"{label}#{pnet._next_session}"
        pnet._next_session += 1
        self.rng = random.Random(f"pycro.session.{pnet.seed}.{self.session_id}")
        self.helper_policy = helper_policy or pnet.helper_policy
        self.secif_count = 0
        self.cmp_count = 0
        self.rounds = 0
        self.debug_events = [] if pnet.debug_observe else None

    def coin(self):
        return self.rng.getrandbits(1)

    def pick_helper(self, coordinator, exclude=()):
        policy = self.helper_policy
        if policy.startswith("fixed:"):
            helper = int(policy.split(":", 1)[1])
            if helper == coordinator:
                raise ConfigurationError("fixed helper must differ from the coordinator")
            return helper
        pool = [c for c in self.pnet.controllers if c != coordinator and c not in exclude]
        return self.rng.choice(pool)


@dataclass
class Metrics:
    topo_id: str
    mode: str
    backend: str
    n_domains: int
    n_inter_links: int
    n_gateways: int
    wall_ms: float
    bytes_per_domain_avg: float
    secif_count: int
    cmp_count: int
    bytes_sent: dict = field(default_factory=dict)
    bytes_received: dict = field(default_factory=dict)

    CSV_FIELDS = (
        "topo_id",
        "mode",
        "backend",
        "n_domains",
        "n_inter_links",
        "n_gateways",
        "wall_ms",
        "bytes_per_domain_avg",
        "secif_count",
        "cmp_count",
    )

    def csv_row(self):
        return {name: getattr(self, name) for name in self.CSV_FIELDS}


class ProtocolNetwork:
    """A spawned set of controllers; the handle every protocol driver takes."""

    def __init__(self, network, params, seed, transport):
        if len(network.domains) < 2:
            raise ConfigurationError("threshold decryption needs at least 2 domains")
        self.network = network
        self.params = params
        self.seed = seed
        self.helper_policy = "uniform"
        self.debug_observe = False
        self._next_session = 0
        sentinel_bound = network.c_max * (len(network.gateways()) + len(network.domains)) + 1
        if params.plaintext_bound < sentinel_bound:
            raise ConfigurationError(
                f"plaintext bound {params.plaintext_bound} below the sentinel bound {sentinel_bound}"
            )
        self.crypto, self.shares = keygen(len(network.domains), params, seed)
        public = PublicInfo(
            c_max=network.c_max,
            domain_ids=tuple(network.domain_ids),
            inter_links=tuple((ln.u, ln.v, ln.cost, ln.capacity) for ln in network.inter_links),
            gateways=tuple(network.gateways()),
        )
        self.transport = transport
        self.controllers = {}
        for cid, did in enumerate(network.domain_ids):
            ctrl = Controller(cid, network.domains[did], network.policy, public, self.shares[cid], self.crypto)
            self.controllers[cid] = ctrl
            transport.attach(ctrl)

    # -- conveniences --

    def controller_of(self, domain_id):
        return self.controllers[self.network.controller_index(domain_id)]

    def ask(self, src, dst, kind, body):
        """Request/response, except a controller talking to itself stays
        local: no envelope, no bytes."""
        if src == dst:
            return wire.decode(wire.encode(self.controllers[dst].handle(src, kind, wire.decode(wire.encode(body)))))
        return self.transport.request(src, dst, kind, body)

    def new_session(self, label, helper_policy=None):
        return Session(self, label, helper_policy)

    def full_decrypt(self, cipher):
        """Two-share decryption for tests, demos and revealed outputs."""
        scheme = cipher.scheme
        s0 = getattr(self.shares[0], scheme)
        s1 = getattr(self.shares[1], scheme)
        return self.crypto.finish_decrypt(self.crypto.partial_decrypt(s0, cipher), s1)

    def metrics_snapshot(self, session=None, topo_id="", mode="", wall_ms=0.0):
        t = self.transport
        n = len(self.controllers)
        per_domain = [t.bytes_sent[c] + t.bytes_received[c] for c in self.controllers]
        return Metrics(
            topo_id=topo_id,
            mode=mode,
            backend=self.params.backend,
            n_domains=n,
            n_inter_links=len(self.network.inter_links),
            n_gateways=len(self.network.gateways()),
            wall_ms=round(wall_ms, 3),
            bytes_per_domain_avg=round(sum(per_domain) / n, 1),
            secif_count=session.secif_count if session else 0,
            cmp_count=session.cmp_count if session else 0,
            bytes_sent=dict(t.bytes_sent),
            bytes_received=dict(t.bytes_received),
        )

    def close(self):
        self.transport.close()


def spawn_network(network, params=None, seed=0, transport="inproc", record_trace=True):
    """Wire up one controller per domain over a counted transport."""
    params = params or PublicParams()
    if transport == "inproc":
        t = InProcTransport(record_trace=record_trace)
    elif transport == "socket":
        t = SocketTransport()
    else:
        raise ConfigurationError(f"unknown transport {transport!r}")
    return ProtocolNetwork(network, params, seed, t)

