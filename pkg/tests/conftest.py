import pathlib
import random

import pytest

from pycro import PublicParams, parse_topology, spawn_network
from pycro.crypto import keygen
from pycro.topology import SwitchId, generate_synthetic

DATA = pathlib.Path(__file__).parent / "data"

REAL_BITS = 1024


def load_topo(name):
    return parse_topology((DATA / name).read_text())


@pytest.fixture(scope="session")
def toy1_net():
    return load_topo("toy1.topo")


@pytest.fixture(scope="session")
def toyba_net():
    return load_topo("toyba.topo")


@pytest.fixture
def toy1(toy1_net):
    return spawn_network(toy1_net, seed=1)


TOY1_SRC = SwitchId("D1", "s")
TOY1_DST = SwitchId("D2", "t")


@pytest.fixture(scope="session")
def transparent4():
    """A 4-party transparent crypto system with its shares."""
    return keygen(4, PublicParams(), seed=40)


@pytest.fixture(scope="session")
def real4():
    """A 4-party real crypto system at the default key size (shared
    across tests because key generation and big-int ops dominate)."""
    return keygen(4, PublicParams(security_bits=REAL_BITS, backend="real"), seed=41)


def oracle_family(index):
    """Seeded family of small connected networks for oracle-equivalence
    runs: 2-4 domains, at most 8 significant nodes, link costs 1..9.
    Indices below 5 stay tiny so the real-backend repeats are quick."""
    rng = random.Random(f"family.{index}")
    if index < 5:
        n_domains, switches = 2, 3 + rng.randrange(2)
        inter = 1 + rng.randrange(2)
    else:
        n_domains = 2 + index % 3
        switches = 3 + rng.randrange(3)
        inter = (n_domains - 1) + rng.randrange(3)
    while True:
        net = generate_synthetic(
            n_domains, switches, inter, seed=1000 + index, c_max=90, edge_cost_max=9
        )
        source = net.domains["D1"].switches[0]
        significant = {s for ln in net.inter_links for s in (ln.u, ln.v)} | {source}
        if len(significant) <= 8:
            return net, source
        inter -= 1


def big_family(index):
    """Larger networks (2-7 domains, up to 40 significant nodes) for
    candidate-recommendation runs."""
    rng = random.Random(f"bigfam.{index}")
    n_domains = 2 + index % 6
    switches = 4 + rng.randrange(4)
    inter = (n_domains - 1) + rng.randrange(2 * n_domains)
    while True:
        net = generate_synthetic(
            n_domains, switches, inter, seed=2000 + index, c_max=200, edge_cost_max=9
        )
        source = net.domains["D1"].switches[0]
        significant = {s for ln in net.inter_links for s in (ln.u, ln.v)} | {source}
        if len(significant) <= 40:
            return net, source
        inter -= 1
