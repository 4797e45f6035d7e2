"""Privacy-preserving cross-domain shortest-path routing and bandwidth
allocation over an equivalent cost graph, built on two threshold
homomorphic cryptosystems and interactive Secure-If operations.

Quick tour:

    net   = pycro.parse_topology(open("net.topo").read())
    pnet  = pycro.spawn_network(net, seed=7)
    tree  = pycro.reveal_tree(pnet, pycro.run_pspt(pnet, source))
    path  = pycro.establish_path(pnet, tree, source, dest)
    alloc = pycro.run_ba(pnet, source, dest, demand=5)

See demos/ for narrated walkthroughs of each capability.
"""

from . import errors
from .bandwidth import FlowAllocation, allocation_cost, local_min_capacity, run_ba
from .crypto import (
    BACKEND_REAL,
    BACKEND_TRANSPARENT,
    AddCipher,
    KeyShare,
    MulCipher,
    PartialDecryption,
    PublicKey,
    PublicParams,
    SharePair,
    keygen,
)
from .crypto.codebook import NULL_PARENT, NodeCodebook
from .fastpath import (
    Candidate,
    EqualFlowGroup,
    PlainTree,
    answer_flow_query,
    build_shared_trees,
    local_candidate,
    private_compare,
    run_cr,
    tree_to_revealed,
)
from .pathsetup import Path, PathSegment, establish_path, forwarding_walk, install_entries
from .pspt import (
    Indicators,
    PsptCipherResult,
    RevealedTree,
    collect_encrypted_costs,
    init_indicators,
    pspt_iteration,
    reveal_tree,
    run_pspt,
)
from .runtime import Envelope, Metrics, ProtocolNetwork, spawn_network
from .secif import (
    SecIfParams,
    osc,
    plain_ge,
    run_secif,
    sc,
    secif0_params,
    secif1_params,
    secif2_params,
)
from .topology import (
    EquivalentCostGraph,
    MultiDomainNetwork,
    PolicyTable,
    SwitchId,
    build_ecg,
    generate_synthetic,
    intra_pair_costs,
    parse_topology,
    preset_network,
)

__version__ = "0.1.0"
