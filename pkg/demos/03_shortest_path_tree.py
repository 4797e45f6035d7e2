"""End-to-end baseline run on the two-domain toy network.

D1 owns s and gateway a (link cost 1); D2 owns gateway b and t (link
cost 2); the inter-link a~b costs 2. The source controller builds the
tree over encrypted indicators, each controller learns exactly its own
nodes' results, and the s->t path is established and installed.
"""

import pathlib

from pycro import (
    SwitchId,
    establish_path,
    forwarding_walk,
    install_entries,
    parse_topology,
    reveal_tree,
    run_pspt,
    spawn_network,
)

net = parse_topology((pathlib.Path(__file__).parent.parent / "tests/data/toy1.topo").read_text())
pnet = spawn_network(net, seed=3)
src, dst = SwitchId("D1", "s"), SwitchId("D2", "t")

result = run_pspt(pnet, src)
print(f"{result.iterations} iterations, {result.session.secif_count} secure-ifs, "
      f"{result.session.cmp_count} comparisons")

tree = reveal_tree(pnet, result)
for domain, nodes in tree.per_domain.items():
    for node, (dist, parent) in nodes.items():
        print(f"  {domain} learned: {node} dist={dist} parent={parent or '-'}")

path = establish_path(pnet, tree, src, dst)
print("path:", " -> ".join(str(s) for s in path.switches), "cost", path.cost)

flow = f"{src}->{dst}"
install_entries(pnet, path, flow)
print("forwarding walk:", " -> ".join(str(s) for s in forwarding_walk(pnet, src, dst, flow)))

metrics = pnet.metrics_snapshot(result.session, topo_id="toy1", mode="baseline")
print("bytes per domain (avg):", metrics.bytes_per_domain_avg)
