"""Desk-scale benchmark: fixed domain count, growing inter-link count.

Communication and wall time should grow with the number of inter-domain
links (and with them, gateways). Reference-prototype absolute numbers
are not reproducible on a laptop; the trend is.
"""

import time

from pycro import spawn_network
from pycro.cli import bench_networks
from pycro.fastpath import run_cr

rows = []
for topo_id, net in bench_networks("sweep-2dom", seed=0, spd=10):
    src = net.gateways(net.domain_ids[0])[0]
    pnet = spawn_network(net, seed=0)
    t0 = time.perf_counter()
    tree = run_cr(pnet, src)
    wall = (time.perf_counter() - t0) * 1000
    m = pnet.metrics_snapshot(tree.session, topo_id=topo_id, mode="cr", wall_ms=wall)
    rows.append(m)
    print(f"{topo_id:>16}: gateways={m.n_gateways:3d} cmp={m.cmp_count:4d} "
          f"bytes/domain={m.bytes_per_domain_avg:10.0f} wall={m.wall_ms:7.1f} ms")

bytes_series = [m.bytes_per_domain_avg for m in rows]
print("bytes monotone non-decreasing:", bytes_series == sorted(bytes_series))
