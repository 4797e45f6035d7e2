"""Multi-path bandwidth allocation on the capacitated toy network.

Two disjoint s->t routes: length 3 with bottleneck 3, length 4 with
bottleneck 4. A demand of 5 takes all of the short route and 2 units of
the long one, for a total cost of 3*3 + 2*4 = 17. Pushing the demand
past the cut capacity raises an error that carries the partial result.
"""

import pathlib

from pycro import SwitchId, parse_topology, run_ba, spawn_network
from pycro.errors import AllocationUnsatisfiableError

net = parse_topology((pathlib.Path(__file__).parent.parent / "tests/data/toyba.topo").read_text())
src, dst = SwitchId("D1", "s"), SwitchId("D4", "t")

alloc = run_ba(spawn_network(net, seed=5), src, dst, demand=5)
for path, amount in alloc.paths:
    print(f"  len {path.cost} alloc {amount}: " + " -> ".join(str(s) for s in path.switches))
print("total cost:", alloc.total_cost, "satisfied:", alloc.satisfied)

print("\ndemand beyond the cut:")
try:
    run_ba(spawn_network(net, seed=5), src, dst, demand=10)
except AllocationUnsatisfiableError as exc:
    print(" ", exc)
    for path, amount in exc.partial.paths:
        print(f"  partial: len {path.cost} alloc {amount}")

print("\nwhole-path deletion mode (drops every edge of each used path):")
try:
    whole = run_ba(spawn_network(net, seed=5), src, dst, demand=5, delete_mode="whole-path")
    print("  satisfied with", [(a, p.cost) for p, a in whole.paths])
except AllocationUnsatisfiableError as exc:
    print("  unsatisfiable after", [(a, p.cost) for p, a in exc.partial.paths])
