"""Command-line entry points.

    pycro pspt  --topology FILE --source D1:s       baseline tree
    pycro cr    --topology FILE --source D1:s       candidate-recommendation tree
    pycro route --topology FILE --source .. --dest ..   full path + entries
    pycro ba    --topology FILE --source .. --dest .. --demand N
    pycro bench (--preset sweep-2dom | --topology FILE) [--csv out.csv]
    pycro gen   (--preset I,II | --domains N --switches M) --inter-links K

Exit codes: 0 ok, 1 usage/other error, 2 no route, 3 demand unsatisfiable.
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from .bandwidth import ZERO_CAP, run_ba
from .crypto import PublicParams
from .errors import AllocationUnsatisfiableError, NoRouteError, PycroError
from .fastpath import EqualFlowGroup, answer_flow_query, build_shared_trees, run_cr, tree_to_revealed
from .pathsetup import establish_path, install_entries
from .pspt import reveal_tree, run_pspt
from .runtime import Metrics, spawn_network
from .topology import DOMAIN_PRESETS, SwitchId, generate_synthetic, parse_topology, preset_network

EXIT_USAGE = 1
EXIT_NO_ROUTE = 2
EXIT_UNSATISFIABLE = 3

BENCH_CONTEXT = (
    "# context: reference prototype measurements (7 lab servers, ISP backbone\n"
    "# topologies; <30 s and <700 KB per domain per tree) are not reproduced\n"
    "# here. This artifact asserts its own budget instead: real-backend CR on\n"
    "# a 4-domain, 12-significant-node network completes in under 180 s.\n"
)

SWEEP_POINTS = (10, 25, 50, 75, 100)


@dataclass
class RunConfig:
    topology: str | None = None
    source: str | None = None
    dest: str | None = None
    mode: str = "cr"
    backend: str = "transparent"
    seed: int = 0
    demand: int = 0
    ba_delete_mode: str = ZERO_CAP
    helper: str = "uniform"
    key_bits: int = 1024
    csv_path: str | None = None
    flow_group: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_common(p, need_source=True):
    p.add_argument("--topology", required=True, help="topology file")
    if need_source:
        p.add_argument("--source", required=True, help="source switch as <domain>:<name>")
    p.add_argument("--backend", choices=("transparent", "real"), default="transparent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--key-bits", type=int, default=1024, dest="key_bits")
    p.add_argument("--helper", default="uniform", help="uniform or fixed:<controller>")
    p.add_argument("--csv", dest="csv_path", help="append a metrics row to this CSV")
    p.add_argument("--flow-group", dest="flow_group")


def build_parser():
    top = _Parser(prog="pycro", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    for name in ("pspt", "cr"):
        p = sub.add_parser(name, help=f"run the {name} tree protocol")
        _add_common(p)

    p = sub.add_parser("route", help="establish a path and install entries")
    _add_common(p)
    p.add_argument("--dest", required=True)
    p.add_argument("--mode", choices=("baseline", "cr", "shared"), default="cr")

    p = sub.add_parser("ba", help="allocate bandwidth over multiple paths")
    _add_common(p)
    p.add_argument("--dest", required=True)
    p.add_argument("--demand", type=int, required=True)
    p.add_argument("--ba-mode", choices=("cr", "baseline"), default="cr", dest="ba_mode")
    p.add_argument("--ba-delete-mode", choices=("zero-cap", "whole-path"), default=ZERO_CAP, dest="ba_delete_mode")

    p = sub.add_parser("bench", help="run a benchmark sweep and emit CSV rows")
    p.add_argument("--preset", help="sweep-2dom .. sweep-7dom")
    p.add_argument("--topology", help="single topology file instead of a preset")
    p.add_argument("--source")
    p.add_argument("--mode", choices=("baseline", "cr"), default="cr")
    p.add_argument("--backend", choices=("transparent", "real"), default="transparent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--key-bits", type=int, default=1024, dest="key_bits")
    p.add_argument("--csv", dest="csv_path")
    p.add_argument("--switches-per-domain", type=int, default=8, dest="spd")

    p = sub.add_parser("gen", help="generate a synthetic topology")
    p.add_argument("--preset", help="comma list of domain profiles, e.g. I,II")
    p.add_argument("--domains", type=int)
    p.add_argument("--switches", type=int)
    p.add_argument("--inter-links", type=int, required=True, dest="inter_links")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cmax", type=int, default=9)
    p.add_argument("--capacity", action="store_true", help="attach random link capacities")
    p.add_argument("--scale", type=float, default=1.0, help="shrink preset profiles")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    return top


def _params(args):
    return PublicParams(security_bits=args.key_bits, backend=args.backend)


def _spawn(args, net):
    pnet = spawn_network(net, _params(args), seed=args.seed)
    pnet.helper_policy = args.helper
    return pnet


def _load(args):
    with open(args.topology, encoding="utf-8") as fh:
        return parse_topology(fh.read())


def _print_tree(revealed, view):
    for node in view.nodes:
        dist, parent = revealed.per_domain[node.domain][node]
        print(f"{node} dist={dist} parent={parent if parent else '-'}")


def _write_csv(path, rows):
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=Metrics.CSV_FIELDS)
        if fh.tell() == 0:
            writer.writeheader()
        for row in rows:
            writer.writerow(row.csv_row())


def cmd_tree(args, use_cr):
    net = _load(args)
    source = SwitchId.parse(args.source)
    pnet = _spawn(args, net)
    start = time.perf_counter()
    if use_cr:
        tree = run_cr(pnet, source, flow_group=args.flow_group)
        revealed = tree_to_revealed(pnet, tree)
        session = tree.session
    else:
        result = run_pspt(pnet, source, flow_group=args.flow_group)
        revealed = reveal_tree(pnet, result)
        session = result.session
    wall = (time.perf_counter() - start) * 1000
    _print_tree(revealed, revealed.view)
    metrics = pnet.metrics_snapshot(session, topo_id=args.topology, mode="cr" if use_cr else "baseline", wall_ms=wall)
    print(f"secif={metrics.secif_count} cmp={metrics.cmp_count} bytes/domain={metrics.bytes_per_domain_avg}")
    if args.csv_path:
        _write_csv(args.csv_path, [metrics])
    return 0


def cmd_route(args):
    net = _load(args)
    source, dest = SwitchId.parse(args.source), SwitchId.parse(args.dest)
    pnet = _spawn(args, net)
    if args.mode == "shared":
        group = EqualFlowGroup(args.flow_group or "default", source.domain)
        trees = build_shared_trees(pnet, group)
        path = answer_flow_query(pnet, group, trees, source, dest)
    elif args.mode == "cr":
        tree = run_cr(pnet, source, flow_group=args.flow_group)
        path = establish_path(pnet, tree_to_revealed(pnet, tree), source, dest)
    else:
        result = run_pspt(pnet, source, flow_group=args.flow_group)
        path = establish_path(pnet, reveal_tree(pnet, result), source, dest)
    flow_id = f"{source}->{dest}"
    deltas = install_entries(pnet, path, flow_id)
    print("path:", " -> ".join(str(s) for s in path.switches))
    print("cost:", path.cost)
    for domain in sorted(deltas):
        for switch, nxt in deltas[domain]:
            print(f"entry {domain}: {switch} -> {nxt}")
    return 0


def cmd_ba(args):
    net = _load(args)
    source, dest = SwitchId.parse(args.source), SwitchId.parse(args.dest)
    pnet = _spawn(args, net)
    try:
        alloc = run_ba(pnet, source, dest, args.demand, mode=args.ba_mode, delete_mode=args.ba_delete_mode)
    except AllocationUnsatisfiableError as exc:
        _print_allocation(exc.partial)
        print(f"unsatisfiable: {exc}")
        return EXIT_UNSATISFIABLE
    _print_allocation(alloc)
    return 0


def _print_allocation(alloc):
    for path, amount in alloc.paths:
        hops = " -> ".join(str(s) for s in path.switches)
        print(f"path len={path.cost} alloc={amount}: {hops}")
    print(f"total_cost={alloc.total_cost} allocated={alloc.allocated} demand={alloc.demand} "
          f"satisfied={alloc.satisfied}")


def bench_networks(preset, seed, spd):
    """Sweep networks in the fixed-domains, growing-inter-links style.

    Domain size grows with the inter-link count so enough distinct
    gateway pairs exist at the top of the sweep."""
    if not preset.startswith("sweep-") or not preset.endswith("dom"):
        raise PycroError(f"unknown bench preset {preset!r}")
    n_domains = int(preset[len("sweep-") : -len("dom")])
    for links in SWEEP_POINTS:
        switches = max(spd, int((2 * links / max(n_domains - 1, 1)) ** 0.5) + 2)
        yield f"{preset}/{links}", generate_synthetic(
            n_domains, switches, links, seed=seed * 1000 + links, c_max=9
        )


def cmd_bench(args):
    rows = []
    print(BENCH_CONTEXT, end="")
    if args.preset:
        nets = list(bench_networks(args.preset, args.seed, args.spd))
    elif args.topology:
        nets = [(args.topology, _load(args))]
    else:
        raise PycroError("bench needs --preset or --topology")
    for topo_id, net in nets:
        source = (
            SwitchId.parse(args.source)
            if args.source
            else net.gateways(net.domain_ids[0])[0]
        )
        pnet = spawn_network(net, _params(args), seed=args.seed)
        start = time.perf_counter()
        if args.mode == "cr":
            tree = run_cr(pnet, source)
            session = tree.session
        else:
            session = run_pspt(pnet, source).session
        wall = (time.perf_counter() - start) * 1000
        metrics = pnet.metrics_snapshot(session, topo_id=topo_id, mode=args.mode, wall_ms=wall)
        rows.append(metrics)
        print(
            f"{topo_id}: domains={metrics.n_domains} inter_links={metrics.n_inter_links} "
            f"gateways={metrics.n_gateways} wall_ms={metrics.wall_ms} "
            f"bytes/domain={metrics.bytes_per_domain_avg} cmp={metrics.cmp_count}"
        )
    if args.csv_path:
        _write_csv(args.csv_path, rows)
    return 0


def cmd_gen(args):
    if args.preset:
        names = [n.strip() for n in args.preset.split(",")]
        for name in names:
            if name not in DOMAIN_PRESETS:
                raise PycroError(f"unknown domain preset {name!r}; choose from {sorted(DOMAIN_PRESETS)}")
        net = preset_network(names, args.inter_links, args.seed, c_max=args.cmax, scale=args.scale)
    else:
        if not args.domains or not args.switches:
            raise PycroError("gen needs --preset or both --domains and --switches")
        net = generate_synthetic(
            args.domains, args.switches, args.inter_links, args.seed,
            c_max=args.cmax, with_capacity=args.capacity,
        )
    text = net.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}: {sum(len(d.switches) for d in net.domains.values())} switches, "
              f"{sum(len(d.links) for d in net.domains.values())} links, "
              f"{len(net.inter_links)} inter-links, {len(net.gateways())} gateways")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "pspt":
            return cmd_tree(args, use_cr=False)
        if args.command == "cr":
            return cmd_tree(args, use_cr=True)
        if args.command == "route":
            return cmd_route(args)
        if args.command == "ba":
            return cmd_ba(args)
        if args.command == "bench":
            return cmd_bench(args)
        if args.command == "gen":
            return cmd_gen(args)
        raise PycroError(f"unknown command {args.command}")
    except NoRouteError as exc:
        print(f"no route: {exc}", file=sys.stderr)
        return EXIT_NO_ROUTE
    except AllocationUnsatisfiableError as exc:
        print(f"unsatisfiable: {exc}", file=sys.stderr)
        return EXIT_UNSATISFIABLE
    except PycroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
