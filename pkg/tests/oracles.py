"""Independent plaintext oracles the protocol results are checked against.

Shortest paths come from scipy's csgraph, not from any code path inside
the package. The greedy allocation oracle re-implements the documented
allocation loop (candidate scan, tournament order, tie-breaks,
subtraction, deletion) directly on plaintext dictionaries.
"""

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra


def ecg_distances(ecg, source):
    """Exact shortest distances over the equivalent cost graph."""
    nodes = list(ecg.nodes)
    idx = {n: i for i, n in enumerate(nodes)}
    mat = np.zeros((len(nodes), len(nodes)))
    for e in ecg.edges:
        i, j = idx[e.u], idx[e.v]
        if mat[i, j] == 0 or e.plain_cost < mat[i, j]:
            mat[i, j] = mat[j, i] = e.plain_cost
    dist = _sp_dijkstra(csr_matrix(mat), directed=False, indices=idx[source])
    return {n: (None if np.isinf(dist[idx[n]]) else int(dist[idx[n]])) for n in nodes}


def flat_distances(network, source):
    """Shortest distances over the full physical multi-domain graph."""
    switches = [s for dom in network.domains.values() for s in dom.switches]
    idx = {s: i for i, s in enumerate(switches)}
    mat = np.zeros((len(switches), len(switches)))
    links = [ln for dom in network.domains.values() for ln in dom.links]
    links += list(network.inter_links)
    for ln in links:
        i, j = idx[ln.u], idx[ln.v]
        if mat[i, j] == 0 or ln.cost < mat[i, j]:
            mat[i, j] = mat[j, i] = ln.cost
    dist = _sp_dijkstra(csr_matrix(mat), directed=False, indices=idx[source])
    return {s: (None if np.isinf(dist[idx[s]]) else int(dist[idx[s]])) for s in switches}


def domain_distances(domain, start):
    """Shortest distances inside one domain's private topology."""
    idx = {s: i for i, s in enumerate(domain.switches)}
    mat = np.zeros((len(idx), len(idx)))
    for ln in domain.links:
        i, j = idx[ln.u], idx[ln.v]
        if mat[i, j] == 0 or ln.cost < mat[i, j]:
            mat[i, j] = mat[j, i] = ln.cost
    dist = _sp_dijkstra(csr_matrix(mat), directed=False, indices=idx[start])
    return {s: (None if np.isinf(dist[idx[s]]) else int(dist[idx[s]])) for s in domain.switches}


# -- plaintext mirror of the candidate-recommendation loop --


def cr_tree(ecg, domain_order, source):
    """Plaintext replay of the replicated-tree construction with the same
    tie-breaks: per domain the best (distance, node order) candidate; the
    round winner is the first candidate-holding domain unless a later
    domain is strictly closer."""
    nodes = list(ecg.nodes)
    order = {n: i for i, n in enumerate(nodes)}
    entries = {source: (0, None)}
    for _ in range(len(nodes) - 1):
        candidates = {}
        for did in domain_order:
            best = None
            for v in nodes:
                if v.domain != did or v in entries:
                    continue
                for e in ecg.edges:
                    if v not in (e.u, e.v):
                        continue
                    other = e.v if e.u == v else e.u
                    if other not in entries:
                        continue
                    d = entries[other][0] + e.plain_cost
                    rank = (d, order[v])
                    if best is None or rank < best[0]:
                        best = (rank, v, other)
            if best is not None:
                candidates[did] = best
        if not candidates:
            return entries  # disconnected remainder
        holder_order = [d for d in domain_order if d in candidates]
        win = holder_order[0]
        for did in domain_order:
            if did == win or did not in candidates:
                continue
            if candidates[did][0][0] < candidates[win][0][0]:
                win = did
        _, v, parent = candidates[win]
        entries[v] = (candidates[win][0][0], parent)
    return entries


def tree_path_steps(entries, anchor, source):
    steps = []
    w = anchor
    while w != source:
        parent = entries[w][1]
        steps.append((parent, w))
        w = parent
    steps.reverse()
    return steps


def greedy_allocation(ecg, domain_order, v_s, v_t, demand, delete_mode="zero-cap"):
    """Plaintext replay of the allocation loop over one equivalent cost
    graph: repeatedly take the CR-tree shortest path, allocate up to its
    bottleneck, subtract, delete exhausted edges (or the whole path).

    Returns (allocations, total_cost, satisfied) with allocations as
    (steps, amount, length) tuples; steps are (u, v) node pairs.
    """
    capacity = {frozenset((e.u, e.v)): e.capacity for e in ecg.edges}
    deleted = set()
    allocations = []
    total_cost = 0
    residual = demand

    class _Residual:
        pass

    while residual > 0:
        live = [e for e in ecg.edges if frozenset((e.u, e.v)) not in deleted]
        component = _component(ecg.nodes, live, v_s)
        residual_ecg = _Residual()
        residual_ecg.nodes = [n for n in ecg.nodes if n in component]
        residual_ecg.edges = [e for e in live if e.u in component and e.v in component]
        if v_t not in component:
            return allocations, total_cost, False
        entries = cr_tree(residual_ecg, domain_order, v_s)
        if v_t not in entries:
            return allocations, total_cost, False
        length = entries[v_t][0]
        steps = tree_path_steps(entries, v_t, v_s)
        keys = [frozenset(p) for p in steps]
        bounded = [capacity[k] for k in keys if capacity[k] is not None]
        amount = min(bounded + [residual]) if bounded else residual
        for k in keys:
            if capacity[k] is not None:
                capacity[k] -= amount
            if delete_mode == "whole-path" or capacity[k] == 0:
                deleted.add(k)
        allocations.append((steps, amount, length))
        total_cost += amount * length
        residual -= amount
    return allocations, total_cost, True


def _component(nodes, edges, start):
    adj = {n: set() for n in nodes}
    for e in edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen
