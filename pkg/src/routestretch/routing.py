"""Hierarchical routing tables, packet forwarding, stretch measurement.

Every node's table holds one self entry, one entry per other node in
its own leaf cluster, and one entry per sibling of each of its ancestor
clusters, so the table length is 1 + sum over levels of (units visible
at that level - 1).  Next hops take the first edge of a breadth-first
shortest path computed inside the tightest cluster enclosing both the
owner and the target: the leaf cluster for node entries, the owner's
parent cluster at the key's level for sibling-cluster entries (the
whole graph for top-level keys).  Routes therefore descend through a
common parent and never leave it, which is what keeps stateless
per-hop forwarding loop-free.  Where several first edges tie, the
lowest node id wins.  An entry for a sibling cluster aims at that
cluster's nearest member (nearest by hop count inside the parent, ties
by lowest member id, then lowest next-hop id).

Forwarding resolves the destination to the finest key the current node
can see: the destination itself inside the node's own leaf cluster,
otherwise the destination's ancestor cluster at the first level where
the two label paths diverge.  Hops are counted against a loop guard of
n_nodes; exceeding it raises RoutingLoopError naming the cycle.

Measurement is single-threaded and deterministic.  The headline s_p is
the ratio of means (mean hierarchical route length over mean shortest
length); the mean of per-pair ratios is reported alongside for
transparency but it is not s_p.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Sequence

from .graphs import Graph, all_pairs_shortest_lengths
from .hierarchy import Hierarchy


class RoutingError(ValueError):
    """Forwarding hit a table without a usable entry."""


class RoutingLoopError(RoutingError):
    """The loop guard tripped; carries the offending cycle."""

    def __init__(self, message: str, cycle: list[int]):
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class RoutingTable:
    """One node's table.  Keys are destination nodes in the owner's leaf
    cluster (node_entries) or (level, cluster id) ancestor siblings
    (cluster_entries); values are next-hop neighbor ids."""

    owner: int
    node_entries: dict[int, int]
    cluster_entries: dict[tuple[int, int], int]

    @property
    def length(self) -> int:
        """Entry count, including the owner's self entry."""
        return 1 + len(self.node_entries) + len(self.cluster_entries)


def _induced_distances(nodes: Sequence[int], adj) -> dict[int, dict[int, int]]:
    """All-pairs BFS hop counts inside the induced subgraph of `nodes`."""
    node_set = set(nodes)
    out: dict[int, dict[int, int]] = {}
    for s in nodes:
        d = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in node_set and w not in d:
                    d[w] = d[u] + 1
                    queue.append(w)
        out[s] = d
    return out


def _hop_toward(adj, d_ctx: dict[int, dict[int, int]], u: int, t: int) -> int:
    """First edge of a shortest u->t path inside the context whose
    distances are d_ctx; adj rows are sorted, so the first qualifying
    neighbor is the lowest id."""
    du = d_ctx[u].get(t)
    if du is None:
        raise RoutingError(f"{t} unreachable from {u} inside its cluster")
    for w in adj[u]:
        row = d_ctx.get(w)
        if row is not None and row.get(t) == du - 1:
            return w
    raise RoutingError(f"no shortest-path edge from {u} toward {t}")


def build_tables(
    graph: Graph,
    hierarchy: Hierarchy,
    dist: Sequence[Sequence[int]] | None = None,
) -> tuple[RoutingTable, ...]:
    """Tables for every node; pass a precomputed distance matrix to reuse it.

    Next hops for a key are computed inside the induced subgraph of the
    tightest cluster enclosing both the owner and the key (see the
    module docstring); hierarchy invariants guarantee those subgraphs
    are connected.
    """
    n = graph.n_nodes
    if hierarchy.n_nodes != n:
        raise ValueError(
            f"hierarchy covers {hierarchy.n_nodes} nodes, graph has {n}"
        )
    if dist is None:
        dist = all_pairs_shortest_lengths(graph)
    # the whole graph is the context for top-level keys (and for a flat leaf)
    whole: dict[int, dict[int, int]] = {
        u: {v: dist[u][v] for v in range(n)} for u in range(n)
    }
    paths = hierarchy.label_paths
    leaf_groups = hierarchy.leaf_groups()
    leaf_dist: dict[tuple[int, ...], dict[int, dict[int, int]]] = {}
    for key, members in leaf_groups.items():
        leaf_dist[key] = whole if len(members) == n else _induced_distances(members, graph.adj)
    # per level: members of each cluster, sibling groups keyed by parent
    # prefix, and induced distances of each parent cluster
    level_members: list[dict[int, list[int]]] = []
    level_siblings: list[dict[tuple[int, ...], list[int]]] = []
    parent_dist: list[dict[tuple[int, ...], dict[int, dict[int, int]]]] = []
    prev_members: dict[int, list[int]] | None = None
    for level in range(1, hierarchy.levels):
        members = hierarchy.clusters_at_level(level)
        level_members.append(members)
        sib: dict[tuple[int, ...], list[int]] = {}
        for cid, mem in members.items():
            sib.setdefault(paths[mem[0]][: level - 1], []).append(cid)
        level_siblings.append(sib)
        ctx: dict[tuple[int, ...], dict[int, dict[int, int]]] = {}
        if level == 1:
            ctx[()] = whole
        else:
            assert prev_members is not None
            for pcid, pmem in prev_members.items():
                prefix = paths[pmem[0]][: level - 1]
                ctx[prefix] = _induced_distances(pmem, graph.adj)
        parent_dist.append(ctx)
        prev_members = members
    tables = []
    for u in range(n):
        pu = paths[u]
        node_entries: dict[int, int] = {}
        d_leaf = leaf_dist[pu]
        for v in leaf_groups[pu]:
            if v != u:
                node_entries[v] = _hop_toward(graph.adj, d_leaf, u, v)
        cluster_entries: dict[tuple[int, int], int] = {}
        for level in range(1, hierarchy.levels):
            own = pu[level - 1]
            d_ctx = parent_dist[level - 1][pu[: level - 1]]
            du = d_ctx[u]
            for cid in level_siblings[level - 1][pu[: level - 1]]:
                if cid == own:
                    continue
                members = level_members[level - 1][cid]
                gateway = min(members, key=lambda mm: (du[mm], mm))
                cluster_entries[(level, cid)] = _hop_toward(graph.adj, d_ctx, u, gateway)
        tables.append(RoutingTable(u, node_entries, cluster_entries))
    return tuple(tables)


def route(
    tables: Sequence[RoutingTable],
    graph: Graph,
    hierarchy: Hierarchy,
    src: int,
    dst: int,
) -> list[int]:
    """Forward a packet hop by hop; returns the node sequence src..dst."""
    n = graph.n_nodes
    if not (0 <= src < n and 0 <= dst < n):
        raise ValueError(f"src/dst must lie in [0, {n}) (got {src}, {dst})")
    if src == dst:
        raise ValueError("src and dst must differ")
    paths = hierarchy.label_paths
    p_dst = paths[dst]
    hops = [src]
    x = src
    while x != dst:
        px = paths[x]
        if px == p_dst:
            nxt = tables[x].node_entries.get(dst)
        else:
            j = next(i for i in range(len(px)) if px[i] != p_dst[i])
            nxt = tables[x].cluster_entries.get((j + 1, p_dst[j]))
        if nxt is None:
            raise RoutingError(f"node {x} has no entry covering destination {dst}")
        hops.append(nxt)
        x = nxt
        if len(hops) - 1 > n:
            first = hops.index(x)
            cycle = hops[first:]
            raise RoutingLoopError(
                f"routing loop from {src} to {dst}: "
                + " -> ".join(map(str, cycle)),
                cycle,
            )
    return hops


@dataclass(frozen=True)
class StretchReport:
    """Measured operating point of one (graph, hierarchy) pair."""

    n_nodes: int
    levels: int
    method: str
    s_p: float
    s_t: float
    mean_table_length: float
    mean_hier_path: float
    mean_shortest_path: float
    mean_path_ratio: float
    histogram: tuple[tuple[int, int], ...]

    CSV_HEADER = "n,levels,method,s_p,s_t,mean_table,mean_hier,mean_short"

    def csv_record(self) -> str:
        fields = [
            str(self.n_nodes),
            str(self.levels),
            self.method,
            _fmt(self.s_p),
            _fmt(self.s_t),
            _fmt(self.mean_table_length),
            _fmt(self.mean_hier_path),
            _fmt(self.mean_shortest_path),
        ]
        return ",".join(fields)

    def to_text(self) -> str:
        lines = [
            f"n: {self.n_nodes}",
            f"levels: {self.levels}",
            f"method: {self.method}",
            f"s_p: {_fmt(self.s_p)}",
            f"s_t: {_fmt(self.s_t)}",
            f"mean_table_length: {_fmt(self.mean_table_length)}",
            f"mean_hier_path: {_fmt(self.mean_hier_path)}",
            f"mean_shortest_path: {_fmt(self.mean_shortest_path)}",
            f"mean_path_ratio: {_fmt(self.mean_path_ratio)}",
            "histogram:",
        ]
        lines.extend(f"  {length}: {count}" for length, count in self.histogram)
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(x, ".10g")


def measure(
    graph: Graph,
    hierarchy: Hierarchy,
    method: str | None = None,
    dist: Sequence[Sequence[int]] | None = None,
) -> StretchReport:
    """Route every ordered pair and report both stretch factors."""
    n = graph.n_nodes
    if n < 2:
        raise ValueError("stretch measurement needs at least two nodes")
    if dist is None:
        dist = all_pairs_shortest_lengths(graph)
    tables = build_tables(graph, hierarchy, dist)
    total_hier = 0
    total_short = 0
    ratio_sum = 0.0
    hist: Counter[int] = Counter()
    for src in range(n):
        drow = dist[src]
        for dst in range(n):
            if dst == src:
                continue
            hier_len = len(route(tables, graph, hierarchy, src, dst)) - 1
            total_hier += hier_len
            total_short += drow[dst]
            ratio_sum += hier_len / drow[dst]
            hist[hier_len] += 1
    pairs = n * (n - 1)
    mean_hier = total_hier / pairs
    mean_short = total_short / pairs
    mean_table = sum(t.length for t in tables) / n
    return StretchReport(
        n_nodes=n,
        levels=hierarchy.levels,
        method=method if method is not None else hierarchy.method,
        s_p=mean_hier / mean_short,
        s_t=mean_table / n,
        mean_table_length=mean_table,
        mean_hier_path=mean_hier,
        mean_shortest_path=mean_short,
        mean_path_ratio=ratio_sum / pairs,
        histogram=tuple(sorted(hist.items())),
    )
