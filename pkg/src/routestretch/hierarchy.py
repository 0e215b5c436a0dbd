"""Nested clusterings of a graph's node set.

A Hierarchy assigns every node a label path: a tuple of cluster ids,
one per level from coarsest to finest.  A flat hierarchy (levels = 1)
has empty label paths and every node shares the single implicit
cluster, which is the whole graph.  Cluster ids are globally unique per
level (creation order), so a (level, id) pair names a cluster
unambiguously and proper nesting is checkable as "all members of a
cluster share one parent prefix".

Invariants of a well-formed hierarchy over a graph:

  1. at every level the clusters partition the node set (with the
     label-path encoding this reduces to every path having the same
     length, levels - 1);
  2. label paths are properly nested, i.e. no cluster id is shared by
     nodes whose coarser prefixes differ;
  3. every cluster induces a connected subgraph.

``validate`` reports violations instead of raising so broken files can
be inspected.  Builders only ever produce valid hierarchies.

File format: one line per node, ``node_id path_0 path_1 ...``, sorted
by node id; ``#`` comments and blank lines are skipped.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .graphs import Graph


class HierarchyFormatError(ValueError):
    """A hierarchy file failed to parse; the message carries the line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class HierarchyBuildError(ValueError):
    """A builder could not produce connected balanced clusters."""


@dataclass(frozen=True)
class Hierarchy:
    """Label-path clustering; method tags how it was built (not compared)."""

    levels: int
    label_paths: tuple[tuple[int, ...], ...]
    method: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1 (got {self.levels})")
        if not self.label_paths:
            raise ValueError("a hierarchy needs at least one node")

    @property
    def n_nodes(self) -> int:
        return len(self.label_paths)

    def _require_uniform(self) -> None:
        want = self.levels - 1
        for u, p in enumerate(self.label_paths):
            if len(p) != want:
                raise ValueError(
                    f"node {u} has a label path of length {len(p)}, expected {want}; "
                    "run validate() for a full report"
                )

    def clusters_at_level(self, level: int) -> dict[int, list[int]]:
        """Members of every cluster at a level (1 = coarsest)."""
        if not 1 <= level <= self.levels - 1:
            raise ValueError(f"level must lie in [1, {self.levels - 1}] (got {level})")
        self._require_uniform()
        groups: dict[int, list[int]] = {}
        for u, p in enumerate(self.label_paths):
            groups.setdefault(p[level - 1], []).append(u)
        return groups

    def leaf_groups(self) -> dict[tuple[int, ...], list[int]]:
        """Members keyed by full label path; one group holding everyone when flat."""
        self._require_uniform()
        groups: dict[tuple[int, ...], list[int]] = {}
        for u, p in enumerate(self.label_paths):
            groups.setdefault(p, []).append(u)
        return groups


@dataclass(frozen=True)
class HierarchyStats:
    cluster_counts: tuple[int, ...]
    mean_leaf_size: float
    height: int


def stats(hierarchy: Hierarchy) -> HierarchyStats:
    """Cluster count per level, mean leaf-cluster size, and height.

    For equal-size leaf clusters mean_leaf_size / n == 1 / p exactly,
    with p the leaf-level cluster count: that ratio is the flat-table
    fraction each node keeps.  A flat hierarchy reports zero cluster
    levels and the whole graph as its single leaf group.
    """
    hierarchy._require_uniform()
    n = hierarchy.n_nodes
    counts = []
    for k in range(hierarchy.levels - 1):
        counts.append(len({p[k] for p in hierarchy.label_paths}))
    mean_leaf = n / counts[-1] if counts else float(n)
    return HierarchyStats(tuple(counts), mean_leaf, hierarchy.levels)


def flat_hierarchy(graph: Graph) -> Hierarchy:
    """The trivial single-level hierarchy (every table keeps all N entries)."""
    return Hierarchy(1, tuple(() for _ in range(graph.n_nodes)), method="flat")


def _connected_set(nodes: set[int], adj) -> bool:
    if len(nodes) <= 1:
        return True
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in nodes and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(nodes)


def _components(nodes: set[int], adj) -> list[list[int]]:
    remaining = set(nodes)
    comps: list[list[int]] = []
    while remaining:
        start = min(remaining)
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in remaining and w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(sorted(seen))
        remaining -= seen
    return comps


def _grow_regions(
    members: list[int],
    adj,
    parts: int,
    level: int,
    parent_id: int | None,
) -> list[list[int]]:
    """Split members into `parts` connected regions with sizes differing by <= 1.

    Breadth-first region growing: each region seeds at the lowest-id
    untaken node and absorbs frontier nodes in (discovery layer, id)
    order.  Two guards keep every later region growable: a frontier
    node whose absorption would disconnect the remaining unassigned set
    is deferred while any safe candidate exists, and when every
    candidate disconnects it, the region absorbs the first candidate
    whose severed fragments fit and swallows those fragments whole, so
    the surviving remainder is a single connected piece.  Deterministic;
    raises when a region cannot reach its target size any other way.
    """
    total = len(members)
    if parts > total:
        where = "the node set" if parent_id is None else f"cluster {parent_id}"
        raise HierarchyBuildError(
            f"level {level}: cannot split {where} of {total} nodes into {parts} parts"
        )
    unassigned = set(members)
    base, rem = divmod(total, parts)
    regions: list[list[int]] = []
    for i in range(parts):
        target = base + (1 if i < rem else 0)
        seed = min(unassigned)
        unassigned.remove(seed)
        region = [seed]
        layer = {seed: 0}
        heap: list[tuple[int, int]] = []

        def push_frontier(w: int, lay: int) -> None:
            for x in adj[w]:
                if x in unassigned and x not in layer:
                    layer[x] = lay + 1
                    heapq.heappush(heap, (lay + 1, x))

        push_frontier(seed, 0)
        while len(region) < target:
            deferred: list[tuple[int, int]] = []
            pick = None
            while heap:
                lay, w = heapq.heappop(heap)
                if w not in unassigned:
                    continue
                unassigned.remove(w)
                if _connected_set(unassigned, adj):
                    pick = (lay, w)
                    break
                unassigned.add(w)
                deferred.append((lay, w))
            if pick is not None:
                for item in deferred:
                    heapq.heappush(heap, item)
                region.append(pick[1])
                push_frontier(pick[1], pick[0])
                continue
            if not deferred:
                where = "the node set" if parent_id is None else f"cluster {parent_id}"
                raise HierarchyBuildError(
                    f"level {level}, part {i} of {where}: stranded at "
                    f"{len(region)} of {target} nodes (remainder disconnected)"
                )
            # every candidate is a cut vertex of the remainder; deferred is
            # in (layer, id) order, so take the first whose severed
            # fragments (every component except the largest) fit here
            chosen = None
            for lay, w in deferred:
                comps = _components(unassigned - {w}, adj)
                comps.sort(key=lambda c: (len(c), c[0]))
                eaten = sum(len(c) for c in comps[:-1])
                if len(region) + 1 + eaten <= target:
                    chosen = (lay, w, comps[:-1])
                    break
            if chosen is None:
                where = "the node set" if parent_id is None else f"cluster {parent_id}"
                raise HierarchyBuildError(
                    f"level {level}, part {i} of {where}: cannot keep the "
                    f"remainder connected at {len(region)} of {target} nodes"
                )
            lay, w, fragments = chosen
            unassigned.remove(w)
            region.append(w)
            push_frontier(w, lay)
            for comp in fragments:
                for x in comp:
                    unassigned.remove(x)
                    region.append(x)
                    push_frontier(x, lay)
            for item in deferred:
                if item[1] in unassigned:
                    heapq.heappush(heap, item)
        regions.append(sorted(region))
    return regions


def build_balanced(graph: Graph, levels: int, branching: int = 2) -> Hierarchy:
    """Recursive balanced clustering: split every cluster into `branching` parts.

    levels = 1 returns the flat hierarchy.  Requires
    branching ** (levels - 1) <= n_nodes so no cluster runs empty.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1 (got {levels})")
    if branching < 2:
        raise ValueError(f"branching must be >= 2 (got {branching})")
    if branching ** (levels - 1) > graph.n_nodes:
        raise ValueError(
            f"branching {branching} with {levels} levels needs at least "
            f"{branching ** (levels - 1)} nodes (graph has {graph.n_nodes})"
        )
    if levels == 1:
        return flat_hierarchy(graph)
    paths: list[list[int]] = [[] for _ in range(graph.n_nodes)]
    current: list[tuple[int | None, list[int]]] = [(None, list(range(graph.n_nodes)))]
    for level in range(1, levels):
        nxt: list[tuple[int | None, list[int]]] = []
        for parent_id, members in current:
            for region in _grow_regions(members, graph.adj, branching, level, parent_id):
                cid = len(nxt)
                for u in region:
                    paths[u].append(cid)
                nxt.append((cid, region))
        current = nxt
    return Hierarchy(
        levels,
        tuple(tuple(p) for p in paths),
        method=f"balanced-b{branching}",
    )


def nest_grid_blocks(
    graph: Graph,
    rows: int,
    cols: int,
    block_dims: list[tuple[int, int]],
) -> Hierarchy:
    """Nested rectangular blocks on a row-major grid or torus.

    Each (block_rows, block_cols) entry adds one level; successive block
    dims must divide the previous ones so blocks nest cleanly.
    """
    if rows * cols != graph.n_nodes:
        raise ValueError(
            f"{rows}x{cols} does not match the graph's {graph.n_nodes} nodes"
        )
    if not block_dims:
        raise ValueError("need at least one block size")
    prev_r, prev_c = rows, cols
    for br, bc in block_dims:
        if br < 1 or bc < 1:
            raise ValueError(f"block dims must be >= 1 (got {br}x{bc})")
        if prev_r % br or prev_c % bc:
            raise ValueError(
                f"block {br}x{bc} does not divide the enclosing {prev_r}x{prev_c}"
            )
        prev_r, prev_c = br, bc
    paths = []
    for u in range(graph.n_nodes):
        r, c = divmod(u, cols)
        path = []
        for br, bc in block_dims:
            path.append((r // br) * (cols // bc) + (c // bc))
        paths.append(tuple(path))
    tag = "+".join(f"{br}x{bc}" for br, bc in block_dims)
    return Hierarchy(len(block_dims) + 1, tuple(paths), method=f"grid-blocks-{tag}")


def build_grid_blocks(
    graph: Graph, rows: int, cols: int, block_rows: int, block_cols: int
) -> Hierarchy:
    """Two-level rectangular-block clustering of a row-major grid or torus."""
    return nest_grid_blocks(graph, rows, cols, [(block_rows, block_cols)])


def _induced_connected(members: list[int], member_set: set[int], adj) -> bool:
    seen = {members[0]}
    queue = deque([members[0]])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in member_set and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(members)


def validate(hierarchy: Hierarchy, graph: Graph) -> list[str]:
    """Check the three hierarchy invariants; returns violations, empty if valid.

    With the label-path encoding, a malformed partition can only appear
    as label paths of the wrong length, which is reported as a nesting
    violation and short-circuits the deeper checks.
    """
    violations: list[str] = []
    if hierarchy.n_nodes != graph.n_nodes:
        violations.append(
            f"node count mismatch: hierarchy has {hierarchy.n_nodes}, "
            f"graph has {graph.n_nodes}"
        )
        return violations
    want = hierarchy.levels - 1
    bad_len = False
    for u, p in enumerate(hierarchy.label_paths):
        if len(p) != want:
            violations.append(
                f"nesting: node {u} has a label path of length {len(p)}, expected {want}"
            )
            bad_len = True
    if bad_len:
        return violations
    for level in range(1, hierarchy.levels):
        groups = hierarchy.clusters_at_level(level)
        for cid in sorted(groups):
            members = groups[cid]
            if level > 1:
                prefixes = {hierarchy.label_paths[u][: level - 1] for u in members}
                if len(prefixes) > 1:
                    violations.append(
                        f"nesting: level {level} cluster {cid} spans "
                        f"{len(prefixes)} parent clusters"
                    )
            if not _induced_connected(members, set(members), graph.adj):
                violations.append(
                    f"connectivity: level {level} cluster {cid} induces a "
                    "disconnected subgraph"
                )
    return violations


def save(hierarchy: Hierarchy, path: str) -> None:
    """Write one ``node_id path...`` line per node, sorted by node id."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, p in enumerate(hierarchy.label_paths):
            fh.write(" ".join([str(u), *map(str, p)]) + "\n")


def load(path: str, method: str = "file") -> Hierarchy:
    """Parse a hierarchy file; errors name the offending line.

    The level count is inferred from the longest path so malformed files
    still load and can be fed to validate().
    """
    rows: dict[int, tuple[int, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            try:
                values = [int(t) for t in tokens]
            except ValueError:
                raise HierarchyFormatError(
                    f"non-integer field in {line!r}", line_no
                ) from None
            u, path_ids = values[0], values[1:]
            if u < 0:
                raise HierarchyFormatError(f"negative node id {u}", line_no)
            if any(c < 0 for c in path_ids):
                raise HierarchyFormatError(f"negative cluster id for node {u}", line_no)
            if u in rows:
                raise HierarchyFormatError(f"duplicate entry for node {u}", line_no)
            rows[u] = tuple(path_ids)
    if not rows:
        raise HierarchyFormatError("file lists no nodes")
    n = max(rows) + 1
    missing = [u for u in range(n) if u not in rows]
    if missing:
        raise HierarchyFormatError(f"missing entries for nodes {missing[:5]}")
    paths = tuple(rows[u] for u in range(n))
    levels = 1 + max(len(p) for p in paths)
    return Hierarchy(levels, paths, method=method)
