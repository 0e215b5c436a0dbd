"""Undirected unweighted graphs: generators, text files, BFS distances.

Node ids are dense integers 0..n-1.  Grid and torus generators number
nodes row-major (id = row * cols + col).  Every Graph is connected; the
constructor rejects anything else, so downstream stretch measurements
never see unreachable pairs.

File format, stable and diffable:

    n 8
    0 1
    0 7
    ...

First significant line is ``n <count>``, then one edge per line with
u < v, sorted lexicographically.  Lines starting with ``#`` and blank
lines are ignored.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """A graph file failed to parse; the message carries the line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DisconnectedGraphError(ValueError):
    """The node set does not form a single connected component."""


class Graph:
    """Immutable connected undirected graph."""

    __slots__ = ("n_nodes", "edges", "adj")

    def __init__(self, n_nodes: int, edges: Iterable[tuple[int, int]]):
        if n_nodes < 1:
            raise ValueError(f"n_nodes must be >= 1 (got {n_nodes})")
        seen: set[tuple[int, int]] = set()
        canon: list[tuple[int, int]] = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range for {n_nodes} nodes")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.n_nodes = n_nodes
        self.edges: tuple[tuple[int, int], ...] = tuple(canon)
        adj: list[list[int]] = [[] for _ in range(n_nodes)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(ns)) for ns in adj)
        if not _connected(n_nodes, self.adj):
            raise DisconnectedGraphError(
                f"graph with {n_nodes} nodes and {len(canon)} edges is not connected"
            )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n_nodes == other.n_nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self.n_nodes}, num_edges={self.num_edges})"


def _connected(n: int, adj: Sequence[Sequence[int]]) -> bool:
    seen = bytearray(n)
    seen[0] = 1
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count == n


def ring_graph(n: int) -> Graph:
    """Cycle on n >= 3 nodes; every node has degree 2."""
    if n < 3:
        raise ValueError(f"a ring needs n >= 3 (got {n})")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def grid_graph(rows: int, cols: int) -> Graph:
    """rows x cols lattice without wraparound, nodes numbered row-major."""
    if rows < 2 or cols < 2:
        raise ValueError(f"a grid needs rows >= 2 and cols >= 2 (got {rows}x{cols})")
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return Graph(rows * cols, edges)


def torus_graph(rows: int, cols: int) -> Graph:
    """rows x cols lattice with wraparound; degree 4 everywhere once dims >= 3."""
    if rows < 2 or cols < 2:
        raise ValueError(f"a torus needs rows >= 2 and cols >= 2 (got {rows}x{cols})")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            right = r * cols + (c + 1) % cols
            down = ((r + 1) % rows) * cols + c
            for v in (right, down):
                if u != v:
                    edges.add((u, v) if u < v else (v, u))
    return Graph(rows * cols, sorted(edges))


def random_graph(n: int, edge_prob: float, seed: int, max_tries: int = 100) -> Graph:
    """Connected G(n, p) sample.

    Each attempt draws every unordered pair once from the seeded stream;
    disconnected draws are discarded and the stream advances, so the
    result is a deterministic function of (n, edge_prob, seed).
    """
    if n < 2:
        raise ValueError(f"a random graph needs n >= 2 (got {n})")
    if not 0 < edge_prob <= 1:
        raise ValueError(f"edge_prob must lie in (0, 1] (got {edge_prob})")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < edge_prob
        ]
        try:
            return Graph(n, edges)
        except DisconnectedGraphError:
            continue
    raise DisconnectedGraphError(
        f"no connected G({n}, {edge_prob}) sample in {max_tries} attempts (seed {seed})"
    )


def generate(
    topology: str,
    *,
    n: int | None = None,
    rows: int | None = None,
    cols: int | None = None,
    edge_prob: float | None = None,
    seed: int = 0,
) -> Graph:
    """Dispatch to a generator by topology name (ring, grid, torus, random)."""
    if topology == "ring":
        if n is None:
            raise ValueError("ring topology needs n")
        return ring_graph(n)
    if topology == "grid":
        if rows is None or cols is None:
            raise ValueError("grid topology needs rows and cols")
        return grid_graph(rows, cols)
    if topology == "torus":
        if rows is None or cols is None:
            raise ValueError("torus topology needs rows and cols")
        return torus_graph(rows, cols)
    if topology == "random":
        if n is None or edge_prob is None:
            raise ValueError("random topology needs n and edge_prob")
        return random_graph(n, edge_prob, seed)
    raise ValueError(f"unknown topology {topology!r}")


def save(graph: Graph, path: str) -> None:
    """Write the canonical text form (header line, then sorted edges)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"n {graph.n_nodes}\n")
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def load(path: str) -> Graph:
    """Parse a graph file; errors name the offending line."""
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if n is None:
                if len(tokens) != 2 or tokens[0] != "n":
                    raise GraphFormatError("expected header 'n <count>'", line_no)
                try:
                    n = int(tokens[1])
                except ValueError:
                    raise GraphFormatError(
                        f"node count {tokens[1]!r} is not an integer", line_no
                    ) from None
                if n < 1:
                    raise GraphFormatError(f"node count must be >= 1 (got {n})", line_no)
                continue
            if len(tokens) != 2:
                raise GraphFormatError(
                    f"expected 'u v', got {len(tokens)} fields", line_no
                )
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphFormatError(f"non-integer endpoint in {line!r}", line_no) from None
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}", line_no)
            if not u < v:
                raise GraphFormatError(
                    f"edge endpoints must satisfy u < v (got {u} {v})", line_no
                )
            if not (0 <= u and v < n):
                raise GraphFormatError(
                    f"edge ({u}, {v}) out of range for {n} nodes", line_no
                )
            if (u, v) in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})", line_no)
            seen.add((u, v))
            edges.append((u, v))
    if n is None:
        raise GraphFormatError("file has no 'n <count>' header")
    return Graph(n, edges)


def bfs_lengths(graph: Graph, source: int) -> list[int]:
    """Hop distances from source to every node."""
    if not 0 <= source < graph.n_nodes:
        raise ValueError(f"source {source} out of range")
    dist = [-1] * graph.n_nodes
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in graph.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_pairs_shortest_lengths(graph: Graph) -> list[list[int]]:
    """Full hop-distance matrix, one BFS per source."""
    return [bfs_lengths(graph, s) for s in range(graph.n_nodes)]


def mean_pairwise_distance(dist: Sequence[Sequence[int]]) -> float:
    """Mean over ordered distinct pairs of a distance matrix."""
    n = len(dist)
    if n < 2:
        raise ValueError("need at least two nodes")
    total = sum(sum(row) for row in dist)
    return total / (n * (n - 1))
