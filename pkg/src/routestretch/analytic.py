"""Closed-form stretch relations for hierarchical routing.

Three quantities describe an m-level hierarchical routing scheme on an
N-node network: the hierarchy height m (level count; height and level
count are the same thing here and the two words are used
interchangeably), the path-length stretch s_p (mean hierarchical route
length over mean shortest-path length), and the table-length stretch
s_t (mean routing-table length over N, the flat-table baseline).

The relations implemented:

    s_p = 1 + alpha * (m - 1)                (path stretch vs height)
    s_t = m * N ** (1/m - 1)                 (Kleinrock-Kamoun table stretch)
    s_p = 1 - alpha * ln(s_t)                (information-per-entry form)

plus the composition of the first two, the optimal table lengths
m * N**(1/m) (fixed level count) and e * ln(N) (free level count), and
small tree-distance helpers used to reason about cluster trees.

All logarithms are natural; a different base only rescales alpha.
Every function is pure and raises ValueError on out-of-domain input.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

# Default slope of the path-stretch line, used by the command-line tools
# when no --alpha is given.  Empirical fits on real topologies are not
# expected to reproduce it.
DEFAULT_ALPHA = 0.987


@dataclass(frozen=True)
class AnalyticParams:
    """Shared parameter bundle: network size, stretch slope, level count."""

    n_nodes: int
    alpha: float = DEFAULT_ALPHA
    levels: float = 1.0

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ValueError(f"n_nodes must be a positive integer (got {self.n_nodes})")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0 (got {self.alpha})")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1 (got {self.levels})")


@dataclass(frozen=True)
class StretchPair:
    """One (path stretch, table stretch) operating point."""

    s_p: float
    s_t: float

    def __post_init__(self) -> None:
        if self.s_p < 1:
            raise ValueError(f"s_p must be >= 1 (got {self.s_p})")
        if not 0 < self.s_t <= 1:
            raise ValueError(f"s_t must lie in (0, 1] (got {self.s_t})")


@dataclass(frozen=True)
class TreeDistanceModel:
    """Distance bookkeeping for a cluster tree.

    intra_cluster_dist is the hop distance between adjacent tree levels,
    height the number of levels, avg_path_len the network's mean
    shortest-path length, and beta the path-stretch slope normalized by
    that mean (beta = alpha / avg_path_len).
    """

    intra_cluster_dist: float
    height: int
    avg_path_len: float
    beta: float

    def __post_init__(self) -> None:
        if self.intra_cluster_dist < 0:
            raise ValueError("intra_cluster_dist must be >= 0")
        if self.height < 1:
            raise ValueError("height must be >= 1")
        if not self.avg_path_len > 0:
            raise ValueError("avg_path_len must be > 0")
        if not self.beta > 0:
            raise ValueError("beta must be > 0")

    @classmethod
    def from_slope(
        cls, intra_cluster_dist: float, height: int, avg_path_len: float, alpha: float
    ) -> "TreeDistanceModel":
        if not alpha > 0:
            raise ValueError(f"alpha must be > 0 (got {alpha})")
        if not avg_path_len > 0:
            raise ValueError(f"avg_path_len must be > 0 (got {avg_path_len})")
        return cls(intra_cluster_dist, height, avg_path_len, alpha / avg_path_len)

    def diameter(self) -> float:
        return tree_diameter(self.height, self.intra_cluster_dist)

    def expected_path_stretch(self) -> float:
        return 1.0 + self.beta * (self.height - 1)


def path_stretch_from_height(h: float, alpha: float) -> float:
    """s_p = 1 + alpha*(h - 1); the height-1 boundary gives exactly 1."""
    if h < 1:
        raise ValueError(f"h must be >= 1 (got {h})")
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0 (got {alpha})")
    return 1.0 + alpha * (h - 1.0)


def height_from_path_stretch(s_p: float, alpha: float) -> float:
    """Inverse of path_stretch_from_height: m = 1 + (s_p - 1)/alpha."""
    if s_p < 1:
        raise ValueError(f"s_p must be >= 1 (got {s_p})")
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0 (got {alpha})")
    return 1.0 + (s_p - 1.0) / alpha


def table_stretch_kk(n_nodes: int, m: float) -> float:
    """Kleinrock-Kamoun table stretch s_t = m * N**(1/m - 1) for an m-level scheme."""
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be a positive integer (got {n_nodes})")
    if m < 1:
        raise ValueError(f"m must be >= 1 (got {m})")
    return m * n_nodes ** (1.0 / m - 1.0)


def optimal_table_length_fixed(n_nodes: int, m: float) -> float:
    """Optimal table length m * N**(1/m) for an m-level scheme.

    The hierarchical reading needs m >= 1, but the formula is evaluated
    for any m > 0: the unconstrained optimum over real m (see
    optimal_table_length_variable) sits below 1 for N < e.
    """
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be a positive integer (got {n_nodes})")
    if not m > 0:
        raise ValueError(f"m must be > 0 (got {m})")
    return m * n_nodes ** (1.0 / m)


def optimal_table_length_variable(n_nodes: int) -> float:
    """Minimum of m * N**(1/m) over real m: e * ln(N), reached at m = ln(N)."""
    if n_nodes < 2:
        raise ValueError(f"n_nodes must be >= 2 (got {n_nodes})")
    return math.e * math.log(n_nodes)


def table_stretch_from_path_stretch(s_p: float, params: AnalyticParams) -> float:
    """Table stretch at a given path stretch: Eq-2 height fed into the KK formula."""
    return table_stretch_kk(params.n_nodes, height_from_path_stretch(s_p, params.alpha))


def path_stretch_from_table_stretch_ipea(s_t: float, alpha: float) -> float:
    """Information-per-entry form s_p = 1 - alpha * ln(s_t).

    Natural logarithm; a different base only rescales alpha.  s_t = 1
    (flat tables) gives exactly 1.
    """
    if not 0 < s_t <= 1:
        raise ValueError(f"s_t must lie in (0, 1] (got {s_t})")
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0 (got {alpha})")
    return 1.0 - alpha * math.log(s_t)


def cluster_path_distance(k: int, d_i: float) -> float:
    """Hop distance (1 + d_i)*k - 1 along a k-cluster chain with inter-level gap d_i."""
    if k < 1:
        raise ValueError(f"k must be >= 1 (got {k})")
    if d_i < 0:
        raise ValueError(f"d_i must be >= 0 (got {d_i})")
    return (1.0 + d_i) * k - 1.0


def tree_pair_distance(h1: float, h2: float, d_i: float) -> float:
    """Distance h1*(d_i+1) + h2*(d_i+1) - 2 between nodes h1 and h2 levels below their meet."""
    if h1 < 0 or h2 < 0:
        raise ValueError(f"subtree heights must be >= 0 (got {h1}, {h2})")
    if h1 + h2 < 1:
        raise ValueError("at least one endpoint must sit strictly below the meeting level")
    if d_i < 0:
        raise ValueError(f"d_i must be >= 0 (got {d_i})")
    return h1 * (d_i + 1.0) + h2 * (d_i + 1.0) - 2.0


def tree_diameter(h: int, d_i: float) -> float:
    """Worst-case distance 2*h*(d_i+1) + d_i across a height-h cluster tree."""
    if h < 1:
        raise ValueError(f"h must be >= 1 (got {h})")
    if d_i < 0:
        raise ValueError(f"d_i must be >= 0 (got {d_i})")
    return 2.0 * h * (d_i + 1.0) + d_i


@dataclass(frozen=True)
class CurveSeries:
    """One tradeoff curve: (s_p, m, s_t) triples at fixed (n_nodes, alpha).

    Points are strictly increasing in s_p.  Every stored triple satisfies
    m = height_from_path_stretch(s_p, alpha) and
    s_t = table_stretch_kk(n_nodes, m) exactly as computed.
    """

    n_nodes: int
    alpha: float
    points: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a curve needs at least one point")
        for a, b in zip(self.points, self.points[1:]):
            if not b[0] > a[0]:
                raise ValueError("curve points must be strictly increasing in s_p")

    def grid_min(self) -> tuple[float, float, float]:
        """The sweep point with the smallest table stretch (first on ties)."""
        return min(self.points, key=lambda p: p[2])

    def table_stretch_at(self, s_p: float) -> float:
        """Linear interpolation of s_t at s_p; ValueError outside the sweep range."""
        lo, hi = self.points[0][0], self.points[-1][0]
        if s_p < lo or s_p > hi:
            raise ValueError(f"s_p={s_p} outside the sweep range [{lo}, {hi}]")
        xs = [p[0] for p in self.points]
        i = bisect.bisect_right(xs, s_p)
        if i == len(xs):
            return self.points[-1][2]
        if i == 0:
            return self.points[0][2]
        x0, _, y0 = self.points[i - 1]
        x1, _, y1 = self.points[i]
        if x1 == x0:
            return y0
        t = (s_p - x0) / (x1 - x0)
        return y0 + t * (y1 - y0)


def sweep_curve(
    params: AnalyticParams,
    s_p_min: float = 1.0,
    s_p_max: float = 5.0,
    step: float = 0.01,
) -> CurveSeries:
    """Sample the tradeoff curve on a regular s_p grid, inclusive of the start.

    The end point is included when it lands on the grid (the defaults
    produce 401 points over [1, 5]).
    """
    if s_p_min < 1:
        raise ValueError(f"s_p_min must be >= 1 (got {s_p_min})")
    if not s_p_max > s_p_min:
        raise ValueError("s_p_max must exceed s_p_min")
    if not step > 0:
        raise ValueError(f"step must be > 0 (got {step})")
    count = int(math.floor((s_p_max - s_p_min) / step + 1e-9)) + 1
    pts = []
    for i in range(count):
        s_p = s_p_min + i * step
        m = height_from_path_stretch(s_p, params.alpha)
        pts.append((s_p, m, table_stretch_kk(params.n_nodes, m)))
    return CurveSeries(params.n_nodes, params.alpha, tuple(pts))


def golden_section_min(
    fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9
) -> tuple[float, float]:
    """Minimize a unimodal function on [lo, hi]; returns (argmin, min value)."""
    if not hi > lo:
        raise ValueError("need hi > lo")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - (b - a) * invphi
    d = a + (b - a) * invphi
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * invphi
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * invphi
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


class MinTableStretch(NamedTuple):
    s_p_at_min: float
    s_t_min: float


def find_min_table_stretch(params: AnalyticParams) -> MinTableStretch:
    """Continuous minimum of the tradeoff curve over s_p >= 1.

    Golden-section search on m in [1, max(2, 4*ln N)] with absolute
    tolerance 1e-9, cross-checked against the closed form m* = ln N
    (clamped to the m >= 1 boundary, which only binds for N = 2).
    """
    n = params.n_nodes
    if n < 2:
        raise ValueError(f"n_nodes must be >= 2 (got {n})")
    hi = max(2.0, 4.0 * math.log(n))
    m_num, _ = golden_section_min(lambda m: table_stretch_kk(n, m), 1.0, hi, tol=1e-9)
    m_closed = max(1.0, math.log(n))
    if abs(m_num - m_closed) > 1e-6:
        raise ArithmeticError(
            f"search and closed form disagree: m={m_num} vs ln N={m_closed}"
        )
    return MinTableStretch(
        s_p_at_min=path_stretch_from_height(m_num, params.alpha),
        s_t_min=table_stretch_kk(n, m_num),
    )
