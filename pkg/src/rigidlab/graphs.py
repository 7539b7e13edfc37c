"""Graphs and frameworks: the combinatorial core plus sparsity recognition.

A graph is a plain vertex count with a canonical undirected edge list; a
framework decorates it with an ambient dimension and positive edge lengths.
Laman recognition runs the (2,3)-pebble game, with an exponential subset
scan kept around as an oracle for small graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class GraphError(ValueError):
    """Malformed graph input: self-loop, duplicate edge, or bad index."""


def canonical_edge(i: int, j: int) -> tuple[int, int]:
    """Order an edge pair as (min, max), rejecting self-loops."""
    if i == j:
        raise GraphError(f"self-loop at vertex {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Edges are stored canonically with i < j and sorted; inserting the same
    edge twice is an error rather than a silent dedup, so frameworks can
    never alias two lengths onto one edge.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        canon = []
        seen = set()
        for pair in self.edges:
            i, j = pair
            e = canonical_edge(int(i), int(j))
            if e[0] < 0 or e[1] >= self.n:
                raise GraphError(f"edge {pair} out of range for n={self.n}")
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self, v: int) -> list[int]:
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)

    def has_edge(self, i: int, j: int) -> bool:
        return canonical_edge(i, j) in set(self.edges)


@dataclass(frozen=True)
class Framework:
    """A graph with an ambient dimension and positive edge lengths."""

    graph: Graph
    dim: int
    lengths: dict[tuple[int, int], float]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        canon = {}
        for (i, j), val in self.lengths.items():
            e = canonical_edge(i, j)
            if e in canon:
                raise GraphError(f"duplicate length for edge {e}")
            if not val > 0:
                raise ValueError(f"edge {e} has nonpositive length {val}")
            canon[e] = float(val)
        missing = [e for e in self.graph.edges if e not in canon]
        if missing:
            raise ValueError(f"edges without a length: {missing}")
        extra = [e for e in canon if e not in set(self.graph.edges)]
        if extra:
            raise GraphError(f"lengths for absent edges: {extra}")
        object.__setattr__(self, "lengths", canon)

    def length(self, i: int, j: int) -> float:
        return self.lengths[canonical_edge(i, j)]

    def squared(self, i: int, j: int) -> float:
        l = self.length(i, j)
        return l * l


def _gather_pebble(root: int, avoid: int, pebbles: list[int], out: list[list[int]]) -> bool:
    """Pull one free pebble to `root` along directed edges, reversing the path.

    Returns False when no free pebble is reachable without touching `avoid`.
    """
    seen = [False] * len(pebbles)
    seen[root] = True
    seen[avoid] = True
    parent: dict[int, int] = {}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in out[u]:
            if seen[w]:
                continue
            seen[w] = True
            parent[w] = u
            if pebbles[w] > 0:
                pebbles[w] -= 1
                pebbles[root] += 1
                x = w
                while x != root:
                    p = parent[x]
                    out[p].remove(x)
                    out[x].append(p)
                    x = p
                return True
            stack.append(w)
    return False


def pebble_game_accepts(n: int, edges) -> bool:
    """Insert every edge into the (2,3)-pebble game; True iff all independent.

    An edge is accepted when four pebbles sit on its endpoints (one is then
    consumed and the edge directed away from it), which certifies that every
    vertex subset spans at most 2k-3 of the accepted edges.
    """
    pebbles = [2] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        while pebbles[i] + pebbles[j] < 4:
            if not (_gather_pebble(i, j, pebbles, out) or _gather_pebble(j, i, pebbles, out)):
                return False
        if pebbles[i] > 0:
            pebbles[i] -= 1
            out[i].append(j)
        else:
            pebbles[j] -= 1
            out[j].append(i)
    return True


def laman_check(g: Graph) -> bool:
    """True iff m = 2n-3 and every k-subset spans at most 2k-3 edges."""
    if g.n < 2 or g.m != 2 * g.n - 3:
        return False
    return pebble_game_accepts(g.n, g.edges)


def laman_check_bruteforce(g: Graph) -> bool:
    """Laman test by explicit enumeration of all vertex subsets (n <= 10)."""
    if g.n > 10:
        raise ValueError("subset enumeration is capped at n <= 10")
    if g.n < 2 or g.m != 2 * g.n - 3:
        return False
    edge_masks = [(1 << i) | (1 << j) for i, j in g.edges]
    for subset in range(1, 1 << g.n):
        k = subset.bit_count()
        if k < 2:
            continue
        spanned = sum(1 for em in edge_masks if em & subset == em)
        if spanned > 2 * k - 3:
            return False
    return True


def minimal_count_check(g: Graph, d: int) -> bool:
    """True iff the graph has exactly d*n - C(d+1,2) edges."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if g.n < d + 1:
        raise ValueError(f"need at least d+1={d + 1} vertices, got {g.n}")
    return g.m == d * g.n - math.comb(d + 1, 2)
