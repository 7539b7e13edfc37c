"""Henneberg sequences: extraction, classification, and forward replay.

A Laman graph is rebuilt from a triangle by steps that add a degree-2
vertex (type I) or add a degree-3 vertex and delete an edge among its
neighbors (type II).  Extraction searches the reverse steps with
backtracking: nothing here assumes that greedy degree-2 removal never
dead-ends.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .graphs import Graph, canonical_edge, pebble_game_accepts


class NotLamanError(ValueError):
    """Raised when a Henneberg sequence is requested for a non-Laman graph."""


class SequenceError(ValueError):
    """Structurally invalid Henneberg sequence."""


@dataclass(frozen=True)
class TypeI:
    new_vertex: int
    attach: tuple[int, int]

    def __post_init__(self) -> None:
        a, b = self.attach
        if len({a, b, self.new_vertex}) != 3:
            raise SequenceError(f"type I step must attach to two distinct old vertices: {self}")


@dataclass(frozen=True)
class TypeII:
    new_vertex: int
    attach: tuple[int, int, int]
    removed_edge: tuple[int, int]

    def __post_init__(self) -> None:
        if len({*self.attach, self.new_vertex}) != 4:
            raise SequenceError(f"type II step must attach to three distinct old vertices: {self}")
        if len(set(self.removed_edge)) != 2 or set(self.removed_edge) - set(self.attach):
            raise SequenceError(f"removed edge must join two attachment vertices: {self}")


HennebergStep = TypeI | TypeII


@dataclass(frozen=True)
class HennebergSequence:
    base: tuple[int, int, int]
    steps: tuple[HennebergStep, ...]

    def __post_init__(self) -> None:
        if len(set(self.base)) != 3:
            raise SequenceError(f"base must be three distinct vertices: {self.base}")

    def is_type_one_only(self) -> bool:
        return all(isinstance(s, TypeI) for s in self.steps)


class Classification(enum.Enum):
    HENNEBERG_I = "henneberg-one"
    HENNEBERG_II = "henneberg-two"
    NOT_LAMAN = "not-laman"


def _edges_laman(vertices: frozenset[int], edges: frozenset[tuple[int, int]]) -> bool:
    """Laman test on a labeled vertex subset via compaction + pebble game."""
    n = len(vertices)
    if n < 2 or len(edges) != 2 * n - 3:
        return False
    index = {v: i for i, v in enumerate(sorted(vertices))}
    return pebble_game_accepts(n, [(index[i], index[j]) for i, j in edges])


def _neighbors(edges: frozenset[tuple[int, int]], v: int) -> list[int]:
    out = []
    for i, j in edges:
        if i == v:
            out.append(j)
        elif j == v:
            out.append(i)
    return sorted(out)


def _reverse_moves(vertices, edges, only_type_one):
    """Candidate reverse steps, degree-2 removals first, in label order."""
    degree: dict[int, int] = {v: 0 for v in vertices}
    for i, j in edges:
        degree[i] += 1
        degree[j] += 1
    moves = []
    for v in sorted(vertices):
        if degree[v] == 2:
            a, b = _neighbors(edges, v)
            moves.append((v, (a, b), None))
    if only_type_one:
        return moves
    for v in sorted(vertices):
        if degree[v] == 3:
            nbrs = _neighbors(edges, v)
            for pair in combinations(nbrs, 2):
                e = canonical_edge(*pair)
                if e not in edges:
                    moves.append((v, tuple(nbrs), e))
    return moves


def _apply_reverse(vertices, edges, move):
    v, attach, added = move
    new_vertices = vertices - {v}
    new_edges = frozenset(e for e in edges if v not in e)
    if added is not None:
        new_edges = new_edges | {added}
    return new_vertices, new_edges


def _search_reduction(vertices, edges, only_type_one, dead: set) -> list | None:
    """Backtracking reduction to a triangle; returns reverse moves or None."""
    if len(vertices) == 3:
        return []
    key = edges
    if key in dead:
        return None
    for move in _reverse_moves(vertices, edges, only_type_one):
        sub_vertices, sub_edges = _apply_reverse(vertices, edges, move)
        if not _edges_laman(sub_vertices, sub_edges):
            continue
        rest = _search_reduction(sub_vertices, sub_edges, only_type_one, dead)
        if rest is not None:
            return [move] + rest
    dead.add(key)
    return None


def extract_sequence(g: Graph, only_type_one: bool = False) -> HennebergSequence:
    """Find a Henneberg sequence whose replay reproduces g (labels preserved).

    Reverse steps are searched with backtracking, preferring degree-2 vertex
    removals.  With only_type_one=True the search is restricted to degree-2
    removals and fails on Henneberg II graphs.
    """
    from .graphs import laman_check

    if not laman_check(g):
        raise NotLamanError(f"graph with n={g.n}, m={g.m} is not Laman")
    vertices = frozenset(range(g.n))
    edges = frozenset(g.edges)
    moves = _search_reduction(vertices, edges, only_type_one, dead=set())
    if moves is None:
        raise SequenceError("not reducible by degree-2 removals alone; graph is Henneberg II")
    remaining = vertices
    for move in moves:
        remaining = remaining - {move[0]}
    base = tuple(sorted(remaining))
    steps = []
    for v, attach, added in reversed(moves):
        if added is None:
            steps.append(TypeI(new_vertex=v, attach=attach))
        else:
            steps.append(TypeII(new_vertex=v, attach=attach, removed_edge=added))
    return HennebergSequence(base=base, steps=tuple(steps))


def classify(g: Graph) -> Classification:
    """Henneberg I iff reducible to a triangle by degree-2 removals alone."""
    from .graphs import laman_check

    if not laman_check(g):
        return Classification.NOT_LAMAN
    if g.n == 3:
        return Classification.HENNEBERG_I
    moves = _search_reduction(frozenset(range(g.n)), frozenset(g.edges), True, dead=set())
    return Classification.HENNEBERG_I if moves is not None else Classification.HENNEBERG_II


def replay(seq: HennebergSequence) -> Graph:
    """Rebuild the graph from the base triangle, validating every stage."""
    vertices = set(seq.base)
    edges: set[tuple[int, int]] = set()
    for pair in combinations(sorted(seq.base), 2):
        edges.add(canonical_edge(*pair))
    for step in seq.steps:
        if step.new_vertex in vertices:
            raise SequenceError(f"vertex {step.new_vertex} already present")
        for a in step.attach:
            if a not in vertices:
                raise SequenceError(f"step references unknown vertex {a}")
        if isinstance(step, TypeII):
            removed = canonical_edge(*step.removed_edge)
            if removed not in edges:
                raise SequenceError(f"removed edge {removed} is absent")
            edges.discard(removed)
        for a in step.attach:
            e = canonical_edge(step.new_vertex, a)
            if e in edges:
                raise SequenceError(f"edge {e} already present")
            edges.add(e)
        vertices.add(step.new_vertex)
        if not _edges_laman(frozenset(vertices), frozenset(edges)):
            raise SequenceError(f"intermediate graph after adding {step.new_vertex} is not Laman")
    # Labels of a fully extracted sequence are already 0..n-1; otherwise
    # (prefixes, hand-built sequences) compact them order-preservingly.
    index = {v: i for i, v in enumerate(sorted(vertices))}
    return Graph(n=len(vertices), edges=tuple(sorted((index[i], index[j]) for i, j in edges)))
