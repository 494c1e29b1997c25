"""Simple undirected graphs with hierarchical vertex names and vertex splitting.

A vertex split replaces a vertex v by two non-adjacent copies v.0 and v.1
whose neighborhoods partition-with-overlap N(v): every old neighbor keeps at
least one copy, and copies may share neighbors.  Splitting is the one
irreversible-looking move that *is* reversible: contracting the two copies
back onto v restores the original graph, which is what makes split sequences
auditable.

Names are hierarchical: a root token plus a 0/1 branch per split, rendered
with dots ("c", "c.0", "c.0.1").  The total order on names is the order on
(root, branch sequence), with all-digit roots compared numerically so that
"v2" style and plain-number ids both sort the way a human expects.

Graphs are immutable.  Adjacency is kept as one Python int bitmask per
vertex over the lexicographic vertex order; Python ints are arbitrary
precision, so the same representation covers every size this library
handles.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator


class GraphError(Exception):
    """Base class for graph construction and surgery errors."""


class UnknownVertex(GraphError):
    """An operation referenced a vertex that is not in the graph."""


class DuplicateVertex(GraphError):
    """A vertex name was declared, or would be created, twice."""


class NeighborhoodNotCovered(GraphError):
    """A split left some old neighbor adjacent to neither copy."""


class ForeignNeighbor(GraphError):
    """A split assigned a copy a neighbor the original vertex never had."""


# ---------------------------------------------------------------------------
# vertex identity
# ---------------------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class VertexId:
    """A vertex name: root token plus the 0/1 branch taken at each split."""

    root: str
    branches: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.root or "." in self.root or any(c.isspace() for c in self.root):
            raise GraphError(f"bad vertex root token: {self.root!r}")
        if not all(b in (0, 1) for b in self.branches):
            raise GraphError(f"branch components must be 0 or 1: {self.branches!r}")

    @classmethod
    def parse(cls, token: str | VertexId) -> VertexId:
        """Parse "c.0.1" into VertexId("c", (0, 1)); passes VertexIds through."""
        if isinstance(token, VertexId):
            return token
        head, *rest = token.split(".")
        if not all(part in ("0", "1") for part in rest):
            raise GraphError(f"branch components after dots must be 0 or 1: {token!r}")
        return cls(head, tuple(int(part) for part in rest))

    def child(self, branch: int) -> VertexId:
        return VertexId(self.root, self.branches + (branch,))

    def is_copy_of(self, ancestor: VertexId) -> bool:
        """True when this name is `ancestor` or descends from it by splits."""
        return (
            self.root == ancestor.root
            and self.branches[: len(ancestor.branches)] == ancestor.branches
        )

    @functools.cached_property
    def sort_key(self) -> tuple:
        # All-digit roots sort numerically among themselves and before other
        # roots; the root string itself breaks ties like "01" vs "1".
        if self.root.isdigit():
            return (0, int(self.root), self.root, self.branches)
        return (1, 0, self.root, self.branches)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, VertexId):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return ".".join([self.root, *map(str, self.branches)])

    def __repr__(self) -> str:
        return f"VertexId({str(self)!r})"


VertexLike = "VertexId | str"


def _vid(v: VertexId | str) -> VertexId:
    return VertexId.parse(v)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph.

    ``vertices`` is sorted by VertexId order and ``rows[i]`` is the bitmask of
    indices adjacent to ``vertices[i]``.  Build instances with
    :meth:`Graph.build`; the raw constructor trusts its arguments.
    """

    vertices: tuple[VertexId, ...]
    rows: tuple[int, ...]

    @classmethod
    def build(
        cls,
        vertices: Iterable[VertexId | str],
        edges: Iterable[tuple[VertexId | str, VertexId | str]] = (),
    ) -> Graph:
        vs = [_vid(v) for v in vertices]
        seen: set[VertexId] = set()
        for v in vs:
            if v in seen:
                raise DuplicateVertex(f"duplicate vertex {v}")
            seen.add(v)
        vs.sort()
        index = {v: i for i, v in enumerate(vs)}
        rows = [0] * len(vs)
        for a, b in edges:
            u, w = _vid(a), _vid(b)
            if u not in index:
                raise UnknownVertex(f"edge endpoint {u} is not a declared vertex")
            if w not in index:
                raise UnknownVertex(f"edge endpoint {w} is not a declared vertex")
            if u == w:
                raise GraphError(f"self-loop at {u}")
            rows[index[u]] |= 1 << index[w]
            rows[index[w]] |= 1 << index[u]
        return cls(tuple(vs), tuple(rows))

    # -- basic accessors ----------------------------------------------------

    @functools.cached_property
    def _index(self) -> dict[VertexId, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @functools.cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_vertex(self, v: VertexId | str) -> bool:
        return _vid(v) in self._index

    def index(self, v: VertexId | str) -> int:
        try:
            return self._index[_vid(v)]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v}") from None

    def vertex_at(self, i: int) -> VertexId:
        return self.vertices[i]

    def has_edge(self, u: VertexId | str, w: VertexId | str) -> bool:
        return bool(self.rows[self.index(u)] >> self.index(w) & 1)

    def degree(self, v: VertexId | str) -> int:
        return self.rows[self.index(v)].bit_count()

    def neighbors(self, v: VertexId | str) -> tuple[VertexId, ...]:
        return self.vertices_of_mask(self.rows[self.index(v)])

    def edges(self) -> Iterator[tuple[VertexId, VertexId]]:
        """All edges, endpoints ordered, in lexicographic pair order."""
        for i, row in enumerate(self.rows):
            rest = row >> (i + 1) << (i + 1)
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                yield self.vertices[i], self.vertices[j]

    def isolated_vertices(self) -> tuple[VertexId, ...]:
        return tuple(v for v, row in zip(self.vertices, self.rows) if row == 0)

    # -- masks ----------------------------------------------------------------

    def mask_of(self, vs: Iterable[VertexId | str]) -> int:
        mask = 0
        for v in vs:
            mask |= 1 << self.index(v)
        return mask

    def vertices_of_mask(self, mask: int) -> tuple[VertexId, ...]:
        out = []
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out.append(self.vertices[i])
        return tuple(out)

    def is_clique_mask(self, mask: int) -> bool:
        rest = mask
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if mask & ~self.rows[i] & ~(1 << i):
                return False
        return True

    def component_masks(self) -> list[int]:
        """Connected components as bitmasks, ordered by smallest member."""
        seen = 0
        out = []
        for i in range(self.n):
            if seen >> i & 1:
                continue
            comp = 1 << i
            frontier = 1 << i
            while frontier:
                j = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = self.rows[j] & ~comp
                comp |= new
                frontier |= new
            seen |= comp
            out.append(comp)
        return out

    # -- derived graphs -------------------------------------------------------

    def induced(self, keep: Iterable[VertexId | str]) -> Graph:
        kept = sorted(_vid(v) for v in keep)
        mask = self.mask_of(kept)
        edges = [
            (u, w)
            for u, w in self.edges()
            if mask >> self._index[u] & 1 and mask >> self._index[w] & 1
        ]
        return Graph.build(kept, edges)

    def without_vertices(self, drop: Iterable[VertexId | str]) -> Graph:
        gone = {_vid(v) for v in drop}
        for v in gone:
            if v not in self._index:
                raise UnknownVertex(f"unknown vertex {v}")
        return self.induced(v for v in self.vertices if v not in gone)

    def add_edge(self, u: VertexId | str, w: VertexId | str) -> Graph:
        if self.has_edge(u, w):
            raise GraphError(f"edge {u} {w} already present")
        return Graph.build(self.vertices, list(self.edges()) + [(_vid(u), _vid(w))])

    def delete_edge(self, u: VertexId | str, w: VertexId | str) -> Graph:
        if not self.has_edge(u, w):
            raise GraphError(f"edge {u} {w} not present")
        uu, ww = _vid(u), _vid(w)
        drop = {frozenset((uu, ww))}
        return Graph.build(
            self.vertices, [e for e in self.edges() if frozenset(e) not in drop]
        )


def remove_isolated(g: Graph) -> tuple[Graph, tuple[VertexId, ...]]:
    """Drop all isolated vertices; returns the new graph and what was dropped."""
    iso = g.isolated_vertices()
    if not iso:
        return g, iso
    return g.without_vertices(iso), iso


# ---------------------------------------------------------------------------
# vertex splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Split:
    """Replace `target` by copies target.0 / target.1 with the given neighborhoods.

    The two neighbor sets must jointly cover N(target) and may overlap; the
    copies are never adjacent to each other.
    """

    target: VertexId
    neighbors_a: frozenset[VertexId]
    neighbors_b: frozenset[VertexId]

    @classmethod
    def of(
        cls,
        target: VertexId | str,
        neighbors_a: Iterable[VertexId | str],
        neighbors_b: Iterable[VertexId | str],
    ) -> Split:
        return cls(
            _vid(target),
            frozenset(_vid(v) for v in neighbors_a),
            frozenset(_vid(v) for v in neighbors_b),
        )


def apply_split(g: Graph, split: Split) -> Graph:
    """Perform one vertex split; raises if the split is not well formed."""
    t = split.target
    ti = g.index(t)  # UnknownVertex if absent
    nbhd = set(g.vertices_of_mask(g.rows[ti]))
    for side in (split.neighbors_a, split.neighbors_b):
        foreign = side - nbhd
        if foreign:
            raise ForeignNeighbor(
                f"split of {t}: {min(foreign)} is not a neighbor of {t}"
            )
    missed = nbhd - (split.neighbors_a | split.neighbors_b)
    if missed:
        raise NeighborhoodNotCovered(
            f"split of {t}: neighbor {min(missed)} assigned to neither copy"
        )
    a, b = t.child(0), t.child(1)
    for copy in (a, b):
        if g.has_vertex(copy):
            raise DuplicateVertex(f"split copy name {copy} already in use")
    edges = [e for e in g.edges() if t not in e]
    edges += [(a, w) for w in split.neighbors_a]
    edges += [(b, w) for w in split.neighbors_b]
    keep = [v for v in g.vertices if v != t]
    return Graph.build([*keep, a, b], edges)


def contract_copies(
    g: Graph, a: VertexId | str, b: VertexId | str, merged: VertexId | str
) -> Graph:
    """Merge non-adjacent `a`, `b` into `merged` with the union neighborhood.

    This is the inverse of :func:`apply_split` (contract t.0, t.1 back onto t)
    and exists so split sequences can be audited backwards.
    """
    av, bv, mv = _vid(a), _vid(b), _vid(merged)
    if g.has_edge(av, bv):
        raise GraphError(f"cannot contract adjacent copies {av}, {bv}")
    if g.has_vertex(mv) and mv not in (av, bv):
        raise DuplicateVertex(f"merged name {mv} already in use")
    union = (set(g.neighbors(av)) | set(g.neighbors(bv))) - {av, bv}
    edges = [e for e in g.edges() if av not in e and bv not in e]
    edges += [(mv, w) for w in sorted(union)]
    keep = [v for v in g.vertices if v not in (av, bv)]
    return Graph.build([*keep, mv], edges)


# ---------------------------------------------------------------------------
# cluster graphs and induced paths on three vertices
# ---------------------------------------------------------------------------


def _induced_p3_indices(g: Graph) -> Iterator[tuple[int, int, int]]:
    """(x, center, z) index triples with x < z, in (x, center, z) order later."""
    for j in range(g.n):
        row = g.rows[j]
        nbrs = []
        rest = row
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            nbrs.append(i)
        for x, z in itertools.combinations(nbrs, 2):
            if not g.rows[x] >> z & 1:
                yield (x, j, z)


def enumerate_induced_p3(g: Graph) -> list[tuple[VertexId, VertexId, VertexId]]:
    """All induced paths on three vertices as (endpoint, center, endpoint).

    Endpoints are in canonical order within each triple and the listing is
    sorted lexicographically; a graph is a cluster graph iff this is empty.
    """
    triples = sorted(_induced_p3_indices(g))
    return [
        (g.vertices[x], g.vertices[j], g.vertices[z]) for x, j, z in triples
    ]


def is_cluster_graph(g: Graph) -> bool:
    """True iff every connected component is a clique.

    Checked both ways (no induced P3, and component-wise cliqueness) since the
    equivalence is load-bearing for everything downstream.
    """
    has_p3 = next(_induced_p3_indices(g), None) is not None
    comps_cliques = all(g.is_clique_mask(c) for c in g.component_masks())
    assert has_p3 != comps_cliques, "P3-freeness and component cliqueness disagree"
    return comps_cliques


# ---------------------------------------------------------------------------
# critical cliques
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalCliqueGraph:
    """The partition of a graph into closed-neighborhood equality classes.

    Each class induces a clique, and between two classes either all edges or
    none are present, so the quotient is again a simple graph.  ``reducible``
    marks classes whose quotient neighborhood is a clique; those are exactly
    the classes the kernel's shrinking rule may eat.
    """

    graph: Graph
    classes: tuple[tuple[VertexId, ...], ...]
    rows: tuple[int, ...]
    reducible: tuple[bool, ...]

    def class_index(self, v: VertexId | str) -> int:
        try:
            return self._lookup[_vid(v)]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v}") from None

    def class_of(self, v: VertexId | str) -> tuple[VertexId, ...]:
        return self.classes[self.class_index(v)]

    @functools.cached_property
    def _lookup(self) -> dict[VertexId, int]:
        return {v: i for i, members in enumerate(self.classes) for v in members}

    def quotient_graph(self) -> Graph:
        """The quotient on lexicographically-smallest class representatives."""
        reps = [members[0] for members in self.classes]
        edges = [
            (reps[i], reps[j])
            for i in range(len(reps))
            for j in range(i + 1, len(reps))
            if self.rows[i] >> j & 1
        ]
        return Graph.build(reps, edges)


def critical_clique_graph(g: Graph) -> CriticalCliqueGraph:
    by_closed: dict[int, list[int]] = {}
    for i in range(g.n):
        by_closed.setdefault(g.rows[i] | 1 << i, []).append(i)
    groups = sorted(by_closed.values())  # sorted by smallest member index
    classes = tuple(tuple(g.vertices[i] for i in group) for group in groups)
    reps = [group[0] for group in groups]
    k = len(groups)
    rows = [0] * k
    for a in range(k):
        for b in range(a + 1, k):
            if g.rows[reps[a]] >> reps[b] & 1:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
    reducible = []
    for a in range(k):
        nbr_reps = [c for c in range(k) if rows[a] >> c & 1]
        ok = all(
            rows[c1] >> c2 & 1
            for c1, c2 in itertools.combinations(nbr_reps, 2)
        )
        reducible.append(ok)
    return CriticalCliqueGraph(g, classes, tuple(rows), tuple(reducible))
