"""Certificates and their verifiers.

Everything a solver or reduction emits is independently checkable:

* covers by cliques — either covering all *edges* (sigma cover, measured by
  total weight, the sum of set sizes) or all *vertices* (node cover, measured
  by the number of sets);
* modification sequences — edge additions, edge deletions, and vertex splits
  that must turn the input into a cluster graph within budget;
* packings of induced three-vertex paths — certified lower bounds, valid when
  the paths pairwise share at most one vertex and have distinct centers.

The cost of a cover ``C`` of all vertices is the editing-with-splitting cost
of the clustering it describes: non-edges inside sets (once per pair) plus
edges not inside any set plus the total size excess ``sum |C| - |V|``.
Verifiers return a :class:`VerifyReport` rather than raising, except for
malformed inputs (unknown vertices, families that do not cover).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .graph import (
    Graph,
    Split,
    UnknownVertex,
    VertexId,
    apply_split,
    critical_clique_graph,
    is_cluster_graph,
)


class NotACover(Exception):
    """A set family was asked for its cost but leaves a vertex uncovered."""


class InapplicableStep(Exception):
    """A modification step could not be applied to the current graph."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


def _vid(v: VertexId | str) -> VertexId:
    return VertexId.parse(v)


# ---------------------------------------------------------------------------
# cover types
# ---------------------------------------------------------------------------


def _canonical_sets(
    sets: Iterable[Iterable[VertexId | str]],
) -> tuple[frozenset[VertexId], ...]:
    out = {frozenset(_vid(v) for v in s) for s in sets}
    for s in out:
        if not s:
            raise ValueError("cover sets must be nonempty")
    return tuple(sorted(out, key=lambda s: tuple(sorted(s))))


@dataclass(frozen=True)
class SigmaCliqueCover:
    """A family of cliques meant to cover every edge; measured by weight."""

    sets: tuple[frozenset[VertexId], ...]

    @classmethod
    def of(cls, sets: Iterable[Iterable[VertexId | str]]) -> SigmaCliqueCover:
        return cls(_canonical_sets(sets))

    @property
    def weight(self) -> int:
        return sum(len(s) for s in self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class NodeCliqueCover:
    """A family of cliques meant to cover every vertex; measured by count."""

    sets: tuple[frozenset[VertexId], ...]

    @classmethod
    def of(cls, sets: Iterable[Iterable[VertexId | str]]) -> NodeCliqueCover:
        return cls(_canonical_sets(sets))

    @property
    def size(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class P3Packing:
    """Induced three-vertex paths as (endpoint, center, endpoint) triples."""

    triples: tuple[tuple[VertexId, VertexId, VertexId], ...]

    @classmethod
    def of(
        cls, triples: Iterable[tuple[VertexId | str, VertexId | str, VertexId | str]]
    ) -> P3Packing:
        fixed = []
        for x, y, z in triples:
            xv, yv, zv = _vid(x), _vid(y), _vid(z)
            if zv < xv:
                xv, zv = zv, xv
            fixed.append((xv, yv, zv))
        # sorted but deliberately not deduplicated: a repeated triple is an
        # invalid packing and must be caught by the verifier, not hidden here
        return cls(tuple(sorted(fixed)))

    @property
    def size(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)


# ---------------------------------------------------------------------------
# modification sequences
# ---------------------------------------------------------------------------


def _ordered_pair_init(step) -> None:
    u, v = _vid(step.u), _vid(step.v)
    if v < u:
        u, v = v, u
    object.__setattr__(step, "u", u)
    object.__setattr__(step, "v", v)


@dataclass(frozen=True)
class EdgeAdd:
    u: VertexId
    v: VertexId

    __post_init__ = _ordered_pair_init


@dataclass(frozen=True)
class EdgeDelete:
    u: VertexId
    v: VertexId

    __post_init__ = _ordered_pair_init


@dataclass(frozen=True)
class VertexSplit:
    split: Split


ModificationStep = "EdgeAdd | EdgeDelete | VertexSplit"


@dataclass(frozen=True)
class ModificationSequence:
    """An ordered list of edge additions, edge deletions, and vertex splits."""

    steps: tuple = ()

    @property
    def length(self) -> int:
        return len(self.steps)

    def is_normalized(self) -> bool:
        """True when all additions precede all deletions precede all splits."""
        rank = {EdgeAdd: 0, EdgeDelete: 1, VertexSplit: 2}
        ranks = [rank[type(s)] for s in self.steps]
        return ranks == sorted(ranks)

    def splits_only(self) -> bool:
        return all(isinstance(s, VertexSplit) for s in self.steps)

    def apply_to(self, g: Graph) -> Graph:
        """Apply every step in order; raises InapplicableStep on the first bad one."""
        for i, step in enumerate(self.steps):
            try:
                if isinstance(step, EdgeAdd):
                    if g.has_edge(step.u, step.v):
                        raise InapplicableStep(i, f"edge {step.u} {step.v} already present")
                    g = g.add_edge(step.u, step.v)
                elif isinstance(step, EdgeDelete):
                    if not g.has_edge(step.u, step.v):
                        raise InapplicableStep(i, f"edge {step.u} {step.v} not present")
                    g = g.delete_edge(step.u, step.v)
                elif isinstance(step, VertexSplit):
                    g = apply_split(g, step.split)
                else:
                    raise InapplicableStep(i, f"unknown step type {type(step).__name__}")
            except InapplicableStep:
                raise
            except Exception as exc:  # unknown vertex, bad split, ...
                raise InapplicableStep(i, str(exc)) from exc
        return g

    def intermediate_graphs(self, g: Graph) -> list[Graph]:
        """All graphs g_0 .. g_L along the application; g_0 is the input."""
        out = [g]
        for i, _ in enumerate(self.steps):
            out.append(ModificationSequence(self.steps[i : i + 1]).apply_to(out[-1]))
        return out


# ---------------------------------------------------------------------------
# reports and verifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VerifyReport:
    valid: bool
    reason: str | None = None
    metrics: dict = field(default_factory=dict)
    final_graph: Graph | None = None


def _check_known(g: Graph, vertices: Iterable[VertexId]) -> None:
    for v in vertices:
        if not g.has_vertex(v):
            raise UnknownVertex(f"certificate references unknown vertex {v}")


def _fmt_set(s: frozenset[VertexId]) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def _valencies(g: Graph, sets) -> dict[str, int]:
    val = {str(v): 0 for v in g.vertices}
    for s in sets:
        for v in s:
            val[str(v)] += 1
    return val


def _first_non_clique(g: Graph, sets) -> frozenset[VertexId] | None:
    for s in sets:
        if not g.is_clique_mask(g.mask_of(s)):
            return s
    return None


def verify_sigma_cover(g: Graph, cover: SigmaCliqueCover, budget: int) -> VerifyReport:
    """Check that every set is a clique, every edge is covered, weight <= budget."""
    for s in cover.sets:
        _check_known(g, s)
    metrics = {
        "weight": cover.weight,
        "budget": budget,
        "sets": len(cover.sets),
        "valencies": _valencies(g, cover.sets),
    }
    bad = _first_non_clique(g, cover.sets)
    if bad is not None:
        return VerifyReport(False, f"set {_fmt_set(bad)} is not a clique", metrics)
    masks = [g.mask_of(s) for s in cover.sets]
    for u, w in g.edges():
        bu, bw = 1 << g.index(u), 1 << g.index(w)
        if not any(m & bu and m & bw for m in masks):
            return VerifyReport(False, f"edge {u} {w} is covered by no set", metrics)
    if cover.weight > budget:
        return VerifyReport(
            False, f"weight {cover.weight} exceeds budget {budget}", metrics
        )
    return VerifyReport(True, None, metrics)


def verify_node_cover(g: Graph, cover: NodeCliqueCover, budget: int) -> VerifyReport:
    """Check that every set is a clique, every vertex is covered, count <= budget."""
    for s in cover.sets:
        _check_known(g, s)
    metrics = {
        "size": cover.size,
        "budget": budget,
        "valencies": _valencies(g, cover.sets),
    }
    bad = _first_non_clique(g, cover.sets)
    if bad is not None:
        return VerifyReport(False, f"set {_fmt_set(bad)} is not a clique", metrics)
    covered = set().union(*cover.sets) if cover.sets else set()
    for v in g.vertices:
        if v not in covered:
            return VerifyReport(False, f"vertex {v} is covered by no set", metrics)
    if cover.size > budget:
        return VerifyReport(
            False, f"{cover.size} sets exceed budget {budget}", metrics
        )
    return VerifyReport(True, None, metrics)


def verify_modification_sequence(
    g: Graph, seq: ModificationSequence, budget: int, problem: str
) -> VerifyReport:
    """Check applicability step by step, the cluster-graph outcome, and the budget.

    ``problem`` is "cvs" (only vertex splits allowed) or "cevs".  The final
    graph is included in the report whenever the sequence applies cleanly.
    """
    problem = str(getattr(problem, "value", problem)).lower()
    if problem not in ("cvs", "cevs"):
        raise ValueError(f"modification sequences decide cvs or cevs, not {problem!r}")
    metrics = {"length": seq.length, "budget": budget}
    if problem == "cvs":
        for i, step in enumerate(seq.steps):
            if not isinstance(step, VertexSplit):
                return VerifyReport(
                    False, f"step {i} is not a vertex split (cvs allows only splits)", metrics
                )
    try:
        final = seq.apply_to(g)
    except InapplicableStep as exc:
        return VerifyReport(False, str(exc), metrics)
    metrics["final_vertices"] = final.n
    metrics["final_components"] = len(final.component_masks())
    if not is_cluster_graph(final):
        return VerifyReport(
            False, "the modified graph is not a cluster graph", metrics, final
        )
    if seq.length > budget:
        return VerifyReport(
            False, f"length {seq.length} exceeds budget {budget}", metrics, final
        )
    return VerifyReport(True, None, metrics, final)


def verify_p3_packing(g: Graph, packing: P3Packing) -> VerifyReport:
    """Check induced paths, pairwise overlap <= 1 vertex, distinct centers.

    A valid packing certifies that every modification sequence reaching a
    cluster graph has length at least ``packing.size``.
    """
    for triple in packing.triples:
        _check_known(g, triple)
    metrics = {"size": packing.size}
    for x, y, z in packing.triples:
        if len({x, y, z}) != 3:
            return VerifyReport(False, f"triple ({x},{y},{z}) repeats a vertex", metrics)
        if not (g.has_edge(x, y) and g.has_edge(y, z)) or g.has_edge(x, z):
            return VerifyReport(
                False, f"({x},{y},{z}) is not an induced path with center {y}", metrics
            )
    for t1, t2 in itertools.combinations(packing.triples, 2):
        if len(set(t1) & set(t2)) >= 2:
            return VerifyReport(
                False,
                f"triples ({t1[0]},{t1[1]},{t1[2]}) and ({t2[0]},{t2[1]},{t2[2]})"
                " share two vertices",
                metrics,
            )
        if t1[1] == t2[1]:
            return VerifyReport(
                False, f"two triples share the center {t1[1]}", metrics
            )
    return VerifyReport(True, None, metrics)


# ---------------------------------------------------------------------------
# cover cost
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostBreakdown:
    total: int
    nonedges_inside: int
    edges_outside: int
    excess: int


def cover_cost(g: Graph, cover: SigmaCliqueCover) -> CostBreakdown:
    """Editing-with-splitting cost of the clustering a vertex cover describes.

    Requires the sets to cover every vertex (the sets need not be cliques).
    Non-edges inside sets are counted once per pair even when the pair lies
    in several sets.
    """
    for s in cover.sets:
        _check_known(g, s)
    covered = set().union(*cover.sets) if cover.sets else set()
    for v in g.vertices:
        if v not in covered:
            raise NotACover(f"vertex {v} lies in no set")
    inside_pairs: set[frozenset[VertexId]] = set()
    for s in cover.sets:
        for u, w in itertools.combinations(sorted(s), 2):
            inside_pairs.add(frozenset((u, w)))
    nonedges_inside = sum(
        1 for pair in inside_pairs if not g.has_edge(*tuple(pair))
    )
    edges_outside = sum(
        1 for u, w in g.edges() if frozenset((u, w)) not in inside_pairs
    )
    excess = sum(len(s) for s in cover.sets) - g.n
    total = nonedges_inside + edges_outside + excess
    return CostBreakdown(total, nonedges_inside, edges_outside, excess)


def cover_respects_critical_cliques(g: Graph, cover: SigmaCliqueCover) -> bool:
    """True when every closed-neighborhood class is kept whole by every set.

    That is, each class is either contained in or disjoint from each set of
    the cover; a cover violating this somewhere "cuts" a critical clique.
    """
    for s in cover.sets:
        _check_known(g, s)
    covered = set().union(*cover.sets) if cover.sets else set()
    for v in g.vertices:
        if v not in covered:
            raise NotACover(f"vertex {v} lies in no set")
    cc = critical_clique_graph(g)
    for members in cc.classes:
        cls = set(members)
        for s in cover.sets:
            hit = cls & s
            if hit and hit != cls:
                return False
    return True
