"""Reductions between the four problems, with certificate translation.

The four problems, all parameterized decision problems on simple graphs:

* ncc  — cover every vertex by at most `budget` cliques;
* scc  — cover every edge by cliques of total weight at most `budget`
         (weight = sum of set sizes);
* cvs  — at most `budget` vertex splits to reach a cluster graph;
* cevs — at most `budget` edge additions, edge deletions, and vertex splits
         to reach a cluster graph.

The reductions implemented:

* ncc -> scc: add ell = 2|E|+1 universal vertices (adjacent to every original
  vertex, mutually non-adjacent) and set the weight budget to
  ell * (|V| + budget + 1) - 1.  Certificates translate both ways; the
  backward direction picks the universal vertex of minimum covering weight
  and strips it out of its sets.
* cvs <-> scc on the *same* graph: splitting to a cluster graph within k is
  the same as covering edges with weight |V| - |isolated| + k.  The cover is
  turned into an explicit split sequence by repeatedly pulling a
  multiply-covered vertex out of its first covering set, and back again by
  reading clusters off the split graph and contracting split copies.
* cvs -> cevs: replace every vertex by a clique of k+1 copies (complete
  joins along edges); the edit budget becomes k * (k+1).  Blowing up makes
  edits useless: any solution may as well split only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .certificates import (
    ModificationSequence,
    NodeCliqueCover,
    SigmaCliqueCover,
    VertexSplit,
    verify_node_cover,
    verify_sigma_cover,
)
from .graph import (
    Graph,
    GraphError,
    Split,
    VertexId,
    apply_split,
    contract_copies,
    is_cluster_graph,
)


class InvalidCertificate(Exception):
    """A certificate handed to a translator does not verify."""


class IsolatedVertexPresent(Exception):
    """An operation requiring an isolate-free graph got one with isolates."""


class BudgetUnderflow(Exception):
    """A weight budget below |V| - |isolated|: the scc instance is trivially
    negative and has no cvs counterpart."""


class NotAClusterGraphAfter(Exception):
    """A split sequence was read back as a cover but does not end in clusters."""


class Problem(enum.Enum):
    NCC = "ncc"
    SCC = "scc"
    CVS = "cvs"
    CEVS = "cevs"


@dataclass(frozen=True)
class Instance:
    problem: Problem
    graph: Graph
    budget: int

    def __post_init__(self):
        if not isinstance(self.budget, int) or self.budget < 0:
            raise ValueError(f"budget must be a non-negative integer: {self.budget!r}")


@dataclass(frozen=True, eq=False)
class ReductionTrace:
    kind: str
    source: Instance
    target: Instance
    parameters: dict = field(default_factory=dict)


def _require(inst: Instance, problem: Problem) -> None:
    if inst.problem is not problem:
        raise ValueError(f"expected a {problem.value} instance, got {inst.problem.value}")


def _canon_key(s: frozenset[VertexId]) -> tuple:
    return tuple(sorted(s))


# ---------------------------------------------------------------------------
# ncc -> scc
# ---------------------------------------------------------------------------


def universal_names(g: Graph, count: int) -> tuple[VertexId, ...]:
    """Fresh vertex names u1..u<count>, lengthening the base on collision.

    Deterministic in the input graph alone, so certificate translation can
    recompute the reduced instance without carrying a trace around.
    """
    base = "u"
    while any(v.root.startswith(base) for v in g.vertices):
        base += "u"
    return tuple(VertexId(f"{base}{i}") for i in range(1, count + 1))


def extend_universal(g: Graph, count: int) -> Graph:
    """Add `count` fresh vertices adjacent to every vertex of g and nothing else."""
    fresh = universal_names(g, count)
    edges = list(g.edges())
    edges += [(u, v) for u in fresh for v in g.vertices]
    return Graph.build([*g.vertices, *fresh], edges)


def reduce_ncc_to_scc(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """(G, s) ncc-positive iff (G^ell, ell*(|V|+s+1)-1) scc-positive, ell = 2|E|+1."""
    _require(inst, Problem.NCC)
    g, s = inst.graph, inst.budget
    ell = 2 * g.edge_count + 1
    target = Instance(Problem.SCC, extend_universal(g, ell), ell * (g.n + s + 1) - 1)
    trace = ReductionTrace(
        "ncc-to-scc",
        inst,
        target,
        {"ell": ell, "universal": [str(u) for u in universal_names(g, ell)]},
    )
    return target, trace


def translate_ncc_cert_to_scc(inst: Instance, cover: NodeCliqueCover) -> SigmaCliqueCover:
    """Turn a node cover of the ncc instance into an edge cover of its reduction."""
    _require(inst, Problem.NCC)
    g = inst.graph
    report = verify_node_cover(g, cover, inst.budget)
    if not report.valid:
        raise InvalidCertificate(report.reason)
    reduced, _ = reduce_ncc_to_scc(inst)
    universals = universal_names(g, 2 * g.edge_count + 1)
    # disjointify in canonical order so the family is a partition
    taken: set[VertexId] = set()
    classes: list[frozenset[VertexId]] = []
    for s in cover.sets:
        rest = s - taken
        if rest:
            classes.append(rest)
            taken |= rest
    sets: list[frozenset[VertexId]] = [
        cls | {u} for cls in classes for u in universals
    ]
    index = {v: cls for cls in classes for v in cls}
    sets += [
        frozenset((x, y)) for x, y in g.edges() if index[x] is not index[y]
    ]
    out = SigmaCliqueCover.of(sets)
    check = verify_sigma_cover(reduced.graph, out, reduced.budget)
    assert check.valid, f"translated cover failed to verify: {check.reason}"
    return out


def translate_scc_cert_to_ncc(inst: Instance, cover: SigmaCliqueCover) -> NodeCliqueCover:
    """Read a node cover of the ncc instance off an edge cover of its reduction.

    Picks the universal vertex u* of minimum total covering weight (ties by
    name), and returns the sets containing u* with u* removed: few enough
    sets, each a clique of the original graph, jointly covering it.
    """
    _require(inst, Problem.NCC)
    g = inst.graph
    reduced, _ = reduce_ncc_to_scc(inst)
    report = verify_sigma_cover(reduced.graph, cover, reduced.budget)
    if not report.valid:
        raise InvalidCertificate(report.reason)
    universals = universal_names(g, 2 * g.edge_count + 1)
    def covering_weight(u: VertexId) -> int:
        return sum(len(s) for s in cover.sets if u in s)
    star = min(universals, key=lambda u: (covering_weight(u), u.sort_key))
    sets = [s - {star} for s in cover.sets if star in s]
    out = NodeCliqueCover.of(s for s in sets if s)
    check = verify_node_cover(g, out, inst.budget)
    assert check.valid, f"translated cover failed to verify: {check.reason}"
    return out


# ---------------------------------------------------------------------------
# scc covers <-> split sequences (same graph)
# ---------------------------------------------------------------------------


def cover_to_splits(g: Graph, cover: SigmaCliqueCover) -> ModificationSequence:
    """Realize a sigma clique cover as exactly weight - |V| vertex splits.

    Requires an isolate-free graph and a valid cover whose sets all have at
    least two vertices (prune singletons first; minimum covers have none).
    While some vertex u lies in several sets, u is pulled out of its first
    covering set C1: the copy u.0 keeps the neighbors inside C1, the copy u.1
    keeps the neighbors outside C1 plus those C1-neighbors shared with
    another covering set.  Each pull-out lowers the total excess by one, and
    afterwards the graph is exactly the cluster graph of the cover.
    """
    if g.isolated_vertices():
        raise IsolatedVertexPresent(
            f"isolated vertex {g.isolated_vertices()[0]} (remove isolates first)"
        )
    report = verify_sigma_cover(g, cover, cover.weight)
    if not report.valid:
        raise InvalidCertificate(report.reason)
    for s in cover.sets:
        if len(s) < 2:
            raise InvalidCertificate(
                f"singleton set {{{min(s)}}} cannot be realized by splits"
            )
    work: list[frozenset[VertexId]] = sorted(cover.sets, key=_canon_key)
    cur = g
    steps: list[VertexSplit] = []
    while True:
        valency: dict[VertexId, int] = {}
        for s in work:
            for v in s:
                valency[v] = valency.get(v, 0) + 1
        multi = sorted(v for v, k in valency.items() if k >= 2)
        if not multi:
            break
        u = multi[0]
        containing = sorted((s for s in work if u in s), key=_canon_key)
        c1 = containing[0]
        shared = frozenset().union(*containing[1:])
        nbhd = frozenset(cur.neighbors(u))
        inside = nbhd & c1
        outside = (nbhd - c1) | (inside & shared)
        split = Split(u, inside, outside)
        cur = apply_split(cur, split)
        steps.append(VertexSplit(split))
        u_in, u_out = u.child(0), u.child(1)
        new_work = []
        for s in work:
            if u not in s:
                new_work.append(s)
            elif s == c1:
                new_work.append(s - {u} | {u_in})
            else:
                new_work.append(s - {u} | {u_out})
        work = sorted(new_work, key=_canon_key)
        assert sum(1 for s in work if u_in in s) == 1, "pulled-out copy not unique"
    assert is_cluster_graph(cur), "pull-out loop ended off a cluster graph"
    assert len(steps) == cover.weight - g.n, "split count drifted from the excess"
    return ModificationSequence(tuple(steps))


def splits_to_cover(g: Graph, seq: ModificationSequence) -> SigmaCliqueCover:
    """Read a cover of g off a split sequence that ends in a cluster graph.

    The clusters of the final graph, minus one trivial cluster per vertex
    isolated in g (the lexicographically smallest ones), are contracted back
    through the splits; the result covers every edge of g with weight at most
    |V| - |isolated| + length.
    """
    if not seq.splits_only():
        raise ValueError("sequence contains non-split steps")
    graphs = seq.intermediate_graphs(g)
    final = graphs[-1]
    if not is_cluster_graph(final):
        raise NotAClusterGraphAfter("the split sequence does not end in clusters")
    sets = [frozenset(final.vertices_of_mask(m)) for m in final.component_masks()]
    iso = len(g.isolated_vertices())
    trivial = sorted((s for s in sets if len(s) == 1), key=_canon_key)
    assert len(trivial) >= iso, "fewer trivial clusters than original isolates"
    drop = set(trivial[:iso])
    family = {s for s in sets if s not in drop}
    for step in reversed(seq.steps):
        u = step.split.target
        u0, u1 = u.child(0), u.child(1)
        family = {
            (s - {u0, u1} | {u}) if (u0 in s or u1 in s) else s for s in family
        }
    out = SigmaCliqueCover.of(family)
    check = verify_sigma_cover(g, out, g.n - iso + seq.length)
    assert check.valid, f"contracted cover failed to verify: {check.reason}"
    return out


def convert_cvs_scc(inst: Instance) -> Instance:
    """cvs (G, k) to the equivalent scc (G, |V| - |isolated| + k), same graph."""
    _require(inst, Problem.CVS)
    g = inst.graph
    iso = len(g.isolated_vertices())
    return Instance(Problem.SCC, g, g.n - iso + inst.budget)


def convert_scc_cvs(inst: Instance) -> Instance:
    """scc (G, s) to the equivalent cvs (G, s - |V| + |isolated|), same graph.

    Budgets below |V| - |isolated| admit no cover at all (every non-isolated
    vertex must appear somewhere), so the instance is trivially negative and
    is reported as such instead of converted.
    """
    _require(inst, Problem.SCC)
    g = inst.graph
    floor = g.n - len(g.isolated_vertices())
    if inst.budget < floor:
        raise BudgetUnderflow(
            f"weight budget {inst.budget} is below |V| - |isolated| = {floor}"
        )
    return Instance(Problem.CVS, g, inst.budget - floor)


# ---------------------------------------------------------------------------
# cvs -> cevs
# ---------------------------------------------------------------------------


def reduce_cvs_to_cevs(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """(G, k) cvs-positive iff (G x K_{k+1}, k*(k+1)) cevs-positive.

    Every vertex v becomes a clique of k+1 copies v_1..v_{k+1}; edges become
    complete joins.  Requires an isolate-free graph.
    """
    _require(inst, Problem.CVS)
    g, k = inst.graph, inst.budget
    if g.isolated_vertices():
        raise IsolatedVertexPresent(
            f"isolated vertex {g.isolated_vertices()[0]} (remove isolates first)"
        )
    copies: dict[VertexId, list[VertexId]] = {}
    for v in g.vertices:
        base = str(v).replace(".", "_")
        copies[v] = [VertexId(f"{base}_{i}") for i in range(1, k + 2)]
    flat = [c for group in copies.values() for c in group]
    if len(set(flat)) != len(flat):
        raise GraphError("vertex names collide under blow-up naming")
    edges: list[tuple[VertexId, VertexId]] = []
    for v in g.vertices:
        group = copies[v]
        edges += [(a, b) for i, a in enumerate(group) for b in group[i + 1 :]]
    for x, y in g.edges():
        edges += [(a, b) for a in copies[x] for b in copies[y]]
    target = Instance(Problem.CEVS, Graph.build(flat, edges), k * (k + 1))
    trace = ReductionTrace("cvs-to-cevs", inst, target, {"k": k, "copies": k + 1})
    return target, trace
