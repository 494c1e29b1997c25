"""A 3k+3 vertex kernel for splitting to a cluster graph.

Two rules, applied to a cvs instance (G, k):

* Rule I   — if some closed-neighborhood class K with |K| >= 2 has a clique
  quotient neighborhood, one vertex of K is redundant: delete it (and any
  vertices this isolates), keeping k unchanged.  Redundancy comes from the
  fact that some optimal solution treats all of K alike, so a class with a
  spare member never needs all its members.
* Rule II  — once Rule I is exhausted and isolates are gone, any positive
  instance has at most 3k vertices; a larger graph is decided negative and
  replaced by the canonical negative instance (a path on three vertices,
  budget 0).

The output therefore has at most 3k+3 vertices and budget at most k, and the
trace records every removal so the run can be replayed and audited.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, VertexId, critical_clique_graph, remove_isolated
from .reductions import Instance, IsolatedVertexPresent, Problem


class NotApplicable(Exception):
    """apply_rule1 was handed a vertex Rule I does not apply to."""


@dataclass(frozen=True)
class IsolateRemoval:
    vertices: tuple[VertexId, ...]


@dataclass(frozen=True)
class RuleIStep:
    removed: VertexId
    cascaded: tuple[VertexId, ...]


@dataclass(frozen=True)
class RuleIIStep:
    pass


@dataclass(frozen=True)
class KernelTrace:
    source: Instance
    target: Instance
    steps: tuple


def rule1_applicable(g: Graph) -> VertexId | None:
    """The smallest vertex in a reducible class of size >= 2, if any.

    A class is reducible when its quotient neighborhood is a clique.
    Requires an isolate-free graph.
    """
    iso = g.isolated_vertices()
    if iso:
        raise IsolatedVertexPresent(f"isolated vertex {iso[0]} (remove isolates first)")
    cc = critical_clique_graph(g)
    for members, red in zip(cc.classes, cc.reducible):
        if red and len(members) >= 2:
            return members[0]
    return None


def apply_rule1(g: Graph, v: VertexId) -> tuple[Graph, tuple[VertexId, ...]]:
    """Delete one redundant vertex and whatever that isolates.

    Returns the shrunk graph and the cascade-removed vertices.  Raises
    NotApplicable unless v sits in a reducible class of size >= 2.
    """
    cc = critical_clique_graph(g)
    ci = cc.class_index(v)
    if len(cc.classes[ci]) < 2 or not cc.reducible[ci]:
        raise NotApplicable(f"Rule I does not apply to {v}")
    shrunk = g.without_vertices([v])
    cascaded = shrunk.isolated_vertices()
    if cascaded:
        shrunk = shrunk.without_vertices(cascaded)
    return shrunk, cascaded


def _canonical_negative() -> Instance:
    p3 = Graph.build(["0", "1", "2"], [("0", "1"), ("1", "2")])
    return Instance(Problem.CVS, p3, 0)


def kernelize(inst: Instance) -> tuple[Instance, KernelTrace]:
    """Shrink a cvs instance to at most 3k+3 vertices without changing the answer.

    Isolate removal first, then Rule I until exhaustion (classes recomputed
    after every removal), then Rule II if more than 3k vertices remain.  Rule
    II appears at most once and only as the final step; after it the output
    is the canonical negative instance, which downstream solvers decide
    instantly.
    """
    if inst.problem is not Problem.CVS:
        raise ValueError(f"kernelize expects a cvs instance, got {inst.problem.value}")
    k = inst.budget
    steps: list = []
    g, iso = remove_isolated(inst.graph)
    if iso:
        steps.append(IsolateRemoval(iso))
    while True:
        v = rule1_applicable(g)
        if v is None:
            break
        g, cascaded = apply_rule1(g, v)
        steps.append(RuleIStep(v, cascaded))
    if g.n > 3 * k:
        out = _canonical_negative()
        steps.append(RuleIIStep())
    else:
        out = Instance(Problem.CVS, g, k)
    assert out.graph.n <= 3 * inst.budget + 3, "kernel exceeds 3k+3 vertices"
    assert out.budget <= inst.budget, "kernel raised the budget"
    return out, KernelTrace(inst, out, tuple(steps))
