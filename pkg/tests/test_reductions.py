from __future__ import annotations

import itertools

import pytest

import oracles
from conftest import graphs_on, oracle_form
from splitclust.certificates import (
    ModificationSequence,
    NodeCliqueCover,
    SigmaCliqueCover,
    VertexSplit,
    verify_modification_sequence,
    verify_sigma_cover,
)
from splitclust.graph import Graph, GraphError, Split, is_cluster_graph, remove_isolated
from splitclust.reductions import (
    BudgetUnderflow,
    Instance,
    InvalidCertificate,
    IsolatedVertexPresent,
    NotAClusterGraphAfter,
    Problem,
    convert_cvs_scc,
    convert_scc_cvs,
    cover_to_splits,
    extend_universal,
    reduce_cvs_to_cevs,
    reduce_ncc_to_scc,
    translate_ncc_cert_to_scc,
    translate_scc_cert_to_ncc,
    universal_names,
)
from splitclust.solvers import solve_ncc_exact, solve_scc_exact


def test_instance_rejects_negative_budget(p3):
    with pytest.raises(ValueError):
        Instance(Problem.CVS, p3, -1)


# ---------------------------------------------------------------- universals


def test_universal_names_avoid_collisions():
    g = Graph.build(["u1", "a"], [("u1", "a")])
    names = universal_names(g, 2)
    assert [str(v) for v in names] == ["uu1", "uu2"]
    gg = Graph.build(["uu3"], [])
    assert [str(v) for v in universal_names(gg, 1)] == ["uuu1"]


def test_extend_universal_structure(p3):
    ext = extend_universal(p3, 2)
    assert ext.n == 5 and ext.edge_count == 2 + 2 * 3
    u1, u2 = universal_names(p3, 2)
    assert not ext.has_edge(u1, u2)
    for v in "abc":
        assert ext.has_edge(u1, v) and ext.has_edge(u2, v)


# ---------------------------------------------------------------- NCC -> SCC


def test_reduce_ncc_to_scc_arithmetic(p3, k3):
    red, trace = reduce_ncc_to_scc(Instance(Problem.NCC, p3, 2))
    # ell = 2m+1 = 5; budget = ell * (n + s + 1) - 1
    assert trace.parameters["ell"] == 5
    assert red.problem is Problem.SCC and red.budget == 5 * (3 + 2 + 1) - 1
    assert red.graph.n == 3 + 5

    red2, trace2 = reduce_ncc_to_scc(Instance(Problem.NCC, k3, 1))
    assert trace2.parameters["ell"] == 7
    assert red2.budget == 7 * (3 + 1 + 1) - 1 == 34


def test_translate_ncc_cert_forward_and_back(p3):
    inst = Instance(Problem.NCC, p3, 2)
    red, _ = reduce_ncc_to_scc(inst)
    ncc = NodeCliqueCover.of([["a", "b"], ["c"]])
    scc = translate_ncc_cert_to_scc(inst, ncc)
    assert verify_sigma_cover(red.graph, scc, red.budget).valid
    back = translate_scc_cert_to_ncc(inst, scc)
    assert back.size <= inst.budget
    assert [sorted(map(str, s)) for s in back.sets] == [["a", "b"], ["c"]]


def test_translate_rejects_invalid_certificates(p3):
    inst = Instance(Problem.NCC, p3, 2)
    with pytest.raises(InvalidCertificate):
        translate_ncc_cert_to_scc(inst, NodeCliqueCover.of([["a", "b", "c"]]))
    red, _ = reduce_ncc_to_scc(inst)
    with pytest.raises(InvalidCertificate):
        translate_scc_cert_to_ncc(inst, SigmaCliqueCover.of([["a", "b"]]))


def test_ncc_scc_decisions_agree_exhaustively():
    """Budgeted NCC and the reduced budgeted SCC agree on every tiny graph."""
    for n in range(1, 4):
        for g in graphs_on(n):
            names, edges = oracle_form(g)
            opt = oracles.min_ncc_size(names, edges)
            for s in range(0, 4):
                inst = Instance(Problem.NCC, g, s)
                red, _ = reduce_ncc_to_scc(inst)
                scc = solve_scc_exact(red.graph, red.budget)
                assert (scc is not None) == (opt <= s)
                if scc is not None:
                    ncc = translate_scc_cert_to_ncc(inst, scc)
                    assert ncc.size <= s


# ---------------------------------------------------------------- covers <-> splits


def test_cover_to_splits_on_path(p3):
    cover = SigmaCliqueCover.of([["a", "b"], ["b", "c"]])
    seq = cover_to_splits(p3, cover)
    assert seq.splits_only() and seq.length == cover.weight - p3.n
    assert verify_modification_sequence(p3, seq, seq.length, "cvs").valid


def test_cover_to_splits_requires_isolate_free():
    g = Graph.build("abc", [("a", "b")])
    with pytest.raises(IsolatedVertexPresent):
        cover_to_splits(g, SigmaCliqueCover.of([["a", "b"], ["c"]]))


def test_cover_to_splits_rejects_small_sets(p3):
    with pytest.raises(InvalidCertificate):
        cover_to_splits(p3, SigmaCliqueCover.of([["a", "b"], ["b", "c"], ["b"]]))


def test_cover_to_splits_length_formula_exhaustive():
    """length == weight - |V| for minimum covers on all isolate-free n<=4 graphs."""
    for n in range(2, 5):
        for g in graphs_on(n, isolate_free=True):
            names, edges = oracle_form(g)
            w = oracles.min_scc_weight(names, edges)
            cover = solve_scc_exact(g, w)
            pruned = SigmaCliqueCover.of([s for s in cover.sets if len(s) >= 2])
            seq = cover_to_splits(g, pruned)
            assert seq.length == pruned.weight - g.n
            final = seq.apply_to(g)
            assert is_cluster_graph(final)


def test_splits_to_cover_round_trip():
    """splits -> cover -> splits preserves weight on isolate-free graphs."""
    from splitclust.reductions import splits_to_cover

    for n in range(2, 5):
        for g in graphs_on(n, isolate_free=True):
            names, edges = oracle_form(g)
            w = oracles.min_scc_weight(names, edges)
            cover = solve_scc_exact(g, w)
            pruned = SigmaCliqueCover.of([s for s in cover.sets if len(s) >= 2])
            seq = cover_to_splits(g, pruned)
            back = splits_to_cover(g, seq)
            assert back.weight <= g.n + seq.length
            assert verify_sigma_cover(g, back, g.n + seq.length).valid


def test_splits_to_cover_validations(p3):
    from splitclust.certificates import EdgeAdd
    from splitclust.reductions import splits_to_cover

    with pytest.raises(ValueError):
        splits_to_cover(p3, ModificationSequence((EdgeAdd("a", "c"),)))
    incomplete = ModificationSequence((VertexSplit(Split.of("a", ["b"], ["b"])),))
    with pytest.raises(NotAClusterGraphAfter):
        splits_to_cover(p3, incomplete)


# ---------------------------------------------------------------- CVS <-> SCC


def test_convert_cvs_scc_budgets(p3):
    scc_inst = convert_cvs_scc(Instance(Problem.CVS, p3, 1))
    assert scc_inst.problem is Problem.SCC and scc_inst.budget == 4
    back = convert_scc_cvs(scc_inst)
    assert back.problem is Problem.CVS and back.budget == 1

    iso = Graph.build("abc", [("a", "b")])
    assert convert_cvs_scc(Instance(Problem.CVS, iso, 2)).budget == 2 + 2


def test_convert_scc_cvs_underflow(p3):
    with pytest.raises(BudgetUnderflow):
        convert_scc_cvs(Instance(Problem.SCC, p3, 2))


# ---------------------------------------------------------------- CVS -> CEVS


def test_blow_up_shape(p3):
    red, trace = reduce_cvs_to_cevs(Instance(Problem.CVS, p3, 1))
    assert red.problem is Problem.CEVS
    assert red.budget == 1 * 2
    assert red.graph.n == 3 * 2
    # each group is a K2; joined groups contribute 2*2 edges per original edge
    assert red.graph.edge_count == 3 * 1 + 2 * 4
    assert trace.parameters["k"] == 1


def test_blow_up_of_triangle_is_complete(k3):
    red, _ = reduce_cvs_to_cevs(Instance(Problem.CVS, k3, 1))
    assert red.graph.n == 6
    assert red.graph.edge_count == 15  # K6
    assert red.budget == 2


def test_blow_up_k0_is_identity_with_renames(p3):
    red, _ = reduce_cvs_to_cevs(Instance(Problem.CVS, p3, 0))
    assert red.graph.n == 3 and red.graph.edge_count == 2 and red.budget == 0


def test_blow_up_requires_isolate_free():
    g = Graph.build("abc", [("a", "b")])
    with pytest.raises(IsolatedVertexPresent):
        reduce_cvs_to_cevs(Instance(Problem.CVS, g, 1))


def test_blow_up_name_collision():
    # "a.1" and "a_1" share the flattened base name a_1
    g = Graph.build(["a.1", "a_1"], [("a.1", "a_1")])
    with pytest.raises(GraphError):
        reduce_cvs_to_cevs(Instance(Problem.CVS, g, 1))


def test_wrong_problem_rejected(p3):
    with pytest.raises(ValueError):
        reduce_ncc_to_scc(Instance(Problem.SCC, p3, 1))
    with pytest.raises(ValueError):
        convert_cvs_scc(Instance(Problem.SCC, p3, 1))
    with pytest.raises(ValueError):
        reduce_cvs_to_cevs(Instance(Problem.CEVS, p3, 1))
