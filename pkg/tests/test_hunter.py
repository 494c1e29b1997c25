from __future__ import annotations

import itertools

import pytest

import oracles
from conftest import graphs_on, oracle_form
from splitclust.certificates import cover_cost, cover_respects_critical_cliques
from splitclust.graph import Graph
from splitclust.hunter import (
    canonical_form,
    canonical_key,
    enumerate_graphs,
    graph_from_canonical,
    hunt,
    hunt_graph,
    report_to_obj,
)
from splitclust.solvers import SizeLimitExceeded, _cevs_search

# every isomorphism class / connected class count a desk check can reach
ALL_CLASSES = [1, 2, 4, 11, 34, 156, 1044, 12346]
CONNECTED_CLASSES = [1, 1, 2, 6, 21, 112, 853, 11117]


# ---------------------------------------------------------------- canonical form


def test_canonical_form_is_isomorphism_invariant():
    for n in range(1, 5):
        names = [str(i) for i in range(n)]
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            g = Graph.build(names, [(names[a], names[b]) for a, b in edges])
            base = canonical_form(g)
            for perm in itertools.permutations(range(n)):
                relabeled = Graph.build(
                    names, [(names[perm[a]], names[perm[b]]) for a, b in edges]
                )
                assert canonical_form(relabeled) == base


def test_canonical_form_ignores_vertex_names(ccl8):
    renamed = Graph.build(
        [str(v).upper() for v in ccl8.vertices],
        [(str(u).upper(), str(w).upper()) for u, w in ccl8.edges()],
    )
    assert canonical_form(renamed) == canonical_form(ccl8)
    assert canonical_key(renamed) == canonical_key(ccl8)


def test_graph_from_canonical_round_trip():
    for n in range(1, 6):
        for g in enumerate_graphs(n):
            nn, bits = canonical_form(g)
            assert nn == n
            rebuilt = graph_from_canonical(n, bits)
            assert canonical_form(rebuilt) == (n, bits)


# ---------------------------------------------------------------- enumeration


def test_enumeration_counts():
    for n, want in enumerate(ALL_CLASSES[:6], start=1):
        assert sum(1 for _ in enumerate_graphs(n)) == want
    for n, want in enumerate(CONNECTED_CLASSES[:6], start=1):
        assert sum(1 for _ in enumerate_graphs(n, connected_only=True)) == want


def test_enumeration_counts_match_bruteforce():
    for n in range(1, 5):
        assert sum(1 for _ in enumerate_graphs(n)) == oracles.count_iso_classes(n)
        assert sum(
            1 for _ in enumerate_graphs(n, connected_only=True)
        ) == oracles.count_iso_classes(n, connected_only=True)


def test_cached_level_counts():
    from splitclust.hunter import _level

    for n, want in enumerate(ALL_CLASSES, start=1):
        assert len(_level(n)) == want


def test_enumeration_yields_pairwise_non_isomorphic():
    reps = list(enumerate_graphs(4))
    forms = []
    for g in reps:
        names, edges = oracle_form(g)
        pairs = frozenset(
            (int(u), int(w)) for u, w in edges
        )
        forms.append(oracles.iso_invariant(4, pairs))
    assert len(set(forms)) == len(forms)


def test_enumeration_size_limit():
    with pytest.raises(SizeLimitExceeded):
        list(enumerate_graphs(9))


# ---------------------------------------------------------------- analysis


def test_hunt_reports_match_bruteforce_up_to_n4():
    for rep in hunt(4):
        g = rep.graph
        names, edges = oracle_form(g)
        best, fams = oracles.all_optimal_cover_families(names, edges)
        assert rep.optimum == best
        assert rep.optimal_covers == len(fams)
        families = _cevs_search(g, rep.optimum, collect_all=True)
        mine = {
            frozenset(frozenset(str(v) for v in c) for c in fam) for fam in families
        }
        assert mine == fams
        cut = any(not oracles.family_respects(names, edges, f) for f in fams)
        resp = any(oracles.family_respects(names, edges, f) for f in fams)
        assert rep.exists_optimum_cutting == cut
        assert rep.exists_optimum_respecting == resp


def test_witnesses_are_sound():
    for rep in hunt(4):
        if rep.witness_cutting is not None:
            assert cover_cost(rep.graph, rep.witness_cutting).total == rep.optimum
            assert not cover_respects_critical_cliques(rep.graph, rep.witness_cutting)
        if rep.witness_respecting is not None:
            assert cover_cost(rep.graph, rep.witness_respecting).total == rep.optimum
            assert cover_respects_critical_cliques(rep.graph, rep.witness_respecting)
        assert rep.exists_optimum_cutting == (rep.witness_cutting is not None)
        assert rep.exists_optimum_respecting == (rep.witness_respecting is not None)


def test_cluster_graphs_report_zero_and_respect():
    k3 = Graph.build("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    rep = hunt_graph(k3)
    assert rep.optimum == 0
    assert not rep.exists_optimum_cutting
    assert rep.exists_optimum_respecting


def test_p3_report(p3):
    rep = hunt_graph(p3)
    assert rep.optimum == 1
    assert rep.optimal_covers == 4
    assert not rep.exists_optimum_cutting  # all classes are singletons
    assert rep.exists_optimum_respecting


def test_counterexample_report(ccl8):
    rep = hunt_graph(ccl8)
    assert rep.n == 8
    assert rep.optimum == 6
    assert rep.exists_optimum_cutting
    assert rep.exists_optimum_respecting
    assert not cover_respects_critical_cliques(ccl8, rep.witness_cutting)
    assert cover_respects_critical_cliques(ccl8, rep.witness_respecting)


def test_hunt_stream_order_and_resume():
    full = list(hunt(3))
    assert [(r.n, r.index) for r in full] == [
        (1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (3, 3)
    ]
    tail = list(hunt(3, skip_until=(2, 1)))
    assert [(r.n, r.index) for r in tail] == [(3, 0), (3, 1), (3, 2), (3, 3)]


def test_hunt_connected_only():
    got = [r.canonical for r in hunt(3, connected_only=True)]
    assert len(got) == 1 + 1 + 2


def test_hunt_parallel_matches_sequential():
    seq = [(r.canonical, r.optimum, r.optimal_covers) for r in hunt(4)]
    par = [(r.canonical, r.optimum, r.optimal_covers) for r in hunt(4, parallel=True)]
    assert seq == par


def test_report_to_obj_shape(p3):
    obj = report_to_obj(hunt_graph(p3))
    assert obj["schema"] == "splitclust.hunt/1"
    assert obj["optimum"] == 1
    assert obj["existsOptimumCutting"] is False
    assert obj["existsOptimumRespecting"] is True
    assert obj["witnessCutting"] is None
    assert obj["witnessRespecting"] is not None
    import json

    json.dumps(obj)
