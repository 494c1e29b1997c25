from __future__ import annotations

import json

import pytest

from conftest import DATA, graphs_on
from splitclust.certificates import (
    EdgeAdd,
    EdgeDelete,
    ModificationSequence,
    NodeCliqueCover,
    P3Packing,
    SigmaCliqueCover,
    VertexSplit,
)
from splitclust.formats import (
    Certificate,
    FormatError,
    certificate_from_obj,
    certificate_to_obj,
    dumps_canonical,
    dumps_certificate,
    format_graph_text,
    graph_from_obj,
    graph_to_obj,
    instance_from_obj,
    instance_to_obj,
    kernel_trace_to_obj,
    load_certificate,
    load_graph,
    loads_certificate,
    parse_graph_text,
    reduction_trace_to_obj,
    save_certificate,
    save_graph,
)
from splitclust.graph import Graph, Split
from splitclust.kernel import kernelize
from splitclust.reductions import Instance, Problem, reduce_ncc_to_scc


# ---------------------------------------------------------------- graph text


def test_parse_basic_graph():
    text = "# toy\ngraph 3 2\nv a\nv b\nv c  # trailing comment\ne a b\ne b c\n"
    g = parse_graph_text(text)
    assert g.n == 3 and g.edge_count == 2
    assert g.has_edge("a", "b") and g.has_edge("b", "c")


def test_format_is_stable_fixpoint():
    for g in graphs_on(4):
        text = format_graph_text(g)
        assert format_graph_text(parse_graph_text(text)) == text


def test_fixture_files_round_trip():
    for name in ("ccl8.graph", "p3.graph", "k3.graph"):
        path = DATA / name
        g = load_graph(path)
        assert format_graph_text(g) == path.read_text()


def test_save_load_graph(tmp_path):
    g = Graph.build(["x", "y.0"], [("x", "y.0")])
    save_graph(g, tmp_path / "t.graph")
    assert load_graph(tmp_path / "t.graph") == g


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "missing 'graph"),
        ("graph two 1\n", "line 1"),
        ("graph 1 0\nw a\n", "unknown directive"),
        ("graph 1 0\nv a\nv a\n", "duplicate vertex"),
        ("graph 2 1\nv a\nv b\ne a a\n", "self-loop"),
        ("graph 2 1\nv a\nv b\ne a c\n", "not a declared vertex"),
        ("graph 2 2\nv a\nv b\ne a b\ne b a\n", "duplicate edge"),
        ("graph 3 1\nv a\nv b\ne a b\n", "announces 3 vertices"),
        ("graph 1 0\nv a.2\n", "line 2"),
        ("graph 1 0\nv a b c\n", "expected 'v <id>'"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(FormatError) as info:
        parse_graph_text(text)
    assert fragment in str(info.value)


# ---------------------------------------------------------------- JSON bodies


def test_dumps_canonical_is_sorted_with_newline():
    out = dumps_canonical({"b": 1, "a": [2, 1]})
    assert out.endswith("\n")
    assert out.index('"a"') < out.index('"b"')
    assert json.loads(out) == {"a": [2, 1], "b": 1}


def test_graph_obj_round_trip():
    for g in graphs_on(3):
        assert graph_from_obj(graph_to_obj(g)) == g


def test_instance_round_trip(p3):
    inst = Instance(Problem.CVS, p3, 2)
    back = instance_from_obj(instance_to_obj(inst))
    assert back.problem is Problem.CVS and back.budget == 2 and back.graph == p3


@pytest.mark.parametrize(
    "cert",
    [
        Certificate("scc", 4, "cover", SigmaCliqueCover.of([["a", "b"], ["b", "c"]])),
        Certificate("ncc", 2, "cover", NodeCliqueCover.of([["a", "b"], ["c"]])),
        Certificate("cevs", 1, "packing", P3Packing.of([("a", "b", "c")])),
        Certificate(
            "cevs",
            3,
            "sequence",
            ModificationSequence(
                (
                    EdgeAdd("a", "c"),
                    EdgeDelete("b", "c"),
                    VertexSplit(Split.of("a", ["b"], ["c"])),
                )
            ),
        ),
        Certificate("cvs", 0, "sequence", ModificationSequence(())),
    ],
)
def test_certificate_round_trip(cert):
    text = dumps_certificate(cert)
    back = loads_certificate(text)
    assert back.problem == cert.problem
    assert back.budget == cert.budget
    assert back.kind == cert.kind
    assert back.value == cert.value
    assert dumps_certificate(back) == text  # byte-stable


def test_certificate_files_round_trip(tmp_path):
    cert = Certificate("cevs", 6, "cover", SigmaCliqueCover.of([["a", "b"]]))
    save_certificate(cert, tmp_path / "c.json")
    back = load_certificate(tmp_path / "c.json")
    assert back.value == cert.value


def test_fixture_certificates_parse():
    cover = load_certificate(DATA / "two-set-cover.json")
    assert cover.kind == "cover" and cover.budget == 6 and cover.problem == "cevs"
    assert isinstance(cover.value, SigmaCliqueCover) and cover.value.weight == 9

    pack = load_certificate(DATA / "six-path-packing.json")
    assert isinstance(pack.value, P3Packing) and pack.value.size == 6

    for stem in ("a", "b", "c"):
        cert = load_certificate(DATA / f"respecting-cover-{stem}.json")
        assert isinstance(cert.value, SigmaCliqueCover)


def test_ncc_covers_deserialize_as_node_covers():
    obj = certificate_to_obj(
        Certificate("ncc", 2, "cover", NodeCliqueCover.of([["a"], ["b"]]))
    )
    back = certificate_from_obj(obj)
    assert isinstance(back.value, NodeCliqueCover)
    scc_obj = dict(obj, problem="scc")
    assert isinstance(certificate_from_obj(scc_obj).value, SigmaCliqueCover)


@pytest.mark.parametrize(
    "mangle",
    [
        lambda o: o.pop("schema"),
        lambda o: o.update(schema="splitclust.certificate/2"),
        lambda o: o.update(kind="proof"),
        lambda o: o.update(problem="sat"),
        lambda o: o.update(budget=-1),
        lambda o: o["payload"].update(sets=[[]]),
    ],
)
def test_certificate_validation(mangle):
    obj = certificate_to_obj(
        Certificate("scc", 2, "cover", SigmaCliqueCover.of([["a", "b"]]))
    )
    mangle(obj)
    with pytest.raises(FormatError):
        certificate_from_obj(obj)


def test_sequence_step_validation():
    obj = certificate_to_obj(
        Certificate("cevs", 1, "sequence", ModificationSequence((EdgeAdd("a", "b"),)))
    )
    obj["payload"]["steps"][0]["op"] = "paint"
    with pytest.raises(FormatError):
        certificate_from_obj(obj)


# ---------------------------------------------------------------- traces


def test_reduction_trace_serializes(p3):
    inst = Instance(Problem.NCC, p3, 2)
    _, trace = reduce_ncc_to_scc(inst)
    obj = reduction_trace_to_obj(trace)
    assert obj["schema"] == "splitclust.trace/1"
    assert obj["kind"] == trace.kind
    assert obj["from"]["problem"] == "ncc" and obj["to"]["problem"] == "scc"
    assert obj["to"]["budget"] == 29
    assert obj["parameters"]["ell"] == 5
    json.dumps(obj)  # serializable


def test_kernel_trace_serializes(k3):
    _, trace = kernelize(Instance(Problem.CVS, k3, 0))
    obj = kernel_trace_to_obj(trace)
    assert obj["schema"] == "splitclust.trace/1"
    assert [s["rule"] for s in obj["steps"]] == ["I", "I"]
    json.dumps(obj)
