"""Text and JSON wire formats.

Graphs travel as a line-oriented text format::

    # comment
    graph <n> <m>
    v <id>
    e <id> <id>

Ids are whitespace-free tokens; dot-separated suffix components are reserved
for split copies and must be 0 or 1.  Duplicate edges, self-loops, undeclared
endpoints, and count mismatches are parse errors.  Budgets never live in the
graph file; they travel on the command line or in certificate envelopes.

Certificates, instances, and traces travel as JSON envelopes with a schema
tag.  Serialization is canonical and byte-stable: members are emitted in the
library's vertex order and objects with sorted keys, so writing the same
value twice produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .certificates import (
    EdgeAdd,
    EdgeDelete,
    ModificationSequence,
    NodeCliqueCover,
    P3Packing,
    SigmaCliqueCover,
    VertexSplit,
)
from .graph import Graph, GraphError, Split, VertexId

CERTIFICATE_SCHEMA = "splitclust.certificate/1"
TRACE_SCHEMA = "splitclust.trace/1"
PROBLEMS = ("scc", "ncc", "cvs", "cevs")


class FormatError(Exception):
    """Malformed graph text or JSON envelope (CLI exit code 2)."""


# ---------------------------------------------------------------------------
# graph text format
# ---------------------------------------------------------------------------


def parse_graph_text(text: str) -> Graph:
    header: tuple[int, int] | None = None
    vertices: list[VertexId] = []
    seen_vertices: set[VertexId] = set()
    edges: list[tuple[VertexId, VertexId]] = []
    seen_edges: set[frozenset[VertexId]] = set()

    def fail(lineno: int, msg: str) -> None:
        raise FormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "graph" or len(fields) != 3:
                fail(lineno, "expected header 'graph <n> <m>'")
            try:
                header = (int(fields[1]), int(fields[2]))
            except ValueError:
                fail(lineno, "vertex and edge counts must be integers")
            if header[0] < 0 or header[1] < 0:
                fail(lineno, "vertex and edge counts must be non-negative")
            continue
        if fields[0] == "v":
            if len(fields) != 2:
                fail(lineno, "expected 'v <id>'")
            try:
                v = VertexId.parse(fields[1])
            except GraphError as exc:
                fail(lineno, str(exc))
            if v in seen_vertices:
                fail(lineno, f"duplicate vertex {v}")
            seen_vertices.add(v)
            vertices.append(v)
        elif fields[0] == "e":
            if len(fields) != 3:
                fail(lineno, "expected 'e <id> <id>'")
            try:
                u, w = VertexId.parse(fields[1]), VertexId.parse(fields[2])
            except GraphError as exc:
                fail(lineno, str(exc))
            if u == w:
                fail(lineno, f"self-loop at {u}")
            if u not in seen_vertices or w not in seen_vertices:
                missing = u if u not in seen_vertices else w
                fail(lineno, f"edge endpoint {missing} is not a declared vertex")
            pair = frozenset((u, w))
            if pair in seen_edges:
                fail(lineno, f"duplicate edge {u} {w}")
            seen_edges.add(pair)
            edges.append((u, w))
        else:
            fail(lineno, f"unknown directive {fields[0]!r}")
    if header is None:
        raise FormatError("missing 'graph <n> <m>' header")
    if header != (len(vertices), len(edges)):
        raise FormatError(
            f"header announces {header[0]} vertices / {header[1]} edges,"
            f" found {len(vertices)} / {len(edges)}"
        )
    return Graph.build(vertices, edges)


def format_graph_text(g: Graph) -> str:
    lines = [f"graph {g.n} {g.edge_count}"]
    lines += [f"v {v}" for v in g.vertices]
    lines += [f"e {u} {w}" for u, w in g.edges()]
    return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> Graph:
    return parse_graph_text(Path(path).read_text())


def save_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph_text(g))


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _ids(vs: Iterable[VertexId]) -> list[str]:
    return [str(v) for v in sorted(vs)]


def graph_to_obj(g: Graph) -> dict:
    return {
        "vertices": [str(v) for v in g.vertices],
        "edges": [[str(u), str(w)] for u, w in g.edges()],
    }


def graph_from_obj(obj) -> Graph:
    try:
        return Graph.build(obj["vertices"], [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError, GraphError) as exc:
        raise FormatError(f"bad graph object: {exc}") from exc


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """A certificate envelope: what it claims and the witness itself."""

    problem: str
    budget: int
    kind: str  # cover | sequence | packing
    value: object


def _steps_to_obj(seq: ModificationSequence) -> list[dict]:
    out = []
    for step in seq.steps:
        if isinstance(step, EdgeAdd):
            out.append({"op": "add", "u": str(step.u), "v": str(step.v)})
        elif isinstance(step, EdgeDelete):
            out.append({"op": "delete", "u": str(step.u), "v": str(step.v)})
        else:
            s = step.split
            out.append(
                {
                    "op": "split",
                    "target": str(s.target),
                    "left": _ids(s.neighbors_a),
                    "right": _ids(s.neighbors_b),
                }
            )
    return out


def _steps_from_obj(items) -> ModificationSequence:
    steps = []
    for item in items:
        op = item.get("op")
        if op == "add":
            steps.append(EdgeAdd(VertexId.parse(item["u"]), VertexId.parse(item["v"])))
        elif op == "delete":
            steps.append(
                EdgeDelete(VertexId.parse(item["u"]), VertexId.parse(item["v"]))
            )
        elif op == "split":
            steps.append(
                VertexSplit(
                    Split.of(item["target"], item["left"], item["right"])
                )
            )
        else:
            raise FormatError(f"unknown modification op {op!r}")
    return ModificationSequence(tuple(steps))


def certificate_to_obj(cert: Certificate) -> dict:
    if cert.kind == "cover":
        payload = {"sets": [_ids(s) for s in cert.value.sets]}
    elif cert.kind == "sequence":
        payload = {"steps": _steps_to_obj(cert.value)}
    elif cert.kind == "packing":
        payload = {
            "triples": [[str(x), str(y), str(z)] for x, y, z in cert.value.triples]
        }
    else:
        raise ValueError(f"unknown certificate kind {cert.kind!r}")
    return {
        "schema": CERTIFICATE_SCHEMA,
        "problem": cert.problem,
        "budget": cert.budget,
        "kind": cert.kind,
        "payload": payload,
    }


def certificate_from_obj(obj) -> Certificate:
    try:
        if obj.get("schema") != CERTIFICATE_SCHEMA:
            raise FormatError(f"unknown certificate schema {obj.get('schema')!r}")
        problem = obj["problem"]
        if problem not in PROBLEMS:
            raise FormatError(f"unknown problem {problem!r}")
        budget = obj["budget"]
        if not isinstance(budget, int) or budget < 0:
            raise FormatError("budget must be a non-negative integer")
        kind = obj["kind"]
        payload = obj["payload"]
        if kind == "cover":
            cover_cls = NodeCliqueCover if problem == "ncc" else SigmaCliqueCover
            value = cover_cls.of(payload["sets"])
        elif kind == "sequence":
            value = _steps_from_obj(payload["steps"])
        elif kind == "packing":
            value = P3Packing.of([tuple(t) for t in payload["triples"]])
        else:
            raise FormatError(f"unknown certificate kind {kind!r}")
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise FormatError(f"bad certificate object: {exc}") from exc
    return Certificate(problem, budget, kind, value)


def dumps_certificate(cert: Certificate) -> str:
    return dumps_canonical(certificate_to_obj(cert))


def loads_certificate(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"certificate is not valid JSON: {exc}") from exc
    return certificate_from_obj(obj)


def load_certificate(path: str | Path) -> Certificate:
    return loads_certificate(Path(path).read_text())


def save_certificate(cert: Certificate, path: str | Path) -> None:
    Path(path).write_text(dumps_certificate(cert))


# ---------------------------------------------------------------------------
# instances and traces
# ---------------------------------------------------------------------------


def instance_to_obj(inst) -> dict:
    return {
        "problem": str(inst.problem.value),
        "budget": inst.budget,
        "graph": graph_to_obj(inst.graph),
    }


def instance_from_obj(obj):
    from .reductions import Instance, Problem

    try:
        problem = Problem(obj["problem"])
        budget = obj["budget"]
        if not isinstance(budget, int) or budget < 0:
            raise FormatError("budget must be a non-negative integer")
        return Instance(problem, graph_from_obj(obj["graph"]), budget)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad instance object: {exc}") from exc


def reduction_trace_to_obj(trace) -> dict:
    return {
        "schema": TRACE_SCHEMA,
        "kind": trace.kind,
        "from": instance_to_obj(trace.source),
        "to": instance_to_obj(trace.target),
        "parameters": trace.parameters,
    }


def kernel_trace_to_obj(trace) -> dict:
    from .kernel import IsolateRemoval, RuleIStep, RuleIIStep

    steps = []
    for step in trace.steps:
        if isinstance(step, IsolateRemoval):
            steps.append({"rule": "isolate-removal", "vertices": _ids(step.vertices)})
        elif isinstance(step, RuleIStep):
            steps.append(
                {
                    "rule": "I",
                    "removed": str(step.removed),
                    "cascaded": _ids(step.cascaded),
                }
            )
        elif isinstance(step, RuleIIStep):
            steps.append({"rule": "II"})
        else:
            raise ValueError(f"unknown kernel step {step!r}")
    return {
        "schema": TRACE_SCHEMA,
        "kind": "kernelize",
        "from": instance_to_obj(trace.source),
        "to": instance_to_obj(trace.target),
        "steps": steps,
    }
