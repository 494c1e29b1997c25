"""Counterexample hunting over all small graphs, up to isomorphism.

The question being hunted: is there a graph where *no* minimum-cost
editing-with-splitting solution keeps every closed-neighborhood class whole?
For each graph the hunter computes the exact optimum, enumerates *all*
optimal covers (with the uncapped label search, so the flags quantify over
genuinely every optimum), and reports whether some optimum cuts a class and
whether some optimum respects them all, with witnesses.

Isomorphism classes are enumerated by canonical form.  The canonical form of
an n-vertex graph is the lexicographically smallest adjacency bitstring over
all vertex orderings, reading the upper triangle column by column:
pair (i,j), i < j, ordered by (j,i).  That order lets the minimum be built
one position at a time: place vertices level by level, keep only the
orderings whose next column is minimal, and merge orderings that agree on
(used vertex set, adjacency patterns of the rest) since their continuations
coincide.  Level n is enumerated by extending each canonical (n-1)-vertex
graph with every possible neighborhood and canonicalizing; every n-vertex
graph arises this way from deleting its last vertex.  The n=8 level ships
as package data (12346 classes); smaller levels are computed on demand.
Scaling past n=8 is the bottleneck: level 9 alone has 274668 classes and
roughly 3.2 million extension canonizations.
"""

from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Iterator

from .certificates import (
    SigmaCliqueCover,
    cover_cost,
    cover_respects_critical_cliques,
)
from .graph import Graph
from .solvers import _cevs_search, _greedy_packing, _index_triples, _check_size


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------


def _canonical_bits(rows: list[int] | tuple[int, ...], n: int) -> int:
    if n <= 1:
        return 0
    states: set[tuple[int, tuple[tuple[int, int], ...]]] = {
        (0, tuple((v, 0) for v in range(n)))
    }
    bits = 0
    for placed in range(n):
        best = min(pat for _, pats in states for _, pat in pats)
        if placed:
            bits = (bits << placed) | best
        new_states = set()
        for used, pats in states:
            for v, pat in pats:
                if pat != best:
                    continue
                new_states.add(
                    (
                        used | 1 << v,
                        tuple(
                            (w, (pw << 1) | (rows[v] >> w & 1))
                            for w, pw in pats
                            if w != v
                        ),
                    )
                )
        states = new_states
    return bits


def canonical_form(g: Graph) -> tuple[int, int]:
    """(n, bits): the lexicographically minimal adjacency bitstring as an int."""
    return g.n, _canonical_bits(g.rows, g.n)


def canonical_key(g: Graph) -> str:
    n, bits = canonical_form(g)
    return f"{n}:{bits:x}"


def _rows_from_bits(n: int, bits: int) -> list[int]:
    rows = [0] * n
    total = n * (n - 1) // 2
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits >> (total - 1 - pos) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            pos += 1
    return rows


def graph_from_canonical(n: int, bits: int) -> Graph:
    rows = _rows_from_bits(n, bits)
    names = [str(i) for i in range(n)]
    edges = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rows[i] >> j & 1
    ]
    return Graph.build(names, edges)


def _connected(rows: list[int], n: int) -> bool:
    if n <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = rows[v] & ~seen
        seen |= new
        frontier |= new
    return seen == (1 << n) - 1


# ---------------------------------------------------------------------------
# enumeration, with the n=8 level as package data
# ---------------------------------------------------------------------------

_DATA_LEVELS = {8: "graphs8.txt"}
_LEVELS: dict[int, list[int]] = {}


def _extend_level(prev: list[int], n: int) -> list[int]:
    out: set[int] = set()
    for bits in prev:
        base = _rows_from_bits(n - 1, bits)
        for nbhd in range(1 << (n - 1)):
            rows = list(base)
            rows.append(nbhd)
            rest = nbhd
            while rest:
                i = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                rows[i] |= 1 << (n - 1)
            out.add(_canonical_bits(rows, n))
    return sorted(out)


def _load_data_level(n: int) -> list[int] | None:
    try:
        path = resources.files("splitclust").joinpath(f"data/{_DATA_LEVELS[n]}")
        text = path.read_text()
    except (KeyError, FileNotFoundError):
        return None
    return [int(line, 16) for line in text.split()]


def _level(n: int) -> list[int]:
    if n in _LEVELS:
        return _LEVELS[n]
    if n <= 1:
        out = [0]
    else:
        out = _load_data_level(n)
        if out is None:
            out = _extend_level(_level(n - 1), n)
    _LEVELS[n] = out
    return out


def enumerate_graphs(
    n: int, *, connected_only: bool = False, size_limit: int | None = None
) -> list[Graph]:
    """All n-vertex graphs up to isomorphism, canonical, in canonical-form order."""
    _check_size("hunt", n, size_limit)
    out = []
    for bits in _level(n):
        if connected_only and not _connected(_rows_from_bits(n, bits), n):
            continue
        out.append(graph_from_canonical(n, bits))
    return out


# ---------------------------------------------------------------------------
# per-graph analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HuntReport:
    n: int
    index: int  # position within the full level-n canonical list
    canonical: str
    graph: Graph
    optimum: int
    optimal_covers: int
    exists_optimum_cutting: bool
    exists_optimum_respecting: bool
    witness_cutting: SigmaCliqueCover | None
    witness_respecting: SigmaCliqueCover | None


def _family_key(fam) -> tuple:
    return tuple(sorted(tuple(v.sort_key for v in sorted(s)) for s in fam))


def _analyze(g: Graph, n: int, index: int, canonical: str) -> HuntReport:
    k = len(_greedy_packing(_index_triples(g)))
    while True:
        res = _cevs_search(g, k)
        if res is not None:
            optimum = res[0]
            break
        k += 1
    families = sorted(_cevs_search(g, optimum, collect_all=True), key=_family_key)
    assert families, "optimum found but no optimal cover enumerated"
    witness_cutting = witness_respecting = None
    for fam in families:
        cover = SigmaCliqueCover.of(fam)
        assert cover_cost(g, cover).total == optimum, "enumerated cover off-optimum"
        if cover_respects_critical_cliques(g, cover):
            if witness_respecting is None:
                witness_respecting = cover
        elif witness_cutting is None:
            witness_cutting = cover
    return HuntReport(
        n=n,
        index=index,
        canonical=canonical,
        graph=g,
        optimum=optimum,
        optimal_covers=len(families),
        exists_optimum_cutting=witness_cutting is not None,
        exists_optimum_respecting=witness_respecting is not None,
        witness_cutting=witness_cutting,
        witness_respecting=witness_respecting,
    )


def hunt_graph(g: Graph, *, size_limit: int | None = None) -> HuntReport:
    """Analyze one graph; its index refers to the canonical enumeration."""
    n, bits = canonical_form(g)
    _check_size("hunt", n, size_limit)
    level = _level(n)
    index = bisect.bisect_left(level, bits)
    assert index < len(level) and level[index] == bits, "canonical form not in level"
    return _analyze(g, n, index, f"{n}:{bits:x}")


def _hunt_worker(args) -> HuntReport:
    n, index, bits = args
    return _analyze(graph_from_canonical(n, bits), n, index, f"{n}:{bits:x}")


def hunt(
    max_n: int,
    *,
    connected_only: bool = False,
    parallel: bool = False,
    skip_until: tuple[int, int] | None = None,
    size_limit: int | None = None,
) -> Iterator[HuntReport]:
    """Reports for every graph with 1..max_n vertices, smallest first.

    `skip_until = (n, index)` resumes after that report (same flags assumed).
    """
    _check_size("hunt", max_n, size_limit)
    for n in range(1, max_n + 1):
        items = []
        for index, bits in enumerate(_level(n)):
            if skip_until is not None and (
                n < skip_until[0] or (n == skip_until[0] and index <= skip_until[1])
            ):
                continue
            if connected_only and not _connected(_rows_from_bits(n, bits), n):
                continue
            items.append((n, index, bits))
        if parallel and len(items) > 1:
            with ProcessPoolExecutor() as pool:
                yield from pool.map(_hunt_worker, items, chunksize=8)
        else:
            for item in items:
                yield _hunt_worker(item)


def report_to_obj(report: HuntReport) -> dict:
    from .formats import graph_to_obj

    def cover_obj(cover: SigmaCliqueCover | None):
        if cover is None:
            return None
        return [[str(v) for v in sorted(s)] for s in cover.sets]

    return {
        "schema": "splitclust.hunt/1",
        "n": report.n,
        "index": report.index,
        "canonical": report.canonical,
        "graph": graph_to_obj(report.graph),
        "optimum": report.optimum,
        "optimalCovers": report.optimal_covers,
        "existsOptimumCutting": report.exists_optimum_cutting,
        "existsOptimumRespecting": report.exists_optimum_respecting,
        "witnessCutting": cover_obj(report.witness_cutting),
        "witnessRespecting": cover_obj(report.witness_respecting),
    }
