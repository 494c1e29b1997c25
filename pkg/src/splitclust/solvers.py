"""Exact solvers for desk-scale instances.

All four problems are NP-hard, so everything here is branch and bound with
admissible lower bounds, built to be exact, deterministic, and honest about
scale: soft size limits reject inputs that would silently take hours, and
every limit can be overridden per call, via --size-limit-override on the
command line, or with the SPLITCLUST_SIZE_LIMIT environment variable.

* Edge covering by cliques (scc) branches on the lexicographically smallest
  uncovered edge over all cliques containing it, largest candidate first.
  The lower bound at a node is the sum over vertices v of the minimum number
  of cliques needed to node-cover v's still-uncovered neighborhood: any
  future set through v restricted to that neighborhood is one such clique,
  so the sum never exceeds the weight still to be paid.  Those minima are a
  memoized branch-and-bound of their own (on the smallest uncovered vertex,
  over maximal cliques containing it), shared with solve_ncc_exact.
* Splitting to clusters (cvs) is solved by covering edges with weight
  |V| - |isolated| + budget and realizing the cover as pull-out splits.
* Editing with splitting (cevs) assigns each vertex, in order, a nonempty
  set of cluster labels; a vertex in t labels pays t-1, and each earlier
  vertex pays 1 when the pair disagrees with adjacency (edge across labels,
  or non-edge sharing one).  Suffix packing numbers prune the search.

The cevs search caps the number of distinct labels at |V|; whether that cap
can ever exclude all optima is open, so it is flagged in the README, and the
hunter runs the same search uncapped.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor

from .certificates import (
    EdgeAdd,
    EdgeDelete,
    ModificationSequence,
    NodeCliqueCover,
    P3Packing,
    SigmaCliqueCover,
    VertexSplit,
    cover_cost,
    verify_modification_sequence,
)
from .graph import Graph, Split, VertexId, apply_split, remove_isolated
from .reductions import (
    Instance,
    Problem,
    cover_to_splits,
    splits_to_cover,
)

DEFAULT_SIZE_LIMITS = {
    "scc": 18,
    "ncc": 18,
    "cvs": 18,
    "cevs": 9,
    "packing": 10,
    "hunt": 8,
}


class SizeLimitExceeded(Exception):
    """The input is past the soft size limit for this operation."""


class NotNormalized(Exception):
    """A sequence must run additions, then deletions, then splits."""


def resolve_size_limit(kind: str, override: int | None) -> int:
    if override is not None:
        return override
    env = os.environ.get("SPLITCLUST_SIZE_LIMIT")
    if env is not None:
        return int(env)
    return DEFAULT_SIZE_LIMITS[kind]


def _check_size(kind: str, n: int, override: int | None) -> None:
    limit = resolve_size_limit(kind, override)
    if n > limit:
        raise SizeLimitExceeded(
            f"{n} vertices exceed the {kind} soft limit of {limit}"
            " (pass a larger size_limit to override)"
        )


# ---------------------------------------------------------------------------
# node clique cover numbers, memoized by vertex mask
# ---------------------------------------------------------------------------


class _NccTable:
    """Minimum clique-partition sizes of induced subgraphs of a fixed graph.

    Branches on the smallest vertex of the mask over the maximal cliques
    containing it; shrinking other classes shows maximal candidates suffice.
    """

    def __init__(self, rows: tuple[int, ...]):
        self.rows = rows
        self.memo: dict[int, int] = {0: 0}
        self.choice: dict[int, int] = {}

    def _maximal_cliques_at(self, v: int, mask: int) -> list[int]:
        rows = self.rows
        out: list[int] = []

        def grow(q: int, common: int, above: int) -> None:
            if common == 0:
                out.append(q)
                return
            cand = common & above
            while cand:
                bit = cand & -cand
                cand &= cand - 1
                x = bit.bit_length() - 1
                grow(q | bit, common & rows[x] & mask, ~((bit << 1) - 1))

        grow(1 << v, rows[v] & mask, ~0)
        return out

    def min_size(self, mask: int) -> int:
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        v = (mask & -mask).bit_length() - 1
        best = None
        best_q = 0
        for q in self._maximal_cliques_at(v, mask):
            r = 1 + self.min_size(mask & ~q)
            if best is None or r < best:
                best, best_q = r, q
        self.memo[mask] = best
        self.choice[mask] = best_q
        return best

    def partition(self, mask: int) -> list[int]:
        self.min_size(mask)
        out = []
        while mask:
            q = self.choice[mask]
            out.append(q)
            mask &= ~q
        return out


def solve_ncc_exact(
    g: Graph, budget: int, *, size_limit: int | None = None
) -> NodeCliqueCover | None:
    """A minimum clique partition of the vertices, if at most `budget` cliques do."""
    _check_size("ncc", g.n, size_limit)
    if g.n == 0:
        return NodeCliqueCover.of([])
    table = _NccTable(g.rows)
    full = (1 << g.n) - 1
    if table.min_size(full) > budget:
        return None
    return NodeCliqueCover.of(
        [g.vertices_of_mask(q) for q in table.partition(full)]
    )


# ---------------------------------------------------------------------------
# minimum-weight edge covering by cliques
# ---------------------------------------------------------------------------


def _cliques_with_edge(rows: tuple[int, ...], i: int, j: int) -> list[int]:
    """Every clique (as a mask) containing the edge ij, each exactly once."""
    out: list[int] = []

    def grow(q: int, cand: int) -> None:
        out.append(q)
        rest = cand
        while rest:
            bit = rest & -rest
            rest &= rest - 1
            x = bit.bit_length() - 1
            grow(q | bit, cand & rows[x] & ~((bit << 1) - 1))

    grow((1 << i) | (1 << j), rows[i] & rows[j])
    return out


def _first_uncovered(uncov: list[int]) -> tuple[int, int] | None:
    for i, row in enumerate(uncov):
        if row:
            return i, (row & -row).bit_length() - 1
    return None


def _scc_component_min(
    rows: tuple[int, ...], cap: int, forced_first: int | None = None
) -> tuple[int, list[int]] | None:
    """Minimum-weight clique family covering all edges, if its weight <= cap.

    `forced_first` preselects the set covering the first edge (used to fan
    branches out across processes); the subtree is searched identically.
    """
    n = len(rows)
    table = _NccTable(rows)
    best: tuple[int, list[int]] | None = None

    def bound(uncov: list[int]) -> int:
        return sum(table.min_size(row) for row in uncov if row)

    def cover_with(uncov: list[int], q: int) -> list[int]:
        out = list(uncov)
        rest = q
        while rest:
            x = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            out[x] &= ~q
        return out

    def dfs(uncov: list[int], weight: int, chosen: list[int]) -> None:
        nonlocal best
        limit = cap if best is None else min(cap, best[0] - 1)
        if weight + bound(uncov) > limit:
            return
        edge = _first_uncovered(uncov)
        if edge is None:
            best = (weight, list(chosen))
            return
        cands = sorted(
            _cliques_with_edge(rows, *edge), key=lambda q: (-q.bit_count(), q)
        )
        for q in cands:
            chosen.append(q)
            dfs(cover_with(uncov, q), weight + q.bit_count(), chosen)
            chosen.pop()

    start = list(rows)
    if forced_first is not None:
        dfs(cover_with(start, forced_first), forced_first.bit_count(), [forced_first])
    else:
        dfs(start, 0, [])
    return best


def _scc_branch_worker(args) -> tuple[int, list[int]] | None:
    rows, cap, q = args
    return _scc_component_min(tuple(rows), cap, forced_first=q)


def _scc_component_min_parallel(
    rows: tuple[int, ...], cap: int
) -> tuple[int, list[int]] | None:
    edge = _first_uncovered(list(rows))
    if edge is None:
        return (0, [])
    cands = sorted(_cliques_with_edge(rows, *edge), key=lambda q: (-q.bit_count(), q))
    with ProcessPoolExecutor() as pool:
        results = list(pool.map(_scc_branch_worker, [(rows, cap, q) for q in cands]))
    best = None
    for res in results:  # branch order; strict improvement keeps the earliest
        if res is not None and (best is None or res[0] < best[0]):
            best = res
    return best


def solve_scc_exact(
    g: Graph, budget: int, *, size_limit: int | None = None, parallel: bool = False
) -> SigmaCliqueCover | None:
    """A minimum-weight clique cover of the edges, if its weight <= budget.

    Solved component by component; a component's search is capped by its own
    lower bound plus the slack the other components' lower bounds leave.
    """
    _check_size("scc", g.n, size_limit)
    comps = g.component_masks()
    comp_rows: list[tuple[int, ...]] = []
    comp_verts: list[list[VertexId]] = []
    for comp in comps:
        idx = [i for i in range(g.n) if comp >> i & 1]
        pos = {v: p for p, v in enumerate(idx)}
        rows = tuple(
            sum(1 << pos[j] for j in idx if g.rows[i] >> j & 1) for i in idx
        )
        comp_rows.append(rows)
        comp_verts.append([g.vertices[i] for i in idx])
    lbs = [
        sum(_NccTable(rows).min_size(row) for row in rows if row)
        for rows in comp_rows
    ]
    slack = budget - sum(lbs)
    if slack < 0:
        return None
    total = 0
    sets: list[frozenset[VertexId]] = []
    for rows, verts, lb in zip(comp_rows, comp_verts, lbs):
        solve = _scc_component_min_parallel if parallel else _scc_component_min
        res = solve(rows, lb + slack)
        if res is None:
            return None
        weight, masks = res
        total += weight
        for q in masks:
            sets.append(
                frozenset(verts[x] for x in range(len(verts)) if q >> x & 1)
            )
    if total > budget:
        return None
    return SigmaCliqueCover.of(sets)


def solve_cvs_exact(
    inst: Instance, *, size_limit: int | None = None, parallel: bool = False
) -> ModificationSequence | None:
    """A shortest all-splits sequence to a cluster graph, if length <= budget."""
    if inst.problem is not Problem.CVS:
        raise ValueError(f"expected a cvs instance, got {inst.problem.value}")
    _check_size("cvs", inst.graph.n, size_limit)
    core, _ = remove_isolated(inst.graph)
    cover = solve_scc_exact(
        core, core.n + inst.budget, size_limit=core.n, parallel=parallel
    )
    if cover is None:
        return None
    pruned = SigmaCliqueCover.of(s for s in cover.sets if len(s) >= 2)
    seq = cover_to_splits(core, pruned)
    assert seq.length <= inst.budget, "cover weight drifted past the split budget"
    return seq


# ---------------------------------------------------------------------------
# induced-path packings
# ---------------------------------------------------------------------------


def _index_triples(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for j in range(g.n):
        row = g.rows[j]
        nbrs = [x for x in range(g.n) if row >> x & 1]
        for x, z in itertools.combinations(nbrs, 2):
            if not g.rows[x] >> z & 1:
                out.append((x, j, z))
    return sorted(out)


def _compatible(t1: tuple[int, int, int], t2: tuple[int, int, int]) -> bool:
    return t1[1] != t2[1] and len(set(t1) & set(t2)) <= 1


def _greedy_packing(triples: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    chosen: list[tuple[int, int, int]] = []
    for t in triples:
        if all(_compatible(t, c) for c in chosen):
            chosen.append(t)
    return chosen


def _suffix_packing_bounds(g: Graph) -> list[int]:
    """pk[i] = greedy packing size among triples using only vertices >= i.

    The center must lie in the suffix too, not just the endpoints: a path
    whose center is already assigned can be paid for by overlap the center
    has already bought, so counting it would overstate the remaining cost.
    """
    triples = _index_triples(g)
    pk = []
    for i in range(g.n + 1):
        pk.append(len(_greedy_packing([t for t in triples if min(t) >= i])))
    return pk


def _exact_packing(triples: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    m = len(triples)
    conflict = [0] * m
    for a in range(m):
        for b in range(a + 1, m):
            if not _compatible(triples[a], triples[b]):
                conflict[a] |= 1 << b
                conflict[b] |= 1 << a
    seed = _greedy_packing(triples)
    best_count = len(seed)
    best_sets = seed

    def centers_left(cand: int) -> int:
        seen = set()
        while cand:
            x = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            seen.add(triples[x][1])
        return len(seen)

    def dfs(cand: int, count: int, chosen: list[int]) -> None:
        nonlocal best_count, best_sets
        if count + min(cand.bit_count(), centers_left(cand)) <= best_count:
            return
        if cand == 0:
            if count > best_count:
                best_count = count
                best_sets = [triples[x] for x in chosen]
            return
        bit = cand & -cand
        x = bit.bit_length() - 1
        chosen.append(x)
        dfs(cand & ~conflict[x] & ~bit, count + 1, chosen)
        chosen.pop()
        dfs(cand & ~bit, count, chosen)

    dfs((1 << m) - 1, 0, [])
    return best_sets


def max_p3_packing(
    g: Graph, *, exact: bool = False, size_limit: int | None = None
) -> P3Packing:
    """A packing of induced three-vertex paths: pairwise sharing at most one
    vertex and with distinct centers.

    Greedy first-fit in lexicographic triple order by default; `exact` runs a
    branch and bound over the conflict structure instead (soft size limit,
    since packings certify lower bounds and greedy is always sound).
    """
    triples = _index_triples(g)
    if exact:
        _check_size("packing", g.n, size_limit)
        chosen = _exact_packing(triples)
    else:
        chosen = _greedy_packing(triples)
    return P3Packing.of(
        [(g.vertices[x], g.vertices[j], g.vertices[z]) for x, j, z in chosen]
    )


# ---------------------------------------------------------------------------
# editing with splitting
# ---------------------------------------------------------------------------


def _cevs_search(
    g: Graph,
    budget: int,
    *,
    label_cap: int | None = None,
    collect_all: bool = False,
):
    """Label-assignment search for covers of editing-with-splitting cost <= budget.

    Vertices are assigned label sets in lexicographic order.  A vertex taking
    t labels pays t-1 immediately (its share of the size excess), and each
    placed pair pays 1 when adjacency and label-sharing disagree, so the
    accumulated cost of a full assignment is exactly the cover cost.  Label
    counts need no explicit bound: every label is nonempty, so the excess
    already paid bounds them by |V| + budget.

    Returns the minimum (cost, sets) within budget or None; with
    `collect_all`, the set of all distinct covers of cost exactly `budget`
    (callers pass the optimum).
    """
    n = g.n
    rows = g.rows
    pk = _suffix_packing_bounds(g)
    members: list[int] = []
    assigned: list[int] = []
    best: tuple[int, tuple[int, ...]] | None = None
    found: set[frozenset[frozenset[VertexId]]] = set()

    def limit() -> int:
        if collect_all or best is None:
            return budget
        return min(budget, best[0] - 1)

    def dfs(i: int, cost: int) -> None:
        nonlocal best
        if cost + pk[i] > limit():
            return
        if i == n:
            if collect_all:
                found.add(frozenset(frozenset(g.vertices_of_mask(m)) for m in members))
            elif best is None or cost < best[0]:
                best = (cost, tuple(members))
            return
        L = len(members)
        ibit = 1 << i
        for t in itertools.count(1):
            if cost + (t - 1) + pk[i + 1] > limit():
                break
            for e in range(min(t, L), -1, -1):
                r = t - e
                if label_cap is not None and L + r > label_cap:
                    continue
                for combo in itertools.combinations(range(L), e):
                    emask = 0
                    for lbl in combo:
                        emask |= 1 << lbl
                    pair_cost = 0
                    for j in range(i):
                        shared = assigned[j] & emask
                        if rows[i] >> j & 1:
                            pair_cost += 0 if shared else 1
                        elif shared:
                            pair_cost += 1
                    newcost = cost + (t - 1) + pair_cost
                    if newcost + pk[i + 1] > limit():
                        continue
                    for lbl in combo:
                        members[lbl] |= ibit
                    members.extend([ibit] * r)
                    assigned.append(emask | (((1 << r) - 1) << L))
                    dfs(i + 1, newcost)
                    assigned.pop()
                    del members[L:]
                    for lbl in combo:
                        members[lbl] &= ~ibit
        return

    dfs(0, 0)
    if collect_all:
        return found
    if best is None:
        return None
    cost, masks = best
    return cost, [frozenset(g.vertices_of_mask(m)) for m in masks]


def solve_cevs_exact(
    inst: Instance,
    *,
    exact_packing: bool = False,
    size_limit: int | None = None,
) -> tuple[SigmaCliqueCover, ModificationSequence] | None:
    """A minimum-cost cover and a matching modification sequence, if <= budget.

    With `exact_packing`, an exact induced-path packing is tried first; when
    it already exceeds the budget the answer is NO with no cover search.
    """
    if inst.problem is not Problem.CEVS:
        raise ValueError(f"expected a cevs instance, got {inst.problem.value}")
    g = inst.graph
    _check_size("cevs", g.n, size_limit)
    if exact_packing:
        packing = max_p3_packing(g, exact=True, size_limit=g.n)
        if packing.size > inst.budget:
            return None
    res = _cevs_search(g, inst.budget, label_cap=g.n)
    if res is None:
        return None
    cost, sets = res
    cover = SigmaCliqueCover.of(sets)
    seq = cover_to_modifications(g, cover)
    assert seq.length == cost <= inst.budget, "sequence length drifted from cost"
    return cover, seq


# ---------------------------------------------------------------------------
# covers <-> modification sequences (cevs)
# ---------------------------------------------------------------------------


def cover_to_modifications(g: Graph, cover: SigmaCliqueCover) -> ModificationSequence:
    """A normalized sequence of exactly cover-cost modifications realizing a cover.

    Additions (non-edges inside sets), then deletions (edges outside all
    sets), then splits: pull-out splits realize the excess of the sets of
    size two or more, and one isolating split per redundant singleton set
    (a singleton {v} with v not isolated after editing) pays the rest.
    """
    breakdown = cover_cost(g, cover)  # NotACover / UnknownVertex on bad input
    inside: set[frozenset[VertexId]] = set()
    for s in cover.sets:
        for u, w in itertools.combinations(sorted(s), 2):
            inside.add(frozenset((u, w)))
    adds = sorted(
        (tuple(sorted(p)) for p in inside if not g.has_edge(*tuple(p))),
    )
    deletes = sorted(
        (u, w) for u, w in g.edges() if frozenset((u, w)) not in inside
    )
    edited = Graph.build(g.vertices, [tuple(sorted(p)) for p in inside])
    core, _ = remove_isolated(edited)
    pruned = SigmaCliqueCover.of(s for s in cover.sets if len(s) >= 2)
    pullouts = cover_to_splits(core, pruned) if core.n else ModificationSequence()
    redundant = sorted(
        next(iter(s))
        for s in cover.sets
        if len(s) == 1 and edited.degree(next(iter(s))) > 0
    )
    cur = pullouts.apply_to(core)
    splits = list(pullouts.steps)
    for v in redundant:
        x = min(c for c in cur.vertices if c.is_copy_of(v))
        split = Split(x, frozenset(cur.neighbors(x)), frozenset())
        cur = apply_split(cur, split)
        splits.append(VertexSplit(split))
    steps = (
        [EdgeAdd(u, w) for u, w in adds]
        + [EdgeDelete(u, w) for u, w in deletes]
        + splits
    )
    seq = ModificationSequence(tuple(steps))
    assert seq.length == breakdown.total, "sequence length differs from cover cost"
    check = verify_modification_sequence(g, seq, breakdown.total, "cevs")
    assert check.valid, f"realized sequence failed to verify: {check.reason}"
    return seq


def modifications_to_cover(g: Graph, seq: ModificationSequence) -> SigmaCliqueCover:
    """Read a cover off a normalized sequence; its cost is at most the length.

    The split suffix is contracted back over the edited graph, and one
    singleton is added per vertex left isolated by the edits, so the family
    covers every vertex.
    """
    if not seq.is_normalized():
        raise NotNormalized("sequence must run additions, deletions, then splits")
    edits = [s for s in seq.steps if not isinstance(s, VertexSplit)]
    splits = [s for s in seq.steps if isinstance(s, VertexSplit)]
    edited = ModificationSequence(tuple(edits)).apply_to(g)
    cover = splits_to_cover(edited, ModificationSequence(tuple(splits)))
    sets = set(cover.sets)
    covered = set().union(*sets) if sets else set()
    sets |= {frozenset((v,)) for v in edited.vertices if v not in covered}
    out = SigmaCliqueCover.of(sets)
    assert cover_cost(g, out).total <= seq.length, "cover cost exceeds length"
    return out
