"""Exact reference algorithms: chromatic index, list colourability,
maximum complement matchings, and exhaustive small-instance enumeration.

The chromatic-index search runs on a compiled kernel when the extension
built from ``_kernel.pyx`` is importable (and the instance fits in 64
bits); otherwise the pure-Python twin takes over.  Set ``HYPERCHROM_PURE=1``
to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from time import monotonic
from typing import Iterable, Iterator, Mapping

from . import _kernel_py, _matching
from .extremal import ComplementMatching
from .hypercore import Hypergraph, canonical_form, line_graph, normalize_lists

__all__ = [
    "OracleBudget",
    "BudgetExceeded",
    "ListColourResult",
    "exact_chromatic_index",
    "exact_list_colourable",
    "maximum_complement_matching",
    "enumerate_hypergraphs",
    "kernel_name",
]

_compiled = None
if not os.environ.get("HYPERCHROM_PURE"):
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None


def kernel_name() -> str:
    """Which chromatic kernel imports selected: 'cython' or 'python'."""
    return _compiled.IMPLEMENTATION if _compiled is not None else _kernel_py.IMPLEMENTATION


def _solve_chromatic(adj: list[int], time_cap_ms: int) -> tuple[int, list[int], bool]:
    if _compiled is not None and len(adj) <= 64:
        return _compiled.solve_chromatic(adj, time_cap_ms)
    return _kernel_py.solve_chromatic(adj, time_cap_ms)


@dataclass(frozen=True)
class OracleBudget:
    """Resource limits for the exact routines."""

    max_edges: int = 24
    max_colours: int = 2**31 - 1
    time_cap_ms: int = 60_000

    def __post_init__(self):
        if self.max_edges < 1 or self.max_colours < 1 or self.time_cap_ms < 1:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class BudgetExceeded:
    """Typed refusal: the oracle never returns a number it has not proved."""

    kind: str  # 'edges' | 'time' | 'colours'
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ListColourResult:
    status: str  # 'yes' | 'no' | 'budget'
    witness: dict[int, int] | None = None
    detail: str = ""


def exact_chromatic_index(
    h: Hypergraph, budget: OracleBudget | None = None
) -> int | BudgetExceeded:
    """Chromatic index of H, i.e. the chromatic number of its line graph.

    Branch and bound with a greedy clique lower bound, saturation-guided
    branching and first-use colour symmetry breaking; refuses with a typed
    BudgetExceeded instead of guessing when a limit is hit.
    """
    budget = budget or OracleBudget()
    if h.m > budget.max_edges:
        return BudgetExceeded("edges", f"e(H)={h.m} exceeds {budget.max_edges}")
    if h.m == 0:
        return 0
    adj = list(line_graph(h).adj)
    chi, _col, completed = _solve_chromatic(adj, budget.time_cap_ms)
    if not completed:
        return BudgetExceeded("time", f"best upper bound so far: {chi}")
    if chi > budget.max_colours:
        return BudgetExceeded("colours", f"needs {chi} colours")
    return chi


def exact_list_colourable(
    h: Hypergraph,
    lists: Mapping[int, Iterable[int]],
    budget: OracleBudget | None = None,
) -> ListColourResult:
    """Decide list colourability by backtracking over edges.

    Edges are processed by ascending list size (ties by id); after each
    assignment every uncoloured intersecting edge must keep a feasible
    colour, otherwise the branch dies immediately.  A 'yes' carries a
    witness colouring.
    """
    budget = budget or OracleBudget()
    if h.m > budget.max_edges:
        return ListColourResult("budget", detail=f"e(H)={h.m} exceeds {budget.max_edges}")
    allowed = normalize_lists(h, lists)
    if h.m == 0:
        return ListColourResult("yes", witness={})
    order = sorted(range(h.m), key=lambda i: (len(allowed[i]), i))
    adj_rows = line_graph(h).adj
    nbrs = [
        [j for j in range(h.m) if adj_rows[i] >> j & 1] for i in range(h.m)
    ]
    col: dict[int, int] = {}
    deadline = monotonic() + budget.time_cap_ms / 1000.0
    state = {"nodes": 0, "timeout": False}

    def feasible(e: int) -> frozenset[int]:
        taken = {col[f] for f in nbrs[e] if f in col}
        return allowed[e] - taken

    def dfs(i: int) -> bool:
        state["nodes"] += 1
        if state["nodes"] % 2048 == 0 and monotonic() > deadline:
            state["timeout"] = True
            return False
        if i == h.m:
            return True
        e = order[i]
        for c in sorted(feasible(e)):
            col[e] = c
            if all(f in col or feasible(f) for f in nbrs[e]):
                if dfs(i + 1):
                    return True
                if state["timeout"]:
                    return False
            del col[e]
        return False

    ok = dfs(0)
    if state["timeout"]:
        return ListColourResult("budget", detail="time cap hit")
    if ok:
        return ListColourResult("yes", witness=dict(col))
    return ListColourResult("no")


def maximum_complement_matching(h: Hypergraph) -> ComplementMatching:
    """Maximum set of disjoint pairs of vertex-disjoint edges (blossom)."""
    masks = h.edge_masks
    comp = [
        [j for j in range(h.m) if j != i and not masks[i] & masks[j]]
        for i in range(h.m)
    ]
    cm = ComplementMatching(tuple(_matching.max_matching(h.m, comp)))
    cm.validate(h)
    return cm


def enumerate_hypergraphs(
    n: int,
    t: int,
    *,
    min_size: int = 2,
    max_edges: int = 10,
    intersecting: bool = False,
) -> Iterator[Hypergraph]:
    """Stream all non-empty codegree-<=t hypergraphs on n vertices, up to
    isomorphism.

    Edge multisets over subsets of size >= min_size, at most max_edges
    edges, optionally restricted to pairwise-intersecting families.  Hard
    guards n <= 6 and max_edges <= 10 keep the search exhaustible; exactly
    one representative per isomorphism class is yielded (dedup by canonical
    form).  The empty multiset is skipped.
    """
    if not 1 <= n <= 6:
        raise ValueError("enumeration supports 1 <= n <= 6")
    if not 1 <= max_edges <= 10:
        raise ValueError("enumeration supports 1 <= max_edges <= 10")
    if t < 1:
        raise ValueError("t must be positive")
    if min_size < 1:
        raise ValueError("min_size must be positive")

    subsets = []
    for mask in range(1, 1 << n):
        if mask.bit_count() >= min_size:
            subsets.append(mask)
    subsets.sort(key=lambda m: (m.bit_count(), m))
    verts_of = {
        mask: tuple(v for v in range(n) if mask >> v & 1) for mask in subsets
    }

    seen: set[tuple] = set()
    chosen: list[int] = []
    pair_counts: dict[tuple[int, int], int] = {}

    def pairs(mask: int) -> list[tuple[int, int]]:
        vs = verts_of[mask]
        return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]

    def emit() -> Hypergraph | None:
        h = Hypergraph(n, [verts_of[m] for m in chosen])
        key = canonical_form(h)
        if key in seen:
            return None
        seen.add(key)
        return h

    def rec(start: int):
        for idx in range(start, len(subsets)):
            mask = subsets[idx]
            if intersecting and any(mask & c == 0 for c in chosen):
                continue
            ps = pairs(mask)
            if any(pair_counts.get(p, 0) >= t for p in ps):
                continue
            for p in ps:
                pair_counts[p] = pair_counts.get(p, 0) + 1
            chosen.append(mask)
            h = emit()
            if h is not None:
                yield h
            if len(chosen) < max_edges:
                yield from rec(idx)
            chosen.pop()
            for p in ps:
                pair_counts[p] -= 1

    yield from rec(0)
