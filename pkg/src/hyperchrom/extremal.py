"""Colouring hypergraphs with nearly as many edges as colours.

When e(H) is close to t*n, proper colourings from tn-sized lists hinge on
finding a few disjoint edge pairs that can share a colour (a *complement
matching*), or a small family of pairwise-intersecting edges whose designated
pairs have small common neighbourhoods (a *useful family*), which manufactures
such a matching.  This module builds both and colours from them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping

from . import _matching
from .exactarith import as_fraction, cmp_to_scaled_sqrt, at_least_scaled_sqrt
from .hypercore import (
    ColouringFailure,
    Hypergraph,
    line_graph,
    normalize_lists,
    predicates,
)

__all__ = [
    "ComplementMatching",
    "UsefulFamily",
    "ExtremalReport",
    "is_t_useful",
    "maximal_complement_matching",
    "colour_from_matching",
    "useful_cover_colour",
    "find_useful_family",
    "colour_extremal",
]

logger = logging.getLogger(__name__)

_FAMILY_SEARCH_CAP = 50_000


@dataclass(frozen=True)
class ComplementMatching:
    """Disjoint pairs of vertex-disjoint edges (a matching in the complement
    of the line graph)."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def covered(self) -> frozenset[int]:
        return frozenset(x for p in self.pairs for x in p)

    def validate(self, h: Hypergraph) -> None:
        seen: set[int] = set()
        for a, b in self.pairs:
            if not (0 <= a < h.m and 0 <= b < h.m) or a == b:
                raise ValueError(f"bad pair ({a}, {b})")
            if a in seen or b in seen:
                raise ValueError(f"edge reused across pairs: ({a}, {b})")
            seen.update((a, b))
            if h.edge_mask(a) & h.edge_mask(b):
                raise ValueError(f"edges {a} and {b} share a vertex")


@dataclass(frozen=True)
class UsefulFamily:
    """Ordered family e_1..e_{2r+2}; the designated pairs are consecutive
    (edges[0], edges[1]), (edges[2], edges[3]), ...  ``pair_witnesses`` holds
    one vertex per designated pair (a common vertex, or the hub vertex the
    search grew the pair from)."""

    edges: tuple[int, ...]
    pair_witnesses: tuple[int, ...]

    @property
    def pair_count(self) -> int:
        return len(self.edges) // 2

    def designated_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (self.edges[2 * i], self.edges[2 * i + 1]) for i in range(self.pair_count)
        )


@dataclass(frozen=True)
class ExtremalReport:
    rung: str | None
    attempts: tuple[str, ...]
    size_premise_ok: bool
    matching_size: int | None = None
    family_found: bool = False


def is_t_useful(h: Hypergraph, t: int, e: int, f: int) -> bool:
    """Do e and f intersect with |N(e) ∩ N(f)| <= t*n - 3 (both excluded)?"""
    if t < 1:
        raise ValueError("t must be positive")
    if e == f or not (0 <= e < h.m and 0 <= f < h.m):
        raise ValueError(f"need two distinct edge ids, got {e}, {f}")
    if not h.edge_mask(e) & h.edge_mask(f):
        return False
    adj = line_graph(h).adj
    common = adj[e] & adj[f]  # excludes e and f (no self-loops)
    return common.bit_count() <= t * h.n - 3


def maximal_complement_matching(h: Hypergraph, strategy: str = "greedy") -> ComplementMatching:
    """Pairs of vertex-disjoint edges: greedy first-fit or exact maximum."""
    masks = h.edge_masks
    if strategy == "greedy":
        used: set[int] = set()
        pairs = []
        for i in range(h.m):
            if i in used:
                continue
            for j in range(i + 1, h.m):
                if j not in used and not masks[i] & masks[j]:
                    pairs.append((i, j))
                    used.update((i, j))
                    break
        cm = ComplementMatching(tuple(pairs))
    elif strategy == "maximum":
        comp_adj = [
            [j for j in range(h.m) if j != i and not masks[i] & masks[j]]
            for i in range(h.m)
        ]
        cm = ComplementMatching(tuple(_matching.max_matching(h.m, comp_adj)))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    cm.validate(h)
    return cm


def colour_from_matching(
    h: Hypergraph,
    matching: ComplementMatching,
    lists: Mapping[int, Iterable[int]],
) -> dict[int, int] | ColouringFailure:
    """Colour with e(H) - |matching| colour classes: one per matched pair,
    one per leftover edge.

    Requires every list to have at least e(H) - |matching| colours.  Classes
    are processed by ascending flexibility (list size for singletons, common
    list size for pairs); a used colour disappears from every list.  Pairs
    whose lists have become disjoint are deferred and finished with a system
    of distinct representatives, which the size precondition guarantees.
    """
    matching.validate(h)
    allowed = normalize_lists(h, lists)
    k = h.m - matching.size
    for i in range(h.m):
        if len(allowed[i]) < k:
            raise ValueError(
                f"edge {i} has {len(allowed[i])} colours; need at least {k}"
            )
    covered = matching.covered()
    classes: list[tuple[int, ...]] = sorted(
        [tuple(sorted(p)) for p in matching.pairs]
        + [(i,) for i in range(h.m) if i not in covered]
    )
    avail: dict[int, set[int]] = {i: set(allowed[i]) for i in range(h.m)}
    colouring: dict[int, int] = {}
    pending = set(range(len(classes)))

    while pending:
        best_ci = None
        best_key: tuple | None = None
        for ci in pending:
            cls = classes[ci]
            if len(cls) == 1:
                opts = avail[cls[0]]
            else:
                opts = avail[cls[0]] & avail[cls[1]]
            if not opts:
                continue
            key = (len(opts), cls[0])
            if best_key is None or key < best_key:
                best_key = key
                best_ci = ci
        if best_ci is None:
            break  # only common-free pairs remain
        cls = classes[best_ci]
        if len(cls) == 1:
            colour = min(avail[cls[0]])
        else:
            colour = min(avail[cls[0]] & avail[cls[1]])
        for e in cls:
            colouring[e] = colour
        pending.discard(best_ci)
        for s in avail.values():
            s.discard(colour)

    if pending:
        # distinct fresh colours for the leftover pair members
        edges = [e for ci in pending for e in classes[ci]]
        assignment = _distinct_representatives(edges, avail)
        if assignment is None:
            return ColouringFailure(
                stage="colour_from_matching",
                detail="no system of distinct representatives for deferred pairs",
            )
        colouring.update(assignment)
    return colouring


def _distinct_representatives(
    edges: list[int], avail: dict[int, set[int]]
) -> dict[int, int] | None:
    """Assign a distinct colour from its own pool to each edge, by
    bipartite augmenting paths."""
    colour_of: dict[int, int] = {}  # colour -> edge

    def try_assign(e: int, banned: set[int]) -> bool:
        for c in sorted(avail[e]):
            if c in banned:
                continue
            banned.add(c)
            if c not in colour_of or try_assign(colour_of[c], banned):
                colour_of[c] = e
                return True
        return False

    for e in edges:
        if not try_assign(e, set()):
            return None
    return {e: c for c, e in colour_of.items()}


def useful_cover_colour(
    h: Hypergraph,
    t: int,
    family: UsefulFamily,
    lists: Mapping[int, Iterable[int]],
) -> dict[int, int] | ColouringFailure:
    """Turn a useful family into a complement matching of size r+1 and colour.

    With r = e(H) - t*n >= 0 and a family of 2r+2 pairwise-intersecting edges
    whose designated pairs are t-useful, each pair's small common
    neighbourhood leaves, at every step, some edge disjoint from one of the
    two; pairing them up yields r+1 disjoint pairs, so e(H) - (r+1) = tn - 1
    classes suffice.  Lists must have at least t*n colours.
    """
    r = h.m - t * h.n
    if r < 0:
        raise ValueError("useful_cover_colour needs e(H) >= t*n")
    fam = family.edges
    if len(fam) != 2 * r + 2:
        raise ValueError(f"family must have {2 * r + 2} edges, got {len(fam)}")
    if len(set(fam)) != len(fam):
        raise ValueError("family edges must be distinct")
    adj = line_graph(h).adj
    for i, a in enumerate(fam):
        for b in fam[i + 1 :]:
            if not adj[a] >> b & 1:
                raise ValueError(f"family edges {a} and {b} do not intersect")
    for a, b in family.designated_pairs():
        if not is_t_useful(h, t, a, b):
            raise ValueError(f"designated pair ({a}, {b}) is not {t}-useful")
    allowed = normalize_lists(h, lists)
    if any(len(allowed[i]) < t * h.n for i in range(h.m)):
        raise ValueError("every list needs at least t*n colours")

    full = (1 << h.m) - 1
    chosen_mask = 0
    pairs: list[tuple[int, int]] = []
    for a, b in family.designated_pairs():
        excluded = (adj[a] & adj[b]) | (1 << a) | (1 << b) | chosen_mask
        s_mask = full & ~excluded
        if s_mask == 0:
            raise RuntimeError(
                "internal: cover step ran out of edges; counting bound violated"
            )
        f = (s_mask & -s_mask).bit_length() - 1
        misses_a = not adj[a] >> f & 1
        misses_b = not adj[b] >> f & 1
        if misses_a and misses_b:
            partner = min(a, b)
        elif misses_a:
            partner = a
        elif misses_b:
            partner = b
        else:
            raise RuntimeError("internal: selected edge meets both pair members")
        pairs.append((min(f, partner), max(f, partner)))
        chosen_mask |= 1 << f
    cm = ComplementMatching(tuple(sorted(pairs)))
    cm.validate(h)
    return colour_from_matching(h, cm, allowed)


def _plane_scale(n: int) -> int:
    """The k with k^2 - k + 2 <= n <= k^2 + k + 1 (unique for n >= 2)."""
    for k in range(max(1, isqrt(n) - 1), isqrt(n) + 2):
        if k * k - k + 2 <= n <= k * k + k + 1:
            return k
    raise ValueError(f"no plane scale for n={n}")


def _assemble_family(
    h: Hypergraph,
    adj: tuple[int, ...],
    t: int,
    pool: list[int],
    need_pairs: int,
    pair_ok,
    witness_fn,
) -> UsefulFamily | None:
    """Backtracking search for need_pairs disjoint designated pairs from the
    pool, keeping all selected edges pairwise intersecting."""
    cand_pairs = []
    for i, a in enumerate(pool):
        for b in pool[i + 1 :]:
            if adj[a] >> b & 1 and pair_ok(a, b) and is_t_useful(h, t, a, b):
                cand_pairs.append((a, b))
    budget = [_FAMILY_SEARCH_CAP]

    def dfs(start: int, chosen: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
        if len(chosen) == need_pairs:
            return chosen
        if budget[0] <= 0:
            return None
        for idx in range(start, len(cand_pairs)):
            budget[0] -= 1
            a, b = cand_pairs[idx]
            flat = [x for p in chosen for x in p]
            if a in flat or b in flat:
                continue
            if not all(adj[a] >> x & 1 and adj[b] >> x & 1 for x in flat):
                continue
            res = dfs(idx + 1, chosen + [(a, b)])
            if res is not None:
                return res
        return None

    found = dfs(0, [])
    if found is None:
        return None
    edges = tuple(x for p in found for x in p)
    wits = tuple(witness_fn(a, b) for a, b in found)
    return UsefulFamily(edges=edges, pair_witnesses=wits)


def find_useful_family(
    h: Hypergraph,
    t: int,
    alpha=Fraction(1, 4),
    delta=Fraction(1, 10),
    trace: list[str] | None = None,
) -> UsefulFamily | None:
    """Search for a useful family of 2(e(H) - t*n) + 2 edges.

    Walks four construction branches, from 'few edges below plane scale' to a
    hub-vertex growth argument, each gated by its exact numeric premise; any
    candidate family is mechanically certified (distinct, pairwise
    intersecting, designated pairs t-useful) before being returned.  Returns
    None when no branch both opens and certifies; at small scales that is the
    common honest outcome.
    """
    alpha = as_fraction(alpha)
    delta = as_fraction(delta)
    if not (0 < alpha < 1 and 0 < delta < 1):
        raise ValueError("alpha and delta must lie in (0, 1)")
    if t < 1:
        raise ValueError("t must be positive")
    notes = trace if trace is not None else []
    n, m = h.n, h.m
    if n < 2 or m < 2:
        notes.append("instance too small")
        return None
    r = max(0, m - t * n)
    need_edges = 2 * r + 2
    if need_edges > m:
        notes.append(f"needs {need_edges} edges, only {m} present")
        return None
    k = _plane_scale(n)
    sizes = [len(e) for e in h.edges]
    a_minus = [i for i in range(m) if sizes[i] <= k - 1]
    a_plus = [i for i in range(m) if sizes[i] == k]
    a_all = sorted(a_minus + a_plus)
    b_big = [i for i in range(m) if sizes[i] >= k + 1]
    notes.append(
        f"scale k={k}; |A-|={len(a_minus)} |A+|={len(a_plus)} |B|={len(b_big)} r={r}"
    )

    adj = line_graph(h).adj
    masks = h.edge_masks
    comp_adj = [
        [j for j in range(m) if j != i and not masks[i] & masks[j]] for i in range(m)
    ]
    nmatch = _matching.max_matching(m, comp_adj)
    if len(nmatch) > r:
        notes.append(
            f"maximum complement matching has {len(nmatch)} > r={r} pairs;"
            " the matching route already suffices"
        )
        return None
    matched = {x for p in nmatch for x in p}

    size_premise = all(at_least_scaled_sqrt(s, 1 - delta, n) for s in sizes)
    if not size_premise:
        notes.append("note: some edge is smaller than (1-delta)*sqrt(n)")

    def common_vertex(a: int, b: int) -> int:
        both = masks[a] & masks[b]
        return (both & -both).bit_length() - 1

    def overlap_ok(a: int, b: int) -> bool:
        cnt = (masks[a] & masks[b]).bit_count()
        return cnt * alpha.denominator <= alpha.numerator * k

    # branch 1: all of A is few ⇒ any pairs from A \ V(N)
    if 2 * len(a_all) * delta.numerator <= t * delta.denominator:
        pool = [i for i in a_all if i not in matched]
        fam = _assemble_family(
            h, adj, t, pool, r + 1, lambda a, b: True, common_vertex
        )
        if fam is not None:
            notes.append("branch 1 (small A) succeeded")
            return fam
        notes.append("branch 1 open but found no certified family")
    else:
        notes.append("branch 1 gate closed")

    # branch 2: A- is few ⇒ low-overlap pairs from A \ V(N)
    if 4 * len(a_minus) * delta.numerator <= t * delta.denominator:
        pool = [i for i in a_all if i not in matched]
        fam = _assemble_family(h, adj, t, pool, r + 1, overlap_ok, common_vertex)
        if fam is not None:
            notes.append("branch 2 (small A-) succeeded")
            return fam
        notes.append("branch 2 open but found no certified family")
    else:
        notes.append("branch 2 gate closed")

    # branch 3: A+ dominated by A- ⇒ low-overlap pairs from A- \ V(N)
    if cmp_to_scaled_sqrt(len(a_plus), alpha * len(a_minus), n) <= 0:
        pool = [i for i in a_minus if i not in matched]
        fam = _assemble_family(h, adj, t, pool, r + 1, overlap_ok, common_vertex)
        if fam is not None:
            notes.append("branch 3 (A- heavy) succeeded")
            return fam
        notes.append("branch 3 open but found no certified family")
    else:
        notes.append("branch 3 gate closed")

    # branch 4: grow pairs around high-degree hub vertices
    fam = _hub_growth(h, adj, masks, t, alpha, delta, k, r, a_minus, a_plus, matched, notes)
    if fam is not None:
        notes.append("branch 4 (hub growth) succeeded")
        return fam
    notes.append("branch 4 found no certified family")
    if trace is None:
        logger.debug("find_useful_family: %s", "; ".join(notes))
    return None


def _hub_growth(
    h: Hypergraph,
    adj: tuple[int, ...],
    masks: tuple[int, ...],
    t: int,
    alpha: Fraction,
    delta: Fraction,
    k: int,
    r: int,
    a_minus: list[int],
    a_plus: list[int],
    matched: set[int],
    notes: list[str],
) -> UsefulFamily | None:
    n, m = h.n, h.m
    # vertices hit by too many small edges are poisoned
    small_deg = [0] * n
    for i in a_minus:
        for v in h.edges[i]:
            small_deg[v] += 1
    v_bad = {v for v in range(n) if 4 * small_deg[v] * delta.numerator >= t * delta.denominator}
    bad_mask = 0
    for v in v_bad:
        bad_mask |= 1 << v
    aplus_bad = {
        i
        for i in a_plus
        if (masks[i] & bad_mask).bit_count() ** 2 * delta.denominator
        >= delta.numerator * n
    }

    family: list[int] = []
    wits: list[int] = []
    for _ in range(r + 1):
        pool = [
            i
            for i in a_plus
            if i not in aplus_bad and i not in matched and i not in family
        ]
        deg = {}
        for i in pool:
            for v in h.edges[i]:
                if v not in v_bad:
                    deg[v] = deg.get(v, 0) + 1
        hub = None
        for v in sorted(deg):
            if deg[v] * alpha.numerator**2 > 2 * t * alpha.denominator**2:
                hub = v
                break
        if hub is None:
            return None
        through = [i for i in pool if masks[i] >> hub & 1]
        pair = None
        for x, a in enumerate(through):
            for b in through[x + 1 :]:
                cnt = (masks[a] & masks[b]).bit_count()
                if cnt * alpha.denominator > alpha.numerator * k:
                    continue
                if not is_t_useful(h, t, a, b):
                    continue
                if not all(adj[a] >> g & 1 and adj[b] >> g & 1 for g in family):
                    continue
                pair = (a, b)
                break
            if pair:
                break
        if pair is None:
            return None
        family.extend(pair)
        wits.append(hub)
    fam = UsefulFamily(edges=tuple(family), pair_witnesses=tuple(wits))
    # mechanical certification
    if len(set(fam.edges)) != len(fam.edges):
        return None
    for i, a in enumerate(fam.edges):
        for b in fam.edges[i + 1 :]:
            if not adj[a] >> b & 1:
                return None
    for a, b in fam.designated_pairs():
        if not is_t_useful(h, t, a, b):
            return None
    return fam


def colour_extremal(
    h: Hypergraph,
    t: int,
    lists: Mapping[int, Iterable[int]],
    alpha=Fraction(1, 4),
    delta=Fraction(1, 10),
    exact_budget: int = 12,
) -> tuple[dict[int, int] | ColouringFailure, ExtremalReport]:
    """Fallback ladder for the extremal regime e(H) ≈ t*n.

    Tries, in order: an all-distinct colouring when e(H) < t*n; the same (or
    a single disjoint pair) at e(H) = t*n; a useful-family cover when
    e(H) > t*n; a maximum complement matching; and finally exhaustive search
    when e(H) fits the budget.  The per-edge size premise
    |V(e)| >= (1-delta)*sqrt(n) is reported, not enforced.
    """
    alpha = as_fraction(alpha)
    delta = as_fraction(delta)
    allowed = normalize_lists(h, lists)
    attempts: list[str] = []
    tn = t * h.n
    size_ok = all(at_least_scaled_sqrt(len(e), 1 - delta, h.n) for e in h.edges)
    matching_size: int | None = None
    family_found = False

    def report(rung: str | None) -> ExtremalReport:
        return ExtremalReport(
            rung=rung,
            attempts=tuple(attempts),
            size_premise_ok=size_ok,
            matching_size=matching_size,
            family_found=family_found,
        )

    if h.m == 0:
        return {}, report("empty")

    def all_distinct() -> dict[int, int] | ColouringFailure:
        used: set[int] = set()
        col: dict[int, int] = {}
        for i in range(h.m):
            opts = allowed[i] - used
            if not opts:
                return ColouringFailure("all-distinct", stuck_edge=i)
            col[i] = min(opts)
            used.add(col[i])
        return col

    if h.m < tn:
        out = all_distinct()
        if isinstance(out, dict):
            return out, report("1: all-distinct (e < t*n)")
        attempts.append(f"rung 1 stuck at edge {out.stuck_edge}")
    elif h.m == tn:
        if not predicates(h).is_intersecting:
            masks = h.edge_masks
            pair = next(
                (i, j)
                for i in range(h.m)
                for j in range(i + 1, h.m)
                if not masks[i] & masks[j]
            )
            cm = ComplementMatching((pair,))
            if all(len(allowed[i]) >= h.m - 1 for i in range(h.m)):
                out = colour_from_matching(h, cm, allowed)
                if isinstance(out, dict):
                    return out, report("2: one disjoint pair (e = t*n)")
                attempts.append("rung 2 pair route failed")
            else:
                attempts.append("rung 2 lists too small for pair route")
        else:
            out = all_distinct()
            if isinstance(out, dict):
                return out, report("2: all-distinct (e = t*n, intersecting)")
            attempts.append(f"rung 2 stuck at edge {out.stuck_edge}")
    else:
        trace: list[str] = []
        fam = find_useful_family(h, t, alpha, delta, trace=trace)
        attempts.extend(f"family search: {s}" for s in trace)
        if fam is not None:
            family_found = True
            try:
                out = useful_cover_colour(h, t, fam, allowed)
            except ValueError as exc:
                attempts.append(f"rung 3 precondition: {exc}")
            else:
                if isinstance(out, dict):
                    return out, report("3: useful family cover")
                attempts.append(f"rung 3 failed: {out.detail}")

    cm = maximal_complement_matching(h, strategy="maximum")
    matching_size = cm.size
    if all(len(allowed[i]) >= h.m - cm.size for i in range(h.m)):
        out = colour_from_matching(h, cm, allowed)
        if isinstance(out, dict):
            return out, report("4: maximum complement matching")
        attempts.append(f"rung 4 failed: {out.detail}")
    else:
        attempts.append("rung 4 lists smaller than e(H) - |matching|")

    if h.m <= exact_budget:
        from . import oracle  # local import; oracle depends on this module

        res = oracle.exact_list_colourable(
            h, allowed, oracle.OracleBudget(max_edges=exact_budget)
        )
        if res.status == "yes":
            assert res.witness is not None
            return dict(res.witness), report("5: exact search")
        if res.status == "no":
            attempts.append("rung 5 proved no list colouring exists")
            return (
                ColouringFailure("colour_extremal", detail="not list-colourable"),
                report(None),
            )
        attempts.append("rung 5 budget exceeded")
    else:
        attempts.append(f"rung 5 skipped: e(H)={h.m} over budget {exact_budget}")

    return (
        ColouringFailure("colour_extremal", detail="; ".join(attempts)),
        report(None),
    )
