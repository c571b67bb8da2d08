"""Edge-count bound for intersecting bounded-codegree hypergraphs and the
classification of its equality cases.

An intersecting hypergraph with codegree at most t and no singleton edges
has at most t * max_v |N[v]| edges; equality forces the structure to be a
t-fold projective plane or a t-fold near-pencil.  This module verifies the
bound, classifies tight instances, evaluates the bipartite counting
inequality the proof rests on, and specializes everything to the classical
linear case (t = 1, bound n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .hypercore import Hypergraph, degree_stats, neighbourhoods, predicates

__all__ = [
    "TFoldProjectivePlane",
    "TFoldNearPencil",
    "NotExtremal",
    "NotApplicable",
    "Classification",
    "motzkin_check",
    "intersecting_bound",
    "classify_extremal",
    "debruijn_erdos_check",
]


@dataclass(frozen=True)
class TFoldProjectivePlane:
    k: int
    t: int
    remark: str = ""


@dataclass(frozen=True)
class TFoldNearPencil:
    t: int
    remark: str = ""


@dataclass(frozen=True)
class NotExtremal:
    pass


@dataclass(frozen=True)
class NotApplicable:
    reason: str


@dataclass(frozen=True)
class Classification:
    """Outcome of the tightness test.

    ``bound`` is t times the largest closed neighbourhood over non-isolated
    vertices (None when the test does not apply); ``witness_vertex`` is the
    vertex whose neighbourhood certifies a tight classification.
    """

    kind: TFoldProjectivePlane | TFoldNearPencil | NotExtremal | NotApplicable
    e_count: int
    bound: int | None
    witness_vertex: int | None


def motzkin_check(
    x_size: int, y_size: int, adjacency: Iterable[tuple[int, int]]
) -> dict:
    """Exact evaluation of the bipartite non-edge counting inequality.

    For a bipartite graph on parts X, Y in which no x is adjacent to all of
    Y, the sum over non-adjacent pairs (x, y) of

        (|X| d(x) - |Y| d(y)) / ((|X| - d(y)) (|Y| - d(x)))

    is non-negative.  Returns the exact rational sum and the verdict; a
    vertex of X adjacent to every vertex of Y violates the hypothesis and
    raises ValueError.
    """
    if x_size < 1 or y_size < 1:
        raise ValueError("both sides of the bipartition must be non-empty")
    adj = set()
    for x, y in adjacency:
        if not (0 <= x < x_size and 0 <= y < y_size):
            raise ValueError(f"adjacency pair ({x}, {y}) out of range")
        adj.add((x, y))
    dx = [0] * x_size
    dy = [0] * y_size
    for x, y in adj:
        dx[x] += 1
        dy[y] += 1
    for x in range(x_size):
        if dx[x] == y_size:
            raise ValueError(f"x={x} is adjacent to every vertex of Y")
    total = Fraction(0)
    for x in range(x_size):
        for y in range(y_size):
            if (x, y) in adj:
                continue
            denom = (x_size - dy[y]) * (y_size - dx[x])
            if denom == 0:  # pragma: no cover - excluded by the hypothesis
                raise RuntimeError("internal: zero denominator on a non-edge term")
            total += Fraction(x_size * dx[x] - y_size * dy[y], denom)
    return {"sum": total, "holds": total >= 0}


def intersecting_bound(h: Hypergraph, t: int) -> dict:
    """The bound e(H) <= t * max |N[v]| with applicability and tightness.

    Applies to intersecting hypergraphs with codegree at most t and no edge
    of size one; the maximum ranges over non-isolated vertices only (an
    isolated vertex has |N[v]| = 1 and cannot be the maximizer of anything
    interesting).
    """
    if t < 1:
        raise ValueError("t must be positive")
    out: dict = {
        "applies": False,
        "reason": None,
        "e_count": h.m,
        "bound": None,
        "tight": False,
        "witness_vertex": None,
    }
    if h.m == 0:
        out["reason"] = "no edges"
        return out
    if any(len(e) < 2 for e in h.edges):
        out["reason"] = "an edge of size one"
        return out
    preds = predicates(h)
    if not preds.is_intersecting:
        out["reason"] = "not intersecting"
        return out
    stats = degree_stats(h)
    if stats.max_codegree > t:
        out["reason"] = f"codegree {stats.max_codegree} exceeds t={t}"
        return out
    nbhd = neighbourhoods(h)
    best_v, best = None, 0
    for v in range(h.n):
        if stats.degree[v] >= 1 and len(nbhd.closed_vertex[v]) > best:
            best_v, best = v, len(nbhd.closed_vertex[v])
    out.update(
        applies=True,
        bound=t * best,
        tight=h.m == t * best,
        witness_vertex=best_v,
    )
    return out


def classify_extremal(h: Hypergraph, t: int) -> Classification:
    """Classify instances attaining e(H) = t * max |N[v]|.

    A tight instance must look like t copies of each edge of a linear
    intersecting base supported on some N[v] (all other vertices isolated),
    with the base either a projective plane or a near-pencil.  The triangle
    is both the order-1 plane and the 3-vertex near-pencil; it is reported
    as a near-pencil with a remark.
    """
    ib = intersecting_bound(h, t)
    if not ib["applies"]:
        return Classification(NotApplicable(ib["reason"]), h.m, None, None)
    if not ib["tight"]:
        return Classification(NotExtremal(), h.m, ib["bound"], None)

    stats = degree_stats(h)
    nbhd = neighbourhoods(h)
    for v in range(h.n):
        if stats.degree[v] < 1:
            continue
        closed = nbhd.closed_vertex[v]
        if t * len(closed) != h.m:
            continue
        if any(stats.degree[u] >= 1 for u in range(h.n) if u not in closed):
            continue
        kind = _classify_on_support(h, t, closed)
        if kind is not None:
            return Classification(kind, h.m, ib["bound"], v)
    raise RuntimeError(
        "internal: tight instance resisted classification; tight instances "
        "are exactly the folded planes and near-pencils, so this is a bug"
    )


def _classify_on_support(
    h: Hypergraph, t: int, support: frozenset[int]
) -> TFoldProjectivePlane | TFoldNearPencil | None:
    """Test the t-fold plane / near-pencil shape on edges inside ``support``."""
    if any(not set(e) <= support for e in h.edges):
        return None
    mult: dict[tuple[int, ...], int] = {}
    for e in h.edges:
        mult[e] = mult.get(e, 0) + 1
    if any(c != t for c in mult.values()):
        return None
    base = Hypergraph(h.n, tuple(mult))
    base_pred = predicates(base)
    if not (base_pred.is_linear and base_pred.is_intersecting):
        return None
    covered = sorted({v for e in base.edges for v in e})
    if set(covered) != support:
        return None
    n0 = len(support)
    remark = "also the projective plane of order 1" if n0 == 3 else ""

    sizes = {len(e) for e in base.edges}
    if len(sizes) == 1:
        k = sizes.pop() - 1
        deg = degree_stats(base).degree
        if (
            k >= 2
            and n0 == k * k + k + 1
            and base.m == n0
            and all(deg[v] == k + 1 for v in covered)
        ):
            return TFoldProjectivePlane(k, t)

    if n0 >= 3:
        base_sets = {frozenset(e) for e in base.edges}
        for apex in covered:
            rim = support - {apex}
            expected = {frozenset(rim)} | {frozenset((apex, x)) for x in rim}
            if base_sets == expected and base.m == n0:
                return TFoldNearPencil(t, remark)
    return None


def debruijn_erdos_check(h: Hypergraph) -> dict:
    """The classical bound for linear intersecting hypergraphs: e(H) <= n.

    Requires linearity, the intersecting property, and no singleton edge;
    reports whether the bound holds and classifies the equality case via
    the t = 1 machinery (plane or near-pencil).
    """
    out: dict = {
        "applies": False,
        "reason": None,
        "e_count": h.m,
        "n": h.n,
        "bound_holds": None,
        "classification": None,
    }
    if h.m == 0:
        out["reason"] = "no edges"
        return out
    if any(len(e) < 2 for e in h.edges):
        out["reason"] = "an edge of size one"
        return out
    preds = predicates(h)
    if not preds.is_linear:
        out["reason"] = "not linear"
        return out
    if not preds.is_intersecting:
        out["reason"] = "not intersecting"
        return out
    out["applies"] = True
    out["bound_holds"] = h.m <= h.n
    out["classification"] = classify_extremal(h, 1)
    return out
