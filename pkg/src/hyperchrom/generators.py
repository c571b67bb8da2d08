"""Constructions: planes, near-pencils, t-folds, clique covers, random instances."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .hypercore import Hypergraph, degree_stats, predicates

__all__ = [
    "GeneratorParams",
    "projective_plane",
    "near_pencil",
    "t_fold",
    "from_cliques",
    "random_bounded_codegree",
    "SUPPORTED_PLANE_ORDERS",
]

logger = logging.getLogger(__name__)

SUPPORTED_PLANE_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13)

_PRIMES = {2, 3, 5, 7, 11, 13}

# q -> (p, e, reduction): x**e is rewritten as the given low-to-high
# coefficient vector over GF(p).  Fixed choices: x^2+x+1 for GF(4),
# x^3+x+1 for GF(8), x^2+1 for GF(9).
_POWERS = {
    4: (2, 2, (1, 1)),
    8: (2, 3, (1, 1, 0)),
    9: (3, 2, (2, 0)),
}


@lru_cache(maxsize=None)
def _field_tables(q: int) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Addition and multiplication tables of GF(q), elements encoded 0..q-1.

    For prime powers an element is the base-p digit vector of its id, read as
    polynomial coefficients (low degree first); id 0 is zero and id 1 is one.
    """
    if q in _PRIMES:
        add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
        return add, mul
    p, e, rem = _POWERS[q]

    def digits(x: int) -> tuple[int, ...]:
        out = []
        for _ in range(e):
            out.append(x % p)
            x //= p
        return tuple(out)

    def undigits(ds: Sequence[int]) -> int:
        x = 0
        for d in reversed(ds):
            x = x * p + d
        return x

    def poly_mul(a: Sequence[int], b: Sequence[int]) -> int:
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for d in range(len(prod) - 1, e - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i, r in enumerate(rem):
                    prod[d - e + i] = (prod[d - e + i] + c * r) % p
        return undigits(prod[:e])

    elems = [digits(x) for x in range(q)]
    add = tuple(
        tuple(undigits([(u + v) % p for u, v in zip(elems[a], elems[b])]) for b in range(q))
        for a in range(q)
    )
    mul = tuple(tuple(poly_mul(elems[a], elems[b]) for b in range(q)) for a in range(q))
    return add, mul


def _plane_points(q: int) -> list[tuple[int, int, int]]:
    """Normalised homogeneous triples: (1,a,b), (0,1,b), (0,0,1)."""
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, b) for b in range(q)]
    pts.append((0, 0, 1))
    return pts


def projective_plane(q: int) -> Hypergraph:
    """Projective plane of prime-power order q as a hypergraph.

    Vertices are the q^2+q+1 points, edges the q^2+q+1 lines.  Only the
    orders in SUPPORTED_PLANE_ORDERS are accepted; in particular q=1 is
    refused (the degenerate 'plane' of that order is the triangle, available
    as near_pencil(3)).
    """
    if q == 1:
        raise ValueError(
            "no plane of order 1; the degenerate case is the triangle, "
            "available as near_pencil(3)"
        )
    if q not in SUPPORTED_PLANE_ORDERS:
        raise ValueError(
            f"unsupported plane order {q}; supported orders: {SUPPORTED_PLANE_ORDERS}"
        )
    add, mul = _field_tables(q)
    pts = _plane_points(q)

    def dot(u: tuple[int, int, int], v: tuple[int, int, int]) -> int:
        s = 0
        for a, b in zip(u, v):
            s = add[s][mul[a][b]]
        return s

    edges = []
    for line in pts:  # lines use the same normalised coordinates
        edge = [i for i, pt in enumerate(pts) if dot(line, pt) == 0]
        edges.append(edge)
    h = Hypergraph(len(pts), edges)
    _check_plane(h, q)
    return h


def _check_plane(h: Hypergraph, q: int) -> None:
    n0 = q * q + q + 1
    if h.n != n0 or h.m != n0:
        raise RuntimeError(f"plane construction for q={q} has wrong size")
    if any(len(e) != q + 1 for e in h.edges):
        raise RuntimeError(f"plane construction for q={q} has a bad line size")
    stats = degree_stats(h)
    if set(stats.degree) != {q + 1} or stats.max_codegree != 1:
        raise RuntimeError(f"plane construction for q={q} is not a plane")
    preds = predicates(h)
    if not (preds.is_linear and preds.is_intersecting):
        raise RuntimeError(f"plane construction for q={q} is not linear/intersecting")


def near_pencil(n: int) -> Hypergraph:
    """Near-pencil on n >= 3 vertices: one edge of size n-1 plus n-1 spokes.

    Vertex 0 is the apex; the big edge {1..n-1} comes first, then the spokes
    {0,i} in increasing i.
    """
    if n < 3:
        raise ValueError("near_pencil needs n >= 3")
    edges: list[tuple[int, ...]] = [tuple(range(1, n))]
    edges += [(0, i) for i in range(1, n)]
    return Hypergraph(n, edges)


def t_fold(h: Hypergraph, t: int) -> Hypergraph:
    """Replace every edge by t parallel copies (copies are consecutive)."""
    if t < 1:
        raise ValueError("t_fold needs t >= 1")
    edges = []
    for e in h.edges:
        edges.extend([e] * t)
    return Hypergraph(h.n, edges)


def from_cliques(cliques: Sequence[Iterable[int]]) -> Hypergraph:
    """Hypergraph whose vertices are the given cliques of a ground set.

    Ground vertices are 0..max id over all cliques; ground vertex v turns
    into the edge {i : v in cliques[i]}.  A ground vertex covered by no
    clique has no edge to become, so it is an error.
    """
    sets = [frozenset(c) for c in cliques]
    if any(not s for s in sets):
        raise ValueError("empty clique")
    if not sets:
        raise ValueError("no cliques given")
    top = max(max(s) for s in sets)
    if min(min(s) for s in sets) < 0:
        raise ValueError("negative ground vertex")
    edges = []
    for v in range(top + 1):
        e = [i for i, s in enumerate(sets) if v in s]
        if not e:
            raise ValueError(f"ground vertex {v} is covered by no clique")
        edges.append(e)
    return Hypergraph(len(sets), edges)


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters for the rejection sampler."""

    seed: int
    n: int
    t: int
    size_range: tuple[int, int]
    density: int

    def __post_init__(self):
        lo, hi = self.size_range
        if self.n < 1 or self.t < 1 or self.density < 0:
            raise ValueError("n, t must be positive and density non-negative")
        if not 1 <= lo <= hi <= self.n:
            raise ValueError("size_range must satisfy 1 <= lo <= hi <= n")


def random_bounded_codegree(params: GeneratorParams) -> Hypergraph:
    """Seeded rejection sampler for codegree <= t hypergraphs.

    Draws up to ``density`` edges with sizes uniform in ``size_range``,
    rejecting any edge that would push a pair of vertices past codegree t.
    The retry budget is 50 * density draws; falling short is logged, not an
    error.
    """
    rng = random.Random(params.seed)
    lo, hi = params.size_range
    pair_count: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, ...]] = []
    budget = 50 * params.density
    tries = 0
    while len(edges) < params.density and tries < budget:
        tries += 1
        s = rng.randint(lo, hi)
        verts = tuple(sorted(rng.sample(range(params.n), s)))
        pairs = [
            (verts[i], verts[j])
            for i in range(len(verts))
            for j in range(i + 1, len(verts))
        ]
        if any(pair_count.get(p, 0) >= params.t for p in pairs):
            continue
        for p in pairs:
            pair_count[p] = pair_count.get(p, 0) + 1
        edges.append(verts)
    if len(edges) < params.density:
        logger.info(
            "random_bounded_codegree: %d of %d edges after %d tries",
            len(edges),
            params.density,
            tries,
        )
    return Hypergraph(params.n, edges)
