"""Core hypergraph representation and exact structural operations.

A hypergraph here is a finite vertex set ``{0..n-1}`` together with a
*multiset* of non-empty edges (vertex subsets); parallel edges are
first-class citizens because t-fold constructions rely on them.  Edges are
addressed by their index in the edge tuple.

All counting quantities (degrees, codegrees, volumes) are exact: integers or
`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Hypergraph",
    "Graph",
    "DegreeStats",
    "Predicates",
    "Neighbourhoods",
    "ValidationReport",
    "ColouringFailure",
    "degree_stats",
    "volume",
    "dual",
    "line_graph",
    "predicates",
    "neighbourhoods",
    "validate_colouring",
    "restrict_and_induce",
    "subhypergraph",
    "uniform_lists",
    "normalize_lists",
    "canonical_form",
    "is_isomorphic",
]


class Hypergraph:
    """Immutable hypergraph with bitmask-backed edges.

    Parameters
    ----------
    n:
        Number of vertices; vertices are ``0..n-1``.
    edges:
        Iterable of vertex iterables.  Each edge is normalised to a sorted
        tuple of distinct ids.  Order of edges is preserved (edge ids are
        positions) and duplicates are kept.
    """

    __slots__ = ("n", "edges", "_masks")

    def __init__(self, n: int, edges: Iterable[Iterable[int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = []
        masks = []
        for e in edges:
            verts = tuple(sorted(set(e)))
            if not verts:
                raise ValueError("empty edge")
            if verts[0] < 0 or verts[-1] >= n:
                raise ValueError(f"edge {verts} out of range for n={n}")
            mask = 0
            for v in verts:
                mask |= 1 << v
            norm.append(verts)
            masks.append(mask)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "_masks", tuple(masks))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Hypergraph is immutable")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, i: int) -> tuple[int, ...]:
        return self.edges[i]

    def edge_mask(self, i: int) -> int:
        return self._masks[i]

    @property
    def edge_masks(self) -> tuple[int, ...]:
        return self._masks

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Graph:
    """Simple graph with bitmask adjacency rows (used for line graphs)."""

    n: int
    adj: tuple[int, ...]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple((full & ~a) & ~(1 << v) for v, a in enumerate(self.adj)))


@dataclass(frozen=True)
class DegreeStats:
    degree: tuple[int, ...]
    codegree: Mapping[tuple[int, int], int]
    max_degree: int
    max_codegree: int


@dataclass(frozen=True)
class Predicates:
    is_linear: bool
    is_intersecting: bool


@dataclass(frozen=True)
class Neighbourhoods:
    closed_vertex: tuple[frozenset[int], ...]
    edge: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    colour_count: int
    violations: tuple[tuple, ...]


@dataclass(frozen=True)
class ColouringFailure:
    """Value returned when a colouring routine cannot finish.

    ``stage`` names the step that gave up, ``stuck_edge`` the first edge (if
    any) whose candidate colours ran out.
    """

    stage: str
    stuck_edge: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def degree_stats(h: Hypergraph) -> DegreeStats:
    """Vertex degrees and pairwise codegrees, with their maxima.

    The codegree map only lists pairs ``(u, v)`` with ``u < v`` covered by at
    least one edge; absent pairs have codegree 0.
    """
    deg = [0] * h.n
    codeg: dict[tuple[int, int], int] = {}
    for e in h.edges:
        for i, u in enumerate(e):
            deg[u] += 1
            for v in e[i + 1 :]:
                key = (u, v)
                codeg[key] = codeg.get(key, 0) + 1
    return DegreeStats(
        degree=tuple(deg),
        codegree=codeg,
        max_degree=max(deg, default=0),
        max_codegree=max(codeg.values(), default=0),
    )


def volume(h: Hypergraph, edge_ids: Iterable[int] | None = None) -> Fraction:
    """Exact volume of an edge subset: sum of C(|V(e)|,2) / C(n,2).

    Requires at least two vertices, otherwise the normaliser vanishes.
    """
    if h.n < 2:
        raise ValueError("volume needs a hypergraph on at least 2 vertices")
    ids = range(h.m) if edge_ids is None else edge_ids
    total = 0
    for i in ids:
        s = len(h.edges[i])
        total += s * (s - 1) // 2
    return Fraction(total * 2, h.n * (h.n - 1))


def dual(h: Hypergraph) -> Hypergraph:
    """Swap the roles of vertices and edges.

    Vertex ``i`` of the result stands for edge ``i`` of ``h``; for each
    original vertex ``v`` the result gets the edge ``{i : v in V(e_i)}``.
    Vertices of degree 0 would produce an empty edge, so they are refused.
    """
    incident: list[list[int]] = [[] for _ in range(h.n)]
    for i, e in enumerate(h.edges):
        for v in e:
            incident[v].append(i)
    for v, inc in enumerate(incident):
        if not inc:
            raise ValueError(f"vertex {v} has degree 0; dual undefined")
    return Hypergraph(h.m, incident)


def _edge_adjacency_masks(h: Hypergraph) -> list[int]:
    masks = h.edge_masks
    m = h.m
    out = [0] * m
    for i in range(m):
        mi = masks[i]
        row = out[i]
        for j in range(i + 1, m):
            if mi & masks[j]:
                row |= 1 << j
                out[j] |= 1 << i
        out[i] = row
    return out


def line_graph(h: Hypergraph) -> Graph:
    """Graph on edge ids where two edges are adjacent iff they share a vertex."""
    return Graph(h.m, tuple(_edge_adjacency_masks(h)))


def predicates(h: Hypergraph) -> Predicates:
    """Linearity (pairwise |intersection| <= 1) and the intersecting property.

    Parallel edges of size >= 2 break linearity; the empty and one-edge
    hypergraphs satisfy both predicates vacuously.
    """
    masks = h.edge_masks
    linear = True
    intersecting = True
    for i in range(h.m):
        for j in range(i + 1, h.m):
            common = (masks[i] & masks[j]).bit_count()
            if common > 1:
                linear = False
            if common == 0:
                intersecting = False
            if not linear and not intersecting:
                return Predicates(False, False)
    return Predicates(linear, intersecting)


def neighbourhoods(h: Hypergraph) -> Neighbourhoods:
    """Closed vertex neighbourhoods N[v] and open edge neighbourhoods N(e).

    N[v] is {v} plus everything sharing an edge with v (so isolated vertices
    get the singleton {v}); N(e) is the set of other edges meeting e.
    """
    closed_masks = [1 << v for v in range(h.n)]
    for mask in h.edge_masks:
        mm = mask
        while mm:
            v = (mm & -mm).bit_length() - 1
            closed_masks[v] |= mask
            mm &= mm - 1
    closed = tuple(_mask_to_frozenset(cm) for cm in closed_masks)
    edge_adj = _edge_adjacency_masks(h)
    edge_nbrs = tuple(_mask_to_frozenset(a) for a in edge_adj)
    return Neighbourhoods(closed_vertex=closed, edge=edge_nbrs)


def _mask_to_frozenset(mask: int) -> frozenset[int]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return frozenset(out)


def validate_colouring(
    h: Hypergraph,
    colouring: Mapping[int, int],
    lists: Mapping[int, Iterable[int]] | None = None,
) -> ValidationReport:
    """Check properness (intersecting edges differ) and list compliance.

    Every edge must carry a colour: a missing edge id raises rather than
    reporting, since a partial map is a caller bug, not a property of the
    colouring.  Violations enumerate offending pairs/edges.
    """
    for i in range(h.m):
        if i not in colouring:
            raise ValueError(f"edge {i} missing from colouring")
    for i in colouring:
        if not 0 <= i < h.m:
            raise ValueError(f"unknown edge id {i} in colouring")
    violations: list[tuple] = []
    masks = h.edge_masks
    for i in range(h.m):
        for j in range(i + 1, h.m):
            if masks[i] & masks[j] and colouring[i] == colouring[j]:
                violations.append(("conflict", i, j))
    if lists is not None:
        allowed = normalize_lists(h, lists)
        for i in range(h.m):
            if colouring[i] not in allowed[i]:
                violations.append(("list", i))
    used = {colouring[i] for i in range(h.m)}
    return ValidationReport(valid=not violations, colour_count=len(used), violations=tuple(violations))


def restrict_and_induce(h: Hypergraph, vertex_set: Iterable[int], mode: str) -> Hypergraph:
    """Take a vertex subset S, either inducing or restricting the edges.

    ``mode='induced'`` keeps the edges entirely inside S; ``mode='restriction'``
    replaces every edge by its intersection with S, failing on edges that miss
    S entirely.  The result is reindexed: new vertex ids are ranks in
    sorted(S).
    """
    svv = sorted(set(vertex_set))
    if svv and (svv[0] < 0 or svv[-1] >= h.n):
        raise ValueError("vertex subset out of range")
    remap = {v: i for i, v in enumerate(svv)}
    smask = 0
    for v in svv:
        smask |= 1 << v
    new_edges = []
    if mode == "induced":
        for i, e in enumerate(h.edges):
            if h.edge_mask(i) & ~smask == 0:
                new_edges.append([remap[v] for v in e])
    elif mode == "restriction":
        for i, e in enumerate(h.edges):
            if h.edge_mask(i) & smask == 0:
                raise ValueError(f"edge {i} is disjoint from the restriction set")
            new_edges.append([remap[v] for v in e if v in remap])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Hypergraph(len(svv), new_edges)


def subhypergraph(h: Hypergraph, edge_ids: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """Spanning sub-hypergraph on a subset of edges (same vertex set).

    Returns the sub-hypergraph plus the tuple mapping its edge ids back to
    ids in ``h``.
    """
    ids = tuple(edge_ids)
    for i in ids:
        if not 0 <= i < h.m:
            raise ValueError(f"edge id {i} out of range")
    return Hypergraph(h.n, [h.edges[i] for i in ids]), ids


def uniform_lists(h: Hypergraph, k: int) -> dict[int, frozenset[int]]:
    """Give every edge the palette {0..k-1}."""
    pal = frozenset(range(k))
    return {i: pal for i in range(h.m)}


def normalize_lists(h: Hypergraph, lists: Mapping[int, Iterable[int]]) -> dict[int, frozenset[int]]:
    """Freeze a list assignment, requiring a list for every edge."""
    out = {}
    for i in range(h.m):
        if i not in lists:
            raise ValueError(f"edge {i} has no colour list")
        out[i] = frozenset(lists[i])
    return out


# --- canonical form (small instances only) ---------------------------------

_CANON_MAX_N = 16
_CANON_MAX_M = 20
_CANON_LEAF_CAP = 500_000


def _refine(h: Hypergraph, colours: list[int]) -> list[int]:
    """Stable colour refinement driven by incident-edge signatures."""
    n = h.n
    while True:
        edge_sigs = [tuple(sorted(colours[v] for v in e)) for e in h.edges]
        sigs = []
        for v in range(n):
            inc = sorted(edge_sigs[i] for i, e in enumerate(h.edges) if v in e)
            sigs.append((colours[v], tuple(inc)))
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colours:
            return colours
        colours = new


def _canon_search(h: Hypergraph, colours: list[int], best: list, leaves: list[int]) -> None:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    target = None
    for c in sorted(cells):
        if len(cells[c]) > 1:
            target = cells[c]
            break
    if target is None:
        leaves[0] += 1
        if leaves[0] > _CANON_LEAF_CAP:
            raise RuntimeError("canonical form search exceeded its leaf cap")
        lab = {v: colours[v] for v in range(h.n)}
        form = tuple(sorted(tuple(sorted(lab[v] for v in e)) for e in h.edges))
        if best[0] is None or form < best[0]:
            best[0] = form
        return
    for v in target:
        nxt = list(colours)
        # individualize v: give it a fresh colour just below its cell
        nxt[v] = nxt[v] * 2 + 1
        for u in range(h.n):
            if u != v:
                nxt[u] = nxt[u] * 2 + 2
        _canon_search(h, _refine(h, nxt), best, leaves)


def canonical_form(h: Hypergraph) -> tuple:
    """Canonical invariant of the isomorphism class (small hypergraphs).

    Refinement plus individualization; intended for at most 16 vertices and
    20 edges, guarded by a ValueError beyond that.
    """
    if h.n > _CANON_MAX_N or h.m > _CANON_MAX_M:
        raise ValueError("canonical_form is limited to 16 vertices / 20 edges")
    if h.m == 0:
        return (h.n, ())
    colours = _refine(h, [0] * h.n)
    best: list = [None]
    _canon_search(h, colours, best, [0])
    return (h.n, best[0])


def is_isomorphic(h1: Hypergraph, h2: Hypergraph) -> bool:
    """Exact isomorphism test via canonical forms (same size guard applies)."""
    if h1.n != h2.n or h1.m != h2.m:
        return False
    if sorted(map(len, h1.edges)) != sorted(map(len, h2.edges)):
        return False
    d1, d2 = degree_stats(h1), degree_stats(h2)
    if sorted(d1.degree) != sorted(d2.degree):
        return False
    if sorted(d1.codegree.values()) != sorted(d2.codegree.values()):
        return False
    return canonical_form(h1) == canonical_form(h2)
