"""Local-search reordering, the two partition scripts, and ordered greedy."""

from fractions import Fraction

import pytest

from hyperchrom import (
    ColouringFailure,
    EdgeOrdering,
    Hypergraph,
    forward_degrees,
    greedy_list_colour,
    near_pencil,
    partition_extremal,
    partition_stability,
    reorder,
    size_monotone_ordering,
    t_fold,
    validate_colouring,
)
from hyperchrom.exactarith import fourth_root_enclosure

from tests._naive import naive_forward_degrees, naive_volume
from tests.conftest import make_corpus


class TestSizeMonotoneOrdering:
    def test_near_pencil_big_edge_first(self):
        assert size_monotone_ordering(near_pencil(5)).perm == (0, 1, 2, 3, 4)

    def test_uniform_is_identity(self, fano):
        assert size_monotone_ordering(fano).perm == tuple(range(7))

    def test_mixed_sizes(self):
        h = Hypergraph(7, [(0, 1, 2, 3, 4), (5, 6), (0, 1, 2, 3, 4, 5, 6)])
        assert size_monotone_ordering(h).perm == (2, 0, 1)

    def test_subset_of_ids(self):
        h = Hypergraph(7, [(0, 1, 2, 3, 4), (5, 6), (0, 1, 2, 3, 4, 5, 6)])
        assert size_monotone_ordering(h, edge_ids=[0, 1]).perm == (0, 1)

    def test_repeated_id_rejected(self):
        with pytest.raises(ValueError):
            EdgeOrdering((0, 0, 1))


class TestForwardDegrees:
    def test_fano_rank_i_has_degree_i(self, fano):
        fwd = forward_degrees(fano, EdgeOrdering(tuple(range(7))))
        assert fwd == {e: e for e in range(7)}

    def test_disjoint_edges_zero(self):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        fwd = forward_degrees(h, EdgeOrdering((2, 0, 1)))
        assert fwd == {0: 0, 1: 0, 2: 0}

    def test_first_edge_always_zero(self, corpus):
        for h, _t in corpus[:10]:
            if h.m == 0:
                continue
            order = EdgeOrdering(tuple(range(h.m))[::-1])
            assert forward_degrees(h, order)[order.perm[0]] == 0

    def test_matches_naive(self, corpus):
        for h, _t in corpus[:10]:
            order = EdgeOrdering(tuple(sorted(range(h.m), key=lambda e: -e)))
            assert forward_degrees(h, order) == naive_forward_degrees(h, list(order.perm))


def _recheck_reorder(h, t, tau, K, out):
    """Re-derive every certificate bit of a ReorderOutcome from scratch."""
    fwd = naive_forward_degrees(h, list(out.ordering.perm))
    bound = t * (1 - Fraction(tau)) * h.n
    assert out.bound == bound
    pos = out.ordering.position()
    if out.case == "A":
        assert all(d <= bound for d in fwd.values())
        assert out.e_star is None and out.W == ()
    else:
        assert out.e_star is not None
        assert out.W and out.W[-1] == out.e_star
        # W is an interval of the final ordering ending at e_star
        i_star = pos[out.e_star]
        assert out.ordering.perm[i_star - len(out.W) + 1 : i_star + 1] == out.W
        # everything after e_star obeys the forward-degree target (O1)
        assert out.certificates["O1_ok"] == all(
            fwd[e] <= bound for e in out.ordering.perm[i_star + 1 :]
        )
        sizes = [len(h.edges[e]) for e in out.ordering.perm[: i_star + 1]]
        assert out.certificates["O2_ok"] == all(
            sizes[i] >= sizes[i + 1] for i in range(len(sizes) - 1)
        )
        w_sizes = [len(h.edges[e]) for e in out.W]
        assert out.certificates["W1_ratio"] == Fraction(max(w_sizes), min(w_sizes))
        vol = naive_volume(h, out.W) if h.n >= 2 else Fraction(0)
        assert out.certificates["W2_volume"] == vol
        x_lo, _ = fourth_root_enclosure(Fraction(tau))
        factor = 1 + 3 * x_lo * Fraction(K) ** 3
        ratio = out.certificates["W1_ratio"]
        assert out.certificates["w1_ok"] == (ratio == 1 or ratio < factor)
        assert out.certificates["w2_ok"] == (vol >= out.certificates["target_volume"])


class TestReorder:
    def test_disjoint_edges_case_a(self):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        out = reorder(h, 1, Fraction(1, 2), 8)
        assert out.case == "A"
        assert out.e_star is None
        assert sorted(out.ordering.perm) == [0, 1, 2]
        _recheck_reorder(h, 1, Fraction(1, 2), 8, out)

    def test_single_edge_case_a(self):
        out = reorder(Hypergraph(3, [(0, 1)]), 1, Fraction(1, 2), 8)
        assert out.case == "A"

    def test_fano_gets_stuck(self, fano):
        # bound is 3.5 while every line meets the other six, so the search
        # cannot shrink the prefix even once
        out = reorder(fano, 1, Fraction(1, 2), 8)
        assert out.case == "B"
        assert out.bound == Fraction(7, 2)
        assert out.e_star == 6
        assert set(out.W) == set(range(7))
        assert out.certificates["premise_ok"] is False
        assert out.certificates["W1_ratio"] == 1
        assert out.certificates["w1_ok"] is True
        assert out.certificates["W2_volume"] == 1
        assert out.certificates["target_volume"] == 0
        assert out.certificates["w2_ok"] is True
        assert out.certificates["O1_ok"] is True
        assert out.certificates["O2_ok"] is True
        _recheck_reorder(fano, 1, Fraction(1, 2), 8, out)

    def test_premise_reported_when_satisfied(self):
        # tiny tau and large K: 1 - tau - 7 tau^(1/4)/K is clearly positive
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        out = reorder(h, 1, Fraction(1, 10**8), 1000)
        assert out.certificates["premise_ok"] is True
        assert out.certificates["target_volume"] > 0

    def test_parameter_domain(self, fano):
        for bad in (0, 1, -1, Fraction(3, 2)):
            with pytest.raises(ValueError):
                reorder(fano, 1, bad, 8)
        with pytest.raises(ValueError):
            reorder(fano, 1, Fraction(1, 2), Fraction(1, 2))
        with pytest.raises(ValueError):
            reorder(fano, 0, Fraction(1, 2), 8)
        with pytest.raises(ValueError):
            reorder(fano, 1, Fraction(1, 2), 8, edge_ids=[0, 0])

    def test_certificates_honest_on_corpus(self, corpus):
        for h, t in corpus[:14]:
            for tau, K in ((Fraction(1, 2), 8), (Fraction(1, 20), 2)):
                _recheck_reorder(h, t, tau, K, reorder(h, t, tau, K))


def _stability_flags(h, t, sigma, delta, cert):
    """Ground-truth recomputation of the stability flags, no library reuse."""
    sigma, delta = Fraction(sigma), Fraction(delta)
    h2, w, h1 = cert.parts["H2"], cert.parts["W"], cert.parts["H1"]
    fwd = naive_forward_degrees(h, list(cert.ordering.perm))
    sizes = {e: len(h.edges[e]) for e in range(h.m)}
    pos = {e: i for i, e in enumerate(cert.ordering.perm)}
    n = h.n
    return {
        "P1": not w or max(sizes[e] for e in w) <= (1 + delta) * min(sizes[e] for e in w),
        "P2": not w or (n >= 2 and naive_volume(h, w) >= (1 - delta) * t),
        "P3": not h2
        or not w
        or all(sizes[e] >= max(sizes[f] for f in w) for e in h2),
        "FD1": all(fwd[e] <= (1 - 2 * sigma) * t * n for e in h1),
        "FD2": all(fwd[e] <= Fraction(t * n, 2000) for e in h2),
        "FD3": all(pos[a] < pos[b] for a in h2 for b in w)
        and all(pos[a] < pos[b] for a in w for b in h1),
    }


def _check_parts_cover(h, cert, names):
    ids = []
    for name in names:
        ids.extend(cert.parts[name])
    assert sorted(ids) == list(range(h.m))
    assert cert.ordering.perm == tuple(ids)


class TestPartitionStability:
    def test_disjoint_edges_trivial(self):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        cert = partition_stability(h, 1, Fraction(1, 100), Fraction(1, 10))
        assert cert.parts["W"] == () and cert.parts["H2"] == ()
        assert sorted(cert.parts["H1"]) == [0, 1, 2]
        assert all(cert.property_flags.values())
        assert set(cert.vacuous) == {"P1", "P2", "P3", "FD2"}

    def test_two_fold_fano_case_a(self, fano):
        h = t_fold(fano, 2)
        cert = partition_stability(h, 2, Fraction(1, 100), Fraction(1, 10))
        assert cert.notes["outer_case"] == "A"
        assert len(cert.parts["H1"]) == 14
        assert all(cert.property_flags.values())
        _check_parts_cover(h, cert, ("H2", "W", "H1"))
        assert cert.property_flags == _stability_flags(
            h, 2, Fraction(1, 100), Fraction(1, 10), cert
        )

    def test_case_b_with_tail(self):
        # triangle plus one disjoint edge: the disjoint edge leaves the
        # prefix, then the triangle blocks and becomes W
        h = Hypergraph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        cert = partition_stability(h, 1, Fraction(2, 5), Fraction(1, 10))
        assert cert.notes["outer_case"] == "B"
        assert set(cert.parts["W"]) == {0, 1, 2}
        assert cert.parts["H1"] == (3,)
        assert cert.parts["H2"] == ()
        assert cert.property_flags["P1"] is True
        assert cert.property_flags["P2"] is False  # vol(W)=3/10 < 9/10
        assert cert.witness["P2"] == str(Fraction(3, 10))
        assert cert.property_flags["FD1"] is True
        _check_parts_cover(h, cert, ("H2", "W", "H1"))
        assert cert.property_flags == _stability_flags(
            h, 1, Fraction(2, 5), Fraction(1, 10), cert
        )

    def test_case_b_with_oversized_h2(self):
        # one huge edge rides along in the blocked prefix but is too large
        # for W, so it lands in H2
        h = Hypergraph(8, [tuple(range(8)), (0, 1), (1, 2), (0, 2)])
        cert = partition_stability(h, 2, Fraction(9, 20), Fraction(1, 10))
        assert cert.parts["H2"] == (0,)
        assert set(cert.parts["W"]) == {1, 2, 3}
        assert cert.parts["H1"] == ()
        assert cert.property_flags["P3"] is True
        assert cert.property_flags["FD2"] is True
        assert set(cert.vacuous) == {"FD1"}
        assert cert.property_flags == _stability_flags(
            h, 2, Fraction(9, 20), Fraction(1, 10), cert
        )

    def test_probe_notes(self, fano):
        h = t_fold(fano, 2)
        yes = partition_stability(h, 2, Fraction(1, 100), Fraction(1, 10), probe=14)
        assert yes.notes["probe"] == 14 and yes.notes["probe_ok"] is True
        no = partition_stability(h, 2, Fraction(1, 100), Fraction(1, 10), probe=13)
        assert no.notes["probe_ok"] is False

    def test_parameter_domain(self, fano):
        with pytest.raises(ValueError):
            partition_stability(fano, 1, Fraction(1, 2), Fraction(1, 10))
        with pytest.raises(ValueError):
            partition_stability(fano, 1, 0, Fraction(1, 10))
        with pytest.raises(ValueError):
            partition_stability(fano, 1, Fraction(1, 100), 0)
        with pytest.raises(ValueError):
            partition_stability(fano, 1, Fraction(1, 100), 1)

    def test_flags_match_recomputation_on_corpus(self, corpus):
        for h, t in corpus[:14]:
            for sigma in (Fraction(1, 100), Fraction(2, 5)):
                cert = partition_stability(h, t, sigma, Fraction(1, 10))
                _check_parts_cover(h, cert, ("H2", "W", "H1"))
                assert cert.property_flags == _stability_flags(
                    h, t, sigma, Fraction(1, 10), cert
                )


def _extremal_flags(h, t, delta, gamma, r0, cert):
    delta, gamma = Fraction(delta), Fraction(gamma)
    h3, h2, h1 = cert.parts["H3"], cert.parts["H2"], cert.parts["H1"]
    fwd = naive_forward_degrees(h, list(cert.ordering.perm))
    sizes = {e: len(h.edges[e]) for e in range(h.m)}
    pos = {e: i for i, e in enumerate(cert.ordering.perm)}
    n = h.n
    in_h1 = set(h1)
    return {
        "P'1": all(e in in_h1 for e in range(h.m) if sizes[e] <= r0),
        "P'2": all(sizes[e] ** 2 >= ((1 - 2 * delta) ** 2) * n for e in h3),
        "FD'1": all(fwd[e] <= t * n - 2 for e in h2),
        "FD'2": all(fwd[e] <= gamma * t * n for e in h1),
        "FD'3": all(pos[a] < pos[b] for a in h3 for b in h2)
        and all(pos[a] < pos[b] for a in h2 for b in h1),
    }


class TestPartitionExtremal:
    def test_small_disjoint_edges_trivial(self):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        cert = partition_extremal(h, 1, Fraction(1, 10), Fraction(1, 4), 2)
        assert cert.parts["H3"] == () and cert.parts["H2"] == ()
        assert sorted(cert.parts["H1"]) == [0, 1, 2]
        assert all(cert.property_flags.values())

    def test_two_fold_fano(self, fano):
        h = t_fold(fano, 2)
        cert = partition_extremal(h, 2, Fraction(1, 10), Fraction(1, 4), 2)
        assert cert.notes["outer_case"] == "B"
        _check_parts_cover(h, cert, ("H3", "H2", "H1"))
        assert cert.property_flags == _extremal_flags(
            h, 2, Fraction(1, 10), Fraction(1, 4), 2, cert
        )
        # the dense block cannot meet the near-extremal forward-degree cap
        # at this scale, and the certificate says so rather than hiding it
        assert cert.property_flags["FD'1"] is False
        assert cert.property_flags["P'1"] is True

    def test_inner_sigma_exposed(self, fano):
        h = t_fold(fano, 2)
        cert = partition_extremal(
            h, 2, Fraction(1, 10), Fraction(1, 4), 2, sigma=Fraction(9, 10)
        )
        # a huge inner sigma collapses the inner bound, leaving a non-empty H3
        assert cert.notes["inner_case"] == "B"
        assert cert.parts["H3"] != ()
        assert cert.property_flags == _extremal_flags(
            h, 2, Fraction(1, 10), Fraction(1, 4), 2, cert
        )

    def test_parameter_domain(self, fano):
        with pytest.raises(ValueError):
            partition_extremal(fano, 1, 0, Fraction(1, 4), 2)
        with pytest.raises(ValueError):
            partition_extremal(fano, 1, Fraction(1, 10), 1, 2)
        with pytest.raises(ValueError):
            partition_extremal(fano, 1, Fraction(1, 10), Fraction(1, 4), -1)
        with pytest.raises(ValueError):
            partition_extremal(fano, 1, Fraction(1, 10), Fraction(1, 4), 2, sigma=1)

    def test_flags_match_recomputation_on_corpus(self, corpus):
        for h, t in corpus[:14]:
            cert = partition_extremal(h, t, Fraction(1, 10), Fraction(1, 4), 3)
            _check_parts_cover(h, cert, ("H3", "H2", "H1"))
            assert cert.property_flags == _extremal_flags(
                h, t, Fraction(1, 10), Fraction(1, 4), 3, cert
            )


class TestGreedyListColour:
    def test_disjoint_edges_single_colour(self):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        col = greedy_list_colour(h, {e: [0] for e in range(3)})
        assert col == {0: 0, 1: 0, 2: 0}

    def test_fano_seven_colours(self, fano):
        lists = {e: range(7) for e in range(7)}
        col = greedy_list_colour(fano, lists)
        assert sorted(col.values()) == list(range(7))
        validate_colouring(fano, col, lists=lists)

    def test_fano_six_colours_fails_at_last_edge(self, fano):
        out = greedy_list_colour(fano, {e: range(6) for e in range(7)})
        assert isinstance(out, ColouringFailure)
        assert out.stage == "greedy"
        assert out.stuck_edge == 6
        assert not out

    def test_respects_given_ordering(self, fano):
        order = EdgeOrdering((6, 5, 4, 3, 2, 1, 0))
        col = greedy_list_colour(fano, {e: range(7) for e in range(7)}, order)
        assert col[6] == 0 and col[0] == 6

    def test_partial_ordering_rejected(self, fano):
        with pytest.raises(ValueError):
            greedy_list_colour(fano, {e: range(7) for e in range(7)}, EdgeOrdering((0, 1)))

    def test_success_guarantee_on_corpus(self, corpus):
        for h, _t in corpus[:12]:
            order = size_monotone_ordering(h)
            fwd = forward_degrees(h, order)
            lists = {e: range(fwd[e] + 1) for e in range(h.m)}
            col = greedy_list_colour(h, lists, order)
            assert not isinstance(col, ColouringFailure)
            validate_colouring(h, col, lists=lists)
