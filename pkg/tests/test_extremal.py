"""Useful pairs, complement matchings, and the extremal colouring ladder."""

import pytest

from hyperchrom import (
    ColouringFailure,
    ComplementMatching,
    Hypergraph,
    UsefulFamily,
    colour_extremal,
    colour_from_matching,
    find_useful_family,
    is_t_useful,
    maximal_complement_matching,
    near_pencil,
    t_fold,
    uniform_lists,
    useful_cover_colour,
    validate_colouring,
)

from tests.conftest import make_corpus


class TestIsTUseful:
    def test_fano_lines_never_useful(self, fano):
        # any two lines meet, but their common neighbourhood is the other
        # five lines: 5 > 7 - 3
        for e in range(7):
            for f in range(e + 1, 7):
                assert is_t_useful(fano, 1, e, f) is False

    def test_small_common_neighbourhood_is_useful(self):
        h = Hypergraph(6, [(0, 1, 2), (0, 3, 4), (1, 3, 5)])
        # edges 0 and 1 meet at vertex 0 and share only edge 2 as neighbour
        assert is_t_useful(h, 1, 0, 1) is True

    def test_disjoint_edges_not_useful(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        assert is_t_useful(h, 1, 0, 1) is False

    def test_errors(self, fano):
        with pytest.raises(ValueError):
            is_t_useful(fano, 1, 3, 3)
        with pytest.raises(ValueError):
            is_t_useful(fano, 1, 0, 99)
        with pytest.raises(ValueError):
            is_t_useful(fano, 0, 0, 1)


class TestMaximalComplementMatching:
    def test_fano_empty(self, fano):
        assert maximal_complement_matching(fano, "greedy").pairs == ()
        assert maximal_complement_matching(fano, "maximum").pairs == ()

    def test_k4_maximum_is_three(self, k4):
        cm = maximal_complement_matching(k4, "maximum")
        assert cm.size == 3
        cm.validate(k4)

    def test_two_disjoint_edges(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        assert maximal_complement_matching(h).pairs == ((0, 1),)

    def test_unknown_strategy(self, fano):
        with pytest.raises(ValueError):
            maximal_complement_matching(fano, "speedy")

    def test_maximum_at_least_greedy_on_corpus(self):
        for h, _t in make_corpus(12, base_seed=5100, n_range=(4, 9)):
            g = maximal_complement_matching(h, "greedy")
            m = maximal_complement_matching(h, "maximum")
            g.validate(h)
            m.validate(h)
            assert m.size >= g.size

    def test_validate_rejects_bad_pairs(self, k4):
        with pytest.raises(ValueError):
            ComplementMatching(((0, 0),)).validate(k4)
        with pytest.raises(ValueError):
            ComplementMatching(((0, 1),)).validate(k4)  # edges share vertex 0
        with pytest.raises(ValueError):
            ComplementMatching(((0, 5), (1, 5))).validate(k4)


class TestColourFromMatching:
    def test_k4_pairs_share_colours(self, k4):
        cm = maximal_complement_matching(k4, "maximum")
        lists = {e: [0, 1, 2] for e in range(6)}
        col = colour_from_matching(k4, cm, lists)
        assert isinstance(col, dict)
        validate_colouring(k4, col, lists=lists)
        assert len(set(col.values())) == 3
        for a, b in cm.pairs:
            assert col[a] == col[b]

    def test_fano_empty_matching_all_distinct(self, fano):
        col = colour_from_matching(fano, ComplementMatching(()), uniform_lists(fano, 7))
        assert sorted(col.values()) == list(range(7))

    def test_disjoint_pair_shares_single_colour(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        col = colour_from_matching(h, ComplementMatching(((0, 1),)), {0: [5], 1: [5]})
        assert col == {0: 5, 1: 5}

    def test_small_list_rejected(self, k4):
        cm = maximal_complement_matching(k4, "maximum")
        lists = {e: [0, 1, 2] for e in range(6)}
        lists[3] = [0, 1]
        with pytest.raises(ValueError):
            colour_from_matching(k4, cm, lists)

    def test_colour_count_bound_on_corpus(self):
        # the whole point of a matching: e(H) - |N| classes suffice
        for h, _t in make_corpus(15, base_seed=5200, n_range=(4, 9)):
            if not 1 <= h.m <= 12:
                continue
            cm = maximal_complement_matching(h, "maximum")
            k = h.m - cm.size
            lists = uniform_lists(h, k)
            col = colour_from_matching(h, cm, lists)
            assert isinstance(col, dict)
            validate_colouring(h, col, lists=lists)
            assert len(set(col.values())) <= k


class TestUsefulCoverColour:
    def _instance(self):
        # five edges on five vertices with e(H) = t*n and a single 1-useful
        # designated pair (edges 2 and 4, meeting at vertex 1)
        h = Hypergraph(5, [(0, 1, 2), (0, 3, 4), (1, 3), (2, 4), (1, 4)])
        fam = UsefulFamily(edges=(2, 4), pair_witnesses=(1,))
        return h, fam

    def test_builds_matching_and_colours(self):
        h, fam = self._instance()
        lists = uniform_lists(h, 5)
        col = useful_cover_colour(h, 1, fam, lists)
        assert isinstance(col, dict)
        validate_colouring(h, col, lists=lists)
        # r = 0, so one pair is manufactured and e(H) - 1 colours suffice
        assert len(set(col.values())) <= 4
        assert col[2] == col[3]  # edge 3 misses edge 2; they share a class

    def test_family_must_be_useful(self, fano):
        fam = UsefulFamily(edges=(0, 1), pair_witnesses=(0,))
        with pytest.raises(ValueError, match="useful"):
            useful_cover_colour(fano, 1, fam, uniform_lists(fano, 7))

    def test_family_length_checked(self):
        h, _ = self._instance()
        fam = UsefulFamily(edges=(0, 1, 2, 4), pair_witnesses=(0, 1))
        with pytest.raises(ValueError, match="2 edges"):
            useful_cover_colour(h, 1, fam, uniform_lists(h, 5))

    def test_family_members_must_intersect(self):
        h, _ = self._instance()
        fam = UsefulFamily(edges=(2, 3), pair_witnesses=(0,))
        with pytest.raises(ValueError, match="intersect"):
            useful_cover_colour(h, 1, fam, uniform_lists(h, 5))

    def test_duplicate_members_rejected(self):
        h, _ = self._instance()
        fam = UsefulFamily(edges=(2, 2), pair_witnesses=(1,))
        with pytest.raises(ValueError, match="distinct"):
            useful_cover_colour(h, 1, fam, uniform_lists(h, 5))

    def test_needs_enough_edges(self, fano):
        small = Hypergraph(7, fano.edges[:6])  # e(H) < t*n
        fam = UsefulFamily(edges=(0, 1), pair_witnesses=(0,))
        with pytest.raises(ValueError, match="e\\(H\\)"):
            useful_cover_colour(small, 1, fam, uniform_lists(small, 7))

    def test_needs_full_lists(self):
        h, fam = self._instance()
        with pytest.raises(ValueError, match="t\\*n colours"):
            useful_cover_colour(h, 1, fam, uniform_lists(h, 4))


class TestFindUsefulFamily:
    def test_fano_has_none(self, fano):
        trace = []
        assert find_useful_family(fano, 1, trace=trace) is None
        assert any("scale k=2" in s for s in trace)

    def test_two_fold_fano_has_none(self, fano):
        assert find_useful_family(t_fold(fano, 2), 2) is None

    def test_fano_plus_extra_edge(self, fano):
        # adding a line-like edge creates one disjoint pair; when a family
        # comes back it must survive the mechanical certification
        h = Hypergraph(7, list(fano.edges) + [(1, 2, 3)])
        fam = find_useful_family(h, 1)
        if fam is not None:
            for a, b in fam.designated_pairs():
                assert is_t_useful(h, 1, a, b)

    def test_matching_route_short_circuits(self, k4):
        trace = []
        assert find_useful_family(k4, 1, trace=trace) is None
        assert any("matching route already suffices" in s for s in trace)

    def test_parameter_domain(self, fano):
        with pytest.raises(ValueError):
            find_useful_family(fano, 1, alpha=0)
        with pytest.raises(ValueError):
            find_useful_family(fano, 1, delta=1)
        with pytest.raises(ValueError):
            find_useful_family(fano, 0)

    def test_returned_families_certify_on_corpus(self):
        for h, t in make_corpus(12, base_seed=5300, n_range=(4, 10)):
            fam = find_useful_family(h, t)
            if fam is None:
                continue
            assert len(set(fam.edges)) == len(fam.edges)
            for a, b in fam.designated_pairs():
                assert is_t_useful(h, t, a, b)


class TestColourExtremal:
    def test_fano_seven_colours(self, fano):
        lists = uniform_lists(fano, 7)
        col, report = colour_extremal(fano, 1, lists)
        assert isinstance(col, dict)
        validate_colouring(fano, col, lists=lists)
        assert len(set(col.values())) == 7
        assert report.rung == "2: all-distinct (e = t*n, intersecting)"

    def test_fano_minus_line_six_colours(self, fano):
        h = Hypergraph(7, fano.edges[:6])
        lists = uniform_lists(h, 6)
        col, report = colour_extremal(h, 1, lists)
        assert isinstance(col, dict)
        assert len(set(col.values())) == 6
        assert report.rung.startswith("1:")

    def test_k4_three_colours_via_matching(self, k4):
        lists = uniform_lists(k4, 4)
        col, report = colour_extremal(k4, 1, lists)
        assert isinstance(col, dict)
        validate_colouring(k4, col, lists=lists)
        assert len(set(col.values())) <= 3
        assert report.rung == "4: maximum complement matching"
        assert report.matching_size == 3

    def test_two_disjoint_edges_share(self):
        h = Hypergraph(4, [(0, 1), (2, 3)])
        col, _report = colour_extremal(h, 1, {0: [9], 1: [9]})
        assert col == {0: 9, 1: 9}

    def test_fano_six_lists_proved_impossible(self, fano):
        out, report = colour_extremal(fano, 1, uniform_lists(fano, 6))
        assert isinstance(out, ColouringFailure)
        assert out.detail == "not list-colourable"
        assert report.rung is None
        assert any("no list colouring exists" in s for s in report.attempts)

    def test_exact_budget_respected(self, fano):
        out, report = colour_extremal(fano, 1, uniform_lists(fano, 6), exact_budget=5)
        assert isinstance(out, ColouringFailure)
        assert any("over budget" in s for s in report.attempts)

    def test_empty_hypergraph(self):
        col, report = colour_extremal(Hypergraph(3, []), 1, {})
        assert col == {}
        assert report.rung == "empty"

    def test_near_pencil_needs_exactly_tn(self):
        h = near_pencil(6)
        lists = uniform_lists(h, 6)
        col, _ = colour_extremal(h, 1, lists)
        assert isinstance(col, dict)
        assert len(set(col.values())) == 6
        out, _ = colour_extremal(h, 1, uniform_lists(h, 5))
        assert isinstance(out, ColouringFailure)

    def test_validates_on_corpus(self):
        for h, t in make_corpus(12, base_seed=5400, n_range=(4, 9)):
            lists = uniform_lists(h, max(1, t * h.n))
            col, report = colour_extremal(h, t, lists)
            if isinstance(col, dict):
                validate_colouring(h, col, lists=lists)
            else:
                assert report.rung is None
