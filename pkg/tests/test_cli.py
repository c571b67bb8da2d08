"""Flat-file formats and the command line front end."""

import json

import pytest

from hyperchrom import (
    Hypergraph,
    degree_stats,
    near_pencil,
    projective_plane,
    t_fold,
)
from hyperchrom.cli import format_hg, main, parse_hg
from tests.conftest import make_corpus


def _write(tmp_path, name, h):
    path = tmp_path / name
    path.write_text(format_hg(h))
    return str(path)


def _report(capsys):
    return json.loads(capsys.readouterr().out)


class TestParseHg:
    def test_triangle(self):
        assert parse_hg("3 3\n0 1\n1 2\n0 2") == Hypergraph(3, [(0, 1), (1, 2), (0, 2)])

    def test_fano_profile(self, fano):
        text = format_hg(fano)
        h = parse_hg(text)
        stats = degree_stats(h)
        assert h.n == 7 and h.m == 7
        assert stats.max_degree == 3
        assert all(d == 3 for d in stats.degree)
        assert stats.max_codegree == 1
        assert all(len(e) == 3 for e in h.edges)

    def test_missing_edge_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_hg("2 1\n")

    def test_vertex_out_of_range(self):
        with pytest.raises(ValueError, match="line 2.*vertex 3"):
            parse_hg("3 1\n0 3")

    def test_extra_edge_lines(self):
        with pytest.raises(ValueError, match="line 3.*declared"):
            parse_hg("2 1\n0 1\n0 1")

    def test_comments_and_blanks_ignored(self):
        text = "# instance\n\n3 2  # header\n0 1\n\n# tail\n1 2\n"
        assert parse_hg(text) == Hypergraph(3, [(0, 1), (1, 2)])

    def test_bad_header(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_hg("3\n0 1")
        with pytest.raises(ValueError, match="two integers"):
            parse_hg("three 3\n0 1")
        with pytest.raises(ValueError, match="header"):
            parse_hg("")

    def test_non_integer_vertex(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_hg("3 1\na b")

    def test_round_trip_corpus(self):
        for h, _t in make_corpus(12, base_seed=77):
            assert parse_hg(format_hg(h)) == h

    def test_duplicate_edges_preserved(self):
        h = parse_hg("3 2\n0 1\n0 1")
        assert h.m == 2 and h.edges[0] == h.edges[1]


class TestGen:
    def test_plane_to_stdout(self, capsys, fano):
        assert main(["gen", "--family", "plane", "--q", "2"]) == 0
        h = parse_hg(capsys.readouterr().out)
        assert h.n == 7 and h.m == 7
        assert degree_stats(h).max_codegree == 1

    def test_pencil_to_file(self, tmp_path, capsys):
        out = tmp_path / "np5.hg"
        assert main(["gen", "--family", "pencil", "--n", "5", "--out", str(out)]) == 0
        rep = _report(capsys)
        assert rep["command"] == "gen" and rep["outcome"] == "ok"
        assert rep["certificates"] == {"n": 5, "m": 5}
        assert parse_hg(out.read_text()) == near_pencil(5)

    def test_fold(self, capsys):
        assert main(["gen", "--family", "plane", "--q", "2", "--fold", "2"]) == 0
        h = parse_hg(capsys.readouterr().out)
        assert h == t_fold(projective_plane(2), 2)

    def test_random_deterministic(self, capsys):
        args = ["gen", "--family", "random", "--n", "9", "--t", "2", "--seed", "5"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first

    def test_plane_order_one_is_usage_error(self, capsys):
        assert main(["gen", "--family", "plane", "--q", "1"]) == 2
        assert "near_pencil" in capsys.readouterr().err

    def test_missing_flag_is_usage_error(self, capsys):
        assert main(["gen", "--family", "plane"]) == 2
        capsys.readouterr()


class TestOrder:
    def test_reorder_report(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["order", "--in", path, "--t", "1"]) == 0
        rep = _report(capsys)
        assert rep["command"] == "order"
        certs = rep["certificates"]
        assert certs["case"] == "B"
        assert certs["e_star"] == 6
        assert sorted(certs["ordering"]) == list(range(7))
        assert set(certs["forward_degrees"]) == {str(e) for e in range(7)}

    def test_stability_partition_report(self, tmp_path, capsys):
        h = Hypergraph(6, [(0, 1), (2, 3), (4, 5)])
        path = _write(tmp_path, "disjoint.hg", h)
        assert main(["order", "--in", path, "--t", "1", "--partition", "stability"]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "ok"
        assert set(rep["certificates"]["parts"]) == {"H1", "H2", "W"}
        assert all(rep["certificates"]["property_flags"].values())

    def test_extremal_partition_report(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(
            ["order", "--in", path, "--t", "1", "--partition", "extremal", "--r0", "2"]
        ) == 0
        rep = _report(capsys)
        assert set(rep["certificates"]["parts"]) == {"H1", "H2", "H3"}

    def test_missing_file(self, capsys):
        assert main(["order", "--in", "/nonexistent.hg", "--t", "1"]) == 2
        assert "error:" in capsys.readouterr().err


class TestColor:
    def test_two_fold_fano_fourteen(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano2.hg", t_fold(fano, 2))
        code = main(
            ["color", "--in", path, "--t", "2", "--lists", "uniform:14", "--mode", "pipeline"]
        )
        rep = _report(capsys)
        assert code == 0
        assert rep["colours_used"] == 14
        assert len(rep["outcome"]["colouring"]) == 14

    def test_not_colourable_exit_one(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        code = main(["color", "--in", path, "--t", "1", "--lists", "uniform:6"])
        rep = _report(capsys)
        assert code == 1
        assert rep["outcome"]["stage"] == "exact"
        assert rep["colours_used"] is None

    def test_deterministic_reports(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        args = ["color", "--in", path, "--t", "1", "--lists", "uniform:7", "--seed", "3"]
        assert main(args) == 0
        first = _report(capsys)
        assert main(args) == 0
        second = _report(capsys)
        assert first["input_digest"] == second["input_digest"]
        assert first["outcome"] == second["outcome"]
        assert first["colours_used"] == second["colours_used"]

    def test_extremal_mode(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        code = main(
            ["color", "--in", path, "--t", "1", "--lists", "uniform:7", "--mode", "extremal"]
        )
        rep = _report(capsys)
        assert code == 0
        assert rep["colours_used"] == 7
        assert rep["certificates"]["report"]["rung"].startswith("2:")

    def test_lists_file(self, tmp_path, capsys, triangle):
        path = _write(tmp_path, "tri.hg", triangle)
        lists = tmp_path / "lists.txt"
        lists.write_text("# one line per edge\n1 2 3\n1 2 3\n1 2 3\n")
        code = main(["color", "--in", path, "--t", "1", "--lists", str(lists)])
        rep = _report(capsys)
        assert code == 0
        assert set(map(int, rep["outcome"]["colouring"].values())) <= {1, 2, 3}

    def test_lists_file_wrong_length(self, tmp_path, capsys, triangle):
        path = _write(tmp_path, "tri.hg", triangle)
        lists = tmp_path / "lists.txt"
        lists.write_text("1 2\n1 2\n")
        assert main(["color", "--in", path, "--t", "1", "--lists", str(lists)]) == 2
        assert "one per edge" in capsys.readouterr().err


class TestExact:
    def test_fano_chromatic_index(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["exact", "--in", path]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "ok"
        assert rep["colours_used"] == 7
        assert rep["certificates"]["chromatic_index"] == 7

    def test_list_no(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["exact", "--in", path, "--lists", "uniform:6"]) == 1
        rep = _report(capsys)
        assert rep["outcome"] == "no"

    def test_list_yes(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["exact", "--in", path, "--lists", "uniform:7"]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "yes"
        assert rep["colours_used"] == 7

    def test_budget_refusal(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["exact", "--in", path, "--budget-edges", "3"]) == 1
        rep = _report(capsys)
        assert rep["outcome"] == "budget"
        assert rep["certificates"]["type"] == "BudgetExceeded"


class TestClassify:
    def test_near_pencil(self, tmp_path, capsys):
        path = _write(tmp_path, "np5.hg", near_pencil(5))
        assert main(["classify", "--in", path, "--t", "1"]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "holds"
        assert rep["certificates"]["classification"]["kind"]["type"] == "TFoldNearPencil"

    def test_fano_plane(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["classify", "--in", path]) == 0
        rep = _report(capsys)
        kind = rep["certificates"]["classification"]["kind"]
        assert kind["type"] == "TFoldProjectivePlane" and kind["k"] == 2
        assert rep["certificates"]["debruijn_erdos"]["bound_holds"] is True


class TestVerify:
    def test_fano_all_checks(self, tmp_path, capsys, fano):
        path = _write(tmp_path, "fano.hg", fano)
        assert main(["verify", "--in", path, "--t", "1"]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "holds"
        checks = rep["certificates"]["checks"]
        assert [c["name"] for c in checks] == [
            "hg-round-trip",
            "volume-vs-codegree",
            "dual-dual-isomorphic",
            "greedy-guarantee",
            "reorder-case-B-O1",
            "edge-count-bound",
            "chromatic-index-bounds",
        ]
        assert all(c["status"] in ("ok", "skipped") for c in checks)

    def test_corpus_instance(self, tmp_path, capsys):
        h, t = make_corpus(1, base_seed=4242)[0]
        path = _write(tmp_path, "rand.hg", h)
        assert main(["verify", "--in", path, "--t", str(t)]) == 0
        rep = _report(capsys)
        assert rep["outcome"] == "holds"


class TestSweep:
    def test_small_sweep(self, capsys):
        assert main(["sweep", "--count", "4", "--seed", "1"]) == 0
        rep = _report(capsys)
        assert rep["outcome"]["invalid"] == 0
        rows = rep["certificates"]["rows"]
        assert len(rows) == 4
        assert [r["index"] for r in rows] == [0, 1, 2, 3]
        assert all(r["status"] in ("ok", "failed") for r in rows)

    def test_sweep_deterministic(self, capsys):
        assert main(["sweep", "--count", "3", "--seed", "9"]) == 0
        first = _report(capsys)
        assert main(["sweep", "--count", "3", "--seed", "9"]) == 0
        second = _report(capsys)
        assert first["certificates"]["rows"] == second["certificates"]["rows"]


class TestExitContract:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 2
        capsys.readouterr()

    def test_malformed_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.hg"
        bad.write_text("3 1\n0 9\n")
        assert main(["exact", "--in", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err
