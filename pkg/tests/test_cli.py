import json

import pytest

from threshold_lab.cli import main


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def triangle_file(tmp_path):
    return write(
        tmp_path / "triangle.json",
        {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]], "thresholds": [1, 1, 2]},
    )


@pytest.fixture
def four_cycle_file(tmp_path):
    return write(
        tmp_path / "c4.json",
        {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]], "thresholds": [1, 1, 1, 1]},
    )


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


class TestSimulate:
    def test_triangle_example(self, capsys, triangle_file):
        # BWW -> WBW -> BWW: a transient-free 2-cycle under k = (1, 1, 2)
        code, out = run(capsys, ["simulate", "--input", triangle_file, "--initial", "BWW"])
        assert code == 0
        assert out["transient"] == 0
        assert out["cycle"] == ["BWW", "WBW"]
        assert out["cycle_length"] == 2

    def test_types_instance(self, capsys, tmp_path):
        path = write(
            tmp_path / "types.json",
            {
                "n": 3,
                "edges": [[0, 1], [1, 2], [0, 2]],
                "types": [[2, 5], [2, 5], [9, 10]],
            },
        )
        code, out = run(capsys, ["simulate", "--input", path, "--initial", "BBW"])
        assert code == 0
        assert out["cycle"] == ["BBB"]

    def test_weighted_instance(self, capsys, tmp_path):
        path = write(
            tmp_path / "w.json",
            {
                "n": 2,
                "weighted_edges": [[0, 1, -1]],
                "self_loops": [],
                "thresholds": [0, 0],
            },
        )
        code, out = run(capsys, ["simulate", "--input", path, "--initial", "BW"])
        assert code == 0
        assert out["transient"] == 0 and out["cycle"] == ["BW"]

    def test_bad_profile_is_input_error(self, capsys, triangle_file):
        assert main(["simulate", "--input", triangle_file, "--initial", "BXW"]) == 2

    def test_guard_exit_code(self, capsys, tmp_path):
        path = write(
            tmp_path / "t1.json",
            {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]], "thresholds": [1, 1, 1]},
        )
        code = main(["simulate", "--input", path, "--initial", "BWW", "--max-states", "1"])
        assert code == 3


class TestEnumerate:
    def test_four_cycle_counts(self, capsys, four_cycle_file):
        code, out = run(capsys, ["enumerate", "--input", four_cycle_file])
        assert code == 0
        assert out == {"cycle_classes": 3, "fixed_points": 2, "two_cycles": 1}

    def test_guard_exit(self, capsys, four_cycle_file):
        assert main(["enumerate", "--input", four_cycle_file, "--guard-n", "3"]) == 3

    def test_guard_env_override(self, capsys, four_cycle_file, monkeypatch):
        monkeypatch.setenv("THRESHOLD_LAB_GUARD_N", "3")
        assert main(["enumerate", "--input", four_cycle_file]) == 3
        monkeypatch.setenv("THRESHOLD_LAB_GUARD_N", "24")
        assert main(["enumerate", "--input", four_cycle_file]) == 0


class TestExpand:
    def test_bipartite(self, capsys, triangle_file):
        code, out = run(capsys, ["expand", "--input", triangle_file, "--kind", "bipartite"])
        assert code == 0
        assert out["n"] == 6
        assert out["thresholds"] == [1, 1, 2, 1, 1, 2]
        assert len(out["node_map"]) == 6

    def test_symmetric(self, capsys, triangle_file):
        code, out = run(capsys, ["expand", "--input", triangle_file, "--kind", "symmetric"])
        assert code == 0
        assert out["n"] == 30

    def test_remove_node(self, capsys, tmp_path):
        path = write(
            tmp_path / "p3.json",
            {"n": 3, "edges": [[0, 1], [1, 2]], "thresholds": [1, 2, 1]},
        )
        code, out = run(
            capsys,
            ["expand", "--input", path, "--kind", "remove-node", "--node", "0", "--pin", "B"],
        )
        assert code == 0
        assert out["components"][0]["thresholds"] == [1, 1]
        assert out["components"][0]["nodes"] == [1, 2]

    def test_remove_node_requires_flags(self, capsys, tmp_path, triangle_file):
        assert main(["expand", "--input", triangle_file, "--kind", "remove-node"]) == 2

    def test_drop_self_loops(self, capsys, tmp_path):
        path = write(
            tmp_path / "loop.json",
            {
                "n": 2,
                "weighted_edges": [[0, 1, 1]],
                "self_loops": [[0, 1]],
                "thresholds": [1, 1],
            },
        )
        code, out = run(capsys, ["expand", "--input", path, "--kind", "drop-self-loops"])
        assert code == 0
        assert out["n"] == 4
        assert out["self_loops"] == []

    def test_unit_weights(self, capsys, tmp_path):
        path = write(
            tmp_path / "w2.json",
            {"n": 2, "weighted_edges": [[0, 1, 2]], "self_loops": [], "thresholds": [1, 1]},
        )
        code, out = run(capsys, ["expand", "--input", path, "--kind", "unit-weights"])
        assert code == 0
        assert out["n"] == 4
        assert all(w in (-1, 1) for _, _, w in out["weighted_edges"])


class TestReduce:
    def test_fix_with_verify(self, capsys, tmp_path):
        path = write(
            tmp_path / "f.json", {"variant": "monotone-2dnf", "n": 2, "clauses": [[1, 2]]}
        )
        code, out = run(capsys, ["reduce", "--formula", path, "--kind", "fix", "--verify"])
        assert code == 0
        assert out["n"] == 18
        assert out["verification"] == {
            "fixed_points": 18,
            "match": True,
            "oracle_sat": 1,
            "recovered_nsat": 3,
            "recovered_sat": 1,
        }

    def test_pred_with_verify(self, capsys, tmp_path):
        path = write(
            tmp_path / "f3.json", {"variant": "3cnf", "n": 1, "clauses": [[1], [-1]]}
        )
        code, out = run(capsys, ["reduce", "--formula", path, "--kind", "pred", "--verify"])
        assert code == 0
        assert out["verification"] == {"match": True, "reachable": False, "satisfiable": False}

    def test_reachable_pred_discrepancy_notice(self, capsys, tmp_path):
        path = write(
            tmp_path / "f2.json", {"variant": "monotone-2cnf", "n": 2, "clauses": [[1, 2]]}
        )
        code, out = run(
            capsys, ["reduce", "--formula", path, "--kind", "reachable-pred", "--verify"]
        )
        assert code == 0
        assert out["claimed_predecessors"] == 3
        assert out["measured_predecessors"] == 9
        assert "discrepancy" in out

    def test_bad_formula_exit(self, capsys, tmp_path):
        path = write(tmp_path / "bad.json", {"variant": "monotone-2dnf", "n": 3, "clauses": [[1, 2]]})
        assert main(["reduce", "--formula", path, "--kind", "fix"]) == 2


class TestResilience:
    def test_brute_star(self, capsys, tmp_path):
        path = write(
            tmp_path / "star.json",
            {"n": 4, "edges": [[0, 1], [0, 2], [0, 3]], "thresholds": [1, 1, 1, 1]},
        )
        code, out = run(capsys, ["resilience", "--input", path, "--K", "2", "--mode", "brute"])
        assert code == 0
        assert out["mu"] == [1, 1]
        assert out["witness_q"][0] == [1, 1]

    def test_closed_form_family_detection(self, capsys, four_cycle_file):
        code, out = run(
            capsys, ["resilience", "--input", four_cycle_file, "--K", "2", "--mode", "closed-form"]
        )
        assert code == 0
        assert out["family"] == "cycle"
        assert out["mu"] == [2, 1]

    def test_greedy(self, capsys, four_cycle_file):
        code, out = run(capsys, ["resilience", "--input", four_cycle_file, "--mode", "greedy", "--K", "4"])
        assert code == 0
        assert out["l1"] == [2, 1]

    def test_closed_form_rejects_odd_graph(self, capsys, tmp_path):
        path = write(
            tmp_path / "kite.json",
            {"n": 4, "edges": [[0, 1], [1, 2], [0, 2], [2, 3]], "thresholds": [1, 1, 1, 1]},
        )
        assert main(["resilience", "--input", path, "--K", "1", "--mode", "closed-form"]) == 2


class TestVerify:
    def test_verify_passes_and_prints_table(self, capsys):
        code = main(["verify", "--seed", "1"])
        out = capsys.readouterr().out
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
        assert len(lines) == 19
        assert all(l.startswith("PASS") for l in lines)

    def test_verify_failure_exits_4(self, capsys, monkeypatch):
        from threshold_lab import verify as verify_mod

        monkeypatch.setattr(
            verify_mod, "run_all", lambda seed=0, guard_n=24: [("stub", False, "boom")]
        )
        assert main(["verify"]) == 4
        assert "FAIL  stub" in capsys.readouterr().out


class TestDeterminism:
    def test_byte_identical_output(self, capsys, triangle_file):
        main(["expand", "--input", triangle_file, "--kind", "symmetric"])
        first = capsys.readouterr().out
        main(["expand", "--input", triangle_file, "--kind", "symmetric"])
        assert capsys.readouterr().out == first

    def test_missing_file_is_input_error(self, capsys):
        assert main(["enumerate", "--input", "/nonexistent.json"]) == 2
