import json
import subprocess
import sys

import numpy as np
import pytest

from fermitangle.cli import main, parse_sites
from fermitangle.io import load_state
from fermitangle.trap import TrapGrid, analytic_ordered_kernel, read_kernel_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def states(tmp_path, capsys):
    code, _, _ = run(capsys, "examples", tmp_path / "states")
    assert code == 0
    return tmp_path / "states"


class TestExamples:
    def test_files(self, states):
        assert sorted(p.name for p in states.iterdir()) == ["non-slater-AB.json", "random-slater.json",
                                                            "slater-AB.json"]

    def test_slater_round_trip(self, states):
        np.testing.assert_array_equal(load_state(states / "slater-AB.json").amplitudes, [0, 0, 1, 0, 0, 0])

    def test_seed_recorded_and_deterministic(self, tmp_path, capsys):
        run(capsys, "examples", tmp_path / "a", "--seed", 7)
        run(capsys, "examples", tmp_path / "b", "--seed", 7)
        a = (tmp_path / "a" / "random-slater.json").read_bytes()
        assert a == (tmp_path / "b" / "random-slater.json").read_bytes()
        assert json.loads(a)["seed"] == 7

    def test_env_seed(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("FERMITANGLE_SEED", "99")
        run(capsys, "examples", tmp_path / "a")
        run(capsys, "examples", tmp_path / "b", "--seed", 99)
        assert json.loads((tmp_path / "a" / "random-slater.json").read_text())["seed"] == 99
        assert (tmp_path / "a" / "random-slater.json").read_bytes() == \
            (tmp_path / "b" / "random-slater.json").read_bytes()

    def test_write_failure(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code, _, err = run(capsys, "examples", blocker / "sub")
        assert code == 5

    def test_emitted_files_analyze(self, states, capsys):
        expected = {"slater-AB.json": "NonEntangled", "non-slater-AB.json": "Entangled",
                    "random-slater.json": "NonEntangled"}
        for name, verdict in expected.items():
            code, out, _ = run(capsys, "analyze", states / name, "--all", "--json")
            assert code == 0
            assert json.loads(out)["bipartitions"][0]["verdict"] == verdict


class TestAnalyze:
    def test_slater(self, states, capsys):
        code, out, _ = run(capsys, "analyze", states / "slater-AB.json", "--all", "--json")
        r = json.loads(out)
        assert code == 0
        row = r["bipartitions"][0]
        assert row["verdict"] == "NonEntangled"
        assert row["purity"] == 0.5
        assert r["slater_rank"] == 1

    def test_non_slater(self, states, capsys):
        code, out, _ = run(capsys, "analyze", states / "non-slater-AB.json", "--json")
        r = json.loads(out)
        row = r["bipartitions"][0]
        assert (row["verdict"], row["purity"], row["fermionic_concurrence"]) == ("Entangled", 0.25, 1.0)
        assert r["slater_rank"] == 2
        assert r["concurrence_2f"] == 1.0
        assert r["freeze"]["concurrence_2qubit"] == 1.0

    def test_human_output(self, states, capsys):
        code, out, _ = run(capsys, "analyze", states / "non-slater-AB.json")
        assert code == 0
        assert "verdict=Entangled" in out and "slater rank: 2" in out

    def test_json_keys_stable(self, states, capsys):
        _, out, _ = run(capsys, "analyze", states / "random-slater.json", "--json")
        r = json.loads(out)
        assert set(r) == {"input", "tolerance", "bipartitions", "slater_rank", "concurrence_2f", "freeze"}
        assert set(r["bipartitions"][0]) == {"M", "purity", "linear_entropy", "bounds", "verdict", "margin",
                                             "fermionic_concurrence"}

    def test_twelve_significant_digits(self, states, capsys):
        _, out, _ = run(capsys, "analyze", states / "random-slater.json", "--json")
        for token in json.loads(out)["bipartitions"][0].values():
            if isinstance(token, float):
                assert float(f"{token:.12g}") == token

    def test_bad_m(self, states, capsys):
        assert run(capsys, "analyze", states / "slater-AB.json", "--bipartition", 2)[0] == 4
        assert run(capsys, "analyze", states / "slater-AB.json", "-M", 0)[0] == 4

    def test_malformed(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run(capsys, "analyze", p)[0] == 2
        assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 2

    def test_norm_deviation(self, tmp_path, capsys):
        p = tmp_path / "big.json"
        p.write_text(json.dumps({"d": 4, "N": 2, "amplitudes": [{"modes": [0, 1], "re": 2.0, "im": 0}]}))
        assert run(capsys, "analyze", p)[0] == 3

    def test_three_fermions_all(self, tmp_path, capsys):
        p = tmp_path / "three.json"
        p.write_text(json.dumps({"d": 6, "N": 3, "amplitudes": [
            {"modes": [0, 1, 2], "re": 0.6, "im": 0}, {"modes": [3, 4, 5], "re": 0.8, "im": 0}]}))
        code, out, _ = run(capsys, "analyze", p, "--all", "--json")
        r = json.loads(out)
        assert code == 0
        assert [row["M"] for row in r["bipartitions"]] == [1, 2]
        assert all(row["verdict"] == "Entangled" for row in r["bipartitions"])
        assert r["slater_rank"] is None


class TestTrap:
    def test_reference_values(self, capsys):
        code, out, _ = run(capsys, "trap", "--grid-points", 600, "--extent", 6, "--json")
        r = json.loads(out)
        assert code == 0
        assert abs(r["S_L_labeled"] - 0.36) <= 0.01
        assert abs(r["S_L_ordered"] - 0.5) <= 1e-3

    def test_convergence_shrinks(self, capsys):
        _, coarse, _ = run(capsys, "trap", "--grid-points", 50, "--extent", 4, "--json")
        _, fine, _ = run(capsys, "trap", "--grid-points", 600, "--extent", 6, "--json")
        assert json.loads(fine)["convergence"] < json.loads(coarse)["convergence"]

    def test_emit_kernels(self, tmp_path, capsys):
        code, out, _ = run(capsys, "trap", "--grid-points", 120, "--extent", 5, "--emit-kernels", tmp_path, "--json")
        assert code == 0
        nodes, values = read_kernel_csv(tmp_path / "kernel_ordered.csv")
        np.testing.assert_allclose(values, analytic_ordered_kernel(TrapGrid(5.0, 120)), atol=1e-6)
        assert (tmp_path / "density_labeled.csv").read_text().startswith("u,density\n")
        assert len(json.loads(out)["files"]) == 4

    @pytest.mark.parametrize("argv", [("--grid-points", 20), ("--extent", 2)])
    def test_too_coarse(self, capsys, argv):
        assert run(capsys, "trap", *argv)[0] == 6

    def test_human_output(self, capsys):
        code, out, _ = run(capsys, "trap", "--grid-points", 100)
        assert code == 0 and "S_L(labeled)" in out


class TestFreeze:
    def test_non_slater(self, states, capsys):
        code, out, _ = run(capsys, "freeze", states / "non-slater-AB.json", "--json")
        r = json.loads(out)
        assert code == 0
        assert r["concurrence_2qubit"] == 1.0 and r["fermionic_concurrence"] == 1.0
        assert r["schmidt_coefficients"] == [0.707106781187, 0.707106781187]
        assert [[e["re"] for e in row] for row in r["amplitude_matrix"]] == [[0, 0.707106781187],
                                                                            [0.707106781187, 0]]

    def test_slater(self, states, capsys):
        code, out, _ = run(capsys, "freeze", states / "slater-AB.json", "--sites", "A0,A1,B0,B1", "--json")
        r = json.loads(out)
        assert r["concurrence_2qubit"] == 0 and r["fermionic_concurrence"] == 0
        assert r["schmidt_coefficients"] == [1.0, 0.0]

    def test_double_occupancy(self, tmp_path, capsys):
        p = tmp_path / "same.json"
        p.write_text(json.dumps({"d": 4, "N": 2, "amplitudes": [{"modes": [0, 1], "re": 1.0, "im": 0}]}))
        assert run(capsys, "freeze", p)[0] == 7

    def test_three_fermions(self, tmp_path, capsys):
        p = tmp_path / "three.json"
        p.write_text(json.dumps({"d": 4, "N": 3, "amplitudes": [{"modes": [0, 1, 2], "re": 1.0, "im": 0}]}))
        assert run(capsys, "freeze", p)[0] == 7

    def test_human_output(self, states, capsys):
        code, out, _ = run(capsys, "freeze", states / "non-slater-AB.json")
        assert code == 0 and "schmidt coefficients" in out

    def test_parse_sites(self):
        assert parse_sites("A0,A1,B0,B1") == [("A", 0), ("A", 1), ("B", 0), ("B", 1)]
        assert parse_sites("left0, right0") == [("left", 0), ("right", 0)]


def test_module_entry_point(states):
    proc = subprocess.run([sys.executable, "-m", "fermitangle", "analyze", str(states / "slater-AB.json"), "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["bipartitions"][0]["verdict"] == "NonEntangled"
