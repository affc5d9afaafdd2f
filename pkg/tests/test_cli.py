import json
import subprocess
import sys

import pytest

from gch.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def stable(obj):
    obj = dict(obj)
    obj.pop("elapsed_ms", None)
    return obj


class TestHomology:
    def test_two_connected_four(self, capsys):
        out = call_json(capsys, "homology", "--family", "2-connected", "--nodes", "4", "--mode", "exact")
        assert out["betti"] == {"4": 2} and out["torsion"] == {}
        assert out["k"] == 4 and out["family"] == "2-connected" and out["certified"] is True
        assert set(out) == {"k", "family", "mode", "betti", "torsion", "certified", "elapsed_ms"}

    def test_l_connected(self, capsys):
        out = call_json(capsys, "homology", "--family", "l-connected", "--l", "5", "--nodes", "7")
        assert out["betti"] == {"17": 20} and out["torsion"] == {"17": [3]}

    def test_modes(self, capsys):
        a = call_json(capsys, "homology", "--nodes", "5", "--mode", "modp", "--prime", "3")
        b = call_json(capsys, "homology", "--nodes", "5", "--mode", "certified")
        assert a["betti"] == b["betti"] == {"3": 24}
        assert a["certified"] is False and b["certified"] is True

    def test_csv(self, capsys):
        code, out, _ = call(capsys, "homology", "--family", "l-connected", "--l", "5",
                            "--nodes", "7", "--out", "csv")
        assert code == 0
        assert out == "degree,betti,torsion\n17,20,3\n"

    def test_deterministic_and_threads(self, capsys):
        runs = [stable(call_json(capsys, "homology", "--family", "l-connected", "--l", "3",
                                 "--nodes", "6", "--threads", t)) for t in ("1", "4", "1")]
        assert runs[0] == runs[1] == runs[2]

    def test_env_threads(self, capsys, monkeypatch):
        monkeypatch.setenv("GCH_THREADS", "2")
        assert call_json(capsys, "homology", "--nodes", "4")["betti"] == {"2": 6}


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["homology", "--nodes", "13"],
        ["homology", "--family", "bogus", "--nodes", "4"],
        ["homology", "--family", "l-connected", "--nodes", "4"],
        ["homology"],
        ["homology", "--nodes", "4", "--mode", "modp", "--prime", "10"],
        ["homology", "--nodes", "4", "--threads", "0"],
        ["config", "is-a-set", "--groups", "1"],
        ["dims", "--order", "4", "--n", "3"],
        ["nonsense"],
    ])
    def test_invalid_input(self, capsys, argv):
        code, out, err = call(capsys, *argv)
        assert code == 2 and out == ""
        assert err

    def test_capacity(self, capsys):
        code, out, err = call(capsys, "homology", "--nodes", "9")
        assert code == 4 and out == "" and "error" in err
        code, _, _ = call(capsys, "ws", "dim", "--order", "7")
        assert code == 4

    def test_verify_failure(self, capsys, monkeypatch):
        from gch import checks
        monkeypatch.setitem(checks.CHECKS, "example1", lambda: (False, {"why": "forced"}))
        code, out, _ = call(capsys, "verify", "--check", "example1")
        assert code == 3
        assert json.loads(out) == {"check": "example1", "passed": False, "details": {"why": "forced"}}

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "gch.cli", "ws", "dim", "--order", "3"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout == '{"order":3,"dim":1}\n'


class TestVerify:
    @pytest.mark.parametrize("argv", [
        ["--check", "theorem1", "--max-nodes", "6"],
        ["--check", "theorem2", "--max-nodes", "5"],
        ["--check", "theorem1b", "--max-nodes", "5"],
        ["--check", "example1"],
        ["--check", "example2"],
        ["--check", "fig1-relation"],
        ["--check", "corollary1", "--max-size", "6"],
        ["--check", "prop8prime-bound", "--order", "3"],
        ["--check", "weight-spaces", "--order", "4"],
    ])
    def test_checks_pass(self, capsys, argv):
        out = call_json(capsys, "verify", *argv)
        assert out["passed"] is True

    def test_theorem1_rows(self, capsys):
        out = call_json(capsys, "verify", "--check", "theorem1", "--max-nodes", "5")
        assert [r["betti"] for r in out["details"]] == [{"1": 2}, {"2": 6}, {"3": 24}]


class TestOtherVerbs:
    def test_ws(self, capsys):
        assert call_json(capsys, "ws", "dim", "--order", "3") == {"order": 3, "dim": 1}
        assert call_json(capsys, "ws", "dim", "--order", "4", "--mode", "modp")["dim"] == 3
        rel = call_json(capsys, "ws", "relations", "--order", "2")
        assert rel["diagrams"] == 3 and rel["rank"] == 2 and rel["nontrivial_factors"] == []

    def test_ws_export(self, capsys, tmp_path):
        path = tmp_path / "rows.txt"
        call_json(capsys, "ws", "relations", "--order", "3", "--export", str(path))
        head = path.read_text().splitlines()[0].split()
        assert int(head[1]) == 15

    def test_ws_product(self, capsys):
        out = call_json(capsys, "ws", "product", "--order", "2", "--with-order", "2")
        (p,) = out["products"]
        assert p["satisfies_relations"] is True
        assert all(isinstance(v, str) for v in p["values"].values())

    def test_config(self, capsys):
        out = call_json(capsys, "config", "classes", "--parts", "2,2")
        assert out["count"] == 3 and out["classes"] == ["aabb", "abab", "abba"]
        assert out["type"] == "I" and out["complexity"] == 2
        assert call_json(capsys, "config", "classes", "--parts", "2,2,2", "--cyclic")["count"] == 5
        assert call_json(capsys, "config", "is-a-set", "--groups", "x,y;x,z;y,z")["is_a_set"] is False
        assert call_json(capsys, "config", "is-a-set", "--groups", "1,2;1,3;1,4")["is_a_set"] is True
        assert call_json(capsys, "config", "stickiness", "--config", "aaabb")["stickiness"] == 1

    def test_xi(self, capsys):
        assert call_json(capsys, "xi", "rank", "--parts", "4,2") == {"parts": [4, 2], "rank": 2, "degree": 5}
        out = call_json(capsys, "xi", "homology", "--parts", "4,2")
        assert out["betti"] == {"5": 2} and out["expected_degree"] == 5
        out = call_json(capsys, "xi", "stu", "--parts", "3", "--tau", "2", "--blocks", "1;3")
        (res,) = out["results"]
        want = "1*{1-2}x{2-3}" if res["cycle"].startswith("-") else "-1*{1-2}x{2-3}"
        assert res["split"] == want

    def test_basis(self, capsys):
        out = call_json(capsys, "basis", "--family", "2-connected", "--nodes", "4")
        assert out["degree"] == 4 and len(out["representatives"]) == 2
        out = call_json(capsys, "basis", "--nodes", "5", "--candidates", "linear")
        assert out["valid"] is True and out["degree"] == 3
        code, _, _ = call(capsys, "basis", "--family", "2-connected", "--nodes", "4", "--candidates", "linear")
        assert code == 2

    def test_dims(self, capsys):
        assert call_json(capsys, "dims", "--order", "3", "--n", "3")["dimensions"] == [0, 1]

    def test_key_value_csv(self, capsys):
        code, out, _ = call(capsys, "ws", "dim", "--order", "2", "--out", "csv")
        assert out == "key,value\norder,2\ndim,1\n"
