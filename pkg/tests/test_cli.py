import json
import subprocess
import sys

import pytest

from gencore import fixtures
from gencore.cli import main
from gencore.matio import parse_matrix, to_json

PINV_CSV = "2/15,-1/15,0\n2/15,-1/15,0\n2/15,-1/15,0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def record(out):
    return json.loads(out)


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


class TestCompute:
    def test_inconsistent_exit_2(self, capsys):
        code, out, _ = run(capsys, "compute", "--fixture", "ex3_4", "--inverse", "im-core", "--i", "1", "--m", "1")
        assert code == 2
        rec = record(out)
        assert rec["status"] == "inconsistent" and rec["consistent"] is False

    def test_printed_pinv(self, capsys):
        code, out, _ = run(capsys, "compute", "--fixture", "ex4_6_sq", "--inverse", "mp", "--backend", "exact")
        assert code == 0
        rec = record(out)
        assert rec["backend"] == "exact" and rec["verify"]["overall"]
        assert rec["result"]["data"][0] == [["2/15", "0"], ["-1/15", "0"], ["0", "0"]]

    def test_identity_drazin(self, capsys, files):
        path = files("eye.csv", "1,0,0\n0,1,0\n0,0,1\n")
        code, out, _ = run(capsys, "compute", "--input", path, "--inverse", "drazin", "--matrix-only", "--format", "csv")
        assert code == 0
        assert out == "1.0,0.0,0.0\n0.0,1.0,0.0\n0.0,0.0,1.0\n"

    def test_rational_forces_exact(self, capsys, files):
        path = files("r.csv", "1/2,0\n0,2\n")
        code, out, _ = run(capsys, "compute", "--input", path, "--inverse", "group")
        assert code == 0 and record(out)["backend"] == "exact"
        code, out, _ = run(capsys, "compute", "--input", path, "--inverse", "group", "--backend", "float")
        assert record(out)["backend"] == "float"

    def test_env_backend(self, capsys, files, monkeypatch):
        monkeypatch.setenv("GENCORE_DEFAULT_BACKEND", "exact")
        path = files("a.csv", "2,1\n1,1\n")
        code, out, _ = run(capsys, "compute", "--input", path, "--inverse", "core")
        assert code == 0 and record(out)["backend"] == "exact"

    def test_group_index_too_large_exit_2(self, capsys):
        code, out, _ = run(capsys, "compute", "--fixture", "ex4_6", "--inverse", "group")
        assert code == 2 and record(out)["error"] == "IndexTooLarge"

    @pytest.mark.parametrize("alg", ["definition", "rank-chain", "core-nilpotent", "hs-recursive"])
    def test_algorithms(self, capsys, alg):
        code, out, _ = run(
            capsys, "compute", "--fixture", "ex4_6", "--inverse", "im-core", "--i", "2", "--m", "1",
            "--algorithm", alg, "--backend", "float",
        )
        assert code == 0 and record(out)["verify"]["overall"]

    def test_jm_core_record(self, capsys):
        code, out, _ = run(capsys, "compute", "--fixture", "ex4_5", "--inverse", "jm-core", "--j", "3", "--m", "1")
        rec = record(out)
        assert code == 0 and rec["consistent"] and rec["params"] == {"j": 3, "m": 1}

    def test_numeric_failure_exit_4(self, capsys, files):
        path = files("amb.csv", "1,0\n0,1e-12\n")
        code, out, _ = run(capsys, "compute", "--input", path, "--inverse", "drazin")
        assert code == 4 and record(out)["error"] == "RankDecisionAmbiguous"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = run(capsys, "compute", "--fixture", "ex4_6", "--inverse", "dmp", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["status"] == "ok"


class TestInputErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["compute", "--fixture", "ex4_6", "--inverse", "im-core", "--m", "1"],
            ["compute", "--fixture", "ex4_6", "--inverse", "nope"],
            ["compute", "--fixture", "ex4_6", "--inverse", "im-core", "--i", "0", "--m", "1"],
            ["compute", "--fixture", "missing", "--inverse", "mp"],
            ["compute", "--input", "/nonexistent/file.csv", "--inverse", "mp"],
            ["compute", "--fixture", "ex4_6", "--inverse", "jm-core", "--j", "1", "--m", "1", "--algorithm", "rank-chain"],
            ["fixtures", "--show", "nope"],
            [],
        ],
    )
    def test_exit_3(self, capsys, argv):
        assert run(capsys, *argv)[0] == 3

    def test_ragged(self, capsys, files):
        path = files("bad.csv", "1,2\n3\n")
        assert run(capsys, "compute", "--input", path, "--inverse", "mp")[0] == 3

    def test_rectangular_drazin(self, capsys, files):
        path = files("rect.csv", "1,2,3\n4,5,6\n")
        assert run(capsys, "compute", "--input", path, "--inverse", "drazin")[0] == 3
        assert run(capsys, "compute", "--input", path, "--inverse", "mp")[0] == 0

    def test_hs_on_exact(self, capsys):
        code, _, _ = run(
            capsys, "compute", "--fixture", "ex4_6", "--inverse", "core-ep", "--algorithm", "hs-recursive",
            "--backend", "exact",
        )
        assert code == 3


class TestIndex:
    @pytest.mark.parametrize("name,k", [("ex3_4", 2), ("ex4_5", 3), ("ex4_6", 2)])
    def test_fixtures(self, capsys, name, k):
        code, out, _ = run(capsys, "index", "--fixture", name)
        assert code == 0 and record(out)["index"] == k

    def test_identity(self, capsys, files):
        path = files("eye.csv", "1,0\n0,1\n")
        code, out, _ = run(capsys, "index", "--input", path)
        assert record(out) == {"backend": "float", "index": 0, "rank_chain": [2, 2]}


class TestVerify:
    def test_printed_pinv(self, capsys, files):
        cand = files("x.csv", PINV_CSV)
        code, out, _ = run(capsys, "verify", "--fixture", "ex4_6_sq", "--candidate", cand, "--inverse", "mp")
        assert code == 0 and record(out)["overall"]

    def test_zero_drazin(self, capsys, files):
        cand = files("z.csv", "0,0\n0,0\n")
        assert run(capsys, "verify", "--fixture", "ex3_4", "--candidate", cand, "--inverse", "drazin")[0] == 0

    def test_wrong_jm_candidate(self, capsys, files):
        # A(A^2)^+ for ex4_6
        cand = files("w.json", to_json(fixtures.get("ex4_6") @ parse_matrix(PINV_CSV).to_mat(True)))
        code, out, _ = run(
            capsys, "verify", "--fixture", "ex4_6", "--candidate", cand, "--inverse", "jm-core",
            "--j", "2", "--m", "1", "--text",
        )
        assert code == 5
        assert out.startswith("JmCore(2, 1): FAIL")

    def test_outer_kind(self, capsys, files):
        cand = files("z.csv", "0,0,0\n0,0,0\n0,0,0\n")
        assert run(capsys, "verify", "--fixture", "ex4_6", "--candidate", cand, "--inverse", "outer")[0] == 0

    def test_shape_mismatch(self, capsys, files):
        cand = files("z.csv", "0,0\n0,0\n")
        assert run(capsys, "verify", "--fixture", "ex4_6", "--candidate", cand, "--inverse", "mp")[0] == 3


class TestFixtures:
    def test_listing(self, capsys):
        code, out, _ = run(capsys, "fixtures")
        assert code == 0
        assert [line.split()[0] for line in out.splitlines()] == ["ex3_4", "ex4_5", "ex4_6", "ex4_6_sq"]

    def test_show(self, capsys):
        code, out, _ = run(capsys, "fixtures", "--show", "ex4_6", "--format", "csv")
        assert out == "2,2,1\n-1,-1,0\n0,0,0\n"
        code, out, _ = run(capsys, "fixtures", "--show", "ex4_5")
        assert parse_matrix(out).to_mat(True) == fixtures.get("ex4_5")


class TestRoundTrip:
    @pytest.mark.parametrize("backend", ["exact", "float"])
    @pytest.mark.parametrize("name", list(fixtures.FIXTURES))
    def test_fixture_json_bit_exact(self, capsys, tmp_path, name, backend):
        _, first, _ = run(capsys, "fixtures", "--show", name)
        assert to_json(parse_matrix(first).to_mat(True)) == first
        path = tmp_path / "m.json"
        path.write_text(first)
        _, out, _ = run(
            capsys, "compute", "--input", str(path), "--inverse", "mp", "--matrix-only", "--backend", backend
        )
        assert to_json(parse_matrix(out).to_mat(backend == "exact")) == out

    def test_float_result_round_trip(self, capsys, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("0.1,0.2+0.3i\n-0.7i,1e-5\n")
        _, out, _ = run(capsys, "compute", "--input", str(path), "--inverse", "mp", "--matrix-only")
        M = parse_matrix(out).to_mat(False)
        assert to_json(M) == out


class TestBatch:
    def test_order_and_max_code(self, capsys, files):
        good = files("g.csv", "2,1\n1,1\n")
        nil = files("n.csv", "0,1\n0,0\n")
        bad = files("b.csv", "1,\n")
        code, out, _ = run(capsys, "batch", "--inverse", "group", "--jobs", "3", good, nil, bad, good)
        recs = [json.loads(line) for line in out.splitlines()]
        assert [r["input"] for r in recs] == [good, nil, bad, good]
        assert [r["status"] for r in recs] == ["ok", "error", "error", "ok"]
        assert code == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gencore", "index", "--fixture", "ex4_5"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["index"] == 3
