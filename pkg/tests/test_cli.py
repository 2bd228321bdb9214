import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from subdetmax.cli import main
from subdetmax.matrix import parse_matrix
from subdetmax.search import make_hadamard_fixture

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


@pytest.fixture
def write(tmp_path):
    def _write(text, name="a.txt"):
        p = tmp_path / name
        p.write_text(text)
        return p

    return _write


@pytest.fixture
def diag123(write):
    return write("1 0 0\n0 2 0\n0 0 3\n")


def test_schemas_are_valid():
    for p in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(p.read_text()))


class TestMaximize:
    @pytest.mark.parametrize("backend", ["exact", "float"])
    def test_diag(self, capsys, diag123, backend):
        out = run_json(capsys, "maximize", diag123, "--k", 2, "--backend", backend)
        jsonschema.validate(out, schema("maximize"))
        assert out["result"] == {"rows": [2, 3], "cols": [2, 3]}
        assert out["sign"] == 1
        if backend == "exact":
            assert out["det"] == "6"
        else:
            assert out["log10_abs_det"] == pytest.approx(math.log10(6))

    def test_k0(self, capsys, diag123):
        out = run_json(capsys, "maximize", diag123, "--k", 0, "--backend", "exact")
        jsonschema.validate(out, schema("maximize"))
        assert out["result"] == {"rows": [], "cols": []} and out["det"] == "1"

    def test_k_too_large(self, capsys, write):
        p = write("1 2 3 4 5\n" * 3)
        with pytest.raises(SystemExit) as exc:
            main(["maximize", str(p), "--k", "4"])
        assert exc.value.code == 2
        assert "k exceeds min(m,n)" in capsys.readouterr().err

    def test_oracle_and_trace(self, capsys, write):
        p = write("1 0 0 0\n0 2 0 0\n0 0 3 0\n0 0 0 4\n")
        code, out, _ = run(capsys, "maximize", p, "--k", 2, "--alpha", "9/10", "--backend", "exact",
                           "--trace", "--oracle")
        assert code == 0
        lines = [json.loads(line) for line in out.splitlines()]
        *steps, final = lines
        for s in steps:
            jsonschema.validate(s, schema("maximize-trace"))
        jsonschema.validate(final, schema("maximize"))
        assert [s["step"] for s in steps] == list(range(len(steps)))
        assert steps[-1]["accepted"] is None
        assert len(steps) == final["iterations"] + 1
        assert final["oracle"]["ratio"] == "1" and final["oracle"]["holds"] is True

    def test_zero_matrix_certificate(self, capsys, write):
        p = write("1 2\n2 4\n")
        out = run_json(capsys, "maximize", p, "--k", 2, "--backend", "exact")
        assert out["zero_certificate"] is True and out["det"] == "0" and out["sign"] == 0

    def test_out_file(self, capsys, diag123, tmp_path):
        target = tmp_path / "res.json"
        code, out, _ = run(capsys, "maximize", diag123, "--k", 1, "--out", target)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["result"] == {"rows": [3], "cols": [3]}

    def test_bad_alpha(self, capsys, diag123):
        with pytest.raises(SystemExit) as exc:
            main(["maximize", str(diag123), "--k", "1", "--alpha", "2"])
        assert exc.value.code == 2


class TestInputErrors:
    @pytest.mark.parametrize("text", ["1 2\n3\n", "1/2 0.5\n", "abc\n", ""])
    def test_parse_error_exit_3(self, capsys, write, text):
        with pytest.raises(SystemExit) as exc:
            main(["maximize", str(write(text)), "--k", "1"])
        assert exc.value.code == 3

    def test_missing_file(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["detlb", str(tmp_path / "nope.txt")])
        assert exc.value.code == 3

    def test_rational_with_float_backend(self, capsys, write):
        with pytest.raises(SystemExit) as exc:
            main(["oracle", str(write("1/2 1\n")), "--k", "1", "--backend", "float"])
        assert exc.value.code == 3


class TestDetlb:
    def test_single(self, capsys, write):
        out = run_json(capsys, "detlb", write("7\n"))
        jsonschema.validate(out, schema("detlb"))
        assert out["value"] == pytest.approx(7) and out["best_k"] == 1

    def test_hadamard(self, capsys, write):
        out = run_json(capsys, "detlb", write("1 1\n1 -1\n"))
        assert out["value"] == pytest.approx(math.sqrt(2), abs=1e-9)
        assert out["statement"] == "max at k=2"
        out = run_json(capsys, "detlb", write("1 1\n1 -1\n"), "--backend", "exact")
        assert out["value"] == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_zero(self, capsys, write):
        out = run_json(capsys, "detlb", write("0 0\n0 0\n"))
        jsonschema.validate(out, schema("detlb"))
        assert out["value"] == 1 and out["best_k"] == 0
        assert all(row["sign"] == 0 for row in out["table"][1:])


class TestOracle:
    def test_diag(self, capsys, diag123):
        out = run_json(capsys, "oracle", diag123, "--k", 2, "--backend", "exact")
        jsonschema.validate(out, schema("oracle"))
        assert out["rows"] == [2, 3] and out["det"] == "6"

    def test_cap(self, capsys, diag123):
        with pytest.raises(SystemExit) as exc:
            main(["oracle", str(diag123), "--k", "2", "--oracle-cap", "3"])
        assert exc.value.code == 2


class TestVerify:
    def test_disjoint(self, capsys):
        out = run_json(capsys, "verify", "--kind", "plucker-disjoint", "--k", "1..3", "--count", 100)
        jsonschema.validate(out, schema("verify"))
        assert out["passed"] == 300 and out["failed"] == 0

    def test_general(self, capsys):
        out = run_json(capsys, "verify", "--kind", "plucker-general", "--k", "1,2", "--count", 5)
        jsonschema.validate(out, schema("verify"))
        assert len(out["configurations"]) == 3 + 8 and out["failed"] == 0

    def test_exchange(self, capsys):
        out = run_json(capsys, "verify", "--kind", "exchange", "--k", "1..3", "--count", 200)
        jsonschema.validate(out, schema("verify"))
        assert out["passed"] == 600 and out["failed"] == 0
        assert 0 < out["max_ratio_float"] <= 42

    def test_cauchy_binet(self, capsys):
        out = run_json(capsys, "verify", "--kind", "cauchy-binet", "--m", 2, "--n", 4, "--count", 50)
        jsonschema.validate(out, schema("verify"))
        assert out["passed"] == 50 and out["failed"] == 0

    def test_bad_k(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--kind", "exchange", "--k", "x"])
        assert exc.value.code == 2

    def test_seed_changes_instances_not_outcome(self, capsys):
        a = run_json(capsys, "verify", "--kind", "exchange", "--k", "2", "--count", 30, "--seed", 1)
        b = run_json(capsys, "verify", "--kind", "exchange", "--k", "2", "--count", 30, "--seed", 2)
        assert a["failed"] == b["failed"] == 0
        assert a["manifest"]["seed"] == 1 and b["manifest"]["seed"] == 2


class TestFixture:
    def test_hadamard(self, capsys):
        code, out, _ = run(capsys, "fixture", "hadamard", "--k", 2, "--c", 1)
        assert code == 0
        assert parse_matrix(out, "exact") == make_hadamard_fixture(2, 1)

    def test_hadamard_surd_written_as_decimals(self, capsys):
        code, out, _ = run(capsys, "fixture", "hadamard", "--k", 2, "--c", 2)
        A = parse_matrix(out, "float")
        assert A.shape == (2, 4) and A.rows[0][2] == pytest.approx(1 / math.sqrt(2))

    def test_diagonal(self, capsys):
        code, out, _ = run(capsys, "fixture", "diagonal", "--d", "1,2,3")
        assert code == 0 and out == "1 0 0\n0 2 0\n0 0 3\n"

    def test_not_power_of_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fixture", "hadamard", "--k", "3"])
        assert exc.value.code == 2


def test_console_entry_point(diag123):
    proc = subprocess.run(
        [sys.executable, "-m", "subdetmax", "maximize", str(diag123), "--k", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["rows"] == [2, 3]
