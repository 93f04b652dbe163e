from __future__ import annotations

import json
import subprocess
import sys

import pytest

from coxpieces.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_info(capsys):
    code, out = run(capsys, "info", "A3")
    data = json.loads(out)
    assert code == 0 and data["order"] == 24 and data["roots"] == 12 and data["longest_length"] == 6
    data = json.loads(run(capsys, "info", "B4")[1])
    assert (data["order"], data["roots"]) == (384, 32)
    data = json.loads(run(capsys, "info", "3D4")[1])
    assert data["order"] == 192 and data["twist_order"] == 3


def test_classes(capsys):
    code, out = run(capsys, "--format", "tsv", "classes", "A2")
    assert code == 0 and len(out.strip().splitlines()) == 4
    code, out = run(capsys, "classes", "3D4", "--cuspidal")
    rows = json.loads(out)
    assert {r["charpoly"] for r in rows} == {"q^4 - q^2 + 1", "q^4 - 2*q^3 + 3*q^2 - 2*q + 1",
                                            "q^4 + q^3 + q + 1", "q^4 + 2*q^3 + 3*q^2 + 2*q + 1"}


def test_pieces(capsys):
    code, out = run(capsys, "pieces", "A2", "--J", "1", "--delta", "1:1")
    assert code == 0 and len(json.loads(out)["pieces"]) == 3


def test_reduce(capsys):
    code, out = run(capsys, "reduce", "A2", "1,2,1", "--J", "1,2", "--delta", "id")
    data = json.loads(out)
    assert code == 0 and data["end_length"] == 1 and data["steps"]
    code, out = run(capsys, "reduce", "A2", "e", "--J", "1", "--delta", "id")
    assert json.loads(out)["steps"] == []


def test_good_elements(capsys):
    code, out = run(capsys, "good-elements", "2A3")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5 and all("chain" in r for r in rows)


def test_zeta(capsys):
    code, out = run(capsys, "--format", "tsv", "zeta", "A3", "--J", "1,2", "--Jp", "2,3",
                    "--delta", "1:2,2:3")
    assert code == 0 and out.startswith("# dimension\t7")


@pytest.mark.parametrize("argv", [
    ("verify", "power-identity", "2A5"),
    ("verify", "zeta", "A3", "--J", "1,2", "--Jp", "2,3", "--delta", "1:2,2:3"),
    ("verify", "min-length", "B3"),
    ("verify", "pieces", "A2", "--J", "1", "--delta", "id"),
    ("verify", "sequences", "A1", "--second", "B2"),
    ("verify", "longest-element", "B3", "D4"),
])
def test_verify_passes(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 0 and json.loads(out)["pass"]


def test_verify_failure_has_counterexample(capsys):
    code, out = run(capsys, "verify", "cuspidal", "2B2")
    data = json.loads(out)
    assert code == 1
    bad = [v for v in data["verdicts"] if not v["pass"]]
    assert bad and all("counterexample" in v for v in bad)


def test_usage_errors(capsys):
    assert main(["verify", "no-such-check", "A2"]) == 2
    assert main(["info", "Q9"]) == 2
    assert main(["reduce", "A2", "1,2", "--J", "1", "--delta", "2:2"]) == 2
    assert main([]) == 2


def test_output_is_deterministic(capsys):
    outs = {run(capsys, "verify", "good-elements", "B2")[1] for _ in range(2)}
    assert len(outs) == 1


def test_jobs_flag(capsys):
    code, out = run(capsys, "--jobs", "2", "verify", "cuspidal", "A2", "A3")
    assert code == 0 and len(json.loads(out)["verdicts"]) == 10


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "coxpieces", "info", "A2"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 6
