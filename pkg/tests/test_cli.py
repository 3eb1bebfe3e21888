import json
import subprocess
import sys
from pathlib import Path

import pytest

from eddeg import cli
from eddeg.errors import NonGeneric

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# documented command and expected count for every fixture in the repository
FIXTURE_COMMANDS = {
    "parabola.poly": [("implicit", 3), ("linear-count", 1)],
    "circle.poly": [("implicit", 2)],
    "cubic.poly": [("implicit", 7), ("linear-count", 4)],
    "twisted_cubic.poly": [("implicit", 5)],
    "parabola.param": [("parametric", 3)],
    "twisted_cubic.param": [("parametric", 5)],
    "ellipse.param": [("parametric", 4)],
}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def report(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


def test_every_fixture_is_covered():
    assert sorted(p.name for p in FIXTURES.iterdir()) == sorted(FIXTURE_COMMANDS)


@pytest.mark.parametrize("name,command,count",
                         [(name, c, k) for name, runs in FIXTURE_COMMANDS.items() for c, k in runs])
def test_fixture_smoke(capsys, name, command, count):
    r = report([command, str(FIXTURES / name)], capsys)
    assert r["count"] == count and r["agreed"] is True
    assert len(r["trials"]) == 3
    for key in ("command", "inputs", "trials", "agreed", "timings", "seed", "modulus"):
        assert key in r


def test_conormal_command(capsys):
    r = report(["conormal", str(FIXTURES / "parabola.poly"), "--dual", "u,v"], capsys)
    assert r["dimension"] == 2
    assert r["variables"] == ["x", "y", "u", "v"]


def test_multiview_example(capsys):
    r = report(["multiview", "2", "--trials", "3", "--seed", "11"], capsys)
    assert r["count"] == 6 and r["agreed"] is True
    assert r["seed"] == 11
    assert len({t["prime"] for t in r["trials"]}) == 2


def test_multiview_second_chart_and_rig_out(capsys, tmp_path):
    rig = tmp_path / "rig.json"
    r = report(["multiview", "2", "--verify-second-chart", "--rig-out", str(rig)], capsys)
    assert r["count"] == 6 and r["second_chart"]["count"] == 6
    assert json.loads(rig.read_text())["n"] == 2


def test_multiview_needs_long_flag(capsys):
    code, out, err = run(["multiview", "4"], capsys)
    assert code == 1 and out == "" and "--long" in err


def test_euler_symbolic(capsys):
    r = report(["euler", "--symbolic"], capsys)
    assert r["polynomial"] == "9/2*n^3 - 21/2*n^2 + 8*n - 4"


def test_euler_table(capsys):
    r = report(["euler", "--n", "2-4"], capsys)
    assert [row["ed_degree"] for row in r["table"]] == [6, 47, 148]


def test_euler_tsv(capsys):
    code, out, _ = run(["euler", "--n", "3", "--format", "tsv"], capsys)
    assert code == 0
    header, row = out.strip().split("\n")
    assert header.split("\t")[0] == "n"
    assert row.split("\t") == ["3", "10", "108", "54", "7", "4", "47"]


def test_milnor(capsys):
    assert report(["milnor", "x*y + x*z + y*z - x*y*z"], capsys)["milnor_number"] == 1
    assert report(["milnor", "--models"], capsys)["models"] == {"SMOOTH": 0, "NODE": -1, "UMBRELLA": 1, "TRIPLE": 15}


def strip_timings(text):
    data = json.loads(text)
    data.pop("timings")
    return json.dumps(data, sort_keys=True)


@pytest.mark.parametrize("argv", [
    ["implicit", str(FIXTURES / "circle.poly"), "--seed", "5"],
    ["multiview", "2", "--seed", "3"],
    ["euler", "--symbolic"],
])
def test_deterministic_reports(capsys, argv):
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert strip_timings(first) == strip_timings(second)


def test_modulus_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EDDEG_MODULUS", "1000003")
    r = report(["implicit", str(FIXTURES / "circle.poly")], capsys)
    assert r["modulus"] == 1000003
    assert r["trials"][0]["prime"] == 1000003
    r = report(["implicit", str(FIXTURES / "circle.poly"), "--modulus", "32003"], capsys)
    assert r["modulus"] == 32003


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["implicit", str(FIXTURES / "circle.poly"), "--trials", "2"],
    ["implicit", str(FIXTURES / "circle.poly"), "--modulus", "100"],
    ["implicit", str(FIXTURES / "missing.poly")],
    ["implicit", str(FIXTURES / "parabola.param")],
    ["multiview", "1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(argv, capsys)
    assert code == 1
    assert out == ""
    assert err


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text("# vars: x, y\n# codim: 1\nx + 2y\n")
    code, _, err = run(["implicit", str(bad)], capsys)
    assert code == 1 and "position" in err


def test_resource_limit_exit_code(capsys):
    code, out, err = run(["multiview", "2", "--max-degree", "3"], capsys)
    assert code == 3 and out == "" and "resource limit" in err


def test_nongeneric_exit_code(capsys, monkeypatch):
    def raising(*args, **kwargs):
        raise NonGeneric("trials disagree: 1, 2", ())

    monkeypatch.setattr(cli, "ed_degree", raising)
    code, out, err = run(["implicit", str(FIXTURES / "circle.poly")], capsys)
    assert code == 2 and "disagree" in err


def test_disagreeing_report_exit_code(capsys, monkeypatch):
    from eddeg.critical import EDCertificate, Trial

    monkeypatch.setattr(cli, "ed_degree", lambda *a, **k: EDCertificate.from_trials(
        [Trial(7, 0, 2), Trial(11, 1, 3), Trial(7, 2, 2)]))
    code, out, err = run(["implicit", str(FIXTURES / "circle.poly")], capsys)
    assert code == 2
    assert json.loads(out)["agreed"] is False


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eddeg.cli", "euler", "--symbolic"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["polynomial"] == "9/2*n^3 - 21/2*n^2 + 8*n - 4"
