import json
import subprocess
import sys

import pytest

from planarlab.cli import main
from planarlab.oracles import tutte_count


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_count_maps(capsys):
    code, out = run_cli(["count", "--class", "M", "--t", "1", "--max", "6"],
                        capsys)
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert [int(r[1]) for r in rows] == [tutte_count(n) for n in range(7)]


def test_count_unknown_class(capsys):
    code, _ = run_cli(["count", "--class", "nope"], capsys)
    assert code == 3


def test_constants_json(tmp_path, capsys):
    out_file = tmp_path / "c.json"
    code, _ = run_cli(["constants", "--t", "1", "--out", str(out_file)],
                      capsys)
    assert code == 0
    obj = json.loads(out_file.read_text())
    assert obj["nu_M"]["provenance"] == "derived"
    assert obj["rho_B"]["provenance"] == "paper"
    assert abs(obj["nu_C_bound"]["float"] - 0.041301) < 1e-4
    assert abs(obj["nu_M"]["float"] - 2 / 3) < 1e-12


def test_oracle_maps(capsys):
    code, out = run_cli(["oracle", "maps", "--edges", "3"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["3"]["count"] == 54 and obj["3"]["tutte"] == 54


def test_grammar_dump_roundtrip(tmp_path, capsys):
    out_file = tmp_path / "kbar.json"
    code, _ = run_cli(["grammar-dump", "--class", "Kbar", "--t", "1",
                       "--max-y", "12", "--out", str(out_file)], capsys)
    assert code == 0
    from planarlab.series import Series
    ser = Series.load_json(out_file)
    assert ser.coeff(0, 1) == 1 and ser.coeff(0, 4) == 11


def test_sample_census_deterministic(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        code, _ = run_cli(["sample", "map", "--edges", "2", "--count", "300",
                           "--seed", "9", "--emit", "census",
                           "--out", str(f)], capsys)
        assert code == 0
    assert f1.read_bytes() == f2.read_bytes()
    assert (tmp_path / "a.json.manifest.json").exists()


def test_experiment_identity_exit_code(tmp_path, capsys):
    code, _ = run_cli(["experiment", "identity", "--law", "toy",
                       "--out", str(tmp_path / "i.json")], capsys)
    assert code == 0
    obj = json.loads((tmp_path / "i.json").read_text())
    assert obj["passed"] is True


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "planarlab.cli", "count",
                           "--class", "M", "--max", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().splitlines()[-1].split("\t") == ["3", "54"]
