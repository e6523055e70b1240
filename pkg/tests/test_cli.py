import json
import os
import subprocess
import sys

import pytest

from dlab.cli import RunConfig, main


@pytest.fixture(autouse=True)
def restore_cap(monkeypatch):
    # --max-enum writes to os.environ; an empty value means unset and is undone after each test
    monkeypatch.setenv("DLAB_MAX_ENUM", "")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_gen_classify_slopes(tmp_path, capsys):
    path = tmp_path / "b4.json"
    code, out, _ = run(capsys, "gen", "braid", "--n", "4")
    assert code == 0
    path.write_text(out)
    assert run(capsys, "classify", "--input", str(path))[1] == "4"
    assert run(capsys, "slopes", "--input", str(path))[1] == "1/4:4,3/4:4"


def test_module_slopes(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(run(capsys, "gen", "reference", "--rho", "2", "--n", "3", "--module")[1])
    assert run(capsys, "slopes", "--input", str(path))[1] == "0:2,1/2:2,1:2"


def test_strata_table_tsv(capsys):
    code, out, _ = run(capsys, "strata-table", "--n", "5", "--format", "tsv")
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert [int(r[1]) for r in rows] == [4, 0, 3, 1, 2]


def test_frob_type(capsys):
    assert run(capsys, "frob-type", "--n", "4", "--p", "3")[1] == "OK: (2,1,1,0,2,1,1,0)"


def test_pair_pipeline(tmp_path, capsys):
    path = tmp_path / "pair.json"
    path.write_text(run(capsys, "--seed", "5", "gen", "pair", "--n", "3", "--m", "1", "--l", "1")[1])
    nf = json.loads(run(capsys, "normal-form", "--input", str(path))[1])
    assert nf["xi"] == [1, 1]
    assert int(run(capsys, "incidence-count", "--q", "3", "--input", str(path))[1]) > 0


def test_enum_lattices(capsys):
    out = json.loads(run(capsys, "enum-lattices", "--m", "1", "--l", "1")[1])
    assert sorted(e["lambda"] for e in out) == [-1, 0, 0, 1]


def test_dominance_and_inv(capsys):
    assert run(capsys, "dominance", "--a", "1,1,0,0", "--b", "2,0,1,-1")[1] == "true"
    assert run(capsys, "inv", "--g0", "2,1,0", "--g1", "2,1,0")[1] == "(2,1,0,2,1,0)"


def test_errors_are_json_with_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "classify", "--input", str(bad))
    assert code == 1 and json.loads(err)["error"] == "schema"
    code, _, err = run(capsys, "enum-lattices", "--m", "2", "--l", "1", "--precision", "3")
    assert code == 2
    code, _, err = run(capsys, "--max-enum", "10", "aut-count", "--input", str(write_braid(tmp_path, capsys)))
    assert code == 3 and "error" in json.loads(err)


def write_braid(tmp_path, capsys):
    path = tmp_path / "b3.json"
    path.write_text(run(capsys, "gen", "braid", "--n", "3")[1])
    return path


def test_run_config_sets_cap():
    RunConfig(max_enum=77).apply()
    assert os.environ["DLAB_MAX_ENUM"] == "77"


@pytest.mark.parametrize("argv", [["frob-type", "--n", "2"]])
def test_module_entry_point(argv):
    res = subprocess.run([sys.executable, "-m", "dlab.cli", *argv], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("OK")
