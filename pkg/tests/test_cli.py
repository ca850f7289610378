import csv
import json
import subprocess
import sys

import pytest

from eisencubic.cli import RunConfig, main, parse_eis, parse_number
from eisencubic.eisenstein import EisensteinInt as E


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# eisencubic ")
    return list(csv.DictReader(lines[1:]))


def test_parse_helpers():
    assert parse_eis("-2,-3") == E(-2, -3)
    assert parse_eis("7") == E(7, 0)
    assert parse_eis([1, 9]) == E(1, 9)
    assert parse_number("13/11") == pytest.approx(13 / 11)
    assert parse_number("1e5") == 1e5


def test_unknown_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["density", "--no-such-flag"])
    assert exc.value.code == 2


def test_unknown_command_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_invalid_value_exits_one(capsys):
    code, _, err = run(capsys, "density", "--X", "-5")
    assert code == 1 and "positive" in err
    code, _, err = run(capsys, "lfun", "--n", "2,3")
    assert code == 1


def test_symbol_negative_coordinates(capsys):
    code, out, _ = run(capsys, "symbol", "--a", "-2,-3", "--n", "1,9")
    assert code == 0
    assert len(rows(out)) == 1


def test_density_emits_one_row(capsys):
    code, out, err = run(capsys, "density", "--X", "1e4", "--v", "1/2")
    assert code == 0
    (row,) = rows(out)
    assert row["family"] == "thin" and float(row["v"]) == 0.5
    assert float(row["A_F"]) > 0
    assert err


def test_output_independent_of_workers(capsys, tmp_path):
    outs = []
    for w in ("1", "3"):
        path = tmp_path / f"fe{w}.csv"
        code, _, _ = run(capsys, "lfun", "--family-bound", "200", "--workers", w, "--out", str(path))
        assert code == 0
        outs.append(path.read_text())
    assert outs[0] == outs[1]


def test_hsum_deterministic(capsys):
    args = ("hsum", "--r", "-2,-3", "--Zmin", "100", "--Zmax", "2000", "--count", "4")
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b and len(rows(a)) == 4


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"X": 2000, "v": "1/3"}))
    code, out, _ = run(capsys, "density", "--config", str(cfg))
    assert code == 0 and float(rows(out)[0]["X"]) == 2000.0
    code, out, _ = run(capsys, "density", "--config", str(cfg), "--X", "3000")
    assert float(rows(out)[0]["X"]) == 3000.0


def test_config_unknown_key_exits_two(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"Xmax": 10}))
    with pytest.raises(SystemExit) as exc:
        main(["density", "--config", str(cfg)])
    assert exc.value.code == 2


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--criteria", "7")
    assert code == 0
    table = rows(out)
    assert table and all(r["status"] == "pass" for r in table)
    assert "seconds" not in table[0]


def test_nonvanish_endpoint(capsys):
    code, out, _ = run(capsys, "nonvanish", "--v", "13/11")
    assert code == 0
    assert "2/13" in out
    code, _, _ = run(capsys, "nonvanish", "--v", "6/5")
    assert code == 1


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("density", workers=0).validate()
    with pytest.raises(ValueError):
        RunConfig("nope").validate()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eisencubic", "gauss", "--r", "1", "--n", "-2,-3"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# eisencubic ")
