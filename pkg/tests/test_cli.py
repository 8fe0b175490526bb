import json
from pathlib import Path

import pytest

from supercech.cli import main

GOLDEN = Path(__file__).parent / "golden"

FLAGSHIP_DESC = {"n": 1, "m": 1, "even_twists": [0], "odd_twists": [-1]}
FLAGSHIP_COCYCLE = [
    {"row": 1, "col": 0, "terms": [{"z": -1, "zetas": [1], "coeff": "1"}]}
]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_inputs(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps(FLAGSHIP_DESC))
    coc = tmp_path / "cocycle.json"
    coc.write_text(json.dumps(FLAGSHIP_COCYCLE))
    return str(desc), str(coc)


def test_bott_prints_dimension(capsys):
    code, out, _ = run_cli(capsys, "bott", "--n", "1", "--d", "-2", "--q", "1")
    assert code == 0
    assert out == "1\n"


def test_bott_json_matches_golden(capsys):
    code, out, _ = run_cli(capsys, "bott", "--n", "2", "--d", "-4", "--q", "2", "--json")
    assert code == 0
    assert out == (GOLDEN / "bott_json.txt").read_text()


def test_json_and_table_agree(capsys, tmp_path):
    desc, _ = write_inputs(tmp_path)
    code, table_out, _ = run_cli(capsys, "cohomology", "--file", desc)
    assert code == 0
    code, json_out, _ = run_cli(capsys, "cohomology", "--file", desc, "--json")
    assert code == 0
    data = json.loads(json_out)
    assert "h^0: even %(even)d odd %(odd)d" % data["h"][0] in table_out
    assert "h^1: even %(even)d odd %(odd)d" % data["h"][1] in table_out


def test_obstructions_table(capsys, tmp_path):
    desc, _ = write_inputs(tmp_path)
    code, out, _ = run_cli(capsys, "obstructions", "--file", desc)
    assert code == 0
    assert "verdict: non-rigid" in out


def test_obstructions_higher_base_rigid(capsys, tmp_path):
    path = tmp_path / "n2.json"
    path.write_text(json.dumps({"n": 2, "m": 2, "even_twists": [1], "odd_twists": [-3]}))
    code, out, _ = run_cli(capsys, "obstructions", "--file", str(path), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "rigid-split"
    assert all(row["h1"] == 0 for row in data["rows"])


def test_decompose(capsys, tmp_path):
    desc, _ = write_inputs(tmp_path)
    code, out, _ = run_cli(capsys, "decompose", "--file", desc, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["pieces"][0]["summands"] == [
        {"twist": -1, "parity": "odd", "mult": 1},
        {"twist": 0, "parity": "even", "mult": 1},
    ]


def test_twisted_cohomology_via_files(capsys, tmp_path):
    desc, coc = write_inputs(tmp_path)
    code, out, _ = run_cli(capsys, "cohomology", "--file", desc, "--cocycle", coc, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["h"] == [{"even": 0, "odd": 0}, {"even": 0, "odd": 0}]


def test_spectral_report(capsys, tmp_path):
    desc, coc = write_inputs(tmp_path)
    code, out, _ = run_cli(capsys, "spectral", "--file", desc, "--cocycle", coc, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["corollary_ok"] is True
    assert data["theorem8"]["k"] == 1
    assert data["theorem8"]["symbol_match"] is True
    page1 = [p for p in data["pages"] if p["r"] == 1][0]
    assert page1["cells"] == {"0,0": {"even": 1, "odd": 0}, "1,0": {"even": 1, "odd": 0}}


def test_theorem8_command(capsys, tmp_path):
    desc, coc = write_inputs(tmp_path)
    code, out, _ = run_cli(capsys, "theorem8", "--file", desc, "--cocycle", coc)
    assert code == 0
    assert "order: 1" in out
    assert "symbol match: True" in out


def test_connection_command(capsys):
    code, out, _ = run_cli(capsys, "connection", "--d", "-1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["atiyah_classes"] == ["-1"]
    assert data["connection_exists"] is False
    assert data["theorem7"]["all_equal"] is True


def test_connection_twist_file(capsys, tmp_path):
    path = tmp_path / "twists.json"
    path.write_text(json.dumps({"twists": [0, 0]}))
    code, out, _ = run_cli(capsys, "connection", "--file", str(path))
    assert code == 0
    assert "connection exists: True" in out


def test_demo_matches_golden(capsys):
    code, out, _ = run_cli(capsys, "demo-cp11")
    assert code == 0
    assert out == (GOLDEN / "demo_cp11.txt").read_text()


def test_demo_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "demo-cp11")
    _, out2, _ = run_cli(capsys, "demo-cp11")
    assert out1 == out2


def test_exit_code_2_on_missing_file(capsys):
    code, _, err = run_cli(capsys, "cohomology", "--file", "/nonexistent.json")
    assert code == 2
    assert "input error" in err


def test_exit_code_2_on_bad_window(capsys, tmp_path):
    desc, _ = write_inputs(tmp_path)
    code, _, err = run_cli(capsys, "cohomology", "--file", desc, "--window", "oops")
    assert code == 2
    assert "--window" in err


def test_exit_code_2_on_too_small_window(capsys, tmp_path):
    desc, coc = write_inputs(tmp_path)
    code, _, err = run_cli(
        capsys, "cohomology", "--file", desc, "--cocycle", coc, "--window=-1:1"
    )
    assert code == 2
    assert "window" in err.lower()


def test_exit_code_2_on_bad_cocycle(capsys, tmp_path):
    desc, _ = write_inputs(tmp_path)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"row": 0, "col": 0, "terms": [{"z": 0, "zetas": []}]}]))
    code, _, err = run_cli(capsys, "cohomology", "--file", desc, "--cocycle", str(bad))
    assert code == 2
    assert "cocycle" in err


def test_usage_error_names_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bott", "--n", "1", "--d", "0"])
    assert exc.value.code == 2
