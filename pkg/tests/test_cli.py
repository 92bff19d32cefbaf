import json
import subprocess
import sys

import pytest

from prefspace.cli import main
from prefspace.io import save_game
from prefspace.catalog import majority_vote, prisoners_dilemma, three_player_game


@pytest.fixture
def pd_file(tmp_path):
    return save_game(prisoners_dilemma(), tmp_path / "pd.json")


@pytest.fixture
def flat_file(tmp_path):
    path = tmp_path / "flat.json"
    path.write_text('{"type":"finite","strategies":[2,2],"payoffs":[[[0,0],[0,0]],[[0,0],[0,0]]]}')
    return path


def _read(path):
    return json.loads(path.read_text())


def test_project_payoff_grid_csv(pd_file, tmp_path):
    out = tmp_path / "out"
    assert main(["--game", str(pd_file), "--analysis", "project-payoff", "--player", "a", "--out", str(out)]) == 0
    lines = (out / "payoff_a.csv").read_text().splitlines()
    assert lines[0] == "alpha,beta,value"
    assert len(lines) == 90 * 90 + 1
    assert (out / "payoff_a.png").exists()
    manifest = _read(out / "manifest.json")
    assert {e["path"] for e in manifest["artifacts"]} == {"payoff_a.csv", "payoff_a.png", "project-payoff.json"}


def test_gcom_report(pd_file, tmp_path):
    assert main(["--game", str(pd_file), "--analysis", "gcom", "--out", str(tmp_path / "o")]) == 0
    rep = _read(tmp_path / "o" / "gcom.json")
    assert rep["indices"]["H"] == pytest.approx(0, abs=1e-12)
    assert rep["resolution"] == 90


def test_manifest_hash_tracks_config(pd_file, tmp_path):
    base = ["--game", str(pd_file), "--analysis", "gcom", "--format", "json"]
    main(base + ["--resolution", "20", "--out", str(tmp_path / "a")])
    main(base + ["--resolution", "20", "--out", str(tmp_path / "b")])
    main(base + ["--resolution", "24", "--out", str(tmp_path / "c")])
    ha, hb, hc = (_read(tmp_path / d / "manifest.json")["config_hash"] for d in "abc")
    assert ha == hb != hc
    assert (tmp_path / "a" / "gcom.json").read_bytes() == (tmp_path / "b" / "gcom.json").read_bytes()


def test_monte_carlo_rerun_is_byte_identical(tmp_path):
    game = save_game(three_player_game(), tmp_path / "three.json")
    args = ["--game", str(game), "--analysis", "project-payoff", "--player", "2",
            "--samples", "500", "--repeats", "2", "--seed", "7"]
    main(args + ["--out", str(tmp_path / "x")])
    main(args + ["--out", str(tmp_path / "y")])
    for name in ("payoff_b.csv", "project-payoff.json", "manifest.json"):
        assert (tmp_path / "x" / name).read_bytes() == (tmp_path / "y" / name).read_bytes()
    header = (tmp_path / "x" / "payoff_b.csv").read_text().splitlines()[0]
    assert header.startswith("sample_index,v_11,") and header.endswith("v_33,value")


def test_voting(tmp_path):
    game = save_game(majority_vote(), tmp_path / "vote.json")
    assert main(["--game", str(game), "--analysis", "voting", "--samples", "5000", "--out", str(tmp_path / "v")]) == 0
    rep = _read(tmp_path / "v" / "voting.json")
    assert rep["banzhaf"] == [0.5, 0.5, 0.5]


@pytest.mark.parametrize("extra", [
    ["--player", "z"],
    ["--player", "0"],
    ["--resolution", "2"],
    ["--format", "pdf"],
])
def test_config_errors(pd_file, tmp_path, extra, capsys):
    code = main(["--game", str(pd_file), "--analysis", "project-payoff", "--out", str(tmp_path / "o")] + extra)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_missing_game_file(tmp_path):
    assert main(["--game", str(tmp_path / "none.json"), "--analysis", "gcom", "--out", str(tmp_path)]) == 2


def test_resolution_rejected_for_three_players(tmp_path):
    game = save_game(three_player_game(), tmp_path / "three.json")
    assert main(["--game", str(game), "--analysis", "gcom", "--resolution", "30", "--out", str(tmp_path / "o")]) == 2


def test_numerical_failures_exit_3(flat_file, tmp_path):
    assert main(["--game", str(flat_file), "--analysis", "com", "--player", "a", "--out", str(tmp_path / "o")]) == 3
    assert main(["--game", str(flat_file), "--analysis", "rho-integral", "--player", "a", "--target", "b",
                 "--rho-samples", "10", "--out", str(tmp_path / "o")]) == 3


def test_rho_marks_undefined(flat_file, tmp_path):
    assert main(["--game", str(flat_file), "--analysis", "rho", "--out", str(tmp_path / "o")]) == 0
    rep = _read(tmp_path / "o" / "rho.json")
    assert rep["rho"] == [[None, None], [None, None]]


def test_console_entry_point(pd_file, tmp_path):
    res = subprocess.run([sys.executable, "-m", "prefspace.cli", "--game", str(pd_file), "--analysis", "self-harm",
                          "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert _read(tmp_path / "o" / "self-harm.json")["players"] == []


def test_unknown_analysis_is_usage_error(pd_file, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--game", str(pd_file), "--analysis", "dance", "--out", str(tmp_path)])
    assert exc.value.code == 2
