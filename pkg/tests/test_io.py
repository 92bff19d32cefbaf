import json

import numpy as np
import pytest

from prefspace.catalog import cournot_duopoly, majority_vote, prisoners_dilemma
from prefspace.io import (
    GameFileError,
    dumps_report,
    game_from_dict,
    game_to_dict,
    load_game,
    read_grid_csv,
    save_game,
    write_grid_csv,
    write_samples_csv,
)


def test_finite_file_format(tmp_path):
    path = tmp_path / "pd.json"
    path.write_text('{"type":"finite","strategies":[2,2],"payoffs":[[[2,2],[0,3]],[[3,0],[1,1]]]}')
    g = load_game(path)
    np.testing.assert_array_equal(g.payoffs, prisoners_dilemma().payoffs)


def test_round_trip(tmp_path):
    for g in (prisoners_dilemma(), cournot_duopoly(), majority_vote()):
        save_game(g, tmp_path / "g.json")
        back = load_game(tmp_path / "g.json")
        assert game_to_dict(back) == game_to_dict(g)


def test_cournot_and_voting_files():
    assert game_from_dict({"type": "cournot", "a": 10, "c": 2}) == cournot_duopoly()
    assert game_from_dict({"type": "voting", "weights": [1, 1, 1], "quota": 2}) == majority_vote()


@pytest.mark.parametrize("spec, field", [
    ({"strategies": [2, 2]}, "type"),
    ({"type": "finite", "payoffs": []}, "strategies"),
    ({"type": "finite", "strategies": [2, 2], "payoffs": [[[1, 1]], [[1, 1], [1]]]}, "payoffs"),
    ({"type": "finite", "strategies": [2, 2], "payoffs": [[[-1, 1], [1, 1]], [[1, 1], [1, 1]]]}, "payoffs"),
    ({"type": "cournot", "a": 10}, "c"),
    ({"type": "voting", "weights": [1, 1], "quota": 5}, "voting"),
    ({"type": "poker"}, "type"),
])
def test_errors_name_the_field(spec, field):
    with pytest.raises(GameFileError) as err:
        game_from_dict(spec)
    assert err.value.field == field


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(GameFileError, match="invalid JSON"):
        load_game(path)


def test_report_canonical():
    text = dumps_report({"b": np.float64(0.5), "a": np.array([1, 2]), "c": float("nan")})
    assert json.loads(text) == {"a": [1, 2], "b": 0.5, "c": None}
    assert text.index('"a"') < text.index('"b"')


def test_grid_csv_round_trip(tmp_path):
    ang = np.array([[0.1, 0.2], [0.3, 0.4]])
    write_grid_csv(tmp_path / "g.csv", ang, [1.5, 2.5])
    assert (tmp_path / "g.csv").read_text().splitlines()[0] == "alpha,beta,value"
    a, b, v = read_grid_csv(tmp_path / "g.csv")
    np.testing.assert_array_equal(v, [1.5, 2.5])
    np.testing.assert_array_equal(a, [0.1, 0.3])


def test_samples_csv_header(tmp_path):
    write_samples_csv(tmp_path / "s.csv", np.stack([np.eye(2)] * 3), [1, 2, 3])
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "sample_index,v_11,v_12,v_21,v_22,value"
    assert len(lines) == 4


@pytest.mark.parametrize("text", ["", "alpha,beta,value\n", "x,y,z\n1,2,3\n", "alpha,beta,value\n1,2,oops\n"])
def test_malformed_grid_csv(tmp_path, text):
    path = tmp_path / "g.csv"
    path.write_text(text)
    with pytest.raises(ValueError):
        read_grid_csv(path)
