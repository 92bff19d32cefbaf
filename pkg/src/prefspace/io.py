"""Reading game files and writing reports and CSV grids.

Game files are JSON::

    {"type": "finite", "strategies": [2, 2], "payoffs": [[[2, 2], [0, 3]], [[3, 0], [1, 1]]]}
    {"type": "cournot", "a": 10, "c": 2}
    {"type": "voting", "weights": [1, 1, 1], "quota": 2}

Finite payoffs nest by player 1's strategy, then player 2's, and so on, with
the payoff vector innermost.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .games import CournotGame, FiniteGame, GameError, VotingGame, make_finite_game


class GameFileError(ValueError):
    """A game file is malformed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _require(data: dict, key: str):
    if key not in data:
        raise GameFileError(key, "missing")
    return data[key]


def game_from_dict(data) -> FiniteGame | CournotGame | VotingGame:
    if not isinstance(data, dict):
        raise GameFileError("type", "game description must be an object")
    kind = _require(data, "type")
    try:
        if kind == "finite":
            counts = _require(data, "strategies")
            payoffs = _require(data, "payoffs")
            try:
                tensor = np.array(payoffs, dtype=float)
            except (TypeError, ValueError) as exc:
                raise GameFileError("payoffs", "ragged or non-numeric payoff nesting") from exc
            return make_finite_game(counts, tensor, tuple(data.get("names", ())))
        if kind == "cournot":
            bounds = data.get("bounds")
            return CournotGame(float(_require(data, "a")), float(_require(data, "c")),
                               None if bounds is None else tuple(bounds))
        if kind == "voting":
            return VotingGame(tuple(_require(data, "weights")), _require(data, "quota"))
    except GameError as exc:
        raise GameFileError("payoffs" if kind == "finite" else kind, str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GameFileError):
            raise
        raise GameFileError(kind, str(exc)) from exc
    raise GameFileError("type", f"unknown game type {kind!r}")


def game_to_dict(game) -> dict:
    if isinstance(game, FiniteGame):
        out = {"type": "finite", "strategies": list(game.strategy_counts), "payoffs": game.payoffs.tolist()}
        if game.names:
            out["names"] = list(game.names)
        return out
    if isinstance(game, CournotGame):
        return {"type": "cournot", "a": game.a, "c": game.c, "bounds": [list(b) for b in game.quantity_bounds]}
    if isinstance(game, VotingGame):
        return {"type": "voting", "weights": list(game.weights), "quota": game.quota}
    raise TypeError(f"cannot serialise {type(game).__name__}")


def load_game(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GameFileError("game", f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError("game", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return game_from_dict(data)


def save_game(game, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(game_to_dict(game), indent=2) + "\n")
    return path


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if x != x else x
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_report(report: dict) -> str:
    """Canonical JSON: sorted keys, NaN as null, trailing newline."""
    return json.dumps(_plain(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: dict, path) -> Path:
    path = Path(path)
    path.write_text(dumps_report(report))
    return path


def write_grid_csv(path, angles, values) -> Path:
    """Rows ``alpha,beta,value`` in grid order."""
    path = Path(path)
    angles = np.asarray(angles, dtype=float)
    values = np.asarray(values, dtype=float)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "beta", "value"])
        for (a, b), v in zip(angles, values):
            w.writerow([repr(float(a)), repr(float(b)), repr(float(v))])
    return path


def write_samples_csv(path, points, values) -> Path:
    """Rows ``sample_index,v_11..v_nn,value`` for Monte Carlo samples."""
    path = Path(path)
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    header = ["sample_index"] + [f"v_{i + 1}{j + 1}" for i in range(n) for j in range(n)] + ["value"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, (V, v) in enumerate(zip(points, values)):
            w.writerow([k] + [repr(float(x)) for x in V.ravel()] + [repr(float(v))])
    return path


def read_grid_csv(path):
    """Parse an ``alpha,beta,value`` CSV into three float arrays."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header = [h.strip() for h in rows[0]]
    if header != ["alpha", "beta", "value"]:
        raise ValueError(f"{path}: expected header alpha,beta,value, got {','.join(header)}")
    body = [r for r in rows[1:] if r]
    if not body:
        raise ValueError(f"{path}: no data rows")
    try:
        data = np.array([[float(x) for x in r] for r in body])
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry") from exc
    if data.shape[1] != 3:
        raise ValueError(f"{path}: every row needs three columns")
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite entry")
    return data[:, 0], data[:, 1], data[:, 2]
