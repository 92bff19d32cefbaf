"""Command line driver: ``prefspace --game FILE --analysis KIND --out DIR``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures (zero mass, undefined bargaining power, no equilibrium).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bargaining import DEFAULT_RHO_SAMPLES, UndefinedPowerError, rho_integral, rho_matrix, self_harm_scan
from .com import ZeroMassError, gcom_from_coms, outcome_com, payoff_coms, strategy_com
from .cooperative import coalition_game, core_check, reciprocity_check, shapley_value
from .games import ContinuousGame, FiniteGame, GameError, VotingGame
from .heatmap import emit_heatmap
from .io import GameFileError, dumps_report, game_to_dict, load_game, write_grid_csv, write_samples_csv
from .reproduce import format_check, reproduce_paper
from .solve import DEFAULT_MAX_ITER, DEFAULT_STEP_TOL, NoEquilibriumError, expected_payoffs, outcome_distributions
from .space import DEFAULT_REPEATS, DEFAULT_RESOLUTION, DEFAULT_SAMPLES, PreferenceError, grid, repeat_samples
from .voting import (
    banzhaf_estimate,
    banzhaf_index,
    ratio_spread,
    shapley_shubik_estimate,
    shapley_shubik_index,
)

ANALYSES = (
    "project-payoff", "project-outcome", "project-strategy", "com", "gcom", "indices", "rho",
    "rho-integral", "coalition", "voting", "reciprocity", "self-harm", "reproduce",
)
FORMATS = ("csv", "json", "png")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prefspace", description=__doc__.splitlines()[0])
    p.add_argument("--game", help="game file (JSON)")
    p.add_argument("--analysis", required=True, choices=ANALYSES)
    p.add_argument("--player", help="player letter (a, b, ...) or 1-based number")
    p.add_argument("--target", help="second player for rho-integral")
    p.add_argument("--outcome", help="strategy profile, e.g. 0,1")
    p.add_argument("--strategy", type=int, help="strategy index (0-based) for project-strategy")
    p.add_argument("--cycle", help="players of a reciprocity cycle, e.g. a,b")
    p.add_argument("--preferences", help="preferred outcome per voter (0/1) when a voting game is analysed as a game")
    p.add_argument("--resolution", type=int, help=f"grid cells per angle (2 players; default {DEFAULT_RESOLUTION})")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo samples per repeat")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--rho-samples", type=int, default=DEFAULT_RHO_SAMPLES)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="best-response rounds (continuous games)")
    p.add_argument("--step-tol", type=float, default=DEFAULT_STEP_TOL)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", default="csv,json,png", help="comma-separated subset of csv,json,png")
    return p


# --------------------------------------------------------------------------
# selectors


def parse_player(text, n: int, field: str = "player") -> int:
    if text is None:
        raise ConfigError(f"--{field} is required for this analysis")
    t = str(text).strip().lower()
    if len(t) == 1 and t.isalpha():
        i = ord(t) - ord("a")
    elif t.isdigit():
        i = int(t) - 1
    else:
        raise ConfigError(f"--{field}: cannot parse {text!r}")
    if not 0 <= i < n:
        raise ConfigError(f"--{field}: {text!r} out of range for {n} players")
    return i


def parse_profile(text, counts, field: str = "outcome") -> tuple:
    if text is None:
        raise ConfigError(f"--{field} is required for this analysis")
    try:
        prof = tuple(int(x) for x in str(text).split(","))
    except ValueError as exc:
        raise ConfigError(f"--{field}: cannot parse {text!r}") from exc
    if len(prof) != len(counts) or any(not 0 <= s < c for s, c in zip(prof, counts)):
        raise ConfigError(f"--{field}: {text!r} is not a valid profile for strategy counts {list(counts)}")
    return prof


def parse_formats(text) -> set:
    fmts = {f.strip() for f in str(text).split(",") if f.strip()}
    bad = fmts - set(FORMATS)
    if bad or not fmts:
        raise ConfigError(f"--format: unknown format(s) {sorted(bad)}")
    return fmts


# --------------------------------------------------------------------------
# running


def config_hash(config: dict) -> str:
    blob = json.dumps({"config": config, "version": __version__}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class Run:
    def __init__(self, args, game):
        self.args = args
        self.game = game
        self.out = Path(args.out)
        self.formats = parse_formats(args.format)
        self.artifacts: list[Path] = []
        self.dynamics = {"max_iter": args.max_iter, "step_tol": args.step_tol} \
            if isinstance(game, ContinuousGame) else {}
        n = game.n_players
        if n == 2:
            res = DEFAULT_RESOLUTION if args.resolution is None else args.resolution
            self.samples = grid(res)
            self.resolution = res
        else:
            if args.resolution is not None:
                raise ConfigError("--resolution applies only to 2-player games")
            if args.samples < 2 or args.repeats < 1:
                raise ConfigError("--samples must be >= 2 and --repeats >= 1")
            self.samples = repeat_samples(n, args.samples, args.seed, args.repeats)
            self.resolution = None

    @property
    def is_grid(self) -> bool:
        return self.resolution is not None

    def base_report(self) -> dict:
        return {
            "game": Path(self.args.game).stem,
            "analysis": self.args.analysis,
            "resolution": self.resolution,
            "seed": None if self.is_grid else self.args.seed,
            "samples": None if self.is_grid else self.args.samples,
            "repeats": None if self.is_grid else self.args.repeats,
        }

    def write_json(self, name: str, report: dict):
        if "json" in self.formats:
            path = self.out / f"{name}.json"
            path.write_text(dumps_report(report))
            self.artifacts.append(path)

    def write_field(self, name: str, values):
        """Dump a field: grid CSV (plus PNG) for 2 players, the first seed's samples otherwise."""
        if "csv" not in self.formats and "png" not in self.formats:
            return
        if self.is_grid:
            path = write_grid_csv(self.out / f"{name}.csv", self.samples.angles, values)
            if "png" in self.formats:
                self.artifacts.append(emit_heatmap(path))
            if "csv" in self.formats:
                self.artifacts.append(path)
            else:
                path.unlink()
        elif "csv" in self.formats:
            first = self.samples[0]
            self.artifacts.append(write_samples_csv(self.out / f"{name}.csv", first.points, values))


def _com_report(com) -> dict:
    rep = com.indices()
    return {"com": com.entries, "row_norms": com.row_norms, "degenerate_rows": list(rep.degenerate_rows),
            "indices": rep.as_dict(), "stat_error": com.statistical_error,
            "no_equilibrium_fraction": com.no_equilibrium_fraction}


def _first_points(run: Run):
    return run.samples.points if run.is_grid else run.samples[0].points


def _need_finite(game, analysis):
    if not isinstance(game, FiniteGame):
        raise ConfigError(f"{analysis} needs a finite game")


def analyse(run: Run) -> None:
    a, g, args = run.args.analysis, run.game, run.args
    n = g.n_players
    report = run.base_report()

    if a == "project-payoff":
        i = parse_player(args.player, n)
        E, _ = expected_payoffs(g, _first_points(run), **run.dynamics)
        run.write_field(f"payoff_{chr(ord('a') + i)}", E[:, i])
        coms = payoff_coms(g, run.samples, **run.dynamics)
        report.update(player=i + 1, **_com_report(coms[i]))
    elif a == "project-outcome":
        _need_finite(g, a)
        o = parse_profile(args.outcome, g.strategy_counts)
        probs, _ = outcome_distributions(g, _first_points(run))
        run.write_field("outcome_" + "-".join(map(str, o)), probs[:, g.outcome_index(o)])
        report.update(outcome=list(o), **_com_report(outcome_com(g, o, run.samples)))
    elif a == "project-strategy":
        _need_finite(g, a)
        i = parse_player(args.player, n)
        s = args.strategy
        if s is None or not 0 <= s < g.strategy_counts[i]:
            raise ConfigError(f"--strategy: must be in 0..{g.strategy_counts[i] - 1}")
        probs, _ = outcome_distributions(g, _first_points(run))
        mask = np.array([o[i] == s for o in g.outcomes()], float)
        run.write_field(f"strategy_{g.player_name(i)}{s}", probs @ mask)
        report.update(player=i + 1, strategy=s, **_com_report(strategy_com(g, i, s, run.samples)))
    elif a == "com":
        if args.outcome is not None:
            _need_finite(g, a)
            o = parse_profile(args.outcome, g.strategy_counts)
            report.update(outcome=list(o), **_com_report(outcome_com(g, o, run.samples)))
        else:
            i = parse_player(args.player, n)
            report.update(player=i + 1, **_com_report(payoff_coms(g, run.samples, **run.dynamics)[i]))
    elif a in ("gcom", "indices"):
        coms = payoff_coms(g, run.samples, **run.dynamics)
        report.update(_com_report(gcom_from_coms(coms)))
        if a == "indices":
            report["payoff_coms"] = [_com_report(c) for c in coms]
    elif a == "rho":
        rho = rho_matrix(g, **run.dynamics)
        report.update(rho=rho.entries, undefined=rho.undefined_flags)
    elif a == "rho-integral":
        i = parse_player(args.player, n)
        j = parse_player(args.target if args.target is not None else args.player, n, "target")
        est = rho_integral(g, i, j, args.rho_samples, args.seed, **run.dynamics)
        report.update(player=i + 1, target=j + 1, rho=est.value, stderr=est.stderr,
                      n_samples=est.n_samples, no_equilibrium=est.no_equilibrium)
    elif a == "coalition":
        cf = coalition_game(g, **run.dynamics)
        phi = shapley_value(cf)
        report.update(values={",".join(str(p + 1) for p in c): v for c, v in cf.values.items()},
                      flagged=[[p + 1 for p in c] for c in cf.flagged],
                      shapley=phi, shapley_in_core=core_check(cf, phi))
    elif a == "reciprocity":
        _need_finite(g, a)
        if args.cycle is None:
            raise ConfigError("--cycle is required for reciprocity")
        cycle = [parse_player(p, n, "cycle") for p in args.cycle.split(",")]
        if len(cycle) < 2 or len(set(cycle)) != len(cycle):
            raise ConfigError("--cycle needs at least two distinct players")
        report.update(cycle=[c + 1 for c in cycle],
                      reciprocal_outcomes=sorted(list(o) for o in reciprocity_check(g, cycle)))
    elif a == "self-harm":
        scan = self_harm_scan(g, **run.dynamics)
        report.update(players=[p + 1 for p in scan.players], undefined=[p + 1 for p in scan.undefined],
                      rho_self={str(k + 1): v for k, v in scan.rho.items()})
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown analysis {a}")
    run.write_json(a, report)


def analyse_voting(args, vg: VotingGame, out: Path, formats) -> list:
    exact_b = banzhaf_index(vg)
    exact_s = shapley_shubik_index(vg, args.samples, args.seed)
    est_b = banzhaf_estimate(vg, args.samples, args.seed)
    est_s = shapley_shubik_estimate(vg, args.samples, args.seed)
    report = {
        "game": Path(args.game).stem, "analysis": "voting", "seed": args.seed, "samples": args.samples,
        "banzhaf": exact_b, "shapley_shubik": exact_s,
        "banzhaf_estimate": est_b.values, "banzhaf_error": est_b.errors,
        "shapley_shubik_estimate": est_s.values, "shapley_shubik_error": est_s.errors,
        "banzhaf_ratio_spread": ratio_spread(est_b.values, exact_b),
        "shapley_shubik_ratio_spread": ratio_spread(est_s.values, exact_s),
    }
    if "json" not in formats:
        return []
    path = out / "voting.json"
    path.write_text(dumps_report(report))
    return [path]


def _config(args, game) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    if game is not None:
        cfg["game_definition"] = game_to_dict(game)
    return cfg


def write_manifest(out: Path, config: dict, artifacts) -> Path:
    digest = config_hash(config)
    entries = [{"path": p.name, "sha256": hashlib.sha256(p.read_bytes()).hexdigest(), "config_hash": digest}
               for p in sorted(artifacts)]
    path = out / "manifest.json"
    path.write_text(dumps_report({"version": __version__, "config_hash": digest, "config": config,
                                  "artifacts": entries}))
    return path


def execute(args) -> int:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"--out: cannot write to {out}: {exc.strerror}") from exc

    if args.analysis == "reproduce":
        res = DEFAULT_RESOLUTION if args.resolution is None else args.resolution
        checks = reproduce_paper(out, res, args.samples, args.repeats, args.seed)
        for c in checks:
            print(format_check(c))
        artifacts = [p for p in out.iterdir() if p.name != "manifest.json" and p.is_file()]
        write_manifest(out, _config(args, None), artifacts)
        return EXIT_OK

    if args.game is None:
        raise ConfigError("--game is required")
    game = load_game(args.game)
    if isinstance(game, VotingGame):
        if args.analysis == "voting":
            artifacts = analyse_voting(args, game, out, parse_formats(args.format))
            write_manifest(out, _config(args, game), artifacts)
            return EXIT_OK
        if args.preferences is None:
            raise ConfigError("--preferences is required to analyse a voting game as a strategic game")
        try:
            prefs = [int(x) for x in args.preferences.split(",")]
            game = game.to_finite_game(prefs)
        except (ValueError, GameError) as exc:
            raise ConfigError(f"--preferences: {exc}") from exc
    elif args.analysis == "voting":
        raise ConfigError("voting analysis needs a voting game")

    run = Run(args, game)
    analyse(run)
    write_manifest(out, _config(args, game), run.artifacts)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return execute(args)
    except (ConfigError, GameFileError, GameError, PreferenceError) as exc:
        print(f"prefspace: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ZeroMassError, UndefinedPowerError, NoEquilibriumError) as exc:
        print(f"prefspace: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
