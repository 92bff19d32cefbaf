"""Regenerate the application results and compare them with reference values.

``reproduce_paper(out_dir)`` writes one JSON report per application, the
payoff landscapes of the two-player games as CSV grids (plus PNG heatmaps),
and ``summary.csv`` / ``summary.json`` listing reference value, computed
value, tolerance and pass/fail per quantity. Artifacts are byte-identical
across runs with the same arguments.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import catalog
from .bargaining import rho_matrix, self_harm_scan
from .com import gcom_from_coms, outcome_com, payoff_coms
from .heatmap import emit_heatmap
from .io import game_to_dict, write_grid_csv, write_report
from .solve import best_response_dynamics, expected_payoffs
from .space import DEFAULT_REPEATS, DEFAULT_RESOLUTION, DEFAULT_SAMPLES, grid, repeat_samples


@dataclass(frozen=True)
class Check:
    criterion: int
    quantity: str
    reference: float
    computed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.reference) <= self.tolerance

    def row(self) -> dict:
        return {
            "criterion": self.criterion,
            "quantity": self.quantity,
            "published": self.reference,
            "computed": self.computed,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _com_block(com) -> dict:
    rep = com.indices()
    return {
        "com": com.entries,
        "indices": rep.as_dict(),
        "stat_error": com.statistical_error,
        "degenerate_rows": list(rep.degenerate_rows),
    }


def _landscapes(name, game, samples, out: Path) -> None:
    E, _ = expected_payoffs(game, samples.points)
    for i in range(game.n_players):
        emit_heatmap(write_grid_csv(out / f"{name}_payoff_{'ab'[i]}.csv", samples.angles, E[:, i]))


def _two_player_section(name, game, samples):
    coms = payoff_coms(game, samples)
    G = gcom_from_coms(coms)
    report = {
        "game": name,
        "definition": game_to_dict(game),
        "analysis": "gcom",
        "resolution": samples.resolution,
        "seed": None,
        "gcom": _com_block(G),
        "payoff_coms": [_com_block(c) for c in coms],
    }
    return report, G.indices()


def _pd(samples):
    game = catalog.prisoners_dilemma()
    report, idx = _two_player_section("prisoners-dilemma", game, samples)
    outcomes = {}
    for label, o in (("UL", (0, 0)), ("UR", (0, 1)), ("DL", (1, 0)), ("DR", (1, 1))):
        outcomes[label] = _com_block(outcome_com(game, o, samples))
    report["outcome_coms"] = outcomes
    oi = {k: v["indices"] for k, v in outcomes.items()}
    checks = [
        Check(1, "PD GCoM H", 0.0, idx.H, 0.02),
        Check(1, "PD GCoM R⁻", 0.68, idx.R_minus, 0.04),
        Check(2, "PD outcome (U,L) R⁺", 0.66, oi["UL"]["R_plus"], 0.04),
        Check(2, "PD outcome (U,L) H", 0.0, oi["UL"]["H"], 0.02),
        Check(2, "PD outcome (U,R) H", 0.67, oi["UR"]["H"], 0.04),
        Check(2, "PD outcome (U,R) R", 0.0, oi["UR"]["R"], 0.02),
        Check(2, "PD outcome (D,L) H", 0.67, oi["DL"]["H"], 0.04),
        Check(2, "PD outcome (D,L) R", 0.0, oi["DL"]["R"], 0.02),
        Check(2, "PD outcome (D,R) R⁻", 0.66, oi["DR"]["R_minus"], 0.04),
    ]
    return report, checks


def _bos(samples):
    report, idx = _two_player_section("battle-of-sexes", catalog.battle_of_sexes(), samples)
    return report, [Check(3, "BoS GCoM R⁺", 0.38, idx.R_plus, 0.04), Check(3, "BoS GCoM H", 0.0, idx.H, 0.02)]


def _self_harm(samples):
    game = catalog.self_harm_game()
    report, _ = _two_player_section("self-harm", game, samples)
    rho = rho_matrix(game)
    scan = self_harm_scan(game)
    rho_aa = rho.entries[0, 0]
    report["rho"] = rho.entries
    report["rho_aa_fraction"] = str(Fraction(rho_aa).limit_denominator(1000))
    report["self_harm_players"] = [game.player_name(i) for i in scan.players]
    checks = [
        Check(4, "asymmetric ρ_aa", -1 / 3, rho_aa, 1e-12),
        Check(4, "asymmetric self-harm players == [a]", 1.0, float(scan.players == [0]), 0.0),
    ]
    return report, checks


def _mp_rps(samples, seed, n_samples, repeats):
    sets = repeat_samples(2, n_samples, seed, repeats)
    reports, vectors, errors = {}, {}, {}
    for name, game in (("matching-pennies", catalog.matching_pennies()),
                       ("rock-paper-scissors", catalog.rock_paper_scissors())):
        G = gcom_from_coms(payoff_coms(game, sets))
        g_grid = gcom_from_coms(payoff_coms(game, samples))
        rep = G.indices()
        vectors[name] = rep.vector()
        errors[name] = np.array([rep.errors.get(k, 0.0) for k in ("D", "H", "R_plus", "R_minus")])
        reports[name] = {
            "definition": game_to_dict(game),
            "monte_carlo": _com_block(G),
            "grid": _com_block(g_grid),
        }
    diff = np.abs(vectors["matching-pennies"] - vectors["rock-paper-scissors"])
    bars = 3 * np.hypot(errors["matching-pennies"], errors["rock-paper-scissors"])
    # largest difference in units of the combined 3-sigma bar (0/0 counts as 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(diff == 0, 0.0, diff / bars)
    z_max = float(z.max())
    report = {
        "game": "matching-pennies vs rock-paper-scissors",
        "analysis": "gcom",
        "resolution": samples.resolution,
        "seed": seed,
        "samples": n_samples,
        "repeats": repeats,
        "games": reports,
        "index_difference": diff,
        "error_bar_3sigma": bars,
        "index_distance_in_error_bars": z_max,
    }
    checks = [Check(7, "MP vs RPS GCoM index distance (3σ units)", 0.0, z_max, 1.0)]
    return report, checks


def _cournot(samples):
    game = catalog.cournot_duopoly()
    report, idx = _two_player_section("cournot", game, samples)
    dyn = best_response_dynamics(game, np.eye(2), start=np.zeros(2))
    dist = float(np.max(np.abs(dyn.profile - 8 / 3)))
    report["selfish_equilibrium"] = {"profile": dyn.profile, "converged": dyn.converged,
                                     "iterations": dyn.iterations}
    checks = [
        Check(5, "Cournot GCoM R⁻", 0.06, idx.R_minus, 0.03),
        Check(5, "Cournot GCoM H", 0.0, idx.H, 0.02),
        Check(5, "Cournot selfish equilibrium distance to 8/3", 0.0, dist, 1e-6),
    ]
    return report, checks


def _three_player(seed, n_samples, repeats):
    game = catalog.three_player_game()
    sets = repeat_samples(3, n_samples, seed, repeats)
    coms = payoff_coms(game, sets)
    G = gcom_from_coms(coms)
    idx = G.indices()
    rho = rho_matrix(game)
    cos = row_cosine(G.entries, coms[0].entries)
    report = {
        "game": "three-player",
        "definition": game_to_dict(game),
        "analysis": "gcom",
        "resolution": None,
        "seed": seed,
        "samples": n_samples,
        "repeats": repeats,
        "gcom": _com_block(G),
        "payoff_coms": [_com_block(c) for c in coms],
        "rho": rho.entries,
        "row_cosine_gcom_vs_player_1": cos,
    }
    checks = [
        Check(6, "three-player GCoM H", 0.61, idx.H, 0.05),
        Check(6, "three-player GCoM R", 0.0, idx.R, 0.03),
        Check(6, "three-player ρ_23", 0.0, rho.entries[1, 2], 0.0),
        Check(6, "three-player ρ_32", 0.0, rho.entries[2, 1], 0.0),
        Check(6, "three-player min row cosine GCoM vs player 1 CoM", 1.0, float(cos.min()), 0.05),
    ]
    return report, checks


def row_cosine(A, B) -> np.ndarray:
    """Cosine similarity between matching rows of two matrices."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    num = (A * B).sum(axis=1)
    den = np.linalg.norm(A, axis=1) * np.linalg.norm(B, axis=1)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def reproduce_paper(out_dir, resolution: int = DEFAULT_RESOLUTION, n_samples: int = DEFAULT_SAMPLES,
                    repeats: int = DEFAULT_REPEATS, seed: int = 0, heatmaps: bool = True) -> list[Check]:
    """Run every application and write reports plus a summary table into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    samples = grid(resolution)
    checks: list[Check] = []

    sections = [
        ("prisoners_dilemma", lambda: _pd(samples)),
        ("battle_of_sexes", lambda: _bos(samples)),
        ("self_harm", lambda: _self_harm(samples)),
        ("matching_pennies_vs_rps", lambda: _mp_rps(samples, seed, n_samples, repeats)),
        ("cournot", lambda: _cournot(samples)),
        ("three_player", lambda: _three_player(seed, n_samples, repeats)),
    ]
    for name, run in sections:
        report, cs = run()
        write_report(report, out / f"{name}.json")
        checks += cs

    if heatmaps:
        for name, game in (("prisoners_dilemma", catalog.prisoners_dilemma()),
                           ("battle_of_sexes", catalog.battle_of_sexes()),
                           ("self_harm", catalog.self_harm_game()),
                           ("matching_pennies", catalog.matching_pennies()),
                           ("rock_paper_scissors", catalog.rock_paper_scissors()),
                           ("cournot", catalog.cournot_duopoly())):
            _landscapes(name, game, samples, out)

    write_summary(checks, out, {"resolution": resolution, "samples": n_samples, "repeats": repeats, "seed": seed})
    return checks


def write_summary(checks, out: Path, config: dict) -> None:
    rows = [c.row() for c in checks]
    write_report({"config": config, "checks": rows,
                  "passed": sum(c.passed for c in checks), "total": len(checks)}, out / "summary.json")
    with (out / "summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def format_check(c: Check) -> str:
    status = "PASS" if c.passed else "FAIL"
    tol = "exact" if c.tolerance == 0 else f"± {c.tolerance:g}"
    return f"[{status}] {c.quantity}: published {c.reference:.4g}, computed {c.computed:.4f} ({tol})"

