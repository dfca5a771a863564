"""Command-line front end.

Subcommands map one-to-one onto the analyses: ``equilibrium`` and ``verify``
for the game-theoretic objects, ``simulate`` for panel generation, ``metrics``
for dispersion statistics, ``regress`` for the regression batteries, and
``report`` for a markdown summary tying the outputs together.

All data outputs are CSV in the directory given by ``--out``; diagnostics go
to stderr. On failure, files written during the failed run are removed.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import batteries, dispersion, equilibrium, panel, simulator


class _OutputTracker:
    """Records files written by a subcommand so failures can clean them up."""

    def __init__(self, out_dir: Path) -> None:
        self.out_dir = out_dir
        self.written: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.written.append(p)
        return p

    def discard_all(self) -> None:
        for p in self.written:
            p.unlink(missing_ok=True)


def _market_params(args) -> equilibrium.MarketParams:
    return equilibrium.MarketParams(c=args.c, v=args.v, alpha=args.alpha)


def _cmd_equilibrium(args, out: _OutputTracker) -> None:
    params = _market_params(args)
    lo, hi = equilibrium.equilibrium_support(params)
    profit = equilibrium.equilibrium_profit(params)
    mean, std, cv = equilibrium.equilibrium_moments(params)
    with open(out.path("equilibrium_summary.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quantity", "value"])
        for name, value in [
            ("p_lower", lo),
            ("p_upper", hi),
            ("expected_profit", profit),
            ("mean_price", mean),
            ("std_price", std),
            ("cv", cv),
        ]:
            writer.writerow([name, repr(value)])
    grid = np.linspace(lo, hi, args.grid)
    cdf_vals = equilibrium.equilibrium_cdf(params, grid)
    with open(out.path("cdf_table.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["price", "cdf"])
        for p, f in zip(grid, np.atleast_1d(cdf_vals)):
            writer.writerow([repr(float(p)), repr(float(f))])
    print(f"support [{lo:.6g}, {hi:.6g}], profit {profit:.6g}, cv {cv:.6g}", file=sys.stderr)


def _write_reports_csv(reports, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "candidate_price",
                "best_deviation_price",
                "profit_at_candidate",
                "profit_at_deviation",
                "profitable",
            ]
        )
        for rep in reports:
            writer.writerow(
                [
                    repr(rep.candidate_price),
                    repr(rep.best_deviation_price),
                    repr(rep.profit_at_candidate),
                    repr(rep.profit_at_deviation),
                    int(rep.profitable),
                ]
            )


def _cmd_verify(args, out: _OutputTracker) -> None:
    params = _market_params(args)
    tie = equilibrium.TieBreakRule(t=args.t, r=args.r, s=args.s)

    no_pure = equilibrium.check_no_pure_symmetric(params, tie, args.grid)
    _write_reports_csv(no_pure, out.path("no_pure_symmetric.csv"))
    if not all(rep.profitable for rep in no_pure):
        raise RuntimeError("capacity-constrained game: some candidate lacked a deviation")

    no_cap = equilibrium.check_no_capacity_candidates(params, tie, args.grid)
    _write_reports_csv(no_cap, out.path("no_capacity_candidates.csv"))
    eq_report, other = no_cap[0], no_cap[1:]
    if eq_report.profitable or not all(rep.profitable for rep in other):
        raise RuntimeError("no-capacity game: deviation pattern does not match theory")

    known = [
        equilibrium.check_known_state_equilibrium(params, state, tie, args.grid)
        for state in equilibrium.DemandState
    ]
    _write_reports_csv(known, out.path("known_state_equilibria.csv"))
    if any(rep.profitable for rep in known):
        raise RuntimeError("known-state equilibria admit a profitable deviation")

    mixed = equilibrium.check_mixed_equilibrium(params, args.grid)
    _write_reports_csv(mixed, out.path("mixed_equilibrium_profits.csv"))
    if any(rep.profitable for rep in mixed):
        raise RuntimeError("mixed equilibrium: some price beats the equilibrium profit")

    print(
        f"verified: {len(no_pure)} capacity-game candidates all admit deviations; "
        "pure equilibria of the relaxed games and the mixed equilibrium check out",
        file=sys.stderr,
    )


def _load_config(args) -> simulator.SimulationConfig:
    if args.config:
        config = simulator.SimulationConfig.from_json(Path(args.config).read_text())
    else:
        config = simulator.SimulationConfig()
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def _cmd_simulate(args, out: _OutputTracker) -> None:
    config = _load_config(args)
    obs = simulator.simulate_panel(config)
    panel.write_panel_csv(obs, out.path("panel.csv"))
    with open(out.path("config.json"), "w") as fh:
        fh.write(config.to_json())
    print(f"wrote {len(obs)} observations", file=sys.stderr)


def _cmd_metrics(args, out: _OutputTracker) -> None:
    obs = panel.read_panel_csv(args.input)
    records = dispersion.compute_dispersion(obs)
    dispersion.write_dispersion_csv(records, out.path("dispersion.csv"))
    dispersion.write_lead_time_csv(
        dispersion.mean_price_by_lead_time(obs), out.path("lead_time.csv")
    )
    dispersion.write_scatter_csv(records, "cv", out.path("scatter_cv.csv"))
    dispersion.write_scatter_csv(records, "std", out.path("scatter_std.csv"))
    print(f"{len(records)} dispersion groups from {len(obs)} observations", file=sys.stderr)


def _cmd_regress(args, out: _OutputTracker) -> None:
    obs = panel.read_panel_csv(args.input)
    which = args.battery

    if which in ("eq1", "all"):
        cells, skipped = batteries.run_eq1_battery(obs)
        batteries.write_eq1_csv(cells, out.path("eq1_r_squared.csv"))
        for stay, booking, reason in skipped:
            print(f"eq1 battery skipped {stay}/{booking}: {reason}", file=sys.stderr)

    if which in ("persistence", "all"):
        frame = batteries.persistence_frame(obs)
        spec_ids = [args.spec] if args.spec else list(range(1, 8))
        runs = []
        for spec_id in spec_ids:
            run = batteries.run_cv_persistence(frame, spec_id, variant=args.variant)
            runs.append(run)
            batteries.write_terms_csv(
                run.result, out.path(f"persistence_spec{spec_id}_{args.variant}.csv")
            )
            if run.n_dropped_zero:
                print(
                    f"spec {spec_id}: dropped {run.n_dropped_zero} zero rows "
                    f"for the {args.variant} transform",
                    file=sys.stderr,
                )
        batteries.write_summary_csv(runs, out.path(f"persistence_summary_{args.variant}.csv"))

    if which in ("lag-sweep", "all"):
        frame = batteries.persistence_frame(obs)
        max_lag = max(r.lead_time_days for r in dispersion.compute_dispersion(obs)) - 1
        points = batteries.run_lag_sweep(frame, max(1, max_lag))
        batteries.write_lag_sweep_csv(points, out.path("lag_sweep.csv"))


def _cmd_report(args, out: _OutputTracker) -> None:
    obs = panel.read_panel_csv(args.input)
    records = dispersion.compute_dispersion(obs)
    lead_means = dispersion.mean_price_by_lead_time(obs)
    frame = batteries.persistence_frame(obs)
    cells, _ = batteries.run_eq1_battery(obs)
    hist = batteries.r_squared_histogram(cells)
    max_lag = max(r.lead_time_days for r in records) - 1
    points = batteries.run_lag_sweep(frame, max(1, max_lag))
    baseline = batteries.run_cv_persistence(frame, 1)

    cvs = [r.cv for r in records]
    lines = [
        "# Price dispersion report",
        "",
        f"Panel: {len(obs)} observations, {len(records)} "
        "(stay, booking, hotel, room) groups.",
        "",
        "## Dispersion summary",
        "",
        f"- mean CV {np.mean(cvs):.4f}, max CV {np.max(cvs):.4f}",
        f"- share of groups with CV = 0: {np.mean(np.array(cvs) == 0.0):.2%}",
        "",
        "## Mean price by days before stay",
        "",
        "| days before stay | mean price |",
        "|---|---|",
    ]
    lines += [f"| {d} | {m:.2f} |" for d, m in lead_means.items()]
    lines += [
        "",
        "## Price-on-dummies R-squared sweep",
        "",
        f"- {len(cells)} (stay, booking) regressions",
        f"- share with R-squared above 0.9: "
        f"{np.mean([c.r_squared > 0.9 for c in cells]):.2%}",
        "",
        "| bin | count |",
        "|---|---|",
    ]
    lines += [f"| [{lo:.1f}, {hi:.1f}) | {n} |" for lo, hi, n in hist]
    lines += [
        "",
        "## CV persistence",
        "",
        f"- pooled previous-day CV coefficient (no controls): "
        f"{baseline.result.coef('cv_lag'):.4f} "
        f"(95% CI {baseline.result.ci('cv_lag')[0]:.4f} "
        f"to {baseline.result.ci('cv_lag')[1]:.4f})",
        "",
        "| days before stay | one-day-ahead coefficient | 95% CI |",
        "|---|---|---|",
    ]
    lines += [
        f"| {p.lag_k} | {p.coefficient:.4f} | [{p.ci_low:.4f}, {p.ci_high:.4f}] |"
        for p in points
    ]
    lines.append("")
    out.path("report.md").write_text("\n".join(lines))
    print("wrote report.md", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pricedisp",
        description="Pricing-game simulator and price-dispersion analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", required=True, help="output directory")

    def add_params(p):
        p.add_argument("--c", type=float, required=True, help="marginal cost")
        p.add_argument("--v", type=float, required=True, help="reservation value")
        p.add_argument("--alpha", type=float, required=True, help="high-demand probability")

    p_eq = sub.add_parser("equilibrium", help="closed-form equilibrium objects")
    add_params(p_eq)
    p_eq.add_argument("--grid", type=int, default=101, help="CDF table size")
    add_out(p_eq)

    p_ver = sub.add_parser("verify", help="grid-based deviation checks")
    add_params(p_ver)
    p_ver.add_argument("--t", type=float, default=0.5, help="low-state tie-break probability")
    p_ver.add_argument("--r", type=float, default=1 / 3, help="high-state two-unit tie probability")
    p_ver.add_argument("--s", type=float, default=1 / 3, help="high-state one-unit tie probability")
    p_ver.add_argument("--grid", type=int, default=101, help="candidate grid size")
    add_out(p_ver)

    p_sim = sub.add_parser("simulate", help="generate a synthetic panel")
    p_sim.add_argument("--config", help="simulation config JSON")
    p_sim.add_argument("--seed", type=int, help="override the config seed")
    add_out(p_sim)

    p_met = sub.add_parser("metrics", help="dispersion statistics for a panel CSV")
    p_met.add_argument("--input", required=True, help="panel CSV")
    add_out(p_met)

    p_reg = sub.add_parser("regress", help="regression batteries for a panel CSV")
    p_reg.add_argument("--input", required=True, help="panel CSV")
    p_reg.add_argument(
        "--battery",
        choices=["eq1", "persistence", "lag-sweep", "all"],
        default="all",
    )
    p_reg.add_argument("--spec", type=int, choices=range(1, 8), help="persistence spec")
    p_reg.add_argument(
        "--variant", choices=list(batteries.PERSISTENCE_VARIANTS), default="baseline"
    )
    add_out(p_reg)

    p_rep = sub.add_parser("report", help="markdown summary of all analyses")
    p_rep.add_argument("--input", required=True, help="panel CSV")
    add_out(p_rep)

    return parser


_COMMANDS = {
    "equilibrium": _cmd_equilibrium,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "metrics": _cmd_metrics,
    "regress": _cmd_regress,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tracker = _OutputTracker(out_dir)
    try:
        _COMMANDS[args.command](args, tracker)
    except Exception as exc:
        tracker.discard_all()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
