"""Command-line front end.

Subcommands::

    secrecy-sg analytic --formula s1-mean --lambda-bs 1 --lambda-e 1 --alpha 4
    secrecy-sg simulate --scenario s2 --trials 100000 --seed 42
    secrecy-sg figure --id 7 --out-dir figs/
    secrecy-sg validate --suite dmin --trials 10000 --seed 7

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes: 0
success, 1 validation failure, 2 usage or configuration error.
"""

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic as an
from .montecarlo import ScenarioSpec, estimate_ccdf
from .validation import SUITES, run_suite

SEED_ENV = "SECRECY_SG_SEED"
FIGURE_SNR_DB = 20.0
FIGURE_ALPHAS = (4.0, 2.5)
FIGURE_LAMBDA_E = np.logspace(-1, 1, 13)
FIGURE_D0 = np.linspace(0.25, 3.25, 13)
FIGURE_D0_LAMBDA_E = (0.1, 1.0)

CCDF_FORMULAS = {
    "s1-ccdf": an.ccdf_s1,
    "s2-upper-ccdf": an.ccdf_s2_upper_pgfl,
    "s2-lower-ccdf": an.ccdf_s2_lower,
    "s2-voronoi-ccdf": an.ccdf_s2_upper_voronoi,
    "s3-cell-ccdf": an.ccdf_s3_cell_lower,
    "s3-radius-ccdf": an.ccdf_s3_radius,
}
MEAN_FORMULAS = {
    "s1-mean": an.mean_s1,
    "s2-upper-mean": an.mean_s2_upper,
    "s2-lower-mean": an.mean_s2_lower,
    "s2-voronoi-mean": an.mean_s2_upper_voronoi,
    "s3-cell-mean": an.mean_s3_cell_lower,
    "s3-radius-mean": an.mean_s3_radius,
}
NEEDS_D0 = {"s3-radius-ccdf", "s3-radius-mean"}


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}")


def _add_params(p):
    p.add_argument("--lambda-bs", type=float, default=1.0)
    p.add_argument("--lambda-e", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=4.0)
    snr = p.add_mutually_exclusive_group()
    snr.add_argument("--snr-db", type=float, default=None)
    snr.add_argument("--high-snr", action="store_true")
    p.add_argument("--d0", type=float, default=None)


def _add_grid(p):
    p.add_argument("--r0", type=float, default=None, help="single threshold (overrides the grid)")
    p.add_argument("--r0-min", type=float, default=0.0)
    p.add_argument("--r0-max", type=float, default=6.0)
    p.add_argument("--r0-step", type=float, default=0.5)


def _add_run(p, trials=100_000):
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--window-eps", type=float, default=1e-6)
    p.add_argument("--window-factor", type=float, default=3.0)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)


def build_parser():
    parser = argparse.ArgumentParser(prog="secrecy-sg", description=__doc__.split("\n")[0])
    parser.add_argument("--config", type=Path, default=None,
                        help="flat key=value file supplying defaults; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="evaluate a closed-form CCDF or mean")
    p.add_argument("--formula", required=True, choices=sorted({**CCDF_FORMULAS, **MEAN_FORMULAS}))
    _add_params(p)
    _add_grid(p)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("simulate", help="Monte Carlo CCDF and mean of the secrecy rate")
    p.add_argument("--scenario", required=True, choices=["s1", "s2", "s3-cell", "s3-radius"])
    _add_params(p)
    _add_grid(p)
    _add_run(p)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("figure", help="write the CSV curves of a figure preset")
    p.add_argument("--id", type=int, required=True, choices=[4, 5, 6, 7, 8])
    p.add_argument("--lambda-bs", type=float, default=1.0)
    p.add_argument("--alpha", type=float, action="append", default=None,
                   help="restrict to these path-loss exponents (repeatable)")
    snr = p.add_mutually_exclusive_group()
    snr.add_argument("--snr-db", type=float, default=FIGURE_SNR_DB)
    snr.add_argument("--high-snr", action="store_true")
    _add_run(p)
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("validate", help="run a statistical validation suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    return parser, sub


def _read_config(path):
    values = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_config(parser, sub, argv):
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    values = _read_config(args.config)
    subparser = sub.choices[args.command]
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes")
        else:
            conv = action.type or str
            try:
                defaults[key] = conv(raw)
            except ValueError:
                raise UsageError(f"bad value for {key}: {raw!r}")
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _params(args):
    snr = None
    if not getattr(args, "high_snr", False) and args.snr_db is not None:
        snr = 10.0 ** (args.snr_db / 10.0)
    try:
        return an.NetworkParams(args.lambda_bs, args.lambda_e, args.alpha, snr)
    except ValueError as exc:
        raise UsageError(str(exc))


def _grid(args):
    if args.r0 is not None:
        if args.r0 < 0:
            raise UsageError("--r0 must be nonnegative")
        return np.array([args.r0])
    if args.r0_min < 0 or args.r0_step <= 0 or args.r0_max < args.r0_min:
        raise UsageError("threshold grid needs 0 <= r0-min <= r0-max and r0-step > 0")
    n = int(math.floor((args.r0_max - args.r0_min) / args.r0_step + 1e-9)) + 1
    return args.r0_min + args.r0_step * np.arange(n)


def _check_run(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if not 0 < args.window_eps < 1:
        raise UsageError("--window-eps must lie in (0, 1)")
    if args.window_factor < 1:
        raise UsageError("--window-factor must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")


def _snr_label(p):
    return "high" if p.high_snr else f"{10 * math.log10(p.snr):g}dB"


def cmd_analytic(args, out):
    p = _params(args)
    name = args.formula
    d0 = args.d0
    if name in NEEDS_D0 and d0 is None:
        raise UsageError(f"--formula {name} requires --d0")
    w = csv.writer(out, lineterminator="\n")
    try:
        if name in MEAN_FORMULAS:
            fn = MEAN_FORMULAS[name]
            value = fn(p, d0) if name in NEEDS_D0 else fn(p)
            w.writerow(["metric", "value"])
            w.writerow(["mean", _fmt(value)])
            return 0
        grid = _grid(args)
        fn = CCDF_FORMULAS[name]
        values = fn(p, grid, d0) if name in NEEDS_D0 else fn(p, grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    w.writerow(["r0", "value"])
    for r0, v in zip(grid, np.atleast_1d(values)):
        w.writerow([_fmt(r0), _fmt(v)])
    return 0


def _scenario(args):
    try:
        return ScenarioSpec.from_name(args.scenario, args.d0)
    except ValueError as exc:
        raise UsageError(str(exc))


def write_simulation_csv(out, est, p, scenario, window_eps, window_factor):
    """CSV layout of ``simulate``: provenance comment, one row per threshold,
    then ``key,value,`` trailer rows."""
    w = csv.writer(out, lineterminator="\n")
    d0 = "" if scenario.d0 is None else f" d0={scenario.d0:g}"
    out.write(f"# secrecy-sg simulate scenario={scenario.name}{d0} lambda_bs={p.lambda_bs:g} "
              f"lambda_e={p.lambda_e:g} alpha={p.alpha:g} snr={_snr_label(p)} "
              f"window_eps={window_eps:g} window_factor={window_factor:g}\n")
    w.writerow(["r0", "survival", "stderr"])
    for r0, s, se in zip(est.thresholds, est.survival, est.stderr):
        w.writerow([_fmt(r0), _fmt(s), _fmt(se)])
    w.writerow(["mean", _fmt(est.mean_rate), ""])
    w.writerow(["mean_stderr", _fmt(est.mean_stderr), ""])
    w.writerow(["truncation_fraction", _fmt(est.truncation_fraction), ""])
    w.writerow(["n_trials", _fmt(est.n_trials), ""])
    w.writerow(["seed", _fmt(est.master_seed), ""])


def cmd_simulate(args, out):
    p = _params(args)
    scenario = _scenario(args)
    grid = _grid(args)
    _check_run(args)
    est = estimate_ccdf(p, scenario, grid, args.trials, args.seed, args.window_eps, args.window_factor,
                        args.workers)
    write_simulation_csv(out, est, p, scenario, args.window_eps, args.window_factor)
    if est.n_rejected:
        print(f"note: {est.n_rejected} empty-BS windows redrawn", file=sys.stderr)
    return 0


def _write_curve(path, comment, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comment:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def figure_curves(fig_id, lambda_bs=1.0, alphas=FIGURE_ALPHAS, snr_db=FIGURE_SNR_DB, n_trials=100_000,
                  seed=0, window_eps=1e-6, window_factor=3.0, workers=1):
    """Compute the curves of a figure preset.

    Returns a list of ``(filename, comment_lines, columns, rows)``.
    """
    snr = None if snr_db is None else 10.0 ** (snr_db / 10.0)
    snr_tag = "high-snr" if snr is None else f"snr{snr_db:g}db"
    sim_kw = dict(master_seed=seed, window_epsilon=window_eps, window_factor=window_factor, workers=workers)
    base = [f"figure {fig_id} preset: lambda_bs={lambda_bs:g}, simulated curves at "
            f"{'high SNR' if snr is None else f'SNR={snr_db:g} dB'}, n_trials={n_trials}, seed={seed}"]
    lam_note = "grid: 13 log-spaced lambda_e in [0.1, 10]"
    curves = []

    def sim(p, scenario, grid=(0.0,)):
        return estimate_ccdf(p, scenario, np.asarray(grid), n_trials, **sim_kw)

    for alpha in alphas:
        tag = f"fig{fig_id}_alpha{alpha:g}"
        comment = base + [f"alpha={alpha:g}", lam_note]
        params = [an.NetworkParams(lambda_bs, le, alpha) for le in FIGURE_LAMBDA_E]
        if fig_id == 4:
            curves.append((f"{tag}_analytic.csv", comment, ["lambda_e", "mean"],
                           [(p.lambda_e, an.mean_s1(p)) for p in params]))
            rows = []
            for p in params:
                est = sim(p.replace(snr=snr), ScenarioSpec.full_info_nearest())
                rows.append((p.lambda_e, est.mean_rate, est.mean_stderr))
            curves.append((f"{tag}_sim_{snr_tag}.csv", comment, ["lambda_e", "mean", "stderr"], rows))
        elif fig_id == 5:
            for r0 in (0.0, 5.0):
                rtag = f"{tag}_r0_{r0:g}"
                cm = comment + [f"r0={r0:g}"]
                curves.append((f"{rtag}_upper_pgfl.csv", cm, ["lambda_e", "coverage"],
                               [(p.lambda_e, an.ccdf_s2_upper_pgfl(p, r0)) for p in params]))
                curves.append((f"{rtag}_lower.csv", cm, ["lambda_e", "coverage"],
                               [(p.lambda_e, an.ccdf_s2_lower(p, r0)) for p in params]))
                curves.append((f"{rtag}_voronoi_gamma.csv", cm, ["lambda_e", "coverage"],
                               [(p.lambda_e, an.ccdf_s2_upper_voronoi(p, r0)) for p in params]))
            rows0, rows5 = [], []
            for p in params:
                est = sim(p.replace(snr=snr), ScenarioSpec.full_info_optimal(), (0.0, 5.0))
                rows0.append((p.lambda_e, est.survival[0], est.stderr[0]))
                rows5.append((p.lambda_e, est.survival[1], est.stderr[1]))
            curves.append((f"{tag}_r0_0_sim_{snr_tag}.csv", comment + ["r0=0"],
                           ["lambda_e", "coverage", "stderr"], rows0))
            curves.append((f"{tag}_r0_5_sim_{snr_tag}.csv", comment + ["r0=5"],
                           ["lambda_e", "coverage", "stderr"], rows5))
        elif fig_id == 6:
            curves.append((f"{tag}_upper.csv", comment, ["lambda_e", "mean"],
                           [(p.lambda_e, an.mean_s2_upper(p)) for p in params]))
            curves.append((f"{tag}_lower.csv", comment, ["lambda_e", "mean"],
                           [(p.lambda_e, an.mean_s2_lower(p)) for p in params]))
            curves.append((f"{tag}_voronoi_gamma.csv", comment, ["lambda_e", "mean"],
                           [(p.lambda_e, an.mean_s2_upper_voronoi(p)) for p in params]))
            rows = []
            for p in params:
                est = sim(p.replace(snr=snr), ScenarioSpec.full_info_optimal())
                rows.append((p.lambda_e, est.mean_rate, est.mean_stderr))
            curves.append((f"{tag}_sim_{snr_tag}.csv", comment, ["lambda_e", "mean", "stderr"], rows))
        elif fig_id == 7:
            curves.append((f"{tag}_lower.csv", comment, ["lambda_e", "mean"],
                           [(p.lambda_e, an.mean_s3_cell_lower(p)) for p in params]))
            rows = []
            for p in params:
                est = sim(p.replace(snr=snr), ScenarioSpec.cell_info_nearest())
                rows.append((p.lambda_e, est.mean_rate, est.mean_stderr))
            curves.append((f"{tag}_sim_{snr_tag}.csv", comment, ["lambda_e", "mean", "stderr"], rows))
        elif fig_id == 8:
            for le in FIGURE_D0_LAMBDA_E:
                p = an.NetworkParams(lambda_bs, le, alpha)
                cm = base + [f"alpha={alpha:g} lambda_e={le:g}",
                             "grid: 13 linearly spaced d0 in [0.25, 3.25]"]
                ltag = f"{tag}_lambda_e{le:g}"
                curves.append((f"{ltag}_analytic.csv", cm, ["d0", "mean"],
                               [(d0, an.mean_s3_radius(p, d0)) for d0 in FIGURE_D0]))
                rows = []
                for d0 in FIGURE_D0:
                    est = sim(p.replace(snr=snr), ScenarioSpec.radius_info_nearest(d0))
                    rows.append((d0, est.mean_rate, est.mean_stderr))
                curves.append((f"{ltag}_sim_{snr_tag}.csv", cm, ["d0", "mean", "stderr"], rows))
        else:
            raise UsageError(f"unknown figure id {fig_id}")
    return curves


def cmd_figure(args, out):
    _check_run(args)
    alphas = tuple(args.alpha) if args.alpha else FIGURE_ALPHAS
    snr_db = None if args.high_snr else args.snr_db
    try:
        curves = figure_curves(args.id, args.lambda_bs, alphas, snr_db, args.trials, args.seed,
                               args.window_eps, args.window_factor, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    for name, comment, columns, rows in curves:
        path = _write_curve(args.out_dir / name, comment, columns, rows)
        out.write(f"{path}\n")
    return 0


def cmd_validate(args, out):
    if args.trials is not None and args.trials < 2:
        raise UsageError("--trials must be at least 2")
    checks = run_suite(args.suite, args.trials, args.seed, args.workers)
    for c in checks:
        out.write(c.line() + "\n")
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {
    "analytic": cmd_analytic,
    "simulate": cmd_simulate,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def main(argv=None):
    parser, sub = build_parser()
    try:
        args = _apply_config(parser, sub, argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        out_path = getattr(args, "out", None)
        buf = io.StringIO()
        status = COMMANDS[args.command](args, buf)
        if out_path is not None:
            try:
                out_path.write_text(buf.getvalue(), encoding="utf-8")
            except OSError as exc:
                print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
                return 1
        else:
            sys.stdout.write(buf.getvalue())
        return status
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
