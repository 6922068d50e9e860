"""Acceptance suite: every end-to-end criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line (collected in the pytest terminal
summary, or printed directly when the module is run as a script) followed by
the individual checks behind it. All runs use master seed 42. Monte Carlo
comparisons with a closed form allow three standard errors of sampling noise
unless the criterion fixes an absolute tolerance.

Runtime is several minutes on one core.
"""

import functools
import math
import time

import numpy as np
import pytest
from scipy import integrate

from secrecy_sg import analytic as an
from secrecy_sg.cli import main
from secrecy_sg.montecarlo import ScenarioSpec, estimate_ccdf
from secrecy_sg.specfun import CellAreaLaw, cell_area_laplace
from secrecy_sg.validation import Check, R0_GRID, sample_cell_areas, suite_dmin, suite_ordering

SEED = 42
UNIT = an.NetworkParams(1.0, 1.0, 4.0)
SNR_20DB = 10.0 ** (20.0 / 10.0)
SWEEP_LAMBDA_E = np.logspace(-1, 1, 13)
S2_BRACKET = [(lam_e, alpha) for lam_e in (0.1, 1.0, 10.0) for alpha in (2.5, 4.0)]
D0_VALUES = (0.5, 1.0, 2.0, 5.0)

pytestmark = pytest.mark.slow


def _max_z(est, analytic):
    # stderr is the binomial estimate; guard against an empty tail bin
    se = np.maximum(est.stderr, 1.0 / est.n_trials)
    return float(np.max(np.abs(est.survival - analytic) / se))


@functools.lru_cache(maxsize=None)
def _run(params, scenario, n_trials, grid=tuple(R0_GRID)):
    return estimate_ccdf(params, scenario, np.array(grid), n_trials, SEED)


def criterion_1():
    """Full information, nearest BS: exact CCDF and mean."""
    t0 = time.perf_counter()
    est = _run(UNIT, ScenarioSpec.full_info_nearest(), 100_000)
    elapsed = time.perf_counter() - t0
    z = _max_z(est, an.ccdf_s1(UNIT, est.thresholds))
    err = abs(est.mean_rate - 2.0)
    return [
        Check(f"mean {est.mean_rate:.5f} vs 2.0 abs error", err, 0.02, err <= 0.02),
        Check("max |CCDF - closed form| / stderr over grid", z, 3.0, z <= 3.0),
        Check("truncation fraction", est.truncation_fraction, 1e-5, est.truncation_fraction < 1e-5),
        Check("runtime seconds", elapsed, 30.0, elapsed < 30.0),
    ]


def criterion_2():
    """Finite SNR (20 dB) mean on the same realizations as high SNR."""
    hi = _run(UNIT, ScenarioSpec.full_info_nearest(), 100_000)
    fin = _run(UNIT.replace(snr=SNR_20DB), ScenarioSpec.full_info_nearest(), 100_000)
    m = fin.mean_rate
    return [
        Check(f"20 dB mean {m:.5f} in [1.80, 2.00] (distance to interval)",
              max(1.80 - m, m - 2.00, 0.0), 0.0, 1.80 <= m <= 2.00),
        Check(f"20 dB mean below high-SNR mean {hi.mean_rate:.5f} (gap)", hi.mean_rate - m, 0.0,
              m < hi.mean_rate),
    ]


def criterion_3():
    """Optimal BS: CCDF bracket, zero-threshold coverage and mean."""
    checks = []
    s2 = ScenarioSpec.full_info_optimal()
    for lam_e, alpha in S2_BRACKET:
        p = an.NetworkParams(1.0, lam_e, alpha)
        est = _run(p, s2, 20_000)
        lo, hi = an.ccdf_s2_lower(p, est.thresholds), an.ccdf_s2_upper_pgfl(p, est.thresholds)
        se = np.maximum(est.stderr, 1.0 / est.n_trials)
        excess = float(np.max(np.maximum(lo - est.survival, est.survival - hi) / se))
        checks.append(Check(f"bracket lambda_e={lam_e:g} alpha={alpha:g}: max excess / stderr", excess, 3.0,
                            excess <= 3.0))
    est = _run(UNIT, s2, 100_000)
    cov = an.coverage_s2_exact_r0zero(UNIT)
    gap = abs(est.survival[0] - cov)
    tol = 3 * est.stderr[0] + 0.01 * cov
    checks.append(Check(f"coverage at r0=0 {est.survival[0]:.5f} vs {cov:.5f}", gap, tol, gap <= tol))
    m = est.mean_rate
    checks.append(Check(f"mean {m:.5f} in [2.00, 2.30] (distance to interval)", max(2.0 - m, m - 2.3, 0.0),
                        0.0, 2.0 <= m <= 2.3))
    checks.append(Check(f"mean {m:.5f} vs 2.1", abs(m - 2.1), 0.07, abs(m - 2.1) <= 0.07))
    return checks


def criterion_4():
    """Cell information only: simulated mean against its lower bound."""
    s3 = ScenarioSpec.cell_info_nearest()
    est = _run(UNIT, s3, 100_000)
    m = est.mean_rate
    bound = an.mean_s3_cell_lower(UNIT)
    checks = [
        Check(f"mean {m:.5f} >= bound {bound:.5f} (shortfall)", max(bound - m, 0.0), 0.0, m >= bound),
        Check(f"mean {m:.5f} vs 0.57", abs(m - 0.57), 0.05, abs(m - 0.57) <= 0.05),
    ]
    worst = math.inf
    for alpha in (2.5, 4.0):
        for lam_e in SWEEP_LAMBDA_E:
            p = an.NetworkParams(1.0, float(lam_e), alpha)
            e = _run(p, s3, 5_000, (0.0,))
            worst = min(worst, (e.mean_rate - an.mean_s3_cell_lower(p)) / e.mean_stderr)
    checks.append(Check("sweep lambda_e in [0.1, 10], alpha in {2.5, 4}: min (mean - bound) / stderr",
                        worst, -3.0, worst >= -3.0))
    return checks


def criterion_5():
    """Detection radius: exact CCDF and mean, monotone in d0."""
    checks, means = [], []
    for d0 in D0_VALUES:
        est = _run(UNIT, ScenarioSpec.radius_info_nearest(d0), 100_000)
        z = _max_z(est, an.ccdf_s3_radius(UNIT, est.thresholds, d0))
        checks.append(Check(f"d0={d0:g}: max |CCDF - closed form| / stderr", z, 3.0, z <= 3.0))
        mz = abs(est.mean_rate - an.mean_s3_radius(UNIT, d0)) / est.mean_stderr
        checks.append(Check(f"d0={d0:g}: |mean - closed form| / stderr", mz, 3.0, mz <= 3.0))
        means.append(est.mean_rate)
    drop = max(0.0, max(a - b for a, b in zip(means, means[1:])))
    checks.append(Check("mean nondecreasing in d0 (largest drop)", drop, 0.0, drop == 0.0))
    rel = abs(means[-1] - an.mean_s1(UNIT)) / an.mean_s1(UNIT)
    checks.append(Check("d0=5 mean vs full-information mean, relative", rel, 0.01, rel <= 0.01))
    return checks


def criterion_6():
    """Finite vs high SNR ordering on 1e4 coupled realizations."""
    return suite_ordering(10_000, SEED)


def criterion_7():
    """Nearest-BS distance, D_min and hit-or-miss mean cell area."""
    checks = suite_dmin(10_000, SEED)
    areas = sample_cell_areas(1.0, 2_000, SEED)
    err = abs(areas.mean() - 1.0)
    checks.append(Check(f"hit-or-miss mean cell area {areas.mean():.5f} * lambda_e, relative error", err, 0.02,
                        err <= 0.02))
    return checks


def criterion_8():
    """Laplace transform of exact typical-cell areas against the gamma fit."""
    areas = sample_cell_areas(1.0, 100_000, SEED, method="exact")
    law = CellAreaLaw()
    checks = []
    for s in (0.1, 1.0, 10.0):
        w = np.exp(-s * areas)
        emp, fit = float(w.mean()), cell_area_laplace(law, s)
        rel = abs(emp - fit) / fit
        rel_se = float(w.std(ddof=1) / math.sqrt(len(w))) / fit
        checks.append(Check(f"s={s:g}: empirical {emp:.6g} vs fit {fit:.6g}, relative error (se {rel_se:.2g})",
                            rel, 0.03, rel <= 0.03))
    return checks


def criterion_9(tmp_dir):
    """Byte-identical simulate output at 1 and 8 workers."""
    outs = []
    for workers in (1, 8):
        path = tmp_dir / f"sim_w{workers}.csv"
        code = main(["simulate", "--scenario", "s2", "--trials", "10000", "--seed", str(SEED),
                     "--workers", str(workers), "--out", str(path)])
        outs.append((code, path.read_bytes()))
    same = outs[0] == outs[1] and outs[0][0] == 0
    return [Check("CSV bytes identical at --workers 1 and 8", float(not same), 0.0, same)]


def _quad(f):
    val, _ = integrate.quad(f, 0.0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-11)
    return val


def criterion_10():
    """Integrating each closed-form CCDF reproduces its closed-form mean."""
    worst = {}
    for lam_e in (0.1, 1.0, 10.0):
        for alpha in (2.5, 4.0):
            p = an.NetworkParams(1.0, lam_e, alpha)
            pairs = {
                "full info nearest": (lambda r, p=p: an.ccdf_s1(p, r), an.mean_s1(p)),
                "optimal upper": (lambda r, p=p: an.ccdf_s2_upper_pgfl(p, r), an.mean_s2_upper(p)),
                "cell info lower": (lambda r, p=p: an.ccdf_s3_cell_lower(p, r), an.mean_s3_cell_lower(p)),
            }
            for d0 in (0.25, 1.0, 3.0):
                pairs[f"radius d0={d0:g}"] = (lambda r, p=p, d0=d0: an.ccdf_s3_radius(p, r, d0),
                                             an.mean_s3_radius(p, d0))
            for name, (f, mean) in pairs.items():
                key = name.split(" d0")[0]
                rel = abs(_quad(f) - mean) / mean
                worst[key] = max(worst.get(key, 0.0), rel)
    return [Check(f"{k}: worst relative error", v, 1e-6, v <= 1e-6) for k, v in worst.items()]


CRITERIA = {
    1: ("Scenario I exactness", criterion_1),
    2: ("finite-SNR mean", criterion_2),
    3: ("Scenario II bracketing", criterion_3),
    4: ("Scenario III(1) bound", criterion_4),
    5: ("Scenario III(2) exactness", criterion_5),
    6: ("SNR ordering", criterion_6),
    7: ("distribution laws", criterion_7),
    8: ("gamma-fit sanity", criterion_8),
    9: ("determinism", criterion_9),
    10: ("mean-CCDF quadrature identities", criterion_10),
}


def report(number, checks):
    title = CRITERIA[number][0]
    flag = "PASS" if all(c.passed for c in checks) else "FAIL"
    return [f"{flag} criterion {number} ({title})"] + ["    " + c.line() for c in checks]


def evaluate(number, tmp_dir):
    fn = CRITERIA[number][1]
    return fn(tmp_dir) if number == 9 else fn()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, tmp_path, acceptance_report):
    checks = evaluate(number, tmp_path)
    lines = report(number, checks)
    acceptance_report.extend(lines)
    print("\n".join(lines))
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        for n in sorted(CRITERIA):
            print("\n".join(report(n, evaluate(n, Path(tmp)))), flush=True)
