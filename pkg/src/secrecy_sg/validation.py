"""Statistical cross-checks between the Monte Carlo engine and the closed
forms. Each suite returns a list of :class:`Check` records; the CLI prints
them and the test-suite asserts on them."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import analytic as an
from .montecarlo import ScenarioSpec, coupled_trial_suite, estimate_ccdf, simulate
from .pointprocess import (
    DiskWindow,
    PointSet,
    estimate_origin_cell_area,
    half_nn_distance,
    origin_cell_area,
    nearest_distance,
    sample_ppp,
    window_radius_for,
)
from .specfun import CellAreaLaw, cell_area_laplace

__all__ = [
    "Check",
    "SUITES",
    "run_suite",
    "suite_bounds",
    "suite_dmin",
    "suite_cell_area",
    "suite_ordering",
    "suite_determinism",
    "sample_nearest_bs_distances",
    "sample_dmin",
    "sample_cell_areas",
]

R0_GRID = np.arange(0.0, 6.0 + 1e-9, 0.5)


@dataclass(frozen=True)
class Check:
    name: str
    statistic: float
    tolerance: float
    passed: bool

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: statistic={self.statistic:.6g} tolerance={self.tolerance:.6g}"


# separate key families so the samplers never share point patterns
_NEAREST_BS, _DMIN, _CELL_AREA = 1, 2, 3


def _stream(seed, i, family):
    key = np.random.SeedSequence([family, int(seed)]).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, 0, i]))


def sample_nearest_bs_distances(lambda_bs, n, seed, epsilon=1e-6):
    """Distance from the origin to the nearest point of ``n`` independent PPPs."""
    window = DiskWindow(2 * window_radius_for(epsilon, lambda_bs))
    out = np.empty(n)
    for i in range(n):
        rng = _stream(seed, i, _NEAREST_BS)
        d = nearest_distance((0.0, 0.0), sample_ppp(lambda_bs, window, rng))
        out[i] = window.radius if d is None else d
    return out


def sample_dmin(lambda_bs, n, seed, epsilon=1e-6):
    """D_min of a typical BS: by Slivnyak, a BS added at the origin of an
    independent PPP."""
    window = DiskWindow(2 * window_radius_for(epsilon, lambda_bs))
    out = np.empty(n)
    for i in range(n):
        rng = _stream(seed, i, _DMIN)
        pts = sample_ppp(lambda_bs, window, rng).points
        with_origin = PointSet(np.vstack([[0.0, 0.0], pts]), lambda_bs, window)
        d = half_nn_distance(with_origin, 0)
        out[i] = window.radius / 2 if d is None else d
    return out


def sample_cell_areas(lambda_e, n, seed, n_probes=20_000, epsilon=1e-6, margin=1.25, method="hit-or-miss"):
    """Areas of the cell of a point added at the origin of ``n`` independent
    PPPs of density ``lambda_e``.

    ``method`` is ``"hit-or-miss"`` (``n_probes`` uniform probes per cell) or
    ``"exact"`` (Voronoi polygon area). Both use the same patterns.
    """
    probe = DiskWindow(margin * window_radius_for(epsilon, lambda_e))
    window = DiskWindow(2 * probe.radius)
    out = np.empty(n)
    for i in range(n):
        rng = _stream(seed, i, _CELL_AREA)
        eves = sample_ppp(lambda_e, window, rng)
        if method == "hit-or-miss":
            out[i] = estimate_origin_cell_area(eves, probe, n_probes, rng)
        elif method == "exact":
            area = origin_cell_area(eves)
            if area is None:
                raise RuntimeError(f"cell {i} is not certified by its window; increase margin")
            out[i] = area
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def suite_bounds(n_trials=10_000, seed=0, workers=1, lambda_es=(0.1, 1.0, 10.0), alphas=(2.5, 4.0),
                 grid=R0_GRID, window_epsilon=1e-6, window_factor=3.0):
    """Optimal-BS empirical CCDF against its lower and upper bounds.

    Every comparison of a Monte Carlo estimate with an analytic value allows
    three standard errors of sampling noise.
    """
    checks = []
    s2 = ScenarioSpec.full_info_optimal()
    for lam_e in lambda_es:
        for alpha in alphas:
            p = an.NetworkParams(1.0, lam_e, alpha)
            est = estimate_ccdf(p, s2, grid, n_trials, seed, window_epsilon, window_factor, workers)
            lo = an.ccdf_s2_lower(p, grid)
            hi = an.ccdf_s2_upper_pgfl(p, grid)
            slack = 3 * est.stderr
            excess = np.maximum(lo - slack - est.survival, est.survival - hi - slack).max()
            checks.append(Check(f"s2 bracket lambda_e={lam_e:g} alpha={alpha:g}", float(excess), 0.0,
                                bool(excess <= 0)))
    # doubling the window must not move the mean beyond sampling noise
    p = an.NetworkParams(1.0, 1.0, 4.0)
    a = estimate_ccdf(p, s2, [0.0], n_trials, seed, window_epsilon, window_factor, workers)
    b = estimate_ccdf(p, s2, [0.0], n_trials, seed + 1, window_epsilon, 2 * window_factor, workers)
    z = abs(a.mean_rate - b.mean_rate) / math.hypot(a.mean_stderr, b.mean_stderr)
    checks.append(Check(f"s2 mean at window factor {window_factor:g} vs {2 * window_factor:g} (z)", float(z), 3.0,
                        bool(z <= 3.0)))
    return checks


def suite_dmin(n_trials=10_000, seed=0, lambda_bs=1.0):
    p = an.NetworkParams(lambda_bs, 1.0, 4.0)
    tol = 1.36 / math.sqrt(n_trials)
    ru = sample_nearest_bs_distances(lambda_bs, n_trials, seed)
    ks_ru = stats.kstest(ru, lambda r: 1.0 - np.exp(-math.pi * lambda_bs * np.asarray(r) ** 2)).statistic
    dmin = sample_dmin(lambda_bs, n_trials, seed)
    ks_dmin = stats.kstest(dmin, lambda r: 1.0 - an.dmin_survival(p, np.maximum(r, 0))).statistic
    return [
        Check("nearest-BS distance KS", float(ks_ru), tol, bool(ks_ru < tol)),
        Check("D_min KS", float(ks_dmin), tol, bool(ks_dmin < tol)),
    ]


def suite_cell_area(n_cells=2000, seed=0, n_probes=20_000, lambda_e=1.0, law=CellAreaLaw(), n_exact=20_000):
    """Hit-or-miss cell areas against the mean ``1/lambda_e`` and the gamma
    fit, plus the fit's Laplace transform against exact Voronoi areas.

    The Laplace comparison uses exact areas because probe noise inflates
    ``E[exp(-s A)]`` by roughly ``exp(s**2 var / 2)``, several percent at
    ``s = 10``.
    """
    areas = lambda_e * sample_cell_areas(lambda_e, n_cells, seed, n_probes)
    mean_err = abs(areas.mean() - 1.0)
    ks = stats.kstest(areas, stats.gamma(law.q, scale=1.0 / law.b).cdf).statistic
    checks = [
        Check("mean cell area * lambda relative error", float(mean_err), 0.02, bool(mean_err <= 0.02)),
        Check("gamma-fit KS", float(ks), 0.05, bool(ks < 0.05)),
    ]
    exact = lambda_e * sample_cell_areas(lambda_e, n_exact, seed, method="exact")
    for s in (0.1, 1.0, 10.0):
        emp = float(np.mean(np.exp(-s * exact)))
        fit = cell_area_laplace(law, s)
        rel = abs(emp - fit) / fit
        checks.append(Check(f"Laplace transform s={s:g} relative error", rel, 0.03, bool(rel <= 0.03)))
    return checks


def suite_ordering(n_trials=10_000, seed=0, params=None, d0=1.0, snr_db=20.0):
    """Per-realization dominance between scenarios and between finite and
    high SNR on shared realizations."""
    p_hi = params or an.NetworkParams(1.0, 1.0, 4.0)
    p_fin = p_hi.replace(snr=10.0 ** (snr_db / 10.0))
    scen_viol = snr_viol = pos_viol = 0
    for i in range(n_trials):
        hi = coupled_trial_suite(p_hi, d0, i, seed)
        fin = coupled_trial_suite(p_fin, d0, i, seed)
        for r in (hi, fin):
            scen_viol += (r.s3_cell > r.s1) + (r.s3_radius > r.s1) + (r.s1 > r.s2)
        for a, b in zip(fin, hi):
            snr_viol += a > b
            pos_viol += (a > 0) != (b > 0)
    return [
        Check("scenario dominance violations", scen_viol, 0, scen_viol == 0),
        Check("finite-SNR <= high-SNR violations", snr_viol, 0, snr_viol == 0),
        Check("positivity indicator mismatches at r0=0", pos_viol, 0, pos_viol == 0),
    ]


def suite_determinism(n_trials=5000, seed=0, workers=(1, 4)):
    p = an.NetworkParams(1.0, 1.0, 4.0)
    runs = [simulate(p, ScenarioSpec.full_info_nearest(), n_trials, seed, workers=w)[0] for w in workers]
    same = all(np.array_equal(runs[0], r) for r in runs[1:])
    return [Check(f"identical rates across workers {list(workers)}", float(not same), 0, same)]


SUITES = {
    "bounds": suite_bounds,
    "dmin": suite_dmin,
    "cell-area": suite_cell_area,
    "ordering": suite_ordering,
    "determinism": suite_determinism,
}


def run_suite(name, n_trials=None, seed=0, workers=1):
    fn = SUITES[name]
    kwargs = {"seed": seed}
    if n_trials is not None:
        kwargs["n_cells" if name == "cell-area" else "n_trials"] = n_trials
    if name == "bounds":
        kwargs["workers"] = workers
    return fn(**kwargs)
