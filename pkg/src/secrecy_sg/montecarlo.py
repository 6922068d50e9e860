"""Monte Carlo secrecy-rate trials on sampled base-station and eavesdropper
patterns, and CCDF/mean estimation over many trials.

Each trial draws from its own counter-based stream keyed by the master seed
and indexed by the trial number, so results do not depend on how trials are
split across worker processes.
"""

import enum
import functools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .pointprocess import DiskWindow, nearest_distances, sample_ppp, window_radius_for

__all__ = [
    "Variant",
    "ScenarioSpec",
    "TrialOutcome",
    "EmpiricalCcdf",
    "CoupledRates",
    "trial_stream",
    "secrecy_rate",
    "trial_window",
    "evaluate_realization",
    "run_trial",
    "simulate",
    "estimate_ccdf",
    "estimate_mean",
    "coupled_trial_suite",
]

DEFAULT_WINDOW_EPSILON = 1e-6
DEFAULT_WINDOW_FACTOR = 3.0
# nearest eavesdroppers to the origin used to prune candidate serving BSs
_PRUNE_EVES = 16
_CHUNK = 2000


class Variant(enum.Enum):
    FULL_INFO_NEAREST = "s1"
    FULL_INFO_OPTIMAL = "s2"
    CELL_INFO_NEAREST = "s3-cell"
    RADIUS_INFO_NEAREST = "s3-radius"


@dataclass(frozen=True)
class ScenarioSpec:
    """Cell association rule plus what the serving BS knows about
    eavesdropper locations.

    ``d0`` is the detection radius and is only meaningful (and required) for
    :attr:`Variant.RADIUS_INFO_NEAREST`.
    """

    variant: Variant
    d0: float | None = None

    def __post_init__(self):
        if self.variant is Variant.RADIUS_INFO_NEAREST:
            if self.d0 is None or not self.d0 >= 0:
                raise ValueError("detection-radius scenario needs d0 >= 0")
        elif self.d0 is not None:
            raise ValueError(f"d0 is not used by {self.variant.value}")

    @classmethod
    def full_info_nearest(cls):
        return cls(Variant.FULL_INFO_NEAREST)

    @classmethod
    def full_info_optimal(cls):
        return cls(Variant.FULL_INFO_OPTIMAL)

    @classmethod
    def cell_info_nearest(cls):
        return cls(Variant.CELL_INFO_NEAREST)

    @classmethod
    def radius_info_nearest(cls, d0):
        return cls(Variant.RADIUS_INFO_NEAREST, float(d0))

    @classmethod
    def from_name(cls, name, d0=None):
        """Build from a short name: ``s1``, ``s2``, ``s3-cell`` or ``s3-radius``."""
        variant = Variant(name)
        if variant is Variant.RADIUS_INFO_NEAREST:
            if d0 is None:
                raise ValueError("scenario s3-radius requires d0")
            return cls(variant, float(d0))
        return cls(variant)

    @property
    def name(self):
        return self.variant.value


@dataclass(frozen=True)
class TrialOutcome:
    """Secrecy rate of one realization plus the distances that produced it.

    ``d_detrimental`` is the distance from the serving BS to the worst-case
    eavesdropper after all caps (cell boundary, detection radius, window
    edge). ``truncated`` is set when the window edge was the binding cap.
    """

    rate: float
    r_u: float
    d_detrimental: float
    d_min: float | None = None
    truncated: bool = False
    rejections: int = 0


@dataclass(frozen=True, eq=False)
class EmpiricalCcdf:
    thresholds: np.ndarray
    survival: np.ndarray
    stderr: np.ndarray
    n_trials: int
    mean_rate: float
    mean_stderr: float
    n_truncated: int = 0
    n_rejected: int = 0
    master_seed: int = 0
    rates: np.ndarray = field(default=None, repr=False)

    @property
    def truncation_fraction(self):
        return self.n_truncated / self.n_trials


class CoupledRates(NamedTuple):
    s3_cell: float
    s3_radius: float
    s1: float
    s2: float


@functools.lru_cache(maxsize=64)
def _philox_key(master_seed):
    return np.random.SeedSequence(master_seed).generate_state(2, np.uint64)


def trial_stream(master_seed, trial_index, attempt=0):
    """Random stream for one trial.

    Philox is keyed by the master seed; the trial index and redraw attempt
    occupy the two high counter words, so every (trial, attempt) pair owns a
    disjoint block of the counter space.
    """
    counter = np.array([0, 0, attempt, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=_philox_key(int(master_seed)), counter=counter))


def secrecy_rate(params, r_u, d):
    """Secrecy rate for user distance ``r_u`` and worst-case eavesdropper
    distance ``d`` under the SNR model of ``params``; clipped at zero."""
    r_u = np.asarray(r_u, dtype=float)
    d = np.asarray(d, dtype=float)
    a = params.alpha
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if params.high_snr:
            # log1p keeps the rate positive whenever d > r_u, even by one ulp
            rate = a * np.log1p((d - r_u) / r_u) / math.log(2.0)
        else:
            snr = params.snr
            rate = (np.log1p(snr * r_u**-a) - np.log1p(snr * d**-a)) / math.log(2.0)
    # positivity is a geometric fact shared by both SNR models
    rate = np.where((d > r_u) & (rate > 0), rate, 0.0)
    return float(rate) if rate.ndim == 0 else rate


def trial_window(params, window_epsilon=DEFAULT_WINDOW_EPSILON, window_factor=DEFAULT_WINDOW_FACTOR):
    """Common simulation window for both processes.

    The base radius holds the nearest point of the sparser process with
    probability ``1 - window_epsilon``; it is enlarged by ``window_factor``
    so that the neighbourhood of the serving BS (and the whole eavesdropper
    cell of the origin for the optimal-BS rule) is observed.
    """
    if not window_factor >= 1:
        raise ValueError("window factor must be at least 1")
    base = window_radius_for(window_epsilon, min(params.lambda_bs, params.lambda_e))
    return DiskWindow(window_factor * base)


def _lexi_order(points, norms):
    # (distance, x, y) ordering keeps probability-zero ties deterministic
    return np.lexsort((points[:, 1], points[:, 0], norms))


def _capped_nearest(params, scenario, bs, eves, i0, r_u, cap):
    x0 = bs.points[i0]
    d_eve = nearest_distances(x0, eves.points)[0]
    d_min = None
    d = d_eve
    if scenario.variant is Variant.CELL_INFO_NEAREST:
        others = np.delete(bs.points, i0, axis=0)
        d_min = 0.5 * nearest_distances(x0, others)[0] if len(others) else math.inf
        d = min(d, d_min)
    elif scenario.variant is Variant.RADIUS_INFO_NEAREST:
        d = min(d, scenario.d0)
    truncated = cap < d
    d = min(d, cap)
    rate = secrecy_rate(params, r_u, d)
    if d_min is not None and math.isinf(d_min):
        d_min = cap
    return TrialOutcome(rate, r_u, float(d), None if d_min is None else float(d_min), bool(truncated))


def _optimal(params, bs, eves, norms, radius):
    candidates = np.ones(len(bs), dtype=bool)
    if len(eves):
        # x can only beat its nearest eavesdropper if it lies on the origin's
        # side of every bisector; prune with the eavesdroppers nearest the origin
        e_norms = eves.norms
        k = min(_PRUNE_EVES, len(eves))
        near = eves.points[np.argpartition(e_norms, k - 1)[:k]]
        half = 0.5 * np.einsum("ij,ij->i", near, near)
        candidates = np.all(bs.points @ near.T < half, axis=1)
    idx = np.flatnonzero(candidates)
    if len(idx) == 0:
        return None
    d_eve = nearest_distances(bs.points[idx], eves.points)
    cap = radius - norms[idx]
    d = np.minimum(d_eve, cap)
    rates = secrecy_rate(params, norms[idx], d)
    rates = np.atleast_1d(rates)
    best = rates.max()
    if not best > 0:
        return None
    tied = idx[rates == best]
    if len(tied) > 1:
        tied = tied[_lexi_order(bs.points[tied], norms[tied])]
    j = tied[0]
    pos = np.searchsorted(idx, j)
    return TrialOutcome(float(best), float(norms[j]), float(d[pos]), None, bool(cap[pos] < d_eve[pos]))


def evaluate_realization(params, scenario, bs, eves):
    """Secrecy rate of the typical user at the origin for given patterns.

    ``bs`` and ``eves`` must share a window; anything outside it is unknown
    and is treated as a worst-case eavesdropper at the window edge.
    """
    if len(bs) == 0:
        raise ValueError("at least one base station is required")
    radius = bs.window.radius
    norms = bs.norms
    i0 = int(np.argmin(norms))
    if np.count_nonzero(norms == norms[i0]) > 1:
        i0 = int(_lexi_order(bs.points, norms)[0])
    r_u = float(norms[i0])
    if scenario.variant is Variant.FULL_INFO_OPTIMAL:
        outcome = _optimal(params, bs, eves, norms, radius)
        if outcome is not None:
            return outcome
        nearest = ScenarioSpec.full_info_nearest()
        return _capped_nearest(params, nearest, bs, eves, i0, r_u, radius - r_u)
    return _capped_nearest(params, scenario, bs, eves, i0, r_u, radius - r_u)


def _sample_realization(params, window, master_seed, trial_index):
    attempt = 0
    while True:
        rng = trial_stream(master_seed, trial_index, attempt)
        bs = sample_ppp(params.lambda_bs, window, rng)
        eves = sample_ppp(params.lambda_e, window, rng)
        if len(bs):
            return bs, eves, attempt
        # empty BS window: redraw on a derived substream
        attempt += 1


def run_trial(params, scenario, trial_index, master_seed=0,
              window_epsilon=DEFAULT_WINDOW_EPSILON, window_factor=DEFAULT_WINDOW_FACTOR):
    """Sample one realization and evaluate the scenario on it."""
    window = trial_window(params, window_epsilon, window_factor)
    bs, eves, attempts = _sample_realization(params, window, master_seed, trial_index)
    out = evaluate_realization(params, scenario, bs, eves)
    return TrialOutcome(out.rate, out.r_u, out.d_detrimental, out.d_min, out.truncated, attempts)


def _run_chunk(args):
    params, scenario, start, stop, master_seed, window_epsilon, window_factor = args
    n = stop - start
    rates = np.empty(n)
    truncated = np.zeros(n, dtype=bool)
    rejected = 0
    for k, i in enumerate(range(start, stop)):
        out = run_trial(params, scenario, i, master_seed, window_epsilon, window_factor)
        rates[k] = out.rate
        truncated[k] = out.truncated
        rejected += out.rejections
    return rates, truncated, rejected


def simulate(params, scenario, n_trials, master_seed=0, window_epsilon=DEFAULT_WINDOW_EPSILON,
             window_factor=DEFAULT_WINDOW_FACTOR, workers=1):
    """Run ``n_trials`` trials and return ``(rates, truncated, n_rejected)``.

    ``rates`` is ordered by trial index whatever the number of workers.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    jobs = [
        (params, scenario, s, min(s + _CHUNK, n_trials), master_seed, window_epsilon, window_factor)
        for s in range(0, n_trials, _CHUNK)
    ]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        parts = [_run_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    rates = np.concatenate([p[0] for p in parts])
    truncated = np.concatenate([p[1] for p in parts])
    return rates, truncated, sum(p[2] for p in parts)


def _summarize(rates, grid, truncated, rejected, master_seed):
    grid = np.asarray(grid, dtype=float)
    n = len(rates)
    survival = (rates[None, :] > grid[:, None]).sum(axis=1) / n
    stderr = np.sqrt(survival * (1.0 - survival) / n)
    mean = float(rates.mean())
    mean_se = float(rates.std(ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return EmpiricalCcdf(grid, survival, stderr, n, mean, mean_se,
                         int(np.count_nonzero(truncated)), int(rejected), master_seed, rates)


def estimate_ccdf(params, scenario, grid, n_trials, master_seed=0, window_epsilon=DEFAULT_WINDOW_EPSILON,
                  window_factor=DEFAULT_WINDOW_FACTOR, workers=1):
    """Empirical CCDF ``P(rate > r0)`` on ``grid`` plus the mean rate."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("threshold grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) < 0):
        raise ValueError("threshold grid must be sorted")
    rates, truncated, rejected = simulate(params, scenario, n_trials, master_seed, window_epsilon,
                                          window_factor, workers)
    return _summarize(rates, grid, truncated, rejected, master_seed)


def estimate_mean(params, scenario, n_trials, master_seed=0, window_epsilon=DEFAULT_WINDOW_EPSILON,
                  window_factor=DEFAULT_WINDOW_FACTOR, workers=1):
    """Sample mean and standard error of the secrecy rate."""
    est = estimate_ccdf(params, scenario, [0.0], n_trials, master_seed, window_epsilon, window_factor, workers)
    return est.mean_rate, est.mean_stderr


def coupled_trial_suite(params, d0, trial_index, master_seed=0, window_epsilon=DEFAULT_WINDOW_EPSILON,
                        window_factor=DEFAULT_WINDOW_FACTOR):
    """Evaluate all four scenarios on one shared realization.

    By construction ``s3_cell <= s1``, ``s3_radius <= s1`` and ``s1 <= s2``.
    """
    window = trial_window(params, window_epsilon, window_factor)
    bs, eves, _ = _sample_realization(params, window, master_seed, trial_index)
    rates = [
        evaluate_realization(params, s, bs, eves).rate
        for s in (ScenarioSpec.cell_info_nearest(), ScenarioSpec.radius_info_nearest(d0),
                  ScenarioSpec.full_info_nearest(), ScenarioSpec.full_info_optimal())
    ]
    return CoupledRates(*rates)
