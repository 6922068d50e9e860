import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from secrecy_sg import analytic as an
from secrecy_sg.montecarlo import (
    ScenarioSpec,
    Variant,
    coupled_trial_suite,
    estimate_ccdf,
    estimate_mean,
    evaluate_realization,
    run_trial,
    secrecy_rate,
    simulate,
    trial_stream,
    trial_window,
)
from secrecy_sg.pointprocess import DiskWindow, PointSet

UNIT = an.NetworkParams(1.0, 1.0, 4.0)
FINITE = UNIT.replace(snr=100.0)
WINDOW = DiskWindow(10.0)
ALL_SCENARIOS = [
    ScenarioSpec.full_info_nearest(),
    ScenarioSpec.full_info_optimal(),
    ScenarioSpec.cell_info_nearest(),
    ScenarioSpec.radius_info_nearest(1.0),
]


def pts(*xy):
    return PointSet(np.array(xy, dtype=float).reshape(-1, 2), 1.0, WINDOW)


class TestScenarioSpec:
    def test_names_round_trip(self):
        for s in ALL_SCENARIOS:
            assert ScenarioSpec.from_name(s.name, s.d0) == s

    def test_radius_requires_d0(self):
        with pytest.raises(ValueError):
            ScenarioSpec.from_name("s3-radius")
        with pytest.raises(ValueError):
            ScenarioSpec(Variant.RADIUS_INFO_NEAREST, -1.0)

    def test_d0_rejected_elsewhere(self):
        with pytest.raises(ValueError):
            ScenarioSpec(Variant.FULL_INFO_NEAREST, 1.0)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            ScenarioSpec.from_name("s4")


class TestSecrecyRate:
    def test_high_snr(self):
        assert secrecy_rate(UNIT, 1.0, 2.0) == 4.0
        assert secrecy_rate(UNIT, 2.0, 1.0) == 0.0

    def test_finite_snr(self):
        expected = math.log2((1 + 100.0) / (1 + 100.0 / 16))
        assert secrecy_rate(FINITE, 1.0, 2.0) == pytest.approx(expected, rel=1e-14)

    @settings(max_examples=200)
    @given(st.floats(1e-3, 50.0), st.floats(1e-3, 50.0), st.floats(0.0, 40.0))
    def test_finite_below_high_with_same_sign(self, r_u, d, snr_db):
        # within a few ulps of d == r_u the finite-SNR difference rounds to zero
        assume(abs(d - r_u) > 1e-12 * r_u)
        fin = UNIT.replace(snr=10 ** (snr_db / 10))
        hi = secrecy_rate(UNIT, r_u, d)
        lo = secrecy_rate(fin, r_u, d)
        assert 0.0 <= lo <= hi + 1e-12
        assert (lo > 0) == (hi > 0)


class TestHandGeometry:
    def test_full_info_nearest(self):
        out = evaluate_realization(UNIT, ScenarioSpec.full_info_nearest(), pts((1, 0)), pts((3, 0)))
        assert out.d_detrimental == 2.0
        assert out.rate == pytest.approx(4.0, rel=1e-15)
        assert not out.truncated

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS, ids=lambda s: s.name)
    @pytest.mark.parametrize("params", [UNIT, UNIT.replace(alpha=2.5), FINITE], ids=["a4", "a2.5", "snr20"])
    def test_eve_closer_than_user(self, scenario, params):
        out = evaluate_realization(params, scenario, pts((1, 0)), pts((0.5, 0)))
        assert out.rate == 0.0

    def test_cell_boundary_cap(self):
        out = evaluate_realization(UNIT, ScenarioSpec.cell_info_nearest(), pts((1, 0), (2.5, 0)), pts((3.5, 0)))
        assert out.d_min == 0.75
        assert out.d_detrimental == 0.75
        assert out.rate == 0.0

    def test_detection_radius_cap(self):
        bs, eves = pts((1, 0)), pts((4, 0))
        assert evaluate_realization(UNIT, ScenarioSpec.radius_info_nearest(2.0), bs, eves).rate == pytest.approx(4.0)
        assert evaluate_realization(UNIT, ScenarioSpec.radius_info_nearest(1.0), bs, eves).rate == 0.0
        assert evaluate_realization(UNIT, ScenarioSpec.radius_info_nearest(0.0), bs, eves).rate == 0.0

    def test_optimal_picks_farther_bs(self):
        bs, eves = pts((1, 0), (-2, 0)), pts((2.2, 0))
        out = evaluate_realization(UNIT, ScenarioSpec.full_info_optimal(), bs, eves)
        assert out.r_u == 2.0
        assert out.rate == pytest.approx(4 * math.log2(4.2 / 2.0), rel=1e-14)
        nearest = evaluate_realization(UNIT, ScenarioSpec.full_info_nearest(), bs, eves)
        assert nearest.rate == pytest.approx(4 * math.log2(1.2), rel=1e-14)

    def test_optimal_without_positive_rate_falls_back(self):
        bs, eves = pts((1, 0), (0, 1)), pts((0.1, 0.1))
        out = evaluate_realization(UNIT, ScenarioSpec.full_info_optimal(), bs, eves)
        assert out.rate == 0.0
        assert out.r_u == 1.0

    def test_tie_break_is_lexicographic(self):
        bs = pts((0, 1), (1, 0), (-1, 0))
        out = evaluate_realization(UNIT, ScenarioSpec.full_info_nearest(), bs, pts((5, 0)))
        # (-1, 0) comes first among equidistant BSs
        assert out.d_detrimental == pytest.approx(6.0)

    def test_no_eves_is_truncated_at_window_edge(self):
        empty = PointSet(np.empty((0, 2)), 1.0, WINDOW)
        for scenario in ALL_SCENARIOS[:3]:
            out = evaluate_realization(UNIT, scenario, pts((1, 0)), empty)
            assert out.truncated
            assert out.d_detrimental == pytest.approx(9.0)
            assert out.rate == pytest.approx(4 * math.log2(9.0))

    def test_requires_a_bs(self):
        empty = PointSet(np.empty((0, 2)), 1.0, WINDOW)
        with pytest.raises(ValueError):
            evaluate_realization(UNIT, ScenarioSpec.full_info_nearest(), empty, pts((1, 0)))


class TestStreams:
    def test_reproducible(self):
        a = trial_stream(5, 17).random(4)
        b = trial_stream(5, 17).random(4)
        np.testing.assert_array_equal(a, b)

    def test_distinct_per_trial_attempt_and_seed(self):
        draws = {tuple(trial_stream(s, i, k).random(2)) for s in (0, 1) for i in (0, 1, 2) for k in (0, 1)}
        assert len(draws) == 12

    def test_run_trial_depends_only_on_index(self):
        a = run_trial(UNIT, ScenarioSpec.full_info_nearest(), 123, master_seed=9)
        b = run_trial(UNIT, ScenarioSpec.full_info_nearest(), 123, master_seed=9)
        assert a == b


class TestWindow:
    def test_radius(self):
        w = trial_window(an.NetworkParams(1.0, 0.25, 4.0), 1e-6, 3.0)
        assert w.radius == pytest.approx(3 * math.sqrt(math.log(1e6) / (math.pi * 0.25)))

    def test_factor_below_one(self):
        with pytest.raises(ValueError):
            trial_window(UNIT, 1e-6, 0.5)

    def test_rare_truncation(self):
        est = estimate_ccdf(UNIT, ScenarioSpec.full_info_nearest(), [0.0], 5000, master_seed=1)
        assert est.n_truncated == 0
        assert est.n_rejected == 0

    @pytest.mark.parametrize("scenario", [ScenarioSpec.full_info_nearest(), ScenarioSpec.full_info_optimal()],
                             ids=lambda s: s.name)
    def test_insensitive_to_window_factor(self, scenario):
        n = 5000
        m3, se3 = estimate_mean(UNIT, scenario, n, master_seed=2, window_factor=3.0)
        m6, se6 = estimate_mean(UNIT, scenario, n, master_seed=3, window_factor=6.0)
        assert abs(m3 - m6) <= 3 * math.hypot(se3, se6)


class TestSimulate:
    def test_identical_across_workers(self):
        r1 = simulate(UNIT, ScenarioSpec.full_info_nearest(), 4500, master_seed=4, workers=1)
        r3 = simulate(UNIT, ScenarioSpec.full_info_nearest(), 4500, master_seed=4, workers=3)
        np.testing.assert_array_equal(r1[0], r3[0])
        np.testing.assert_array_equal(r1[1], r3[1])
        assert r1[2] == r3[2]

    def test_prefix_stable(self):
        long = simulate(UNIT, ScenarioSpec.cell_info_nearest(), 300, master_seed=4)[0]
        short = simulate(UNIT, ScenarioSpec.cell_info_nearest(), 100, master_seed=4)[0]
        np.testing.assert_array_equal(long[:100], short)

    def test_estimate_shapes_and_stderr(self):
        grid = np.arange(0, 6.5, 0.5)
        est = estimate_ccdf(UNIT, ScenarioSpec.full_info_nearest(), grid, 2000, master_seed=5)
        assert est.survival.shape == grid.shape
        assert np.all(np.diff(est.survival) <= 0)
        np.testing.assert_allclose(est.stderr, np.sqrt(est.survival * (1 - est.survival) / 2000))
        assert est.mean_rate == pytest.approx(est.rates.mean())
        assert est.truncation_fraction == est.n_truncated / 2000

    def test_scenario_one_matches_closed_form(self):
        grid = np.arange(0, 6.5, 0.5)
        est = estimate_ccdf(UNIT, ScenarioSpec.full_info_nearest(), grid, 20_000, master_seed=6)
        assert np.all(np.abs(est.survival - an.ccdf_s1(UNIT, grid)) <= 3 * est.stderr + 1e-12)
        assert abs(est.mean_rate - 2.0) <= 3 * est.mean_stderr

    @pytest.mark.parametrize("grid", [[], [1.0, 0.5], [[0.0]]])
    def test_bad_grid(self, grid):
        with pytest.raises(ValueError):
            estimate_ccdf(UNIT, ScenarioSpec.full_info_nearest(), grid, 10)

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            estimate_mean(UNIT, ScenarioSpec.full_info_nearest(), 0)


class TestCoupled:
    def test_dominance_and_snr_ordering(self):
        for i in range(300):
            hi = coupled_trial_suite(UNIT, 1.0, i, master_seed=8)
            fin = coupled_trial_suite(FINITE, 1.0, i, master_seed=8)
            for r in (hi, fin):
                assert r.s3_cell <= r.s1 and r.s3_radius <= r.s1 and r.s1 <= r.s2
            for a, b in zip(fin, hi):
                assert a <= b and (a > 0) == (b > 0)

    def test_radius_beyond_window_equals_full_info(self):
        d0 = 2 * trial_window(UNIT).radius
        for i in range(100):
            r = coupled_trial_suite(UNIT, d0, i, master_seed=9)
            assert r.s3_radius == r.s1

    def test_monotone_in_d0(self):
        d0s = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
        for i in range(100):
            rates = [coupled_trial_suite(UNIT, d0, i, master_seed=10).s3_radius for d0 in d0s]
            assert all(a <= b for a, b in zip(rates, rates[1:]))
