"""Tests for threshold placement and error probability.

Convention under test: decide the zero-phase symbol when the observed
count or photocurrent is at or above the threshold.
"""

import math
from dataclasses import replace

import pytest

from eabpsk.detection import (
    DetectionModel,
    EQUAL_PRIORS,
    GAUSSIAN_APPROX,
    NEGATIVE_BINOMIAL,
    OH,
    OPA_IDLER,
    OPA_RETURN,
    OPC,
    Priors,
    equal_prior_threshold_gaussian,
    error_probability,
    optimal_threshold,
    pe_surface,
    pe_sweep,
    receiver_mode_stats,
    threshold_balance_root,
)
from eabpsk.errors import InvalidParameterError
from eabpsk.photostats import NegBinParams, nb_pmf
from eabpsk.receivers import ChannelParams, DEFAULT_PARAMS

P = DEFAULT_PARAMS
UNEQUAL = Priors.from_p0(0.45)

NB_IDLER = DetectionModel(NEGATIVE_BINOMIAL, OPA_IDLER)
NB_RETURN = DetectionModel(NEGATIVE_BINOMIAL, OPA_RETURN)
G_IDLER = DetectionModel(GAUSSIAN_APPROX, OPA_IDLER)
G_RETURN = DetectionModel(GAUSSIAN_APPROX, OPA_RETURN)
G_OPC = DetectionModel(GAUSSIAN_APPROX, OPC)
G_OH = DetectionModel(GAUSSIAN_APPROX, OH)


class TestPriorsAndModels:
    def test_priors_validation(self):
        with pytest.raises(InvalidParameterError):
            Priors(0.0, 1.0)
        with pytest.raises(InvalidParameterError):
            Priors(0.3, 0.6)
        pri = Priors.from_p0(0.3)
        assert pri.p1 == pytest.approx(0.7, abs=1e-15)

    def test_counting_model_needs_counting_receiver(self):
        with pytest.raises(InvalidParameterError):
            DetectionModel(NEGATIVE_BINOMIAL, OPC)
        with pytest.raises(InvalidParameterError):
            DetectionModel(NEGATIVE_BINOMIAL, OH)
        with pytest.raises(InvalidParameterError):
            DetectionModel("poisson", OPA_IDLER)
        with pytest.raises(InvalidParameterError):
            DetectionModel(GAUSSIAN_APPROX, "heterodyne")


class TestErrorProbability:
    def test_zero_threshold_anchors(self):
        # frozen from the closed-form statistics at the default parameters
        assert error_probability(EQUAL_PRIORS, 0.0, G_OPC, P) == pytest.approx(
            0.49438532035988136, rel=1e-12)
        assert error_probability(EQUAL_PRIORS, 0.0, G_OH, P) == pytest.approx(
            0.49209913162834285, rel=1e-12)
        assert error_probability(EQUAL_PRIORS, 1.0, NB_IDLER, P) == pytest.approx(
            0.49545425858924874, rel=1e-12)

    def test_counting_threshold_at_or_below_zero_always_decides_zero(self):
        # every count satisfies n >= 0, so only the pi symbol errs
        pe = error_probability(UNEQUAL, 0.0, NB_IDLER, P)
        assert pe == pytest.approx(UNEQUAL.p1, abs=1e-15)

    def test_infinite_thresholds(self):
        assert error_probability(UNEQUAL, math.inf, G_IDLER, P) == pytest.approx(0.45, abs=1e-15)
        assert error_probability(UNEQUAL, -math.inf, G_IDLER, P) == pytest.approx(0.55, abs=1e-15)

    def test_fractional_counting_threshold_rounds_up(self):
        lo = error_probability(EQUAL_PRIORS, 1.0, NB_IDLER, P)
        frac = error_probability(EQUAL_PRIORS, 0.5, NB_IDLER, P)
        # n >= 0.5 and n >= 1 select the same counts
        assert frac == pytest.approx(lo, abs=0.0)


class TestEqualPriorClosedForm:
    def test_matches_bisection_root(self):
        for m in (1, 10, 100, 1000, 10000):
            params = replace(P, modes=m)
            s0, spi = receiver_mode_stats(G_IDLER, params)
            closed = equal_prior_threshold_gaussian(s0, spi, m)
            root = threshold_balance_root(EQUAL_PRIORS, G_IDLER, params)
            assert abs(root.threshold - closed) <= 1e-9 * max(1.0, abs(closed))

    def test_large_block_value(self):
        params = replace(P, modes=10000)
        s0, spi = receiver_mode_stats(G_IDLER, params)
        assert equal_prior_threshold_gaussian(s0, spi, 10000) == pytest.approx(
            2108.863275638048, rel=1e-12)


class TestBalanceRoot:
    def test_gaussian_residual_small(self):
        for pri in (EQUAL_PRIORS, UNEQUAL):
            for m in (1, 10, 1000):
                params = replace(P, modes=m)
                root = threshold_balance_root(pri, G_IDLER, params)
                assert abs(root.residual) <= 1e-9

    def test_unequal_prior_root_at_single_mode(self):
        root = threshold_balance_root(UNEQUAL, G_IDLER, P)
        assert root.threshold == pytest.approx(0.273606211105338, rel=1e-10)

    def test_counting_root_is_smallest_balancing_integer(self):
        for m in (1, 10, 100):
            params = replace(P, modes=m)
            root = threshold_balance_root(UNEQUAL, NB_IDLER, params)
            t = root.threshold
            assert t == int(t) and t >= 0.0
            # integer thresholds cannot balance better than one pmf step
            assert abs(root.residual) <= _step_bound(params, t)

    def test_symmetric_gaussian_root_is_midpoint(self):
        stats = receiver_mode_stats(G_OPC, P)
        assert stats[0].mean == pytest.approx(-stats[1].mean, abs=1e-15)
        root = threshold_balance_root(EQUAL_PRIORS, G_OPC, P)
        assert root.threshold == pytest.approx(0.0, abs=1e-12)


def _step_bound(params, t):
    # the balance function jumps by the prior-weighted pmf at count t-1,
    # the resolution limit for integer thresholds
    s0, spi = receiver_mode_stats(NB_IDLER, params)
    k = int(t) - 1
    step0 = nb_pmf(k, NegBinParams(params.modes, s0.mean))
    step1 = nb_pmf(k, NegBinParams(params.modes, spi.mean))
    return UNEQUAL.p0 * step0 + UNEQUAL.p1 * step1 + 1e-12


class TestOptimalThreshold:
    def test_never_worse_than_guessing(self):
        for model in (NB_IDLER, NB_RETURN, G_IDLER, G_OPC, G_OH):
            for p0 in (0.15, 0.45, 0.5, 0.62, 0.9):
                for m in (1, 7, 40):
                    pri = Priors.from_p0(p0)
                    params = replace(P, modes=m)
                    t = optimal_threshold(pri, model, params).threshold
                    pe = error_probability(pri, t, model, params)
                    assert pe <= min(p0, 1.0 - p0) + 1e-12, (model.receiver, p0, m)

    def test_counting_result_is_exhaustive_minimum(self):
        pri = UNEQUAL
        t = optimal_threshold(pri, NB_IDLER, P).threshold
        pe_star = error_probability(pri, t, NB_IDLER, P)
        for n in range(0, 40):
            assert pe_star <= error_probability(pri, float(n), NB_IDLER, P) + 1e-15

    def test_equal_priors_single_mode_counting(self):
        t = optimal_threshold(EQUAL_PRIORS, NB_IDLER, P)
        assert t.threshold == 1.0

    def test_indistinguishable_symbols_fall_back_to_prior(self):
        quiet = ChannelParams(n_s=0.0, n_b=1.0, eta=0.01)
        t = optimal_threshold(UNEQUAL, NB_IDLER, quiet)
        assert math.isinf(t.threshold)
        assert error_probability(UNEQUAL, t.threshold, NB_IDLER, quiet) == pytest.approx(0.45, abs=1e-15)
        t2 = optimal_threshold(EQUAL_PRIORS, G_IDLER, quiet)
        assert error_probability(EQUAL_PRIORS, t2.threshold, G_IDLER, quiet) == pytest.approx(0.5, abs=1e-15)
        flipped = optimal_threshold(Priors.from_p0(0.55), G_IDLER, quiet)
        assert error_probability(Priors.from_p0(0.55), flipped.threshold, G_IDLER, quiet) == pytest.approx(0.45, abs=1e-15)

    def test_return_threshold_above_idler_threshold(self):
        for m in (10, 100, 1000):
            params = replace(P, modes=m)
            tr = optimal_threshold(UNEQUAL, G_RETURN, params).threshold
            ti = optimal_threshold(UNEQUAL, G_IDLER, params).threshold
            assert tr > ti


class TestSweeps:
    def test_pe_sweep_rows_and_ordering(self):
        rows = pe_sweep(P, [1, 10, 100], [EQUAL_PRIORS, UNEQUAL],
                        [NB_IDLER, G_IDLER, G_OPC])
        assert len(rows) == 18
        keys = [(r["receiver"], r["p0"], r["M"], r["model"]) for r in rows]
        assert keys == sorted(keys)
        assert set(rows[0]) == {"M", "receiver", "model", "p0", "threshold", "pe"}

    def test_equal_prior_pe_decreases_with_block_size(self):
        rows = pe_sweep(P, [1, 10, 100, 1000], [EQUAL_PRIORS], [G_OH])
        pes = [r["pe"] for r in rows]
        assert all(b < a for a, b in zip(pes, pes[1:]))

    def test_pe_sweep_rejects_empty_grid(self):
        with pytest.raises(InvalidParameterError):
            pe_sweep(P, [], [EQUAL_PRIORS], [G_OH])

    def test_pe_surface_shape_and_minimum(self):
        p0_grid = [0.2, 0.5, 0.8]
        nth_grid = [float(n) for n in range(0, 15)]
        surf = pe_surface(P, NB_IDLER, p0_grid, nth_grid)
        assert len(surf) == 3 and all(len(row) == 15 for row in surf)
        assert all(0.0 <= v <= 1.0 for row in surf for v in row)
        # the full integer grid contains the exhaustive optimum
        t_star = optimal_threshold(EQUAL_PRIORS, NB_IDLER, P)
        pe_star = error_probability(EQUAL_PRIORS, t_star.threshold, NB_IDLER, P)
        assert min(surf[1]) == pytest.approx(pe_star, abs=1e-15)

    def test_pe_surface_rows_track_prior_at_extreme_thresholds(self):
        surf = pe_surface(P, NB_IDLER, [0.3], [0.0, 1e9])
        assert surf[0][0] == pytest.approx(0.7, abs=1e-12)  # always decide zero
        assert surf[0][1] == pytest.approx(0.3, abs=1e-9)   # always decide pi
