"""Tests for the Chernoff functionals and the discrete-concavity check."""

import math
import warnings

import numpy as np
import pytest

from ratedet.chernoff import (
    ChernoffCurve,
    ChernoffResult,
    chernoff_at_alpha,
    chernoff_information,
    chernoff_raw,
    is_discrete_concave,
    network_chernoff,
)
from ratedet.design import design_bb
from ratedet.observation import Hypothesis, ObservationModel, model_from_snr_db
from ratedet.quantizer import Quantizer, SensorPmfPair, conditional_pmf

# -log(2*sqrt(G(1)*G(-1))), mpmath at 50 digits: the exact Chernoff
# information of the rate-one threshold-at-zero sensor at m = 1.
C1_EXACT = 0.31374053145641139

# Reference single-sensor curve at 0 dB (the fig2 dataset, six decimals).
FIG2_0DB = (0.0, 0.313741, 0.437325, 0.481768, 0.495084, 0.498723, 0.499675, 0.499918)


def random_pmf_pair(rng, max_cells=8):
    k = int(rng.integers(2, max_cells + 1))
    return SensorPmfPair(p0=rng.dirichlet(np.ones(k)), p1=rng.dirichlet(np.ones(k)))


def pmfs_from_boundaries(model, boundaries):
    """Direct cdf-increment pmf for an arbitrary sorted boundary list.

    Independent of the Quantizer type, so refinements that break the
    power-of-two cell count remain expressible.
    """
    edges = [-math.inf, *boundaries, math.inf]
    p0 = np.maximum(
        np.diff([model.conditional_cdf(Hypothesis.H0, e) for e in edges]), 0.0
    )
    p1 = np.maximum(
        np.diff([model.conditional_cdf(Hypothesis.H1, e) for e in edges]), 0.0
    )
    return SensorPmfPair(p0=p0, p1=p1)


class TestChernoffAtAlpha:
    def test_identical_pmfs_give_zero(self):
        pair = SensorPmfPair(p0=np.array([0.3, 0.7]), p1=np.array([0.3, 0.7]))
        for alpha in (0.0, 0.25, 0.5, 1.0):
            assert chernoff_at_alpha(pair, alpha) == pytest.approx(0.0, abs=1e-14)

    def test_endpoints_vanish_for_full_support(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            pair = random_pmf_pair(rng)
            assert chernoff_at_alpha(pair, 0.0) == pytest.approx(0.0, abs=1e-12)
            assert chernoff_at_alpha(pair, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_rate_one_sensor_at_half(self):
        pair = conditional_pmf(Quantizer(1, (0.0,)), ObservationModel(1.0))
        value = chernoff_at_alpha(pair, 0.5)
        assert value == pytest.approx(C1_EXACT, abs=1e-12)
        assert value == pytest.approx(0.313741, abs=1e-3)

    def test_rejects_alpha_outside_unit_interval(self):
        pair = SensorPmfPair(p0=np.array([0.3, 0.7]), p1=np.array([0.6, 0.4]))
        for alpha in (-0.01, 1.01):
            with pytest.raises(ValueError):
                chernoff_at_alpha(pair, alpha)

    def test_nonnegative_over_random_pairs(self):
        rng = np.random.default_rng(99)
        for _ in range(10**4):
            pair = random_pmf_pair(rng)
            assert chernoff_at_alpha(pair, float(rng.uniform())) >= 0.0

    def test_concave_in_alpha(self):
        rng = np.random.default_rng(4)
        for _ in range(2000):
            pair = random_pmf_pair(rng)
            a1, a2 = rng.uniform(0.0, 1.0, size=2)
            mid = chernoff_at_alpha(pair, 0.5 * (a1 + a2))
            avg = 0.5 * (chernoff_at_alpha(pair, a1) + chernoff_at_alpha(pair, a2))
            assert mid >= avg - 1e-10

    def test_one_sided_zero_cell_contributes_nothing(self):
        pair = SensorPmfPair(p0=np.array([0.0, 1.0]), p1=np.array([0.5, 0.5]))
        assert chernoff_at_alpha(pair, 0.5) == pytest.approx(-math.log(math.sqrt(0.5)))


class TestChernoffInformation:
    def test_symmetric_pair_maximized_at_half(self):
        pair = conditional_pmf(design_bb(3), ObservationModel(1.0))
        result = chernoff_information(pair)
        assert result.alpha_star == pytest.approx(0.5, abs=1e-6)

    def test_identical_pmfs_report_half_by_convention(self):
        pair = SensorPmfPair(p0=np.array([0.2, 0.8]), p1=np.array([0.2, 0.8]))
        result = chernoff_information(pair)
        assert result.value == 0.0
        assert result.alpha_star == 0.5

    def test_bb_rate_four_matches_reference(self):
        pair = conditional_pmf(design_bb(4), ObservationModel(1.0))
        assert chernoff_information(pair).value == pytest.approx(0.495084, abs=1e-3)

    def test_value_at_least_bhattacharyya(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            pair = random_pmf_pair(rng)
            assert chernoff_information(pair).value >= chernoff_at_alpha(pair, 0.5) - 1e-12

    def test_data_processing_bound(self):
        # quantization never beats the raw observation: C <= m**2/2
        rng = np.random.default_rng(31)
        for db in (-2.0, 0.0, 2.0):
            model = model_from_snr_db(db)
            bound = chernoff_raw(model) + 1e-9
            for rate in range(0, 8):
                pair = conditional_pmf(design_bb(rate), model)
                assert chernoff_information(pair).value <= bound
            for _ in range(20):
                rate = int(rng.integers(1, 5))
                b = np.sort(rng.uniform(-6.0, 6.0, size=2**rate - 1))
                pair = conditional_pmf(Quantizer(rate, tuple(b)), model)
                assert chernoff_information(pair).value <= bound

    def test_refinement_monotonicity(self):
        # splitting any cell cannot decrease the Chernoff information
        rng = np.random.default_rng(57)
        model = model_from_snr_db(0.0)
        for _ in range(100):
            rate = int(rng.integers(1, 4))
            b = sorted(rng.uniform(-4.0, 4.0, size=2**rate - 1))
            base = chernoff_information(pmfs_from_boundaries(model, b)).value
            extra = float(rng.uniform(-5.0, 5.0))
            refined = chernoff_information(
                pmfs_from_boundaries(model, sorted(b + [extra]))
            ).value
            assert refined >= base - 1e-10

    def test_disjoint_support_is_infinite(self):
        pair = SensorPmfPair(p0=np.array([1.0, 0.0]), p1=np.array([0.0, 1.0]))
        assert chernoff_information(pair).value == math.inf


class TestNetworkChernoff:
    def test_single_sensor_matches_individual(self):
        pair = conditional_pmf(design_bb(2), ObservationModel(1.0))
        single = chernoff_information(pair)
        net = network_chernoff([pair])
        assert net.value == pytest.approx(single.value, abs=1e-12)
        assert net.alpha_star == pytest.approx(single.alpha_star, abs=1e-6)

    def test_identical_sensors_scale_linearly(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            pair = random_pmf_pair(rng)
            single = chernoff_information(pair).value
            for n in (2, 5):
                assert network_chernoff([pair] * n).value == pytest.approx(
                    n * single, abs=1e-10
                )

    def test_six_bb_rate_two_sensors(self):
        pair = conditional_pmf(design_bb(2), ObservationModel(1.0))
        net = network_chernoff([pair] * 6)
        assert net.value == pytest.approx(6 * 0.437325, abs=6e-3)
        assert net.alpha_star == pytest.approx(0.5, abs=1e-6)

    def test_never_exceeds_sum_of_individual_maxima(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            sensors = [random_pmf_pair(rng) for _ in range(int(rng.integers(1, 5)))]
            total = sum(chernoff_information(p).value for p in sensors)
            assert network_chernoff(sensors).value <= total + 1e-9

    def test_rejects_empty_list(self):
        with pytest.raises(ValueError):
            network_chernoff([])


class TestChernoffRaw:
    def test_unit_amplitude(self):
        assert chernoff_raw(ObservationModel(1.0)) == 0.5

    def test_plus_two_db(self):
        assert chernoff_raw(model_from_snr_db(2.0)) == pytest.approx(
            0.7924465962305568, rel=1e-15
        )

    def test_vanishes_as_m_goes_to_zero(self):
        assert chernoff_raw(ObservationModel(1e-9)) == pytest.approx(0.0, abs=1e-17)


class TestDiscreteConcavity:
    def test_reference_curve_is_concave(self):
        report = is_discrete_concave(FIG2_0DB)
        assert report.is_concave
        assert report.violations == ()

    def test_convex_sequence_fails_at_interior_index(self):
        report = is_discrete_concave([0.0, 1.0, 3.0])
        assert not report.is_concave
        assert report.violations == (1,)

    def test_affine_sequence_passes_with_equality(self):
        assert is_discrete_concave([1.0, 2.0, 3.0, 4.0]).is_concave
        assert is_discrete_concave([1.0, 2.0, 3.0, 4.0], slack=0.0).is_concave

    def test_requires_three_values(self):
        with pytest.raises(ValueError):
            is_discrete_concave([1.0, 2.0])

    def test_rejects_negative_slack(self):
        with pytest.raises(ValueError):
            is_discrete_concave([1.0, 2.0, 3.0], slack=-1.0)


class TestReentrancy:
    def test_concurrent_evaluations_match_sequential(self):
        # pure functions: worker threads must reproduce sequential results
        from concurrent.futures import ThreadPoolExecutor

        rng = np.random.default_rng(71)
        pairs = [random_pmf_pair(rng) for _ in range(64)]
        sequential = [chernoff_information(p).value for p in pairs]
        with ThreadPoolExecutor(max_workers=8) as pool:
            threaded = list(pool.map(lambda p: chernoff_information(p).value, pairs))
        assert threaded == sequential


class TestChernoffResult:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChernoffResult(value=-0.1, alpha_star=0.5)
        with pytest.raises(ValueError):
            ChernoffResult(value=0.1, alpha_star=1.5)


class TestChernoffCurve:
    def test_csv_round_trip(self):
        curve = ChernoffCurve(rates=(0, 1, 2), values=(0.0, 0.3137, 0.4373))
        text = curve.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "rate,chernoff"
        parsed = [line.split(",") for line in lines[1:]]
        assert [int(r) for r, _ in parsed] == [0, 1, 2]
        assert [float(v) for _, v in parsed] == list(curve.values)

    def test_warns_on_decreasing_values(self):
        with pytest.warns(UserWarning):
            ChernoffCurve(rates=(0, 1, 2), values=(0.0, 0.4, 0.3))

    def test_rejects_unsorted_rates(self):
        with pytest.raises(ValueError):
            ChernoffCurve(rates=(1, 0), values=(0.1, 0.2))

    def test_concavity_helper(self):
        curve = ChernoffCurve(rates=tuple(range(8)), values=FIG2_0DB)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert curve.concavity().is_concave
