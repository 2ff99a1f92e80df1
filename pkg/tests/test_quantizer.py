"""Tests for quantizer structure, serialization, and conditional pmfs."""

import json

import numpy as np
import pytest

from ratedet.observation import ObservationModel, model_from_snr_db
from ratedet.quantizer import Quantizer, SensorPmfPair, conditional_pmf

G_AT_1 = 0.84134474606854295  # mpmath.ncdf(1), frozen
G_AT_MINUS_1 = 0.15865525393145705


def random_quantizer(rng, max_rate=4, span=6.0):
    rate = int(rng.integers(0, max_rate + 1))
    b = np.sort(rng.uniform(-span, span, size=2**rate - 1))
    return Quantizer(rate=rate, boundaries=tuple(b))


class TestQuantizer:
    def test_rate_zero_has_single_cell(self):
        q = Quantizer(0, ())
        assert q.n_cells == 1
        assert q.boundaries == ()

    def test_boundary_count_must_match_rate(self):
        with pytest.raises(ValueError):
            Quantizer(2, (0.0,))

    def test_boundaries_must_be_sorted(self):
        with pytest.raises(ValueError):
            Quantizer(1, ())
        with pytest.raises(ValueError):
            Quantizer(2, (1.0, 0.0, 2.0))

    def test_rejects_negative_rate_and_non_finite(self):
        with pytest.raises(ValueError):
            Quantizer(-1, ())
        with pytest.raises(ValueError):
            Quantizer(1, (float("inf"),))

    def test_cell_index_left_closed(self):
        q = Quantizer(2, (-1.0, 0.0, 1.0))
        assert q.cell_index(-2.0) == 0
        assert q.cell_index(-1.0) == 1  # boundary belongs to the upper cell
        assert q.cell_index(0.5) == 2
        assert q.cell_index(1.0) == 3

    def test_json_round_trip(self):
        q = Quantizer(2, (-1.25, 0.0, 0.7071067811865476))
        again = Quantizer.from_json(q.to_json())
        assert again == q
        payload = json.loads(q.to_json())
        assert set(payload) == {"rate", "boundaries"}


class TestSensorPmfPair:
    def test_valid_pair(self):
        pair = SensorPmfPair(p0=np.array([0.25, 0.75]), p1=np.array([0.5, 0.5]))
        assert pair.n_cells == 2
        assert not pair.p0.flags.writeable

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            SensorPmfPair(p0=np.array([-0.1, 1.1]), p1=np.array([0.5, 0.5]))

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            SensorPmfPair(p0=np.array([0.5, 0.6]), p1=np.array([0.5, 0.5]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            SensorPmfPair(p0=np.array([1.0]), p1=np.array([0.5, 0.5]))


class TestConditionalPmf:
    def test_rate_one_threshold_at_zero(self):
        pair = conditional_pmf(Quantizer(1, (0.0,)), ObservationModel(1.0))
        np.testing.assert_allclose(pair.p0, [G_AT_1, G_AT_MINUS_1], rtol=1e-12)
        np.testing.assert_allclose(pair.p1, [G_AT_MINUS_1, G_AT_1], rtol=1e-12)

    def test_rate_zero_is_uninformative(self):
        pair = conditional_pmf(Quantizer(0, ()), ObservationModel(2.0))
        np.testing.assert_array_equal(pair.p0, [1.0])
        np.testing.assert_array_equal(pair.p1, [1.0])

    def test_symmetric_boundaries_give_reversed_pmfs(self):
        # antipodal symmetry: p1 is p0 reversed when boundaries are symmetric
        q = Quantizer(2, (-1.1682505165240537, 0.0, 1.1682505165240537))
        pair = conditional_pmf(q, ObservationModel(1.0))
        np.testing.assert_allclose(pair.p1, pair.p0[::-1], atol=1e-15)

    def test_normalization_over_random_quantizers(self):
        rng = np.random.default_rng(123)
        model = model_from_snr_db(0.7)
        for _ in range(1000):
            pair = conditional_pmf(random_quantizer(rng), model)
            assert abs(float(pair.p0.sum()) - 1.0) <= 1e-12
            assert abs(float(pair.p1.sum()) - 1.0) <= 1e-12

    def test_coincident_boundaries_yield_empty_cell(self):
        pair = conditional_pmf(Quantizer(2, (0.0, 0.0, 1.0)), ObservationModel(1.0))
        assert pair.p0[1] == 0.0
        assert pair.p1[1] == 0.0
