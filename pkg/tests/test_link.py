import itertools

import numpy as np
import pytest

from vlcnoma import (MetricCounter, NoiseModel, OmaConfig, SpectralEfficiencies, SymbolTuple,
                     awgn_sample, decode_center_sic, decode_u2_jml, decode_u2_sic,
                     design_constellation, from_raw_levels, oma_pam_points, oma_round,
                     philox_stream, superpose_transmit)
from vlcnoma.errors import ParameterError


@pytest.fixture(scope="module")
def small_set(reference_gains):
    return design_constellation(SpectralEfficiencies(1, 1, 1), reference_gains, 1.0)


@pytest.fixture(scope="module")
def reference_set(reference_bpcu, reference_gains):
    return design_constellation(reference_bpcu, reference_gains, 1.0)


class TestSuperposeTransmit:
    def test_smallest_case_first_tuple(self, small_set, reference_gains):
        y = superpose_transmit(SymbolTuple(1, 1, 1), small_set, reference_gains)
        assert float(y.y1) == pytest.approx((1 / 7 + 3 / 7) * reference_gains.h11, rel=1e-12)

    def test_zero_gains_give_zero_signals(self, small_set):
        from vlcnoma import ChannelGains
        zero = ChannelGains(0.0, 0.0, 0.0, 0.0)
        y = superpose_transmit(SymbolTuple(2, 2, 1), small_set, zero)
        assert float(y.y1) == 0.0 and float(y.y2) == 0.0 and float(y.y3) == 0.0

    def test_far_cell_signal_ignores_near_cell_symbol(self, reference_set, reference_gains):
        fixed = superpose_transmit(SymbolTuple(1, 2, 3), reference_set, reference_gains)
        moved = superpose_transmit(SymbolTuple(8, 2, 3), reference_set, reference_gains)
        assert float(fixed.y3) == float(moved.y3)
        assert float(fixed.y1) != float(moved.y1)

    def test_out_of_range_index_rejected(self, small_set, reference_gains):
        with pytest.raises(ParameterError):
            superpose_transmit(SymbolTuple(3, 1, 1), small_set, reference_gains)


class TestAwgnSample:
    def test_zero_sigma_is_identity(self, small_set, reference_gains):
        y = superpose_transmit(SymbolTuple(1, 2, 1), small_set, reference_gains)
        noisy = awgn_sample(y, NoiseModel.equal(0.0), philox_stream(0, 0, 0))
        assert float(noisy.y1) == float(y.y1)
        assert float(noisy.y2) == float(y.y2)
        assert float(noisy.y3) == float(y.y3)

    def test_same_stream_address_replays_identically(self, small_set, reference_gains):
        y = superpose_transmit(SymbolTuple(1, 2, 1), small_set, reference_gains)
        noise = NoiseModel.equal(2.5)
        a = awgn_sample(y, noise, philox_stream(42, 3, 7))
        b = awgn_sample(y, noise, philox_stream(42, 3, 7))
        assert float(a.y1) == float(b.y1) and float(a.y2) == float(b.y2)
        c = awgn_sample(y, noise, philox_stream(42, 3, 8))
        assert float(a.y1) != float(c.y1)

    def test_empirical_variance_matches_sigma(self):
        sigma = 0.375
        n = 1_000_000
        from vlcnoma import ReceivedSignals
        zeros = ReceivedSignals(np.zeros(n), np.zeros(n), np.zeros(n))
        noisy = awgn_sample(zeros, NoiseModel.equal(sigma), philox_stream(11, 0, 0))
        assert np.var(np.asarray(noisy.y2)) == pytest.approx(sigma**2, rel=0.01)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ParameterError):
            NoiseModel.equal(-1.0)


class TestSicDecoders:
    def test_noiseless_round_trip_reference_set(self, reference_set, reference_gains):
        m1, m2, m3 = reference_set.bpcu.sizes
        grid = np.array(list(itertools.product(
            range(1, m1 + 1), range(1, m2 + 1), range(1, m3 + 1)))).T
        y = superpose_transmit((grid[0], grid[1], grid[2]), reference_set, reference_gains)
        u1_hat, stage1 = decode_center_sic(y.y1, reference_gains.h11, reference_set, 1)
        u3_hat, stage3 = decode_center_sic(y.y3, reference_gains.h32, reference_set, 3)
        assert np.array_equal(u1_hat, grid[0])
        assert np.array_equal(u3_hat, grid[2])
        # the stage-1 estimates recover the edge symbol too
        assert np.array_equal(stage1, grid[1])
        assert np.array_equal(stage3, grid[1])

    def test_midway_tie_breaks_to_lowest_index(self):
        # raw sums make the scale exactly 1/8, so every level and the
        # midpoint are dyadic and the two distances compare exactly equal
        cset = from_raw_levels(SpectralEfficiencies(1, 1, 1),
                               [1.0, 2.0], [4.0, 9.0], [4.0, 9.0], [1.0, 2.0], 1.0)
        edge = cset.cell1_edge
        assert edge.tolist() == [0.5, 1.125]
        midpoint = float((edge[0] + edge[1]) / 2.0)
        _, stage1 = decode_center_sic(midpoint, 1.0, cset, 1)
        assert int(stage1) == 1

    def test_stage_counts(self, reference_set, reference_gains):
        counter = MetricCounter()
        decode_center_sic(np.zeros(10), reference_gains.h11, reference_set, 1, counter)
        assert counter.evaluations == 10 * (2**2 + 2**3)
        counter = MetricCounter()
        decode_center_sic(np.zeros(10), reference_gains.h32, reference_set, 3, counter)
        assert counter.evaluations == 10 * (2**2 + 2**2)

    def test_invalid_user_rejected(self, reference_set, reference_gains):
        with pytest.raises(ParameterError):
            decode_center_sic(0.0, reference_gains.h11, reference_set, 2)


class TestEdgeDecoders:
    def test_interference_as_noise_counts(self, reference_set, reference_gains):
        counter = MetricCounter()
        decode_u2_sic(np.zeros(5), reference_gains, reference_set, counter)
        assert counter.evaluations == 5 * 4

    def test_joint_ml_counts(self, reference_set, reference_gains):
        counter = MetricCounter()
        decode_u2_jml(np.zeros(5), reference_gains, reference_set, counter)
        assert counter.evaluations == 5 * 128

    def test_noiseless_joint_ml_recovers_edge_symbol(self, reference_set, reference_gains):
        m1, m2, m3 = reference_set.bpcu.sizes
        grid = np.array(list(itertools.product(
            range(1, m1 + 1), range(1, m2 + 1), range(1, m3 + 1)))).T
        y = superpose_transmit((grid[0], grid[1], grid[2]), reference_set, reference_gains)
        assert np.array_equal(decode_u2_jml(y.y2, reference_gains, reference_set), grid[1])
        assert np.array_equal(decode_u2_sic(y.y2, reference_gains, reference_set), grid[1])

    def test_gap_violating_levels_misdecode_noiselessly(self, reference_gains):
        bad = from_raw_levels(SpectralEfficiencies(1, 1, 1),
                              [1, 2], [3, 4], [3, 4], [1, 2], 1.0)
        grid = np.array(list(itertools.product((1, 2), (1, 2), (1, 2)))).T
        y = superpose_transmit((grid[0], grid[1], grid[2]), bad, reference_gains)
        decoded = decode_u2_sic(y.y2, reference_gains, bad)
        assert np.any(decoded != grid[1])

    def test_common_noise_joint_ml_beats_interference_as_noise(
        self, reference_set, reference_gains
    ):
        rng = philox_stream(5, 0, 0)
        n = 20_000
        m1, m2, m3 = reference_set.bpcu.sizes
        symbols = (rng.integers(1, m1 + 1, n), rng.integers(1, m2 + 1, n),
                   rng.integers(1, m3 + 1, n))
        y = awgn_sample(superpose_transmit(symbols, reference_set, reference_gains),
                        NoiseModel.equal(1e-7), rng)
        sic_errors = np.count_nonzero(
            decode_u2_sic(y.y2, reference_gains, reference_set) != symbols[1])
        jml_errors = np.count_nonzero(
            decode_u2_jml(y.y2, reference_gains, reference_set) != symbols[1])
        assert jml_errors <= sic_errors


class TestOmaPam:
    def test_four_level_unit_mean(self):
        assert oma_pam_points(4, 1.0).tolist() == pytest.approx([0.4, 0.8, 1.2, 1.6])

    def test_two_level_unit_mean(self):
        assert oma_pam_points(2, 1.0).tolist() == pytest.approx([2 / 3, 4 / 3])

    @pytest.mark.parametrize("size,avg", [(2, 1.0), (16, 0.5), (64, 3.0)])
    def test_mean_equals_average_intensity(self, size, avg):
        assert oma_pam_points(size, avg).mean() == pytest.approx(avg, rel=1e-12)

    def test_invalid_size_rejected(self):
        with pytest.raises(ParameterError):
            oma_pam_points(1, 1.0)


class TestOmaRound:
    def test_noiseless_frame_decodes_exactly(self, reference_bpcu, reference_gains):
        config = OmaConfig.from_noma(reference_bpcu, 1.0)
        assert config.sizes == (64, 16, 16)
        rng = philox_stream(0, 0, 0)
        sizes = config.sizes
        symbols = (rng.integers(1, sizes[0] + 1, 500), rng.integers(1, sizes[1] + 1, 500),
                   rng.integers(1, sizes[2] + 1, 500))
        decoded = oma_round(symbols, reference_gains, NoiseModel.equal(0.0), config,
                            philox_stream(0, 0, 1))
        for sent, got in zip(symbols, decoded):
            assert np.array_equal(sent, got)

    def test_per_frame_metric_counts(self, reference_bpcu, reference_gains):
        config = OmaConfig.from_noma(reference_bpcu, 1.0)
        counter = MetricCounter()
        oma_round((1, 1, 1), reference_gains, NoiseModel.equal(0.0), config,
                  philox_stream(0, 0, 0), counter)
        # frame total is twice the per-channel-use average of 48
        assert counter.evaluations == 64 + 16 + 16

    def test_average_transmit_power_per_slot_is_target(self, reference_bpcu):
        config = OmaConfig.from_noma(reference_bpcu, 2.5)
        for size in config.sizes:
            assert oma_pam_points(size, config.avg_intensity_w).mean() == pytest.approx(
                2.5, rel=1e-12)
