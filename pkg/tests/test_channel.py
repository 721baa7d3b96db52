import math

import numpy as np
import pytest
from scipy import stats

from hsrsim.channel import (DEFAULT_NOISE_PSD_W_PER_HZ, DEFAULT_TX_POWER_W,
                            LinkQuality, MimoConfig, MimoMode, OfdmConfig,
                            decompose, doppler_shift, effective_sinr,
                            ici_power, sample_eigenchannel_gains)

from .oracles.ici import ici_sum_reference

OFDM = OfdmConfig()  # 20 MHz, 1024 subcarriers, 51.2 us symbol


# ---------------------------------------------------------------- doppler

def test_doppler_zero_speed():
    assert doppler_shift(0.0, 2.3e9, 2.998e8) == 0.0


def test_doppler_300kmh_value():
    # v/c * f_c with c = 3.0e8: 638.9 Hz scale
    fd = doppler_shift(300.0 / 3.6, 2.3e9, 3.0e8)
    assert fd == pytest.approx(638.8888888888888, rel=1e-9)


def test_doppler_wave_speed_identity():
    assert doppler_shift(2.998e8, 2.3e9, 2.998e8) == pytest.approx(2.3e9)


def test_doppler_linearity():
    base = doppler_shift(50.0, 2.3e9)
    assert doppler_shift(100.0, 2.3e9) == pytest.approx(2 * base)
    assert doppler_shift(50.0, 4.6e9) == pytest.approx(2 * base)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -1.0])
def test_doppler_rejects_bad_speed(bad):
    with pytest.raises(ValueError):
        doppler_shift(bad, 2.3e9)


def test_doppler_rejects_nonpositive_carrier():
    with pytest.raises(ValueError):
        doppler_shift(10.0, 0.0)


# ---------------------------------------------------------------- ICI

def test_ici_zero_doppler():
    assert ici_power(7, OFDM, 0.0) == 0.0


def test_ici_two_subcarrier_single_term():
    # N = 2: the sum collapses to the single 1/1^2 term, so the result is
    # (T_s f_d)^2 / 2 exactly.
    ofdm = OfdmConfig(bandwidth_hz=1.0, n_subcarriers=2)  # T_s = 2 s
    assert ici_power(1, ofdm, 0.25) == pytest.approx(0.125, rel=1e-12)
    assert ici_power(2, ofdm, 0.25) == pytest.approx(0.125, rel=1e-12)


def test_ici_band_centre_against_literal_loop():
    fd = 638.9
    got = ici_power(512, OFDM, fd)
    want = ici_sum_reference(512, 1024, 51.2e-6, fd)
    assert got == pytest.approx(want, rel=1e-9)
    assert want == pytest.approx(1.7580783412575512e-3, rel=1e-9)


def test_ici_profile_small_band_matches_loop():
    ofdm = OfdmConfig(bandwidth_hz=1e6, n_subcarriers=12)
    want = ici_sum_reference
    for n in range(1, 13):
        assert ici_power(n, ofdm, 333.0) == pytest.approx(
            want(n, 12, ofdm.symbol_s, 333.0), rel=1e-12)


def test_ici_symmetry_and_centre_maximum():
    vals = [ici_power(n, OFDM, 500.0) for n in (1, 17, 400, 512, 513)]
    for n in (1, 17, 400, 512):
        assert ici_power(n, OFDM, 500.0) == pytest.approx(
            ici_power(1024 + 1 - n, OFDM, 500.0), rel=1e-12)
    assert max(vals) == pytest.approx(
        max(ici_power(n, OFDM, 500.0) for n in range(1, 1025)), rel=1e-12)


def test_ici_quadratic_in_doppler():
    base = ici_power(100, OFDM, 321.5)
    assert ici_power(100, OFDM, 643.0) == 4.0 * base


@pytest.mark.parametrize("n", [0, 1025, -3])
def test_ici_index_out_of_range(n):
    with pytest.raises(IndexError):
        ici_power(n, OFDM, 100.0)


def test_ici_non_integer_index():
    with pytest.raises(IndexError):
        ici_power(3.5, OFDM, 100.0)


# ---------------------------------------------------------------- SVD

def test_decompose_identity():
    real = decompose(np.eye(2))
    assert real.rank == 2
    assert np.allclose(real.singular_values, [1.0, 1.0])


def test_decompose_zero_matrix():
    real = decompose(np.zeros((3, 2)))
    assert real.rank == 0
    assert real.singular_values.size == 0


def test_decompose_reconstruction_oracle():
    rng = np.random.default_rng(7)
    h = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
    real = decompose(h)
    assert real.rank == 2
    rebuilt = (real.u * real.singular_values) @ real.vh
    err = np.linalg.norm(rebuilt - h) / np.linalg.norm(h)
    assert err < 1e-9
    assert np.allclose(real.reconstruct(), rebuilt)
    # ordering invariant
    assert np.all(np.diff(real.singular_values) <= 0)


def test_decompose_parallel_scalar_channels():
    # the decomposition turns the matrix channel into independent scalar
    # gains: U^H H V = diag(sigma)
    rng = np.random.default_rng(11)
    h = rng.standard_normal((3, 3))
    real = decompose(h)
    d = real.u.conj().T @ h @ real.vh.conj().T
    assert np.allclose(d, np.diag(real.singular_values), atol=1e-10)


def test_decompose_rejects_bad_input():
    with pytest.raises(ValueError):
        decompose(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        decompose(np.array([[np.inf, 1.0]]))


# ---------------------------------------------------------------- fading

def test_gain_samples_mean_power():
    amps = sample_eigenchannel_gains(1_000_000, 1.0, 1.0, rng=42)
    assert np.mean(amps ** 2) == pytest.approx(1.0, abs=0.01)


def test_gain_samples_large_shape_concentrates():
    # variance of the squared amplitude is mean^2 / m
    amps = sample_eigenchannel_gains(200_000, 50.0, 1.0, rng=43)
    assert np.var(amps ** 2) < 0.05
    assert np.var(amps ** 2) == pytest.approx(1.0 / 50.0, rel=0.05)


def test_gain_samples_unit_shape_is_rayleigh():
    # m = 1: squared amplitudes are exponential
    amps = sample_eigenchannel_gains(10_000, 1.0, 1.0, rng=44)
    _stat, p = stats.kstest((amps ** 2), "expon")
    assert p > 1e-3


def test_gain_samples_deterministic_and_validated():
    a = sample_eigenchannel_gains(16, 2.0, 3.0, rng=5)
    b = sample_eigenchannel_gains(16, 2.0, 3.0, rng=5)
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        sample_eigenchannel_gains(4, 0.3)
    with pytest.raises(ValueError):
        sample_eigenchannel_gains(-1, 1.0)


# ---------------------------------------------------------------- SINR

def test_effective_sinr_no_doppler_is_plain_snr():
    got = effective_sinr(1.0, 10.0, OFDM, 512, 0.0)
    floor = DEFAULT_NOISE_PSD_W_PER_HZ * OFDM.noise_bandwidth_hz
    assert got == pytest.approx(10.0 / floor, rel=1e-12)


def test_effective_sinr_interference_limited_asymptote():
    fd = doppler_shift(300 / 3.6, 2.3e9)
    ici = ici_power(512, OFDM, fd)
    got = effective_sinr(1.0, 1e12, OFDM, 512, fd)
    assert got == pytest.approx(1.0 / ici, rel=1e-6)


def test_effective_sinr_decreases_with_speed():
    # full transmit power split across 2 streams, unit gain
    p = DEFAULT_TX_POWER_W / 2
    fd300 = doppler_shift(300 / 3.6, 2.3e9)
    fd400 = doppler_shift(400 / 3.6, 2.3e9)
    assert effective_sinr(1.0, p, OFDM, 512, fd300) > \
        effective_sinr(1.0, p, OFDM, 512, fd400)


def test_effective_sinr_accepts_realization():
    real = decompose(np.diag([3.0, 1.0]))
    direct = effective_sinr(9.0, 5.0, OFDM, 512, 100.0)
    assert effective_sinr(real, 5.0, OFDM, 512, 100.0) == pytest.approx(direct)
    assert effective_sinr(decompose(np.zeros((2, 2))), 5.0, OFDM, 512, 0.0) == 0.0


def test_effective_sinr_validation():
    with pytest.raises(ValueError):
        effective_sinr(-1.0, 5.0, OFDM, 512, 0.0)
    with pytest.raises(ValueError):
        effective_sinr(1.0, 0.0, OFDM, 512, 0.0)


# ---------------------------------------------------------------- link stats

def _engine(label_cfg, **kw):
    return LinkQuality(label_cfg, OFDM, draws=kw.pop("draws", 800), **kw)


def test_link_quality_monotone_in_speed():
    eng = _engine(MimoConfig(2, 4, MimoMode.MULTIPLEX))
    speeds = [50 / 3.6, 150 / 3.6, 300 / 3.6, 400 / 3.6]
    means = [eng.mean_sinr(v) for v in speeds]
    assert all(a > b for a, b in zip(means, means[1:]))


def test_link_quality_deterministic():
    a = _engine(MimoConfig(2, 2, MimoMode.DIVERSITY)).mean_sinr(80.0)
    b = _engine(MimoConfig(2, 2, MimoMode.DIVERSITY)).mean_sinr(80.0)
    assert a == b


def test_link_quality_interferer_lowers_sinr_without_reseeding():
    quiet = _engine(MimoConfig(1, 1))
    noisy = _engine(MimoConfig(1, 1), interferer_power_w=DEFAULT_TX_POWER_W)
    # wanted-link population identical: the interferer draws come after
    assert np.array_equal(quiet._gains, noisy._gains)
    v = 300 / 3.6
    assert noisy.mean_sinr(v) < quiet.mean_sinr(v)
    with pytest.raises(ValueError):
        _engine(MimoConfig(1, 1), interferer_power_w=-1.0)


def test_link_quality_sem_scale():
    eng = _engine(MimoConfig(1, 2), draws=400)
    mean, sem = eng.mean_sinr_with_sem(80.0)
    assert mean == pytest.approx(eng.mean_sinr(80.0))
    assert 0 < sem < mean


def test_mimo_config_defaults():
    mux = MimoConfig(2, 4)
    assert mux.streams == 2 and mux.diversity_order == 8
    div = MimoConfig(2, 2, MimoMode.DIVERSITY)
    assert div.streams == 1
    with pytest.raises(ValueError):
        MimoConfig(0, 2)
    with pytest.raises(ValueError):
        MimoConfig(2, 2, streams=3)


def test_ofdm_defaults():
    assert OFDM.symbol_s == pytest.approx(51.2e-6)
    assert OFDM.subcarrier_spacing_hz == pytest.approx(20e6 / 1024)
    with pytest.raises(ValueError):
        OfdmConfig(bandwidth_hz=-5.0)
