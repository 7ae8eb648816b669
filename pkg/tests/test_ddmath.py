"""Closed-form kernel oracles: direct double sums, pipeline, and matrix twins."""

import numpy as np
import pytest

from ddmodem import ddmath
from ddmodem.channel import ChannelRealization, PathSpec, apply_channel
from ddmodem.grid import FrameParams, demodulate, modulate, vectorize


P = FrameParams(16, 8, 15e3, 4, 0.8e9)


class Path:
    """Minimal EstimatedPath-shaped stand-in for oracle tests."""

    def __init__(self, doppler_bins, delay_bins, gain, phase):
        self.doppler_bins = doppler_bins
        self.delay_bins = delay_bins
        self.gain = gain
        self.phase = phase


def _upsilon_direct(n, x):
    i = np.arange(n)
    return np.sum(np.exp(2j * np.pi * np.outer(np.atleast_1d(x), i) / n), axis=1)


def _paths_to_channel(paths, p):
    specs = tuple(
        PathSpec(
            gain=q.gain,
            delay_s=q.delay_bins / p.sample_rate,
            doppler_hz=q.doppler_bins * p.doppler_bin_hz,
            init_phase=q.phase,
        )
        for q in paths
    )
    return ChannelRealization(paths=specs, params=p)


def _pipeline(x, paths, p):
    return demodulate(apply_channel(modulate(x, p), _paths_to_channel(paths, p)), p)


def test_upsilon_matches_direct_sum():
    rng = np.random.default_rng(0)
    n = 14
    xs = rng.uniform(-2 * n, 2 * n, size=500)
    assert np.max(np.abs(ddmath.upsilon(n, xs) - _upsilon_direct(n, xs))) < 1e-9


def test_upsilon_integer_arguments_are_discrete_deltas():
    n = 8
    vals = ddmath.upsilon(n, np.arange(n, dtype=float))
    want = np.zeros(n, complex)
    want[0] = n
    assert np.max(np.abs(vals - want)) < 1e-9


def test_upsilon_periodicity_and_scalar():
    n = 7
    x = 2.34
    assert ddmath.upsilon(n, x) == pytest.approx(ddmath.upsilon(n, x + 3 * n))
    assert isinstance(ddmath.upsilon(n, x), complex)


def test_upsilon_autocorrelation_identity():
    n = 14
    rng = np.random.default_rng(1)
    for kappa in rng.uniform(0, 1, size=25):
        s = np.sum(np.abs(ddmath.upsilon(n, np.arange(n) + kappa)) ** 2)
        assert s / n**2 == pytest.approx(1.0, abs=1e-10)


def test_psi_unit_modulus_and_value():
    val = ddmath.psi(1.3, 2, 5, P)
    assert abs(abs(val) - 1.0) < 1e-12
    frame = P.samples_per_frame
    assert val == pytest.approx(np.exp(2j * np.pi * 1.3 * (P.cp_len - 2 + 5) / frame))


def test_calibration_constant_pinned_by_pipeline():
    """A unit pilot through a one-bin-Doppler path peaks at N/c = 1."""
    p = FrameParams(8, 4, 15e3, 2, 0.8e9)
    pilot = np.zeros((8, 4), complex)
    pilot[0, 0] = 1.0
    path = Path(doppler_bins=1.0, delay_bins=2, gain=1.0, phase=0.0)
    got = _pipeline(pilot, [path], p)
    peak = got[2, 1] / ddmath.psi(1.0, 2, 2, p)
    assert peak == pytest.approx(
        p.num_doppler_bins / ddmath.calibration_constant(p), abs=1e-9
    )
    others = got.copy()
    others[2, 1] = 0
    assert np.max(np.abs(others)) < 1e-9


def test_pilot_response_matches_pipeline_fractional_doppler():
    p = FrameParams(8, 4, 15e3, 2, 0.8e9)
    pilot = np.zeros((8, 4), complex)
    pilot[0, 0] = 1.0
    paths = [Path(0.3, 1, 0.9, 0.4), Path(-1.45, 2, 0.5, 2.0)]
    want = _pipeline(pilot, paths, p)
    got = ddmath.pilot_response_synthetic(paths, (0, 0), p)
    assert np.max(np.abs(got - want)) < 1e-9


def test_pilot_response_offset_pilot_position():
    p = FrameParams(8, 4, 15e3, 2, 0.8e9)
    pilot = np.zeros((8, 4), complex)
    pilot[3, 1] = 1.0
    paths = [Path(1.2, 1, 0.7, 0.9)]
    want = _pipeline(pilot, paths, p)
    got = ddmath.pilot_response_synthetic(paths, (3, 1), p)
    assert np.max(np.abs(got - want)) < 1e-9
    with pytest.raises(ValueError):
        ddmath.pilot_response_synthetic(paths, (8, 0), p)


def test_dd_output_exact_matches_pipeline():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(16, 8)) + 1j * rng.normal(size=(16, 8))
    paths = [Path(0.55, 0, 0.8, 0.1), Path(-2.3, 3, 0.4, 1.7), Path(1.0, 1, 0.3, 0.0)]
    want = _pipeline(x, paths, P)
    got = ddmath.dd_output_exact(x, paths, P)
    assert np.max(np.abs(got - want)) < 1e-9


def test_build_lambda_row_slice_equals_exact_output():
    """Row l of X conv Lambda'_l equals row l of the exact output (frozen psi
    is exact at its own receive row)."""
    rng = np.random.default_rng(3)
    x = rng.normal(size=(16, 8)) + 1j * rng.normal(size=(16, 8))
    paths = [Path(0.75, 2, 0.9, 0.2), Path(-1.6, 0, 0.5, 1.0)]
    exact = ddmath.dd_output_exact(x, paths, P)
    fx = np.fft.fft2(x)
    for l in range(P.num_delay_bins):
        lam = ddmath.build_lambda(paths, l, P)
        conv = np.fft.ifft2(fx * np.fft.fft2(lam))
        assert np.max(np.abs(conv[l] - exact[l])) < 1e-12


def test_build_lambda_empty_and_bad_delay():
    assert np.all(ddmath.build_lambda([], 0, P) == 0)
    with pytest.raises(ValueError):
        ddmath.build_lambda([Path(0.0, 16, 1.0, 0.0)], 0, P)


def test_build_phi_matches_pipeline():
    p = FrameParams(8, 4, 15e3, 2, 0.8e9)
    rng = np.random.default_rng(4)
    paths = [Path(0.4, 1, 0.8, 0.3), Path(-0.9, 2, 0.6, 2.2)]
    phi = ddmath.build_phi(_paths_to_channel(paths, p), p)
    x = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
    want = vectorize(_pipeline(x, paths, p))
    assert np.max(np.abs(phi @ vectorize(x) - want)) < 1e-9


def test_build_phi_size_guard():
    p = FrameParams(512, 14, 15e3, 6, 0.8e9)
    ch = _paths_to_channel([Path(0.0, 0, 1.0, 0.0)], p)
    with pytest.raises(ddmath.SizeGuardError):
        ddmath.build_phi(ch, p)
