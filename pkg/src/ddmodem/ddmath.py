"""Closed-form delay-Doppler kernels.

Everything the DD-domain model predicts analytically lives here: the periodic
leakage kernel ``upsilon``, the per-row phase ``psi``, the effective-channel
grids used by the equalizer, the synthetic pilot response, the exact
DD input-output map and the fully vectorized channel matrix.  These are the
oracle backbone for the transform/channel pipeline.

The unitary transform convention of :mod:`ddmodem.grid` makes the measured
pipeline output equal to the unnormalized kernel sums divided by a single
real constant (``calibration_constant`` = N); all grids returned here already
include that division so they are directly comparable with measured grids.
"""

import numpy as np

from .channel import ChannelRealization, build_hn
from .grid import FrameParams

__all__ = [
    "SizeGuardError",
    "calibration_constant",
    "upsilon",
    "psi",
    "build_lambda",
    "pilot_response_synthetic",
    "dd_output_exact",
    "build_phi",
]

# Largest M*N for which dense MN x MN channel matrices may be materialized.
PHI_SIZE_GUARD = 4096


class SizeGuardError(RuntimeError):
    """Raised when a dense-matrix operation would exceed its size guard."""


def calibration_constant(p: FrameParams) -> float:
    """Gain between the unitary pipeline and the unnormalized kernel sums.

    With unitary DFTs in both directions the measured DD output is exactly
    1/N times the unnormalized double-sum model; a test pins this value.
    """
    return float(p.num_doppler_bins)


def upsilon(n: int, x) -> np.ndarray | complex:
    """Periodic Doppler leakage kernel of one path.

    upsilon_n(x) = sum_{i=1}^{n} exp(j2pi(i-1)x/n)
                 = sin(pi x)/sin(pi x/n) * exp(j pi x (n-1)/n),

    evaluated through its closed form with the removable singularities at
    x = 0 (mod n) handled explicitly.  Accepts scalars or arrays.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    # The kernel is exactly periodic in n; reduce to (-n/2, n/2] so the only
    # singularity left is at 0.
    r = np.mod(x, n)
    r = np.where(r > n / 2, r - n, r)
    phase = np.exp(1j * np.pi * r * (n - 1) / n)
    den = np.sin(np.pi * r / n)
    near = np.abs(den) < 1e-9
    safe_den = np.where(near, 1.0, den)
    out = np.where(near, n * phase, np.sin(np.pi * r) / safe_den * phase)
    return complex(out) if scalar else out


def psi(k_plus_kappa: float, l_tau: int, l: int, p: FrameParams) -> complex:
    """Unit-modulus CP phase term of one path at receive delay row ``l``."""
    frame = p.samples_per_frame
    return complex(
        np.exp(2j * np.pi * k_plus_kappa * (p.cp_len - l_tau + l) / frame)
    )


def _path_view(path):
    """(doppler_bins, delay_bins, gain, phase) from an EstimatedPath-like object."""
    return (
        float(path.doppler_bins),
        int(path.delay_bins),
        float(path.gain),
        float(path.phase),
    )


def build_lambda(paths, l: int, p: FrameParams) -> np.ndarray:
    """Effective-channel grid Lambda'_l for receive delay row ``l``.

    Every entry uses the phase term frozen at row ``l``; an empty path list
    yields the zero grid.  Paths must have integer DD delay indices.
    """
    m, n = p.num_delay_bins, p.num_doppler_bins
    lam = np.zeros((m, n), dtype=complex)
    k = np.arange(n)
    for path in paths:
        kpk, l_tau, gain, phase = _path_view(path)
        if not 0 <= l_tau < m:
            raise ValueError(f"path delay index {l_tau} outside [0, {m})")
        amp = gain * np.exp(1j * phase) * psi(kpk, l_tau, l, p)
        lam[l_tau] += amp * upsilon(n, np.mod(kpk - k, n))
    return lam / calibration_constant(p)


def pilot_response_synthetic(paths, pilot_pos, p: FrameParams) -> np.ndarray:
    """Noiseless DD grid measured for a unit pilot impulse at ``pilot_pos``.

    Matches (to numerical precision) what the receiver measures when the
    impulse is modulated, passed through the paths and demodulated.
    """
    m, n = p.num_delay_bins, p.num_doppler_bins
    i, j = pilot_pos
    if not (0 <= i < m and 0 <= j < n):
        raise ValueError(f"pilot position {pilot_pos} outside the grid")
    resp = np.zeros((m, n), dtype=complex)
    k = np.arange(n)
    for path in paths:
        kpk, l_tau, gain, phase = _path_view(path)
        row = (i + l_tau) % m
        amp = gain * np.exp(1j * phase) * psi(kpk, l_tau, row, p)
        resp[row] += amp * upsilon(n, np.mod(kpk + j - k, n))
    return resp / calibration_constant(p)


def dd_output_exact(x_dd, paths, p: FrameParams) -> np.ndarray:
    """Exact DD input-output map with the per-row phase term.

    Computes, row by row, the circular-convolution sum of the transmit grid
    with the per-path kernels, using the exact phase at each receive row.
    Integer-delay paths only; this is the closed-form twin of the
    modulate -> apply_channel -> demodulate pipeline.
    """
    x_dd = np.asarray(x_dd, dtype=complex)
    m, n = p.num_delay_bins, p.num_doppler_bins
    if x_dd.shape != (m, n):
        raise ValueError("grid shape does not match frame")
    k = np.arange(n)
    y = np.zeros((m, n), dtype=complex)
    fx = np.fft.fft(x_dd, axis=1)
    for path in paths:
        kpk, l_tau, gain, phase = _path_view(path)
        ups = upsilon(n, np.mod(kpk - k, n))
        f_ups = np.fft.fft(ups)
        base = gain * np.exp(1j * phase)
        for l in range(m):
            lp = (l - l_tau) % m
            conv = np.fft.ifft(fx[lp] * f_ups)
            y[l] += base * psi(kpk, l_tau, l, p) * conv
    return y / calibration_constant(p)


def build_phi(ch: ChannelRealization, p: FrameParams) -> np.ndarray:
    """Dense MN x MN DD-domain channel matrix.

    Conjugates the block-diagonal per-symbol channel by the Kronecker DFT
    factors of the unitary N-direction transform; guarded against accidental
    cubic blowups for MN > 4096.
    """
    m, n = p.num_delay_bins, p.num_doppler_bins
    mn = m * n
    if mn > PHI_SIZE_GUARD:
        raise SizeGuardError(
            f"M*N = {mn} exceeds the dense channel matrix guard ({PHI_SIZE_GUARD})"
        )
    h_stack = np.stack([build_hn(ch, i) for i in range(1, n + 1)])
    f_n = np.fft.fft(np.eye(n)) / np.sqrt(n)
    coef = np.einsum("in,jn->ijn", f_n, f_n.conj())
    phi = np.einsum("ijn,nab->iajb", coef, h_stack)
    return phi.reshape(mn, mn)
