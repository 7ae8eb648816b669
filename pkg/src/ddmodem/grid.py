"""Frame numerology and lossless transforms between the three signal domains.

The delay-Doppler (DD) grid, the frequency-time (FT) grid and the serial
time-domain frame are all plain complex ndarrays; ``FrameParams`` carries the
numerology that ties them together.  Both FFT directions use unitary scaling,
so every transform here is energy preserving and ``demodulate`` is the exact
inverse of ``modulate``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FrameParams",
    "isfft",
    "sfft",
    "modulate",
    "demodulate",
    "vectorize",
    "devectorize",
]


@dataclass(frozen=True)
class FrameParams:
    """Static numerology of one OTFS frame.

    Attributes:
        num_delay_bins: M, subcarriers per OFDM symbol / delay bins.
        num_doppler_bins: N, OFDM symbols per frame / Doppler bins.
        subcarrier_spacing: subcarrier spacing in Hz.
        cp_len: cyclic prefix length in samples.
        carrier_freq: carrier frequency in Hz.
    """

    num_delay_bins: int
    num_doppler_bins: int
    subcarrier_spacing: float
    cp_len: int
    carrier_freq: float

    def __post_init__(self):
        if self.num_delay_bins < 2:
            raise ValueError("num_delay_bins must be >= 2")
        if self.num_doppler_bins < 2:
            raise ValueError("num_doppler_bins must be >= 2")
        if not 0 <= self.cp_len < self.num_delay_bins:
            raise ValueError("cp_len must satisfy 0 <= cp_len < num_delay_bins")
        if self.subcarrier_spacing <= 0:
            raise ValueError("subcarrier_spacing must be positive")
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be positive")

    @property
    def sample_rate(self) -> float:
        """Baseband sample rate M * delta_f in Hz."""
        return self.num_delay_bins * self.subcarrier_spacing

    @property
    def samples_per_frame(self) -> int:
        """Serial frame length (M + N_CP) * N in samples."""
        return (self.num_delay_bins + self.cp_len) * self.num_doppler_bins

    @property
    def doppler_bin_hz(self) -> float:
        """Width of one Doppler bin in Hz (frame duration includes CPs)."""
        return self.sample_rate / self.samples_per_frame

    def doppler_bins(self, doppler_hz: float) -> float:
        """Convert a Doppler shift in Hz to (possibly fractional) DD bins."""
        return doppler_hz / self.doppler_bin_hz

    def delay_samples(self, delay_s: float) -> float:
        """Convert a delay in seconds to (possibly fractional) samples."""
        return delay_s * self.sample_rate


def _as_grid(x, p: FrameParams | None = None) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError(f"expected a 2D grid, got shape {x.shape}")
    if p is not None and x.shape != (p.num_delay_bins, p.num_doppler_bins):
        raise ValueError(
            f"grid shape {x.shape} does not match frame "
            f"({p.num_delay_bins}, {p.num_doppler_bins})"
        )
    return x.astype(complex, copy=False)


def isfft(x_dd) -> np.ndarray:
    """Inverse symplectic finite Fourier transform, DD grid -> FT grid.

    X_ft[m, n] = 1/sqrt(MN) * sum_{l,k} X_dd[l, k] exp(-j2pi(ml/M - nk/N)).
    """
    x_dd = _as_grid(x_dd)
    m, n = x_dd.shape
    return np.fft.fft(np.fft.ifft(x_dd, axis=1), axis=0) * np.sqrt(n / m)


def sfft(y_ft) -> np.ndarray:
    """Symplectic finite Fourier transform, FT grid -> DD grid (inverse of isfft)."""
    y_ft = _as_grid(y_ft)
    m, n = y_ft.shape
    return np.fft.fft(np.fft.ifft(y_ft, axis=0), axis=1) * np.sqrt(m / n)


def modulate(x_dd, p: FrameParams) -> np.ndarray:
    """DD grid -> serial time-domain frame with per-symbol cyclic prefixes.

    Each column of the FT grid is OFDM-modulated with a unitary M-point IDFT,
    the last ``cp_len`` samples are prepended as the CP, and the N blocks are
    concatenated in time order.
    """
    x_dd = _as_grid(x_dd, p)
    blocks = np.fft.ifft(isfft(x_dd), axis=0) * np.sqrt(p.num_delay_bins)
    if p.cp_len:
        blocks = np.concatenate([blocks[-p.cp_len :], blocks], axis=0)
    return blocks.T.reshape(-1)


def demodulate(r, p: FrameParams) -> np.ndarray:
    """Serial time-domain frame -> DD grid; exact inverse of ``modulate``."""
    r = np.asarray(r).astype(complex, copy=False)
    if r.shape != (p.samples_per_frame,):
        raise ValueError(
            f"signal length {r.shape} does not match frame length "
            f"{p.samples_per_frame}"
        )
    m, n = p.num_delay_bins, p.num_doppler_bins
    blocks = r.reshape(n, m + p.cp_len).T[p.cp_len :, :]
    y_ft = np.fft.fft(blocks, axis=0) / np.sqrt(m)
    return sfft(y_ft)


def vectorize(g) -> np.ndarray:
    """Column-major (delay index fastest) stacking of a DD grid."""
    return _as_grid(g).reshape(-1, order="F")


def devectorize(v, p: FrameParams) -> np.ndarray:
    """Inverse of ``vectorize``."""
    v = np.asarray(v).astype(complex, copy=False)
    mn = p.num_delay_bins * p.num_doppler_bins
    if v.shape != (mn,):
        raise ValueError(f"vector length {v.shape} != M*N = {mn}")
    return v.reshape(p.num_delay_bins, p.num_doppler_bins, order="F")
