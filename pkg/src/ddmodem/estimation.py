"""Channel estimation from a measured pilot response.

``estimate_paths`` implements the cross-correlation estimator: each delay row
of the pilot response is scanned against Doppler-shifted leakage kernels on a
1/D fractional grid, the strongest match is converted into path parameters,
its reconstruction is cancelled from the row, and the scan repeats until the
dual (relative / noise) stopping thresholds fire.

``pn_estimate`` is the conventional baseline: successive cancellation of
delayed, Doppler-rotated replicas of a known full-frame PN sequence in the
time domain, on the same Doppler resolution.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import ddmath
from .grid import FrameParams

__all__ = [
    "EstimatedPath",
    "EstimatorConfig",
    "xcorr_doppler",
    "estimate_paths",
    "pn_frame",
    "pn_estimate",
]


@dataclass(frozen=True)
class EstimatedPath:
    """One estimated ray in DD coordinates.

    ``doppler_bins`` is the (possibly fractional) Doppler index wrapped to
    (-N/2, N/2]; ``delay_bins`` is the integer delay index.
    """

    doppler_bins: float
    delay_bins: int
    gain: float
    phase: float

    def psi_hat(self, p: FrameParams) -> complex:
        """Base CP phase term of this path (receive row 0)."""
        return ddmath.psi(self.doppler_bins, self.delay_bins, 0, p)


@dataclass(frozen=True)
class EstimatorConfig:
    alpha: float = 1.0 / 50.0
    beta: float = 1.0 / 10.0
    doppler_resolution: int = 10
    max_paths_per_delay: int = 16
    doppler_search_halfwidth: float | None = None

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.doppler_resolution < 1:
            raise ValueError("doppler_resolution must be >= 1")
        if self.max_paths_per_delay < 1:
            raise ValueError("max_paths_per_delay must be >= 1")


def _wrap_signed(x: float, n: int) -> float:
    """Wrap a Doppler index to (-n/2, n/2]."""
    r = math.fmod(x, n)
    if r > n / 2:
        r -= n
    elif r <= -n / 2:
        r += n
    return r


def xcorr_doppler(row, kappa: float, n: int) -> np.ndarray:
    """Normalized cross-correlation of one pilot row with the leakage kernel.

    Returns R(k + kappa) for k = 0..n-1 where
    R(mu) = 1/n^2 * sum_{k'} row[k'] * upsilon_n((k' - mu) mod n),
    computed for all k at once via length-n FFTs.  At the true Doppler of a
    single path the magnitude equals the path gain exactly.
    """
    row = np.asarray(row, dtype=complex)
    if row.shape != (n,):
        raise ValueError(f"row length {row.shape} != {n}")
    tmpl = np.conj(ddmath.upsilon(n, np.mod(np.arange(n) - kappa, n)))
    return np.fft.ifft(np.fft.fft(row) * np.conj(np.fft.fft(tmpl))) / n**2


def _kernel_fft_bank(n: int, d: int) -> np.ndarray:
    """conj(FFT) of the correlation template for each kappa on the 1/d grid."""
    k = np.arange(n)
    bank = np.empty((d, n), dtype=complex)
    for i in range(d):
        tmpl = np.conj(ddmath.upsilon(n, np.mod(k - i / d, n)))
        bank[i] = np.conj(np.fft.fft(tmpl))
    return bank


def _pick_peak(vals: np.ndarray, kappas: np.ndarray, n: int, j: int):
    """Largest |R|; ties broken by smallest |doppler| then smallest kappa."""
    vmax = vals.max()
    best = None
    for di, ki in zip(*np.nonzero(vals == vmax)):
        mu = ki + kappas[di]
        dopp = _wrap_signed(mu - j, n)
        key = (abs(dopp), kappas[di])
        if best is None or key < best[0]:
            best = (key, di, ki, dopp)
    _, di, ki, dopp = best
    return di, ki, dopp


def estimate_paths(
    pilot_resp,
    cfg: EstimatorConfig,
    noise_var: float,
    p: FrameParams,
    pilot_pos=(0, 0),
    stats: dict | None = None,
) -> list[EstimatedPath]:
    """Successive-cancellation cross-correlation estimation over all delay rows.

    ``pilot_resp`` is the measured (or synthesized) DD response of a unit
    pilot impulse at ``pilot_pos``.  ``stats``, when given, accumulates
    ``xcorr_evals`` (number of kappa-scan correlations) and
    ``truncated_rows``.
    """
    if noise_var < 0:
        raise ValueError("noise variance must be non-negative")
    m, n = p.num_delay_bins, p.num_doppler_bins
    resp = np.asarray(pilot_resp, dtype=complex)
    if resp.shape != (m, n):
        raise ValueError("pilot response shape does not match frame")
    i, j = pilot_pos
    d = cfg.doppler_resolution
    kappas = np.arange(d) / d
    bank = _kernel_fft_bank(n, d)
    k = np.arange(n)

    mask = None
    if cfg.doppler_search_halfwidth is not None:
        dopp = np.array(
            [[_wrap_signed(ki + kappas[di] - j, n) for ki in k] for di in range(d)]
        )
        mask = np.abs(dopp) <= cfg.doppler_search_halfwidth

    # Undo the pipeline calibration so |R| reads directly as a path gain.
    cal = ddmath.calibration_constant(p)
    noise_floor = cfg.beta * math.sqrt(noise_var)
    # Numerical floor so fp residue on empty rows is never mistaken for a
    # path when the noise threshold is zero.
    fp_floor = 1e-10 * float(np.max(np.abs(resp))) * cal
    paths: list[EstimatedPath] = []
    n_evals = 0
    truncated = 0

    for row_idx in range(m):
        row = resp[row_idx] * cal
        thr = max(cfg.alpha * abs(row.sum()), noise_floor, fp_floor)
        prev_gain = math.inf
        accepted = 0
        while True:
            r_all = np.fft.ifft(np.fft.fft(row)[None, :] * bank, axis=1) / n**2
            n_evals += d
            vals = np.abs(r_all)
            if mask is not None:
                vals = np.where(mask, vals, 0.0)
            di, ki, dopp = _pick_peak(vals, kappas, n, j)
            peak = r_all[di, ki]
            gain = abs(peak)
            if gain > prev_gain:
                break
            if gain <= thr:
                break
            if accepted >= cfg.max_paths_per_delay:
                truncated += 1
                break
            mu = ki + kappas[di]
            delay = (row_idx - i) % m
            psi_row = ddmath.psi(dopp, delay, row_idx, p)
            phase = float(np.angle(peak * np.conj(psi_row)))
            paths.append(
                EstimatedPath(
                    doppler_bins=dopp, delay_bins=delay, gain=gain, phase=phase
                )
            )
            # Cancel the matched component; this is an orthogonal projection
            # removal, so the row residual never grows.
            row = row - peak * ddmath.upsilon(n, np.mod(mu - k, n))
            prev_gain = gain
            accepted += 1

    if stats is not None:
        stats["xcorr_evals"] = stats.get("xcorr_evals", 0) + n_evals
        stats["truncated_rows"] = stats.get("truncated_rows", 0) + truncated
    return paths


def pn_frame(p: FrameParams, rng: np.random.Generator) -> np.ndarray:
    """Unit-power QPSK pseudo-noise sequence spanning one full frame."""
    bits = rng.integers(0, 2, size=(p.samples_per_frame, 2))
    return ((2 * bits[:, 0] - 1) + 1j * (2 * bits[:, 1] - 1)) / np.sqrt(2.0)


def pn_estimate(
    rx,
    pn,
    cfg: EstimatorConfig,
    max_doppler: float,
    p: FrameParams,
    noise_var: float,
) -> list[EstimatedPath]:
    """PN-sequence baseline: time-domain successive matched-filter cancellation.

    Hypotheses cover every integer delay below the CP length and a Doppler
    grid over [-nu_max, nu_max] at the same 1/D bin resolution as the
    proposed method.  Stops on the noise threshold beta*sigma, a relative
    floor of alpha times the first peak, a non-increasing-gain guard, or the
    path-count cap.
    """
    rx = np.asarray(rx, dtype=complex)
    pn = np.asarray(pn, dtype=complex)
    if rx.shape != pn.shape or rx.shape != (p.samples_per_frame,):
        raise ValueError("rx and pn must both be full frames")
    if noise_var < 0:
        raise ValueError("noise variance must be non-negative")

    frame = p.samples_per_frame
    t = np.arange(frame)
    d_res = cfg.doppler_resolution
    numax_bins = max_doppler / p.doppler_bin_hz
    n_steps = int(math.ceil(numax_bins * d_res))
    dopp_grid = np.arange(-n_steps, n_steps + 1) / d_res

    delays = range(min(p.cp_len, p.num_delay_bins) or 1)
    hyps = []
    templates = []
    for dly in delays:
        shifted = np.zeros(frame, dtype=complex)
        shifted[dly:] = pn[: frame - dly]
        for nu in dopp_grid:
            rot = np.exp(2j * np.pi * nu * (t - dly) / frame)
            templates.append(rot * shifted)
            hyps.append((dly, float(nu)))
    tmat = np.array(templates)
    norms = np.sum(np.abs(tmat) ** 2, axis=1)

    res = rx.copy()
    noise_floor = cfg.beta * math.sqrt(noise_var)
    rel_floor = None
    prev_gain = math.inf
    paths: list[EstimatedPath] = []
    while len(paths) < cfg.max_paths_per_delay:
        corr = tmat.conj() @ res / norms
        idx = int(np.argmax(np.abs(corr)))
        gain = float(np.abs(corr[idx]))
        if rel_floor is None:
            rel_floor = cfg.alpha * gain
        if gain > prev_gain:
            break
        if gain <= max(noise_floor, rel_floor):
            break
        dly, nu = hyps[idx]
        phase = float(np.angle(corr[idx]))
        paths.append(
            EstimatedPath(
                doppler_bins=_wrap_signed(nu, p.num_doppler_bins),
                delay_bins=dly,
                gain=gain,
                phase=phase,
            )
        )
        res = res - corr[idx] * tmat[idx]
        prev_gain = gain
    return paths
