"""Ground-truth doubly-selective ray channel.

A channel realization is a list of rays, each with a linear gain, a delay in
seconds (fractional sample delays are applied with a 4-tap Lagrange/Farrow
interpolator), a signed Doppler shift in Hz and an initial phase.  The
streaming application (``apply_channel``) and the per-OFDM-symbol matrix view
(``build_hn``) describe the same operator; the matrix view exists for oracles
and the matrix-inversion baselines.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .grid import FrameParams

__all__ = [
    "SPEED_OF_LIGHT",
    "EVA_PROFILE",
    "PathSpec",
    "ChannelRealization",
    "DopplerScenario",
    "jakes_max_doppler",
    "eva_scenario",
    "scaled_eva_scenario",
    "load_scenario",
    "draw_channel",
    "apply_channel",
    "build_hn",
    "farrow_delay",
    "add_noise",
]

SPEED_OF_LIGHT = 299_792_458.0

# Extended Vehicular A power-delay profile, (delay ns, power dB) per tap.
# Values are verbatim from 3GPP TS 36.104 Annex B.2 (EVA model).
EVA_PROFILE = (
    (0.0, 0.0),
    (30.0, -1.5),
    (150.0, -1.4),
    (310.0, -3.6),
    (370.0, -0.6),
    (710.0, -9.1),
    (1090.0, -7.0),
    (1730.0, -12.0),
    (2510.0, -16.9),
)

# Number of taps of the fractional-delay interpolator (cubic Lagrange).
FARROW_TAPS = 4


@dataclass(frozen=True)
class PathSpec:
    """One propagation ray: linear amplitude, delay, Doppler, initial phase."""

    gain: float
    delay_s: float
    doppler_hz: float
    init_phase: float

    def __post_init__(self):
        if self.gain < 0:
            raise ValueError("gain must be non-negative")
        if self.delay_s < 0:
            raise ValueError("delay must be non-negative")


@dataclass(frozen=True)
class ChannelRealization:
    paths: tuple
    params: FrameParams

    def __post_init__(self):
        if not self.paths:
            raise ValueError("channel must have at least one path")
        object.__setattr__(self, "paths", tuple(self.paths))


@dataclass(frozen=True)
class DopplerScenario:
    """Maximum Doppler plus a power-delay profile of (delay ns, power dB) taps."""

    max_doppler: float
    profile: tuple

    def __post_init__(self):
        if not self.profile:
            raise ValueError("profile must be non-empty")
        object.__setattr__(self, "profile", tuple(tuple(t) for t in self.profile))


def jakes_max_doppler(speed_kmh: float, carrier_freq_hz: float) -> float:
    """Maximum Doppler shift nu_max = v * f_c / c."""
    return speed_kmh / 3.6 * carrier_freq_hz / SPEED_OF_LIGHT


def eva_scenario(max_doppler: float) -> DopplerScenario:
    return DopplerScenario(max_doppler=max_doppler, profile=EVA_PROFILE)


def scaled_eva_scenario(
    max_doppler: float, p: FrameParams, max_delay_bins: int | None = None
) -> DopplerScenario:
    """EVA power profile with its delay axis compressed onto integer sample bins.

    At narrow simulation bandwidths the nanosecond EVA delays all fall between
    samples; this rescales the delay axis so the longest tap lands on
    ``max_delay_bins`` (default ``cp_len - 1``) and snaps every tap to the
    nearest integer sample, keeping the tap powers verbatim.
    """
    span = p.cp_len - 1 if max_delay_bins is None else int(max_delay_bins)
    if not 0 <= span <= p.cp_len:
        raise ValueError("max_delay_bins must lie in [0, cp_len]")
    d_max = max(d for d, _ in EVA_PROFILE)
    taps = tuple(
        (round(d / d_max * span) / p.sample_rate * 1e9, db) for d, db in EVA_PROFILE
    )
    return DopplerScenario(max_doppler=max_doppler, profile=taps)


def load_scenario(path, carrier_freq_hz: float | None = None) -> DopplerScenario:
    """Load a scenario from a JSON file.

    The file holds ``taps`` (list of [delay_ns, power_db]) or ``profile:
    "eva"``, plus either ``max_doppler_hz`` or ``speed_kmh`` (the latter needs
    ``carrier_freq_hz``, taken from the file or from the argument).
    """
    with open(path) as fh:
        data = json.load(fh)
    if data.get("profile") == "eva":
        taps = EVA_PROFILE
    else:
        taps = tuple((float(d), float(p)) for d, p in data["taps"])
    if "max_doppler_hz" in data:
        nu_max = float(data["max_doppler_hz"])
    else:
        fc = float(data.get("carrier_freq_hz", carrier_freq_hz or 0.0))
        if fc <= 0:
            raise ValueError("speed_kmh scenarios need a carrier frequency")
        nu_max = jakes_max_doppler(float(data["speed_kmh"]), fc)
    return DopplerScenario(max_doppler=nu_max, profile=taps)


def _delay_taps(path: PathSpec, p: FrameParams) -> tuple[int, float]:
    """Split a path delay into integer samples and a fractional part."""
    tau = p.delay_samples(path.delay_s)
    l_int = int(math.floor(tau + 1e-9))
    frac = tau - l_int
    if frac < 1e-9:
        frac = 0.0
    return l_int, frac

def _check_cp_budget(path: PathSpec, p: FrameParams, tap_index=None):
    l_int, frac = _delay_taps(path, p)
    span = l_int + (FARROW_TAPS - 1 if frac else 0)
    if span > p.cp_len:
        where = "" if tap_index is None else f" (profile tap {tap_index})"
        raise ValueError(
            f"path delay of {l_int}+{frac:.3f} samples spans {span} samples "
            f"and exceeds the CP budget of {p.cp_len}{where}"
        )
    return l_int, frac


def _lagrange_weights(frac: float) -> np.ndarray:
    """Cubic Lagrange weights on causal nodes 0..3 evaluated at delay ``frac``."""
    d = float(frac)
    nodes = (0.0, 1.0, 2.0, 3.0)
    w = np.empty(4)
    for m, nm in enumerate(nodes):
        num = 1.0
        for q, nq in enumerate(nodes):
            if q != m:
                num *= (d - nq) / (nm - nq)
        w[m] = num
    return w


def farrow_delay(s, frac: float) -> np.ndarray:
    """Delay a sequence by ``frac`` in [0, 1) samples (cubic-Lagrange Farrow).

    ``frac = 0`` returns the input unchanged; the filter is causal, so no
    extra integer group delay needs compensating.
    """
    if not 0.0 <= frac < 1.0:
        raise ValueError("frac must be in [0, 1)")
    s = np.asarray(s).astype(complex, copy=False)
    if frac == 0.0:
        return s.copy()
    w = _lagrange_weights(frac)
    out = np.zeros_like(s)
    for m in range(FARROW_TAPS):
        if w[m] == 0.0:
            continue
        out[m:] += w[m] * (s[: len(s) - m] if m else s)
    return out


def _shift(x: np.ndarray, d: int) -> np.ndarray:
    """Linear right shift by d >= 0 samples with zero fill."""
    if d == 0:
        return x
    out = np.zeros_like(x)
    out[d:] = x[:-d]
    return out


def draw_channel(
    scenario: DopplerScenario, p: FrameParams, rng: np.random.Generator
) -> ChannelRealization:
    """Draw one random realization: Jakes Doppler and uniform initial phases.

    Tap powers are normalized to unit total linear power; each tap gets
    nu = nu_max * cos(theta) with theta ~ U[-pi, pi) and phase ~ U[0, 2pi).
    """
    powers = np.array([10.0 ** (db / 10.0) for _, db in scenario.profile])
    powers /= powers.sum()
    paths = []
    for i, ((delay_ns, _), pw) in enumerate(zip(scenario.profile, powers)):
        theta = rng.uniform(-np.pi, np.pi)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        path = PathSpec(
            gain=float(np.sqrt(pw)),
            delay_s=delay_ns * 1e-9,
            doppler_hz=scenario.max_doppler * float(np.cos(theta)),
            init_phase=float(phi),
        )
        _check_cp_budget(path, p, tap_index=i)
        paths.append(path)
    return ChannelRealization(paths=tuple(paths), params=p)


def apply_channel(s, ch: ChannelRealization) -> np.ndarray:
    """Pass a frame-aligned time signal through the ray channel.

    Each ray rotates the input by its Doppler at the global sample index
    (CP samples included), delays the rotated signal by its integer +
    fractional delay, and scales by gain * exp(j*phase).
    """
    p = ch.params
    s = np.asarray(s).astype(complex, copy=False)
    if s.shape != (p.samples_per_frame,):
        raise ValueError("signal is not frame-aligned to the channel params")
    t = np.arange(p.samples_per_frame)
    out = np.zeros_like(s)
    for path in ch.paths:
        l_int, frac = _check_cp_budget(path, p)
        kpk = p.doppler_bins(path.doppler_hz)
        x = s * np.exp(2j * np.pi * kpk * t / p.samples_per_frame)
        if frac == 0.0:
            delayed = _shift(x, l_int)
        else:
            w = _lagrange_weights(frac)
            delayed = np.zeros_like(x)
            for m in range(FARROW_TAPS):
                delayed += w[m] * _shift(x, l_int + m)
        out += path.gain * np.exp(1j * path.init_phase) * delayed
    return out


def build_hn(ch: ChannelRealization, n: int) -> np.ndarray:
    """Per-symbol channel matrix H_n (n is 1-based) for the CP-protected block.

    For integer delays this is the literal sum of Doppler-diagonal times
    cyclic-shift terms; fractional delays expand into the Farrow tap
    combination of neighbouring integer shifts and match ``apply_channel``
    exactly as long as every tap delay fits in the CP.
    """
    p = ch.params
    m, n_sym, ncp = p.num_delay_bins, p.num_doppler_bins, p.cp_len
    if not 1 <= n <= n_sym:
        raise ValueError(f"symbol index {n} out of range 1..{n_sym}")
    g = (m + ncp) * (n - 1) + ncp + np.arange(m)  # global post-CP sample indices
    rows = np.arange(m)
    h = np.zeros((m, m), dtype=complex)
    for path in ch.paths:
        l_int, frac = _check_cp_budget(path, p)
        kpk = p.doppler_bins(path.doppler_hz)
        amp = path.gain * np.exp(1j * path.init_phase)
        taps = [(l_int, 1.0)] if frac == 0.0 else [
            (l_int + i, w) for i, w in enumerate(_lagrange_weights(frac))
        ]
        for d, wt in taps:
            if wt == 0.0:
                continue
            diag = np.exp(2j * np.pi * kpk * (g - d) / p.samples_per_frame)
            h[rows, (rows - d) % m] += amp * wt * diag
    return h


def add_noise(s, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """Add i.i.d. circular complex Gaussian noise of the given per-sample variance."""
    if noise_var < 0:
        raise ValueError("noise variance must be non-negative")
    s = np.asarray(s).astype(complex, copy=False)
    if noise_var == 0:
        return s.copy()
    scale = np.sqrt(noise_var / 2.0)
    noise = rng.normal(scale=scale, size=s.shape) + 1j * rng.normal(
        scale=scale, size=s.shape
    )
    return s + noise
