"""Channel equalizers.

``wiener_equalize`` is the low-complexity per-delay-row 2D Wiener
deconvolution built on the effective-channel grids of :mod:`ddmodem.ddmath`.
``mmse_equalize`` is the full matrix-inversion linear MMSE baseline on the
vectorized DD relation, and ``ofdm_mmse_reference`` is the per-symbol OFDM
reference with ideal CSI.
"""

from dataclasses import dataclass

import numpy as np

from . import ddmath
from .grid import FrameParams

__all__ = [
    "EqualizerConfig",
    "wiener_equalize",
    "mmse_equalize",
    "ofdm_mmse_reference",
]


@dataclass(frozen=True)
class EqualizerConfig:
    """Wiener regularization floor and optional noise-variance override."""

    regularization_floor: float = 1e-6
    noise_var_override: float | None = None

    def __post_init__(self):
        if self.regularization_floor < 0:
            raise ValueError("regularization_floor must be non-negative")
        if self.noise_var_override is not None and self.noise_var_override < 0:
            raise ValueError("noise_var_override must be non-negative")


def wiener_equalize(
    y_dd,
    paths,
    noise_var: float,
    p: FrameParams,
    cfg: EqualizerConfig = EqualizerConfig(),
) -> np.ndarray:
    """Per-delay-row 2D Wiener deconvolution of the received DD grid.

    For each receive row l the effective channel grid is regularized-inverted
    in the 2D DFT domain and only row l of the result is kept.  The 2D
    spectrum of the received grid is computed once and shared by all rows.
    """
    y_dd = np.asarray(y_dd, dtype=complex)
    m, n = p.num_delay_bins, p.num_doppler_bins
    if y_dd.shape != (m, n):
        raise ValueError("received grid shape does not match frame")
    paths = list(paths)
    if not paths:
        raise ValueError("cannot equalize with an empty path list")

    sigma2 = noise_var if cfg.noise_var_override is None else cfg.noise_var_override
    reg = max(sigma2, cfg.regularization_floor)
    fy = np.fft.fft2(y_dd)

    # Per-path pieces that do not depend on the receive row; consecutive rows
    # differ only by a unit-phase multiplier per path.
    cal = ddmath.calibration_constant(p)
    k = np.arange(n)
    rows = np.empty(len(paths), dtype=int)
    kernels = np.empty((len(paths), n), dtype=complex)
    frame = p.samples_per_frame
    for q, path in enumerate(paths):
        l_tau = int(path.delay_bins)
        if not 0 <= l_tau < m:
            raise ValueError(f"path delay index {l_tau} outside [0, {m})")
        rows[q] = l_tau
        base = path.gain * np.exp(1j * path.phase) * ddmath.psi(
            path.doppler_bins, l_tau, 0, p
        )
        kernels[q] = base * ddmath.upsilon(
            n, np.mod(path.doppler_bins - k, n)
        ) / cal
    row_steps = np.array(
        [np.exp(2j * np.pi * path.doppler_bins / frame) for path in paths]
    )

    x_hat = np.empty((m, n), dtype=complex)
    phases = np.ones(len(paths), dtype=complex)
    for l in range(m):
        lam = np.zeros((m, n), dtype=complex)
        np.add.at(lam, rows, kernels * phases[:, None])
        fl = np.fft.fft2(lam)
        g = np.conj(fl) * fy / (np.abs(fl) ** 2 + reg)
        x_hat[l] = np.fft.ifft2(g)[l]
        phases *= row_steps
    return x_hat


def mmse_equalize(y, phi, noise_var: float) -> np.ndarray:
    """Linear MMSE estimate x = Phi^H (Phi Phi^H + sigma^2 I)^-1 y."""
    y = np.asarray(y, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1] or phi.shape[0] != y.shape[0]:
        raise ValueError("phi must be square and match y")
    if phi.shape[0] > ddmath.PHI_SIZE_GUARD:
        raise ddmath.SizeGuardError(
            f"system size {phi.shape[0]} exceeds the dense guard "
            f"({ddmath.PHI_SIZE_GUARD})"
        )
    a = phi @ phi.conj().T
    a[np.diag_indices_from(a)] += noise_var
    return phi.conj().T @ np.linalg.solve(a, y)


def ofdm_mmse_reference(r_n, h_n, noise_var: float) -> np.ndarray:
    """Per-OFDM-symbol frequency-domain MMSE with an ideal channel matrix."""
    r_n = np.asarray(r_n, dtype=complex)
    h_n = np.asarray(h_n, dtype=complex)
    m = r_n.shape[0]
    if h_n.shape != (m, m):
        raise ValueError("channel matrix must be M x M")
    f_m = np.fft.fft(np.eye(m)) / np.sqrt(m)
    g = f_m @ h_n @ f_m.conj().T
    a = g @ g.conj().T
    a[np.diag_indices_from(a)] += noise_var
    return g.conj().T @ np.linalg.solve(a, f_m @ r_n)
