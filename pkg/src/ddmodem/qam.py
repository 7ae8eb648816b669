"""Gray-coded square QAM mapping with unit average symbol energy."""

import numpy as np

__all__ = ["qam_map", "qam_demap", "bits_per_symbol"]

_ORDERS = (4, 16, 64)


def bits_per_symbol(order: int) -> int:
    if order not in _ORDERS:
        raise ValueError(f"modulation order must be one of {_ORDERS}")
    return int(np.log2(order))


def _gray_to_binary(g: np.ndarray) -> np.ndarray:
    b = g.copy()
    shift = g >> 1
    while shift.any():
        b ^= shift
        shift >>= 1
    return b


def _axis_scale(order: int) -> tuple[int, float]:
    levels = int(np.sqrt(order))
    norm = np.sqrt(2.0 * (levels**2 - 1) / 3.0)
    return levels, norm


def qam_map(bits, order: int = 16) -> np.ndarray:
    """Map a flat bit array to Gray-coded square QAM symbols (mean energy 1)."""
    k = bits_per_symbol(order)
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size % k:
        raise ValueError(f"bit count {bits.size} is not a multiple of {k}")
    levels, norm = _axis_scale(order)
    half = k // 2
    b = bits.reshape(-1, k)
    weights = 1 << np.arange(half - 1, -1, -1)
    gi = b[:, :half] @ weights
    gq = b[:, half:] @ weights
    li = 2 * _gray_to_binary(gi) - (levels - 1)
    lq = 2 * _gray_to_binary(gq) - (levels - 1)
    return (li + 1j * lq) / norm


def qam_demap(symbols, order: int = 16) -> np.ndarray:
    """Minimum-distance hard decision back to bits; inverse of ``qam_map``."""
    k = bits_per_symbol(order)
    symbols = np.asarray(symbols, dtype=complex).ravel()
    levels, norm = _axis_scale(order)
    half = k // 2
    out = np.empty((symbols.size, k), dtype=np.int64)
    for part, cols in ((symbols.real, slice(0, half)), (symbols.imag, slice(half, k))):
        idx = np.clip(np.round((part * norm + levels - 1) / 2), 0, levels - 1)
        gray = idx.astype(np.int64) ^ (idx.astype(np.int64) >> 1)
        for j in range(half):
            out[:, cols][:, j] = (gray >> (half - 1 - j)) & 1
    return out.ravel()
