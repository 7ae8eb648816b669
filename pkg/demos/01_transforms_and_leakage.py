"""Walk through the DD <-> FT <-> time transforms and fractional-Doppler leakage.

Run:  python3 demos/01_transforms_and_leakage.py
"""

import numpy as np

from ddmodem import FrameParams, demodulate, isfft, modulate, sfft, upsilon

p = FrameParams(
    num_delay_bins=16,
    num_doppler_bins=8,
    subcarrier_spacing=15e3,
    cp_len=4,
    carrier_freq=0.8e9,
)

print("frame:", p)
print(f"sample rate      {p.sample_rate/1e3:.0f} kHz")
print(f"samples/frame    {p.samples_per_frame}")
print(f"Doppler bin      {p.doppler_bin_hz:.1f} Hz")

# A random DD grid survives the round trip to the time domain exactly.
rng = np.random.default_rng(0)
x_dd = rng.normal(size=(16, 8)) + 1j * rng.normal(size=(16, 8))
tx = modulate(x_dd, p)
print(f"\nround-trip error |demod(mod(x)) - x| = "
      f"{np.max(np.abs(demodulate(tx, p) - x_dd)):.2e}")
print(f"ISFFT/SFFT round trip               = "
      f"{np.max(np.abs(sfft(isfft(x_dd)) - x_dd)):.2e}")
cp_free = tx.reshape(p.num_doppler_bins, -1)[:, p.cp_len:]
print(f"energy, DD grid vs CP-stripped frame = "
      f"{np.sum(np.abs(x_dd)**2):.4f} / {np.sum(np.abs(cp_free)**2):.4f}")

# A Doppler shift on an *integer* bin is a clean cyclic shift of the Doppler
# axis; a fractional shift leaks into every bin with the periodic kernel
# upsilon_N.  This leakage is exactly what the channel estimator matches.
n = p.num_doppler_bins
print("\n|upsilon_N(nu - k)| / N for nu = 2.0 (integer bin):")
print(np.round(np.abs(upsilon(n, 2.0 - np.arange(n))) / n, 3))
print("for nu = 2.3 (fractional -> inter-Doppler leakage):")
print(np.round(np.abs(upsilon(n, 2.3 - np.arange(n))) / n, 3))
