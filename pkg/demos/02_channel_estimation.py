"""Estimate a fractional-Doppler multipath channel from one pilot impulse.

Run:  python3 demos/02_channel_estimation.py
"""

import numpy as np

from ddmodem import (
    EstimatorConfig,
    FrameParams,
    apply_channel,
    add_noise,
    demodulate,
    draw_channel,
    estimate_paths,
    jakes_max_doppler,
    modulate,
    pilot_response_synthetic,
    scaled_eva_scenario,
)

p = FrameParams(64, 14, 15e3, 6, 0.8e9)
rng = np.random.default_rng(42)

# A 500 km/h EVA channel, delays snapped to the sample grid.
scenario = scaled_eva_scenario(jakes_max_doppler(500.0, p.carrier_freq), p)
ch = draw_channel(scenario, p, rng)
print("true paths (gain, delay bins, Doppler bins):")
for q in ch.paths:
    print(f"  {q.gain:5.3f}  {p.delay_samples(q.delay_s):3.0f}  "
          f"{p.doppler_bins(q.doppler_hz):+6.3f}")

# Transmit a single pilot impulse carrying one data frame's worth of energy,
# add noise at 20 dB SNR, and measure its DD response.
amp = np.sqrt(p.num_delay_bins * p.num_doppler_bins)
pilot = np.zeros((p.num_delay_bins, p.num_doppler_bins), complex)
pilot[0, 0] = amp
sigma2 = 10 ** (-20 / 10)
rx = add_noise(apply_channel(modulate(pilot, p), ch), sigma2, rng)
resp = demodulate(rx, p) / amp

est = estimate_paths(resp, EstimatorConfig(), sigma2, p)
print(f"\nestimated {len(est)} paths:")
for e in sorted(est, key=lambda e: (e.delay_bins, -e.gain)):
    print(f"  {e.gain:5.3f}  {e.delay_bins:3d}  {e.doppler_bins:+6.3f}")

rec = pilot_response_synthetic(est, (0, 0), p)
clean = pilot_response_synthetic(
    [type("V", (), dict(doppler_bins=p.doppler_bins(q.doppler_hz),
                        delay_bins=int(round(p.delay_samples(q.delay_s))),
                        gain=q.gain, phase=q.init_phase))()
     for q in ch.paths],
    (0, 0),
    p,
)
nmse = np.sum(np.abs(rec - clean) ** 2) / np.sum(np.abs(clean) ** 2)
print(f"\npilot-response reconstruction NMSE: {10*np.log10(nmse):.1f} dB")
