"""Small Monte Carlo BER sweep comparing estimators and equalizers.

Run:  python3 demos/03_ber_sweep.py
Writes demo_sweep_<estimator>_<equalizer>.csv next to this script; plot with
the frontend:  node frontend/dist/cli.js curves --in demo_sweep_*.csv --out ber.svg
"""

from pathlib import Path

from ddmodem import (
    EstimatorConfig,
    FrameParams,
    SimConfig,
    jakes_max_doppler,
    run_sweep,
    scaled_eva_scenario,
    write_sweep_csv,
)

p = FrameParams(64, 14, 15e3, 6, 0.8e9)
scenario = scaled_eva_scenario(jakes_max_doppler(500.0, p.carrier_freq), p)
here = Path(__file__).resolve().parent

for estimator, equalizer in [
    ("ideal", "wiener"),
    ("proposed", "wiener"),
    ("pn", "wiener"),
    ("ideal", "ofdm-mmse"),
]:
    cfg = SimConfig(
        frame=p,
        scenario=scenario,
        snr_grid_db=(10.0, 15.0, 20.0, 25.0, 30.0),
        trials=100,
        estimator=estimator,
        equalizer=equalizer,
        est_cfg=EstimatorConfig(alpha=1 / 200),
        seed=7,
    )
    rows = run_sweep(cfg)
    out = here / f"demo_sweep_{estimator}_{equalizer}.csv"
    write_sweep_csv(rows, out, cfg)
    print(f"{estimator}+{equalizer}:")
    for r in rows:
        print(f"  {r['snr_db']:5.1f} dB  ber={r['ber']:.3e}  "
              f"nmse={r['mean_nmse_db']:7.2f} dB  paths={r['mean_paths']:.1f}")
    print(f"  -> {out.name}")
