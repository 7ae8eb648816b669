"""Command-line front end: ``run`` sweeps, ``bench`` timings, ``validate`` checks."""

import argparse
import json
import sys

import numpy as np

from . import ddmath
from .channel import (
    DopplerScenario,
    EVA_PROFILE,
    apply_channel,
    draw_channel,
    jakes_max_doppler,
    load_scenario,
    scaled_eva_scenario,
)
from .equalization import EqualizerConfig
from .estimation import EstimatorConfig, estimate_paths
from .grid import FrameParams, demodulate, isfft, modulate, sfft
from .harness import (
    ConfigError,
    SimConfig,
    bench_complexity,
    run_sweep,
    write_bench_csv,
    write_sweep_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _parse_snr(spec: str) -> tuple:
    """Parse 'a:step:b' (inclusive) or a comma-separated list of dB values."""
    if ":" in spec:
        a, step, b = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise ValueError("SNR step must be positive")
        n = int(np.floor((b - a) / step + 1e-9)) + 1
        return tuple(a + i * step for i in range(n))
    return tuple(float(x) for x in spec.split(","))


def _frame_from_dict(d: dict) -> FrameParams:
    return FrameParams(
        num_delay_bins=int(d.get("m", 256)),
        num_doppler_bins=int(d.get("n", 14)),
        subcarrier_spacing=float(d.get("subcarrier_spacing_hz", 15e3)),
        cp_len=int(d.get("cp_len", 17)),
        carrier_freq=float(d.get("carrier_freq_hz", 0.8e9)),
    )


def _scenario_from_dict(d: dict, frame: FrameParams) -> DopplerScenario:
    if "max_doppler_hz" in d:
        nu_max = float(d["max_doppler_hz"])
    else:
        nu_max = jakes_max_doppler(float(d.get("speed_kmh", 500.0)), frame.carrier_freq)
    profile = d.get("profile", "eva-scaled")
    if profile == "eva-scaled":
        return scaled_eva_scenario(nu_max, frame, d.get("max_delay_bins"))
    taps = EVA_PROFILE if profile == "eva" else tuple(
        (float(a), float(b)) for a, b in d["taps"]
    )
    return DopplerScenario(max_doppler=nu_max, profile=taps)


def _build_sim_config(args) -> tuple[SimConfig, str]:
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
    frame = _frame_from_dict(file_cfg.get("frame", {}))
    if "scenario_file" in file_cfg:
        scenario = load_scenario(file_cfg["scenario_file"], frame.carrier_freq)
    else:
        scenario = _scenario_from_dict(file_cfg.get("scenario", {}), frame)
    snr = tuple(file_cfg.get("snr_db", (0.0, 10.0, 20.0, 30.0)))
    if args.snr:
        snr = _parse_snr(args.snr)
    est_cfg = EstimatorConfig(**file_cfg.get("estimator_config", {}))
    eq_cfg = EqualizerConfig(**file_cfg.get("equalizer_config", {}))
    cfg = SimConfig(
        frame=frame,
        scenario=scenario,
        snr_grid_db=snr,
        trials=args.trials or int(file_cfg.get("trials", 100)),
        modulation_order=int(file_cfg.get("modulation_order", 16)),
        estimator=args.estimator or file_cfg.get("estimator", "proposed"),
        equalizer=args.equalizer or file_cfg.get("equalizer", "wiener"),
        est_cfg=est_cfg,
        eq_cfg=eq_cfg,
        seed=args.seed if args.seed is not None else int(file_cfg.get("seed", 0)),
    )
    out = args.out or file_cfg.get("out", "sweep.csv")
    return cfg, out


def _cmd_run(args) -> int:
    cfg, out = _build_sim_config(args)
    rows = run_sweep(cfg)
    write_sweep_csv(rows, out, cfg)
    for row in rows:
        print(
            f"snr={row['snr_db']:6.1f} dB  {row['estimator']}+{row['equalizer']}"
            f"  ber={row['ber']:.3e}  fer={row['fer']:.3e}"
            f"  nmse={row['mean_nmse_db']:7.2f} dB  paths={row['mean_paths']:.1f}"
        )
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = bench_complexity(sizes, reps=args.reps)
    write_bench_csv(rows, args.out)
    for row in rows:
        print(
            f"{row['method']:>12}  M={row['M']:<4}  "
            f"median={row['median_seconds']:.4f} s  ({row['reps']} reps)"
        )
    print(f"wrote {args.out}")
    return EXIT_OK


def _validate_checks():
    """Quick oracle/invariant suite for the ``validate`` subcommand."""
    rng = np.random.default_rng(0)

    def transforms():
        p = FrameParams(16, 8, 15e3, 4, 0.8e9)
        x = rng.normal(size=(16, 8)) + 1j * rng.normal(size=(16, 8))
        ok = np.max(np.abs(sfft(isfft(x)) - x)) < 1e-12
        return ok and np.max(np.abs(demodulate(modulate(x, p), p) - x)) < 1e-12

    def upsilon_identities():
        n = 14
        xs = rng.uniform(-n, n, size=200)
        direct = np.array(
            [sum(np.exp(2j * np.pi * k * x / n) for k in range(n)) for x in xs]
        )
        if np.max(np.abs(ddmath.upsilon(n, xs) - direct)) > 1e-9:
            return False
        kappa = rng.uniform(0, 1, size=20)
        for kp in kappa:
            s = np.sum(np.abs(ddmath.upsilon(n, np.arange(n) + kp)) ** 2) / n**2
            if abs(s - 1.0) > 1e-10:
                return False
        return True

    def dd_oracle():
        p = FrameParams(8, 4, 15e3, 2, 0.8e9)
        tap1_ns = 1 / p.sample_rate * 1e9  # exactly one sample
        scenario = DopplerScenario(
            max_doppler=0.4 * p.doppler_bin_hz, profile=((0.0, 0.0), (tap1_ns, -3.0))
        )
        ch = draw_channel(scenario, p, rng)
        x = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
        y = demodulate(apply_channel(modulate(x, p), ch), p)
        views = [
            type("V", (), dict(
                doppler_bins=p.doppler_bins(q.doppler_hz),
                delay_bins=int(round(p.delay_samples(q.delay_s))),
                gain=q.gain,
                phase=q.init_phase,
            ))()
            for q in ch.paths
        ]
        return np.max(np.abs(ddmath.dd_output_exact(x, views, p) - y)) < 1e-9

    def estimation_exact():
        p = FrameParams(16, 8, 15e3, 4, 0.8e9)
        true = [dict(doppler_bins=1.3, delay_bins=2, gain=0.8, phase=np.pi / 3)]
        views = [type("V", (), true[0])()]
        resp = ddmath.pilot_response_synthetic(views, (0, 0), p)
        est = estimate_paths(resp, EstimatorConfig(), 0.0, p)
        if len(est) != 1:
            return False
        e = est[0]
        return (
            e.delay_bins == 2
            and abs(e.doppler_bins - 1.3) < 1e-9
            and abs(e.gain - 0.8) < 1e-6
            and abs(e.phase - np.pi / 3) < 1e-6
        )

    return (
        ("transform round-trips", transforms),
        ("upsilon closed form and normalization", upsilon_identities),
        ("delay-Doppler input-output oracle", dd_oracle),
        ("single-path estimation exactness", estimation_exact),
    )


def _cmd_validate(_args) -> int:
    failed = 0
    for name, check in _validate_checks():
        try:
            ok = check()
        except Exception as exc:  # pragma: no cover - defensive
            ok = False
            print(f"FAIL {name} ({exc})")
            failed += 1
            continue
        print(("PASS" if ok else "FAIL") + f" {name}")
        failed += 0 if ok else 1
    return EXIT_OK if failed == 0 else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddmodem", description="Delay-Doppler modem simulation toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo SNR sweep")
    run.add_argument("--config", help="JSON config file (flags override it)")
    run.add_argument("--snr", help="SNR grid, 'a:step:b' or comma list (dB)")
    run.add_argument("--trials", type=int)
    run.add_argument("--estimator", choices=("ideal", "proposed", "pn"))
    run.add_argument("--equalizer", choices=("wiener", "mmse", "ofdm-mmse"))
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output CSV path")
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="benchmark estimator/equalizer timings")
    bench.add_argument("--sizes", default="32,64,128", help="comma list of M values")
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--out", default="bench.csv")
    bench.set_defaults(func=_cmd_bench)

    val = sub.add_parser("validate", help="run the built-in oracle checks")
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ddmath.SizeGuardError, RuntimeError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
