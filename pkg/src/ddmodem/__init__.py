"""Delay-Doppler modem simulation toolkit.

CP-OFDM-based OTFS transforms, a fractional-Doppler ray channel, DD-domain
channel estimation and equalization, and a Monte Carlo error-rate harness.
"""

from .channel import (
    ChannelRealization,
    DopplerScenario,
    EVA_PROFILE,
    PathSpec,
    add_noise,
    apply_channel,
    build_hn,
    draw_channel,
    eva_scenario,
    farrow_delay,
    jakes_max_doppler,
    load_scenario,
    scaled_eva_scenario,
)
from .ddmath import (
    SizeGuardError,
    build_lambda,
    build_phi,
    calibration_constant,
    dd_output_exact,
    pilot_response_synthetic,
    psi,
    upsilon,
)
from .equalization import (
    EqualizerConfig,
    mmse_equalize,
    ofdm_mmse_reference,
    wiener_equalize,
)
from .estimation import (
    EstimatedPath,
    EstimatorConfig,
    estimate_paths,
    pn_estimate,
    pn_frame,
    xcorr_doppler,
)
from .grid import (
    FrameParams,
    demodulate,
    devectorize,
    isfft,
    modulate,
    sfft,
    vectorize,
)
from .harness import (
    ConfigError,
    SimConfig,
    bench_complexity,
    ideal_paths,
    run_sweep,
    run_trial,
    write_bench_csv,
    write_sweep_csv,
)
from .qam import qam_demap, qam_map

__version__ = "0.1.0"
