"""Frame potential of a disordered Luttinger liquid and the random-field XXZ chain.

Closed-form mode sums live in :mod:`tllfp.analytic`; the Monte Carlo
estimators in :mod:`tllfp.freefermion` (Delta = 0) and
:mod:`tllfp.manybody` (small L, any |Delta| < 1).
"""
__version__ = "0.1.0"

from .analytic import (
    ModeGrid,
    QuenchSchedule,
    log_fp_ratio,
    mode_weight,
    multiquench_curve,
    multiquench_log_ratio,
    plateau_log_ratio,
    plateau_quadrature_oracle,
    revival_time,
    short_time_log_ratio,
    strong_disorder_log_ratio,
)
from .config import ExperimentConfig, load_config, parse_config
from .curve import FpCurve
from .disorder import DisorderRealization, FilterKernel, apply_filter, generate_realization
from .errors import ConfigError, NumericalError, RegimeError
from .freefermion import estimate_fp
from .manybody import estimate_fp_interacting
from .model import LuttingerParams, ModelParams, bethe_params
