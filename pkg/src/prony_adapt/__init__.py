"""Prony decomposition with standard-deviation adjustment, an LMS baseline,
and the Precision Measure used to compare them."""

from .errors import PronyAdaptError
from .lms import LmsConfig, denoise_experiment, lms_run, lms_step
from .metrics import precision_measure, run_statistics
from .prony import (
    AdjustmentPolicy,
    AdjustTarget,
    PronyComponents,
    SampledSignal,
    SolveMethod,
    prony_decompose,
    reconstruct,
)
from .signals import ComponentSpec, NoiseSpec, gen_damped_sinusoids, read_signal_csv, write_signal_csv

__version__ = "0.1.0"
