"""Plain LMS adaptive FIR filter and the noise-cancellation experiment."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, LengthMismatch
from .metrics import precision_measure

__all__ = ["LmsConfig", "LmsState", "LmsRunResult", "lms_step", "lms_run", "denoise_experiment"]


@dataclass(frozen=True)
class LmsConfig:
    """Filter length, convergence coefficient and starting weights.

    Defaults are 32 taps, ``mu = 0.01`` and zero initial weights.
    """

    taps: int = 32
    mu: float = 0.01
    initial_weights: tuple = None

    def __post_init__(self):
        if self.taps < 1:
            raise ValueError(f"LMS needs at least one tap, got {self.taps}")
        if not self.mu >= 0:
            raise ValueError(f"convergence coefficient must be >= 0, got {self.mu}")
        if self.initial_weights is not None:
            w = tuple(float(v) for v in self.initial_weights)
            if len(w) != self.taps:
                raise ValueError(f"initial_weights has {len(w)} entries, expected {self.taps}")
            object.__setattr__(self, "initial_weights", w)

    def initial_state(self):
        w = np.zeros(self.taps) if self.initial_weights is None else np.array(self.initial_weights)
        return LmsState(weights=w, delay_line=np.zeros(self.taps))


@dataclass(frozen=True)
class LmsState:
    """Weights and the last ``L`` reference samples, newest first."""

    weights: np.ndarray
    delay_line: np.ndarray

    def __post_init__(self):
        for name in ("weights", "delay_line"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.weights.shape != self.delay_line.shape:
            raise ValueError("weights and delay line must have equal length")


@dataclass(frozen=True)
class LmsRunResult:
    y: np.ndarray
    e: np.ndarray
    final_state: LmsState
    weight_history: np.ndarray = field(default=None, repr=False)


def lms_step(state, ref_sample, desired_sample, config, step=None):
    """One LMS iteration.

    Shifts ``ref_sample`` into the delay line ``u``, filters ``y = w . u``,
    forms ``e = desired - y`` and updates ``w' = w + mu e u``.

    Returns
    -------
    y, e : float
    next_state : LmsState
    """
    u = np.empty_like(state.delay_line)
    u[0] = ref_sample
    u[1:] = state.delay_line[:-1]
    w = state.weights
    y = float(w @ u)
    e = float(desired_sample) - y
    with np.errstate(over="ignore", invalid="ignore"):
        w_next = w + config.mu * e * u
    if not np.all(np.isfinite(w_next)):
        where = "" if step is None else f" at step {step}"
        raise DivergenceError(f"LMS weights diverged{where} (mu={config.mu}, taps={config.taps})", step=step)
    return y, e, LmsState(weights=w_next, delay_line=u)


def lms_run(config, reference, desired, record_history=False):
    """Fold :func:`lms_step` over ``reference`` / ``desired`` from a zero delay line."""
    reference = np.asarray(reference, dtype=float)
    desired = np.asarray(desired, dtype=float)
    if reference.shape != desired.shape or reference.ndim != 1 or reference.shape[0] < 1:
        raise LengthMismatch(f"reference {reference.shape} and desired {desired.shape} must be equal, non-empty")
    n = reference.shape[0]
    state = config.initial_state()
    y = np.empty(n)
    e = np.empty(n)
    history = np.empty((n, config.taps)) if record_history else None
    for i in range(n):
        y[i], e[i], state = lms_step(state, reference[i], desired[i], config, step=i)
        if record_history:
            history[i] = state.weights
    return LmsRunResult(y=y, e=e, final_state=state, weight_history=history)


def denoise_experiment(clean, noise, config):
    """Adaptive noise cancellation of ``clean + noise`` using ``noise`` as reference.

    The error output of the filter is the recovered signal; its Precision
    Measure is taken against ``clean``.

    Returns
    -------
    recovered : ndarray
    pm : float
    """
    g = clean.samples
    noise = np.asarray(noise, dtype=float)
    if noise.shape != g.shape:
        raise LengthMismatch(f"noise length {noise.shape[0]} differs from signal length {g.shape[0]}")
    result = lms_run(config, noise, g + noise)
    return result.e, precision_measure(g, result.e).pm
