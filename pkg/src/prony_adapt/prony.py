"""Prony decomposition with an optional standard-deviation adjustment step.

The pipeline fits an autoregressive model to the samples, roots its
characteristic polynomial, converts the roots to damping and frequency, and
recovers complex residues (amplitude and phase) from a Vandermonde system.
The adjustment step shifts either the AR coefficients or the roots by a
multiple of their own sample standard deviation.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import ClassicLengthMismatch, IndeterminateForm, OrderOutOfRange, PronyAdaptError
from .numerics import REALMAX

__all__ = [
    "SampledSignal",
    "SolveMethod",
    "ARModel",
    "AdjustTarget",
    "AdjustmentPolicy",
    "PronyComponents",
    "fit_ar_coefficients",
    "characteristic_roots",
    "adjust",
    "extract_dynamics",
    "build_vandermonde",
    "solve_residues",
    "prony_decompose",
    "reconstruct",
]

_LOG_REALMAX = np.log(REALMAX)


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _clamp_inf(a):
    """Replace +/-Inf by +/-REALMAX, elementwise, leaving finite values alone."""
    return np.where(np.isinf(a), np.sign(a) * REALMAX, a)


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled real signal.

    Parameters
    ----------
    samples : array_like
        At least two finite real samples.
    ts : float
        Sample period in seconds.
    """

    samples: np.ndarray
    ts: float = 1.0

    def __post_init__(self):
        s = _frozen(self.samples, dtype=float)
        if s.ndim != 1 or s.shape[0] < 2:
            raise ValueError("a signal needs at least 2 samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("signal samples must be finite")
        if not (self.ts > 0 and np.isfinite(self.ts)):
            raise ValueError(f"sample period must be positive, got {self.ts}")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "ts", float(self.ts))

    def __len__(self):
        return self.samples.shape[0]

    def scaled(self, factor):
        return SampledSignal(self.samples * factor, self.ts)


class SolveMethod(enum.Enum):
    CLASSIC = "classic"
    LS = "ls"
    TLS = "tls"

    @classmethod
    def parse(cls, value):
        """Case-insensitive parse of ``'classic'``, ``'ls'`` or ``'tls'``."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown solve method {value!r}; expected classic, ls or tls") from None


@dataclass(frozen=True)
class ARModel:
    """Autoregression coefficients ``a`` and characteristic polynomial ``c = [1, a...]``."""

    a: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a)
        if a.ndim != 1 or a.shape[0] < 1:
            raise ValueError("AR model needs at least one coefficient")
        object.__setattr__(self, "a", a)

    @property
    def order(self):
        return self.a.shape[0]

    @property
    def c(self):
        return np.concatenate([[1.0], self.a])


class AdjustTarget(enum.Enum):
    NONE = "none"
    COEFFICIENTS = "coefficients"
    ROOTS = "roots"


@dataclass(frozen=True)
class AdjustmentPolicy:
    """Which values get shifted, and by how many standard deviations.

    ``normalize_by_order`` additionally divides the shift by the number of
    shifted values, which is the root-adjustment form ``r - std(r)/n``.
    """

    target: AdjustTarget = AdjustTarget.NONE
    multiplier: float = 0.0
    normalize_by_order: bool = False

    def __post_init__(self):
        object.__setattr__(self, "target", AdjustTarget(self.target))
        if not self.multiplier >= 0:
            raise ValueError(f"adjustment multiplier must be >= 0, got {self.multiplier}")

    @classmethod
    def none(cls):
        return cls()

    @classmethod
    def coefficients(cls, k, normalize_by_order=False):
        return cls(AdjustTarget.COEFFICIENTS, float(k), normalize_by_order)

    @classmethod
    def roots(cls, k, normalize_by_order=True):
        return cls(AdjustTarget.ROOTS, float(k), normalize_by_order)

    @property
    def is_identity(self):
        return self.target is AdjustTarget.NONE or self.multiplier == 0


@dataclass(frozen=True)
class PronyComponents:
    """Per-root decomposition: ``x[n] ~ Re(sum_i h_i * r_i**n)``.

    ``amp``, ``alpha`` (1/s), ``freq`` (Hz) and ``theta`` (rad) are derived
    from ``roots`` and ``residues``; reconstruction always uses the complex
    pair so it stays consistent regardless of how damping is reported.
    """

    roots: np.ndarray
    residues: np.ndarray
    amp: np.ndarray
    alpha: np.ndarray
    freq: np.ndarray
    theta: np.ndarray
    ts: float
    model: ARModel = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("roots", "residues", "amp", "alpha", "freq", "theta"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def __len__(self):
        return self.roots.shape[0]


def fit_ar_coefficients(x, p, method):
    """Fit order-``p`` AR coefficients by solving ``T a = -x[p:]``.

    CLASSIC needs exactly ``N = 2p`` samples, LS and TLS need ``N > 2p``.
    """
    method = SolveMethod.parse(method)
    s = x.samples
    n = s.shape[0]
    if not 1 <= p <= n - 1:
        raise OrderOutOfRange(f"model order p={p} outside [1, {n - 1}] for N={n}")
    if method is SolveMethod.CLASSIC and n != 2 * p:
        raise ClassicLengthMismatch(f"classic method needs N = 2p = {2 * p} samples, got {n}")
    if method is not SolveMethod.CLASSIC and n <= 2 * p:
        raise OrderOutOfRange(f"{method.value} method needs N > 2p = {2 * p} samples, got {n}")
    T = numerics.build_toeplitz(s, p)
    rhs = s[p:]
    if method is SolveMethod.TLS:
        a = numerics.solve_total_least_squares(T, -rhs)
    else:
        a = -numerics.solve_least_squares(T, rhs).x
    return ARModel(a)


def characteristic_roots(model):
    return numerics.polynomial_roots(model.c)


def adjust(values, policy):
    """Subtract ``k * std(values)`` (optionally ``/ len(values)``) from every entry."""
    values = np.asarray(values)
    if values.shape[0] < 1:
        raise ValueError("nothing to adjust")
    if policy.is_identity:
        return values.copy()
    delta = policy.multiplier * numerics.sample_std_complex(values)
    if policy.normalize_by_order:
        delta /= values.shape[0]
    return values - delta


def extract_dynamics(roots, ts):
    """Damping ``ln|r| / ts`` (1/s) and frequency ``arg(r) / (2 pi ts)`` (Hz).

    A root at exactly zero gives ``-inf`` damping, which is clamped to
    ``-REALMAX`` so every returned value is finite.
    """
    if not ts > 0:
        raise ValueError(f"sample period must be positive, got {ts}")
    roots = np.asarray(roots, dtype=complex)
    with np.errstate(divide="ignore"):
        alpha = np.log(np.abs(roots)) / ts
    alpha = np.nan_to_num(_clamp_inf(alpha), nan=0.0)
    freq = np.arctan2(roots.imag, roots.real) / (2 * np.pi * ts)
    return alpha, freq


def build_vandermonde(roots, length):
    """Vandermonde matrix ``Z[n, i] = roots[i]**n`` for ``n < length``.

    Entries that overflow saturate at ``+/-REALMAX`` on the real and imaginary
    parts separately.
    """
    roots = np.asarray(roots, dtype=complex)
    if length < roots.shape[0]:
        raise ValueError(f"Vandermonde length {length} shorter than root count {roots.shape[0]}")
    n = np.arange(length)[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        Z = roots[None, :] ** n
        bad = ~np.isfinite(Z)
        if np.any(bad):
            # polar form with the log-magnitude capped keeps the sign pattern
            cols = np.nonzero(bad)[1]
            nn = n[np.nonzero(bad)[0], 0]
            r = roots[cols]
            logmag = nn * np.log(np.abs(r))
            mag = np.where(logmag >= _LOG_REALMAX, np.inf, np.exp(np.minimum(logmag, _LOG_REALMAX)))
            ang = nn * np.angle(r)
            re = np.nan_to_num(mag * np.cos(ang), nan=0.0, posinf=REALMAX, neginf=-REALMAX)
            im = np.nan_to_num(mag * np.sin(ang), nan=0.0, posinf=REALMAX, neginf=-REALMAX)
            Z[bad] = re + 1j * im
    return Z


def _column_scaled_lstsq(Z, b):
    # unit max-abs columns keep saturated Vandermonde columns from overflowing the SVD
    scale = np.max(np.abs(Z), axis=0)
    scale[scale == 0] = 1.0
    sol = numerics.solve_least_squares(Z / scale, b.astype(complex))
    return sol.x / scale


def solve_residues(Z, x, method):
    """Complex residues ``h`` with ``Z h ~ x[:L]`` where ``L = Z.shape[0]``."""
    method = SolveMethod.parse(method)
    L = Z.shape[0]
    if L > len(x):
        raise ValueError(f"Vandermonde has {L} rows but signal only {len(x)} samples")
    b = x.samples[:L]
    if method is SolveMethod.TLS:
        if not np.all(np.isfinite(Z)) or np.any(np.abs(Z.real) >= REALMAX) or np.any(np.abs(Z.imag) >= REALMAX):
            raise IndeterminateForm("Vandermonde matrix has non-finite or saturated entries; TLS cannot proceed")
        return numerics.solve_total_least_squares(Z, b.astype(complex))
    return _column_scaled_lstsq(Z, b)


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except PronyAdaptError as exc:
        err = type(exc)(f"[{name}] {exc}")
        err.stage = name
        raise err from exc


def prony_decompose(x, p, method, policy=None):
    """Run the full decomposition of ``x`` with model order ``p``.

    Parameters
    ----------
    x : SampledSignal
    p : int
    method : SolveMethod or str
    policy : AdjustmentPolicy, optional
        Defaults to no adjustment. COEFFICIENTS shifts the AR coefficients
        before rooting, ROOTS shifts the roots after rooting.

    Returns
    -------
    PronyComponents
    """
    method = SolveMethod.parse(method)
    policy = policy or AdjustmentPolicy()
    model = _stage("fit_ar_coefficients", fit_ar_coefficients, x, p, method)
    if policy.target is AdjustTarget.COEFFICIENTS:
        model = ARModel(adjust(model.a, policy))
    roots = _stage("characteristic_roots", characteristic_roots, model)
    if policy.target is AdjustTarget.ROOTS:
        roots = adjust(roots, policy)
    alpha, freq = extract_dynamics(roots, x.ts)
    length = 2 * p if method is SolveMethod.CLASSIC else len(x)
    Z = build_vandermonde(roots, length)
    h = _stage("solve_residues", solve_residues, Z, x, method)
    return PronyComponents(
        roots=roots,
        residues=h,
        amp=np.abs(h),
        alpha=alpha,
        freq=freq,
        theta=np.arctan2(h.imag, h.real),
        ts=x.ts,
        model=model,
    )


def reconstruct(components, n):
    """Real part of ``sum_i h_i r_i**k`` for ``k = 0 .. n-1``.

    Equivalent to ``sum_i amp_i exp(alpha_i k ts) cos(2 pi freq_i k ts + theta_i)``.
    Overflowing terms saturate at ``+/-REALMAX``.
    """
    if n < 1:
        raise ValueError("reconstruction length must be >= 1")
    Z = build_vandermonde(components.roots, n)
    with np.errstate(over="ignore", invalid="ignore"):
        y = (Z * components.residues[None, :]).real.sum(axis=1)
    y = np.nan_to_num(y, nan=0.0, posinf=REALMAX, neginf=-REALMAX)
    return y
