"""Synthetic damped-sinusoid generation and CSV signal files.

Noise is drawn from a pinned pipeline so that a seed reproduces the same
sequence on any platform and numpy release:

1. ``numpy.random.PCG64(seed)`` produces raw 64-bit words
   (``BitGenerator.random_raw``; the PCG64 stream is frozen by numpy).
2. Each word ``w`` maps to a uniform ``((w >> 11) + 0.5) * 2**-53`` in (0, 1).
3. Consecutive uniform pairs ``(u1, u2)`` become two standard normals by the
   Box-Muller transform ``sqrt(-2 ln u1) * (cos, sin)(2 pi u2)``.
"""

import enum
import os
from dataclasses import dataclass

import numpy as np

from .errors import MalformedInput, NyquistViolation
from .prony import SampledSignal

__all__ = [
    "ComponentSpec",
    "NoiseSpec",
    "NoiseKind",
    "gaussian_noise",
    "gen_damped_sinusoids",
    "read_signal_csv",
    "write_signal_csv",
    "DEFAULT_COMPONENTS",
]

PRNG_ALGORITHM = "pcg64-raw53-boxmuller"


@dataclass(frozen=True)
class ComponentSpec:
    """One damped sinusoid ``amplitude * exp(alpha t) * cos(2 pi f t + phase)``."""

    amplitude: float
    alpha: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")


class NoiseKind(enum.Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0
    seed: int = 0
    kind: NoiseKind = NoiseKind.GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not self.sigma >= 0:
            raise ValueError(f"noise sigma must be >= 0, got {self.sigma}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


# Two damped sinusoids used by the benchmark presets (ts = 1).
DEFAULT_COMPONENTS = (
    ComponentSpec(amplitude=1.0, alpha=-0.05, frequency=0.08),
    ComponentSpec(amplitude=0.6, alpha=-0.02, frequency=0.21),
)


def gaussian_noise(n, sigma, seed):
    """``n`` normal draws with standard deviation ``sigma`` (see module docstring)."""
    bg = np.random.PCG64(int(seed))
    m = n + (n & 1)
    words = bg.random_raw(m)
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    u1, u2 = u[0::2], u[1::2]
    rad = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(m)
    z[0::2] = rad * np.cos(2 * np.pi * u2)
    z[1::2] = rad * np.sin(2 * np.pi * u2)
    return sigma * z[:n]


def gen_damped_sinusoids(specs, n, ts=1.0, noise=None):
    """Sum of damped sinusoids plus seeded Gaussian noise.

    Returns
    -------
    clean, noisy : SampledSignal
        ``noisy`` is bit-identical to ``clean`` when ``noise.sigma == 0``.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if not ts > 0:
        raise ValueError(f"sample period must be positive, got {ts}")
    nyquist = 1.0 / (2.0 * ts)
    t = np.arange(n) * ts
    clean = np.zeros(n)
    for spec in specs:
        if abs(spec.frequency) >= nyquist:
            raise NyquistViolation(f"frequency {spec.frequency} Hz not below Nyquist {nyquist} Hz")
        clean += spec.amplitude * np.exp(spec.alpha * t) * np.cos(2 * np.pi * spec.frequency * t + spec.phase)
    noise = noise or NoiseSpec()
    noisy = clean if noise.sigma == 0 else clean + gaussian_noise(n, noise.sigma, noise.seed)
    return SampledSignal(clean, ts), SampledSignal(noisy, ts)


def write_signal_csv(path, signal):
    """Write ``#ts=<value>`` then one sample per line, 17 significant digits."""
    lines = [f"#ts={signal.ts!r}"]
    lines.extend(f"{v:.17g}" for v in signal.samples)
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_signal_csv(path):
    with open(path, encoding="ascii") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedInput(f"{os.fspath(path)}: empty file", line=1)
    head = lines[0].strip()
    if not head.startswith("#ts="):
        raise MalformedInput(f"{os.fspath(path)}:1: missing '#ts=<value>' header", line=1)
    try:
        ts = float(head[4:])
    except ValueError:
        raise MalformedInput(f"{os.fspath(path)}:1: bad sample period {head[4:]!r}", line=1) from None
    samples = []
    for lineno, raw in enumerate(lines[1:], start=2):
        try:
            v = float(raw)
        except ValueError:
            raise MalformedInput(f"{os.fspath(path)}:{lineno}: non-numeric sample {raw!r}", line=lineno) from None
        if not np.isfinite(v):
            raise MalformedInput(f"{os.fspath(path)}:{lineno}: non-finite sample {raw!r}", line=lineno)
        samples.append(v)
    try:
        return SampledSignal(np.array(samples), ts)
    except ValueError as exc:
        raise MalformedInput(f"{os.fspath(path)}: {exc}") from None
