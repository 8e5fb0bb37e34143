"""Configuration-driven experiment runner and report writers.

A run generates one seeded signal, pushes it through the selected pipeline
(adapted Prony, plain Prony, or LMS noise cancellation) and scores the
result with the Precision Measure. Reports are deterministic for a given
configuration; wall-clock timing is kept out of the written files unless
explicitly requested.
"""

import concurrent.futures
import csv
import enum
import io
import json
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, PronyAdaptError
from .lms import LmsConfig, lms_run
from .metrics import precision_measure, run_statistics
from .prony import AdjustmentPolicy, SolveMethod, prony_decompose, reconstruct
from .signals import DEFAULT_COMPONENTS, ComponentSpec, NoiseSpec, gaussian_noise, gen_damped_sinusoids

__all__ = [
    "SCHEMA_VERSION",
    "ExperimentKind",
    "SeedMode",
    "ExperimentConfig",
    "RunRecord",
    "ExperimentReport",
    "run_experiment",
    "run_experiments",
    "emit_report",
    "emit_plot_data",
    "load_config",
    "preset",
    "PRESETS",
]

SCHEMA_VERSION = 1
THREADS_ENV = "PRONY_ADAPT_THREADS"

# Signal class for the LMS comparison: unit sine in Gaussian noise.
LMS_COMPONENTS = (ComponentSpec(amplitude=1.0, alpha=0.0, frequency=0.05),)
LMS_NOISE_SIGMA = 0.5
DEFAULT_NOISE_SIGMA = 0.05


class ExperimentKind(enum.Enum):
    PRONY_ADAPTED = "prony_adapted"
    PRONY_PLAIN = "prony_plain"
    LMS = "lms"


class SeedMode(enum.Enum):
    PER_RUN = "per-run"  # run r uses seed + r
    SAME_SIGNAL = "same-signal"  # every run reuses seed


_PRONY_FIELDS = ("p", "method", "policy")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment; mirrors the JSON config document field for field.

    ``policy.multiplier`` left unset on an adapted-Prony experiment means
    ``n / 100``. ``pm_reference`` selects the signal the Precision Measure
    compares against: ``"input"`` (what the pipeline saw) is the Prony
    default, ``"clean"`` the LMS default.
    """

    kind: ExperimentKind
    n: int
    label: str = None
    ts: float = 1.0
    components: tuple = None
    noise_sigma: float = None
    p: int = None
    method: SolveMethod = None
    policy: AdjustmentPolicy = None
    lms: LmsConfig = None
    runs: int = 10
    seed: int = 0
    seed_mode: SeedMode = SeedMode.PER_RUN
    pm_reference: str = None

    def __post_init__(self):
        kind = ExperimentKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "seed_mode", SeedMode(self.seed_mode))
        for name in ("n", "runs", "seed", "p"):
            v = getattr(self, name)
            if v is not None and (isinstance(v, bool) or not isinstance(v, (int, np.integer))):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        is_lms = kind is ExperimentKind.LMS
        if self.components is None:
            object.__setattr__(self, "components", LMS_COMPONENTS if is_lms else DEFAULT_COMPONENTS)
        if self.noise_sigma is None:
            object.__setattr__(self, "noise_sigma", LMS_NOISE_SIGMA if is_lms else DEFAULT_NOISE_SIGMA)
        if self.pm_reference is None:
            object.__setattr__(self, "pm_reference", "clean" if is_lms else "input")
        if self.pm_reference not in ("input", "clean"):
            raise ConfigError(f"pm_reference must be 'input' or 'clean', got {self.pm_reference!r}")
        if is_lms:
            given = [f for f in _PRONY_FIELDS if getattr(self, f) is not None]
            if given:
                raise ConfigError(f"LMS experiment must not set Prony fields {given}")
            if self.lms is None:
                object.__setattr__(self, "lms", LmsConfig())
        else:
            if self.lms is not None:
                raise ConfigError("Prony experiment must not set 'lms'")
            if self.p is None:
                object.__setattr__(self, "p", 4)
            object.__setattr__(self, "method", SolveMethod.parse(self.method or SolveMethod.LS))
            if kind is ExperimentKind.PRONY_PLAIN:
                if self.policy is not None and not self.policy.is_identity:
                    raise ConfigError("plain Prony experiment cannot carry an adjustment policy")
                object.__setattr__(self, "policy", AdjustmentPolicy())
            elif self.policy is None:
                object.__setattr__(self, "policy", AdjustmentPolicy.coefficients(self.n / 100))
        if self.label is None:
            object.__setattr__(self, "label", f"{kind.value}_n{self.n}_{self.seed_mode.value}")

    def run_seed(self, run_index):
        return self.seed if self.seed_mode is SeedMode.SAME_SIGNAL else self.seed + run_index

    @classmethod
    def from_dict(cls, d):
        """Build from a parsed JSON document; raises :class:`ConfigError`."""
        if not isinstance(d, dict):
            raise ConfigError("experiment config must be a JSON object")
        d = dict(d)
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        for req in ("kind", "n"):
            if req not in d:
                raise ConfigError(f"missing required config field {req!r}")
        try:
            n = d["n"]
            if "components" in d and d["components"] is not None:
                d["components"] = tuple(ComponentSpec(**c) for c in d["components"])
            if d.get("policy") is not None:
                pol = dict(d["policy"])
                if pol.get("multiplier") is None:
                    pol["multiplier"] = n / 100
                d["policy"] = AdjustmentPolicy(**pol)
            if d.get("lms") is not None:
                d["lms"] = LmsConfig(**d["lms"])
            return cls(**d)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid experiment config: {exc}") from None

    def to_dict(self):
        d = {
            "label": self.label,
            "kind": self.kind.value,
            "n": self.n,
            "ts": self.ts,
            "components": [
                {"amplitude": c.amplitude, "alpha": c.alpha, "frequency": c.frequency, "phase": c.phase}
                for c in self.components
            ],
            "noise_sigma": self.noise_sigma,
            "runs": self.runs,
            "seed": self.seed,
            "seed_mode": self.seed_mode.value,
            "pm_reference": self.pm_reference,
        }
        if self.kind is ExperimentKind.LMS:
            d["lms"] = {"taps": self.lms.taps, "mu": self.lms.mu}
            if self.lms.initial_weights is not None:
                d["lms"]["initial_weights"] = list(self.lms.initial_weights)
        else:
            d["p"] = self.p
            d["method"] = self.method.value
            d["policy"] = {
                "target": self.policy.target.value,
                "multiplier": self.policy.multiplier,
                "normalize_by_order": self.policy.normalize_by_order,
            }
        return d


@dataclass(frozen=True)
class RunRecord:
    run_index: int
    seed: int
    pm: float = None
    error: str = None
    wall_ms: float = None

    @property
    def ok(self):
        return self.error is None


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    runs: tuple
    statistics: object = None
    trace: tuple = field(default=None, repr=False, compare=False)

    @property
    def failed(self):
        return [r for r in self.runs if not r.ok]

    @property
    def all_failed(self):
        return len(self.failed) == len(self.runs)

    def to_dict(self, include_timing=False):
        runs = []
        for r in self.runs:
            row = {"run_index": r.run_index, "seed": r.seed, "pm": r.pm, "error": r.error}
            if include_timing:
                row["wall_ms"] = r.wall_ms
            runs.append(row)
        st = self.statistics
        return {
            "config": self.config.to_dict(),
            "runs": runs,
            "failed_runs": [r.run_index for r in self.failed],
            "statistics": None
            if st is None
            else {"count": st.count, "mean": st.mean, "std": st.std, "min": st.min, "max": st.max},
        }


def _single_run(config, run_index):
    seed = config.run_seed(run_index)
    t0 = time.perf_counter()
    try:
        noise = NoiseSpec(sigma=config.noise_sigma, seed=seed)
        clean, noisy = gen_damped_sinusoids(config.components, config.n, config.ts, noise)
        if config.kind is ExperimentKind.LMS:
            ref = gaussian_noise(config.n, config.noise_sigma, seed)
            recovered = lms_run(config.lms, ref, clean.samples + ref).e
        else:
            comps = prony_decompose(noisy, config.p, config.method, config.policy)
            recovered = reconstruct(comps, config.n)
        g = clean if config.pm_reference == "clean" else noisy
        pm = precision_measure(g.samples, recovered).pm
        record = RunRecord(run_index, seed, pm=float(pm))
        trace = (clean.samples, noisy.samples, recovered)
    except (PronyAdaptError, ValueError, np.linalg.LinAlgError) as exc:
        record = RunRecord(run_index, seed, error=f"{type(exc).__name__}: {exc}")
        trace = None
    wall_ms = (time.perf_counter() - t0) * 1e3
    return replace(record, wall_ms=wall_ms), trace


def _max_workers():
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def run_experiment(config, max_workers=None):
    """Execute ``config.runs`` independent runs and aggregate their PM values.

    Failed runs are recorded with their error string and excluded from the
    statistics; the remaining runs still execute. Runs may execute on a
    thread pool (``PRONY_ADAPT_THREADS``), results are ordered by run index.
    """
    workers = max_workers or _max_workers()
    indices = range(config.runs)
    if workers > 1 and config.runs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _single_run(config, i), indices))
    else:
        results = [_single_run(config, i) for i in indices]
    records = tuple(r for r, _ in results)
    trace = next((t for _, t in results if t is not None), None)
    pms = [r.pm for r in records if r.ok]
    stats = run_statistics(pms) if pms else None
    return ExperimentReport(config=config, runs=records, statistics=stats, trace=trace)


def run_experiments(configs, max_workers=None):
    return [run_experiment(c, max_workers) for c in configs]


CSV_COLUMNS = ("run_index", "seed", "pm", "wall_ms", "error")


def _fmt(v):
    return "" if v is None else repr(float(v))


def report_to_json(reports, include_timing=False):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "experiments": [r.to_dict(include_timing) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def report_to_csv(report, include_timing=False):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.runs:
        w.writerow(
            [r.run_index, r.seed, _fmt(r.pm), _fmt(r.wall_ms) if include_timing else "", r.error or ""]
        )
    return buf.getvalue()


def emit_report(report, fmt, path, include_timing=False):
    """Write a report (or list of reports, JSON only) to ``path``.

    JSON (schema version 1)::

        {"schema_version": 1,
         "experiments": [{"config": {...}, "runs": [{"run_index", "seed", "pm", "error"}],
                          "failed_runs": [...], "statistics": {...} | null}]}

    CSV has the header ``run_index,seed,pm,wall_ms,error`` and one row per run.
    ``wall_ms`` is left empty unless ``include_timing`` so that identical
    configurations produce identical bytes.
    """
    fmt = fmt.lower()
    reports = report if isinstance(report, (list, tuple)) else [report]
    if fmt == "json":
        text = report_to_json(reports, include_timing)
    elif fmt == "csv":
        if len(reports) != 1:
            raise ValueError("CSV holds a single experiment; write one file per report")
        text = report_to_csv(reports[0], include_timing)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report: {exc.strerror}", os.fspath(path)) from exc


def emit_plot_data(clean, noisy, recovered, path):
    """Trace file with columns ``n,clean,noisy,recovered``."""
    cols = [np.asarray(getattr(a, "samples", a), dtype=float) for a in (clean, noisy, recovered)]
    if not cols[0].shape == cols[1].shape == cols[2].shape:
        raise ValueError("trace columns must have equal lengths")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "clean", "noisy", "recovered"])
            for i, row in enumerate(zip(*cols)):
                w.writerow([i, *(repr(float(v)) for v in row)])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write plot data: {exc.strerror}", os.fspath(path)) from exc


def load_config(path):
    """Parse a JSON config file into a list of :class:`ExperimentConfig`.

    The document is either one experiment object, a list of them, or
    ``{"experiments": [...]}``.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{os.fspath(path)}: invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "experiments" in doc:
        doc = doc["experiments"]
    items = doc if isinstance(doc, list) else [doc]
    if not items:
        raise ConfigError(f"{os.fspath(path)}: no experiments")
    return [ExperimentConfig.from_dict(item) for item in items]


def _table12(runs=10, seed=0):
    configs = []
    for n in (100, 1000, 10000):
        for mode in (SeedMode.SAME_SIGNAL, SeedMode.PER_RUN):
            configs.append(
                ExperimentConfig(
                    kind=ExperimentKind.PRONY_ADAPTED,
                    n=n,
                    policy=AdjustmentPolicy.coefficients(n / 100),
                    runs=runs,
                    seed=seed,
                    seed_mode=mode,
                    label=f"table12_n{n}_{mode.value}",
                )
            )
    return configs


def _table13(runs=10, seed=0):
    configs = [
        ExperimentConfig(kind=ExperimentKind.LMS, n=n, runs=runs, seed=seed, label=f"table13_lms_n{n}")
        for n in (225, 202)
    ]
    for mode in (SeedMode.SAME_SIGNAL, SeedMode.PER_RUN):
        configs.append(
            ExperimentConfig(
                kind=ExperimentKind.PRONY_ADAPTED,
                n=225,
                components=LMS_COMPONENTS,
                noise_sigma=LMS_NOISE_SIGMA,
                runs=runs,
                seed=seed,
                seed_mode=mode,
                label=f"table13_prony_n225_{mode.value}",
            )
        )
    return configs


PRESETS = {"paper-table-12": _table12, "paper-table-13": _table13}


def preset(name, runs=None, seed=None):
    """Experiment list for a named preset, optionally overriding runs/seed."""
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    kwargs = {}
    if runs is not None:
        kwargs["runs"] = runs
    if seed is not None:
        kwargs["seed"] = seed
    return factory(**kwargs)
