import csv
import json

import numpy as np
import pytest

from prony_adapt import bench
from prony_adapt.bench import (
    ExperimentConfig,
    ExperimentKind,
    SeedMode,
    emit_plot_data,
    emit_report,
    load_config,
    preset,
    run_experiment,
)
from prony_adapt.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_PARTIAL, main
from prony_adapt.errors import ConfigError
from prony_adapt.prony import AdjustTarget


def small(kind="prony_adapted", **kw):
    kw.setdefault("n", 100)
    kw.setdefault("runs", 3)
    return ExperimentConfig(kind=kind, **kw)


class TestConfig:
    def test_adapted_default_multiplier(self):
        c = small(n=1000)
        assert c.policy.target is AdjustTarget.COEFFICIENTS and c.policy.multiplier == 10
        assert c.p == 4 and c.pm_reference == "input"

    def test_lms_defaults(self):
        c = small("lms", n=225)
        assert c.lms.taps == 32 and c.lms.mu == 0.01 and c.pm_reference == "clean"

    def test_lms_rejects_prony_fields(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="lms", n=100, p=4)

    def test_prony_rejects_lms(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"kind": "prony_plain", "n": 100, "lms": {"taps": 4}})

    def test_plain_has_no_policy(self):
        assert small("prony_plain").policy.is_identity

    @pytest.mark.parametrize(
        "doc",
        [
            {"n": 100},
            {"kind": "prony_adapted"},
            {"kind": "bogus", "n": 100},
            {"kind": "prony_adapted", "n": 100, "runs": 0},
            {"kind": "prony_adapted", "n": 100.5},
            {"kind": "prony_adapted", "n": 100, "extra": 1},
            {"kind": "prony_adapted", "n": 100, "method": "svd"},
            {"kind": "prony_adapted", "n": 100, "policy": {"target": "roots", "multiplier": -1}},
            [1, 2],
        ],
    )
    def test_invalid(self, doc):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(doc)

    def test_dict_round_trip(self):
        c = small(n=300, policy=None, seed=5, seed_mode="same-signal")
        assert ExperimentConfig.from_dict(c.to_dict()) == c
        lms = small("lms", n=225)
        assert ExperimentConfig.from_dict(lms.to_dict()) == lms

    def test_policy_multiplier_defaults_from_n(self):
        c = ExperimentConfig.from_dict({"kind": "prony_adapted", "n": 500, "policy": {"target": "roots", "normalize_by_order": True}})
        assert c.policy.multiplier == 5.0


class TestRunExperiment:
    def test_seeds(self):
        r = run_experiment(small(seed=10))
        assert [x.seed for x in r.runs] == [10, 11, 12]
        r = run_experiment(small(seed=10, seed_mode=SeedMode.SAME_SIGNAL))
        assert [x.seed for x in r.runs] == [10, 10, 10]
        assert r.statistics.std == 0.0

    def test_lms(self):
        r = run_experiment(small("lms", n=225))
        assert all(x.ok for x in r.runs) and r.statistics.count == 3

    def test_failed_runs_recorded(self, monkeypatch):
        real = bench.prony_decompose

        def flaky(x, p, method, policy):
            if x.samples[0] > 1.6:  # first clean sample is exactly 1.6; noise sign decides
                raise np.linalg.LinAlgError("boom")
            return real(x, p, method, policy)

        monkeypatch.setattr(bench, "prony_decompose", flaky)
        cfg = small(runs=6)
        r = run_experiment(cfg)
        expected_fail = [x.run_index for x in r.runs if x.error]
        assert expected_fail and len(expected_fail) < 6
        assert all("LinAlgError: boom" in x.error for x in r.failed)
        assert r.statistics.count == 6 - len(expected_fail)
        assert not r.all_failed

    def test_all_failed(self):
        r = run_experiment(small("prony_plain", method="classic"))
        assert r.all_failed and r.statistics is None
        assert "ClassicLengthMismatch" in r.runs[0].error

    def test_threads_do_not_change_results(self, monkeypatch):
        cfg = small(runs=6)
        serial = run_experiment(cfg)
        monkeypatch.setenv("PRONY_ADAPT_THREADS", "4")
        threaded = run_experiment(cfg)
        assert [x.pm for x in serial.runs] == [x.pm for x in threaded.runs]

    def test_bad_threads_env(self, monkeypatch):
        monkeypatch.setenv("PRONY_ADAPT_THREADS", "many")
        with pytest.raises(ConfigError):
            run_experiment(small())

    def test_presets(self):
        t12 = preset("paper-table-12", runs=2)
        assert [c.n for c in t12] == [100, 100, 1000, 1000, 10000, 10000]
        assert [c.policy.multiplier for c in t12] == [1, 1, 10, 10, 100, 100]
        assert {c.seed_mode for c in t12} == {SeedMode.SAME_SIGNAL, SeedMode.PER_RUN}
        t13 = preset("paper-table-13")
        assert [c.kind for c in t13[:2]] == [ExperimentKind.LMS, ExperimentKind.LMS]
        assert [c.n for c in t13[:2]] == [225, 202]
        with pytest.raises(ConfigError):
            preset("nope")


class TestEmit:
    def test_csv_lines(self, tmp_path):
        r = run_experiment(small(runs=3))
        path = tmp_path / "r.csv"
        emit_report(r, "csv", path)
        lines = path.read_text().splitlines()
        assert len(lines) == 4
        assert lines[0] == "run_index,seed,pm,wall_ms,error"
        rows = list(csv.DictReader(lines))
        assert [float(x["pm"]) for x in rows] == [x.pm for x in r.runs]

    def test_csv_timing(self, tmp_path):
        r = run_experiment(small(runs=2))
        emit_report(r, "csv", tmp_path / "t.csv", include_timing=True)
        rows = list(csv.DictReader((tmp_path / "t.csv").read_text().splitlines()))
        assert all(float(x["wall_ms"]) >= 0 for x in rows)

    def test_json_round_trip(self, tmp_path):
        r = run_experiment(small(runs=3))
        path = tmp_path / "r.json"
        emit_report([r], "json", path)
        doc = json.loads(path.read_text())
        assert doc["schema_version"] == 1
        exp = doc["experiments"][0]
        assert [x["pm"] for x in exp["runs"]] == [x.pm for x in r.runs]
        assert ExperimentConfig.from_dict(exp["config"]) == r.config
        assert exp["statistics"]["mean"] == r.statistics.mean
        assert json.loads(json.dumps(doc)) == doc

    def test_deterministic_bytes(self, tmp_path):
        for fmt in ("json", "csv"):
            a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
            emit_report(run_experiment(small(runs=4)), fmt, a)
            emit_report(run_experiment(small(runs=4)), fmt, b)
            assert a.read_bytes() == b.read_bytes()

    def test_io_error(self, tmp_path):
        with pytest.raises(OSError, match="missing"):
            emit_report(run_experiment(small(runs=1)), "json", tmp_path / "missing" / "r.json")

    def test_plot_data(self, tmp_path):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        path = tmp_path / "p.csv"
        emit_plot_data(x, x + 0.1, x, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 5 and lines[0] == "n,clean,noisy,recovered"
        rows = list(csv.reader(lines[1:]))
        assert all(r[1] == r[3] for r in rows)

    def test_plot_data_lengths(self, tmp_path):
        with pytest.raises(ValueError):
            emit_plot_data([1.0, 2.0], [1.0], [1.0, 2.0], tmp_path / "p.csv")


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


class TestCli:
    def test_config_run_and_determinism(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "c.json", {"kind": "prony_adapted", "n": 200, "runs": 3, "seed": 4})
        for out in ("o1", "o2"):
            assert main(["run", "--config", cfg, "--out", str(tmp_path / out), "--quiet"]) == EXIT_OK
        assert (tmp_path / "o1" / "report.json").read_bytes() == (tmp_path / "o2" / "report.json").read_bytes()

    def test_csv_and_plot(self, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"kind": "lms", "n": 120, "runs": 2, "label": "demo"})
        rc = main(["run", "--config", cfg, "--out", str(tmp_path), "--format", "csv", "--plot-data", "--quiet"])
        assert rc == EXIT_OK
        assert len((tmp_path / "demo.csv").read_text().splitlines()) == 3
        assert (tmp_path / "demo_trace.csv").read_text().startswith("n,clean,noisy,recovered\n")

    def test_overrides(self, tmp_path):
        cfg = write_json(tmp_path / "c.json", {"kind": "prony_plain", "n": 64})
        assert main(["run", "--config", cfg, "--out", str(tmp_path), "--runs", "2", "--seed", "9", "--quiet"]) == 0
        doc = json.loads((tmp_path / "report.json").read_text())
        assert [r["seed"] for r in doc["experiments"][0]["runs"]] == [9, 10]

    def test_invalid_config(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "c.json", {"kind": "lms", "n": 100, "p": 3})
        assert main(["run", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "invalid config" in capsys.readouterr().err
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == EXIT_IO

    def test_unwritable_out(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        cfg = write_json(tmp_path / "c.json", {"kind": "prony_plain", "n": 64, "runs": 1})
        assert main(["run", "--config", cfg, "--out", str(blocker / "sub"), "--quiet"]) == EXIT_IO

    def test_partial_failure(self, tmp_path, capsys):
        doc = {
            "experiments": [
                {"kind": "prony_plain", "n": 64, "runs": 2, "label": "good"},
                {"kind": "prony_plain", "n": 64, "runs": 2, "method": "classic", "label": "bad"},
            ]
        }
        cfg = write_json(tmp_path / "c.json", doc)
        assert main(["run", "--config", cfg, "--out", str(tmp_path)]) == EXIT_PARTIAL
        out = capsys.readouterr().out
        assert "ClassicLengthMismatch" in out
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["experiments"][1]["failed_runs"] == [0, 1]
        assert report["experiments"][0]["failed_runs"] == []

    def test_load_config_forms(self, tmp_path):
        one = {"kind": "prony_plain", "n": 64}
        assert len(load_config(write_json(tmp_path / "a.json", one))) == 1
        assert len(load_config(write_json(tmp_path / "b.json", [one, one]))) == 2
        with pytest.raises(ConfigError):
            load_config(write_json(tmp_path / "c.json", []))
