"""
Running the benchmark presets from Python
=========================================

Equivalent to ``prony-adapt run --preset paper-table-13 --out <dir>``.
"""

import sys
import tempfile
from pathlib import Path

from prony_adapt.bench import emit_report, preset, run_experiments

reports = run_experiments(preset("paper-table-13", runs=10))
for r in reports:
    s = r.statistics
    print(f"{r.config.label:<32} mean {s.mean:10.4f}  std {s.std:.4f}  failed {len(r.failed)}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
emit_report(reports, "json", out / "report.json")
print("report written to", out / "report.json")
