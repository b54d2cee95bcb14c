"""The file-based workflow: solve, synthesize, transform, verify.

Each step reads and writes plain files in one directory; ``verify`` recomputes
every suite from those files and writes a single report.  The same commands
are available as the ``razzaboni`` console script.
"""
import json
import tempfile
from pathlib import Path

from razzaboni.cli import main

out = Path(tempfile.mkdtemp())
steps = [
    ["solve", "--out", str(out), "--case", "case1", "--A", "0.5", "--B", "0.5",
     "--grid", "0:1:64,0:0.25:64", "--profile", "1.5"],
    ["synthesize", "--out", str(out)],
    ["transform", "--out", str(out)],
    ["verify", "--out", str(out), "--seed", "1"],
]
for argv in steps:
    print(f"\n$ razzaboni {' '.join(argv)}")
    print(f"exit code {main(argv)}")

report = json.loads((out / "verify_report.json").read_text())
print(f"\nfiles: {sorted(p.name for p in out.iterdir())}")
print(f"verify report schema {report['schema']}, passed={report['passed']}, "
      f"suites={sorted(report['suites'])}")
