"""The twelve acceptance criteria, one test each.

Every criterion prints a single PASS/FAIL line; the lines are repeated in
the pytest terminal summary. Run ``python tests/test_acceptance.py`` for
the lines alone.
"""
import fnmatch
import subprocess
import sys
import time
from pathlib import Path

import pytest

from coxtorus.cli import Context, Report, RunConfig, STAGES

HERE = Path(__file__).resolve().parent

# number, name, stage, tag patterns, target seconds
CRITERIA = [
    (1, "group suite", "group", ["*"], 1),
    (2, "degree-matrix suite", "oracle", ["degree-matrix", "semi-invariance"], 5),
    (3, "central-fibre suite", "central-fibre",
     ["quotient-fan-*", "torus-matrix-*", "nonnormal-locus-*", "omega-normal-*", "intersection-*",
      "hypersurface-*"], 30),
    (4, "semistability suite", "central-fibre",
     ["chart-supports-semistable", "unstable-locus-products", "base-locus-*"], 5),
    (5, "compass suite", "compasses", ["*"], 10),
    (6, "component weight tables", "central-fibre", ["weight-set-*"], 10),
    (7, "fixed-point series suite", "euler", ["*"], 30),
    (8, "walls suite", "walls", ["*"], 1),
    (9, "chart suite", "charts", ["*"], 120),
    (10, "regularity suite", "oracle", ["regularity-closure", "seed-necessity"], 1),
    (11, "cox-equality suite", "coxring", ["*"], 1800),
]

_ctx = Context(RunConfig())
_reports: dict[str, tuple[Report, float]] = {}


def stage_report(stage: str) -> tuple[Report, float]:
    if stage not in _reports:
        rep = Report()
        t0 = time.perf_counter()
        STAGES[stage](_ctx, rep)
        _reports[stage] = (rep, time.perf_counter() - t0)
    return _reports[stage]


def evaluate(number: int):
    _, name, stage, patterns, budget = next(c for c in CRITERIA if c[0] == number)
    rep, elapsed = stage_report(stage)
    checks = [c for c in rep.checks if any(fnmatch.fnmatch(c.tag, p) for p in patterns)]
    failed = [c for c in checks if not c.passed]
    ok = bool(checks) and not failed
    line = (f"criterion {number:>2} {name}: {'PASS' if ok else 'FAIL'} "
            f"({len(checks) - len(failed)}/{len(checks)} checks; {stage} stage {elapsed:.1f}s, target {budget}s)")
    if failed:
        line += " failed: " + ", ".join(c.tag for c in failed)
    return ok, line, failed


def property_suites():
    t0 = time.perf_counter()
    r = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(HERE / "properties")],
                       capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    summary = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr.strip()[-200:]
    ok = r.returncode == 0
    line = f"criterion 12 property suites: {'PASS' if ok else 'FAIL'} ({summary}; target 120s)"
    return ok, line, r.stdout


def _record(request, line):
    print(line)
    request.config.__dict__.setdefault("_acceptance_lines", []).append(line)


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, request):
    ok, line, failed = evaluate(number)
    _record(request, line)
    assert ok, "\n".join(f"{c.tag}: {c.detail}" for c in failed)


def test_criterion_12_property_suites(request):
    ok, line, out = property_suites()
    _record(request, line)
    assert ok, out[-2000:]


if __name__ == "__main__":
    results = [evaluate(c[0]) for c in CRITERIA]
    for _, line, _ in results:
        print(line, flush=True)
    ok12, line12, _ = property_suites()
    print(line12)
    sys.exit(0 if all(r[0] for r in results) and ok12 else 1)
