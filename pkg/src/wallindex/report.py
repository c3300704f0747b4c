"""Run reports: every computed number travels with its tolerance and pass
flag, and identical configurations serialize to identical bytes.

The JSON payload deliberately excludes wall-clock timings; those are
inherently jittery and would break the byte-for-byte determinism contract,
so they live on the in-memory report and in a sidecar file instead.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "CONVENTIONS",
    "SCHEMA_VERSION",
    "Check",
    "SuiteResult",
    "RunReport",
    "load_schema",
    "render_report",
    "write_csv",
]

SCHEMA_VERSION = 1

# Echoed into every report so a payload is interpretable on its own.
CONVENTIONS = {
    "orientation": "transverse axis first: the wall coordinate precedes the "
                   "tangential axes, and a collar's thin direction precedes "
                   "its cross-section",
    "character_normalization": "ch(F) = tr exp(iF/2pi); degree-2 coefficient "
                               "i/2pi",
    "zero_mode_convention": "spectral asymmetries use the reduced convention "
                            "(kernel dimension added); kernel window tau = "
                            "0.05 unless a config overrides it",
    "wall_sampling": "on-wall samples take the jump at its minus-side value "
                     "and the twist ramp at its plus-side value",
    "index_sign": "index = n_plus - n_minus under the chirality grading",
}


@dataclass
class Check:
    """One verified number: value, the residual actually compared, the
    tolerance it was compared against, and the verdict."""

    name: str
    value: float
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def from_residual(cls, name: str, value: float, residual: float,
                      tolerance: float) -> "Check":
        return cls(name=name, value=float(value), residual=float(residual),
                   tolerance=float(tolerance),
                   passed=bool(abs(residual) <= tolerance))

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value,
                "residual": self.residual, "tolerance": self.tolerance,
                "passed": self.passed}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed,
               "checks": [c.to_dict() for c in self.checks]}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class RunReport:
    config: dict
    suites: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def timings(self) -> dict:
        return {s.name: s.seconds for s in self.suites}

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "conventions": dict(CONVENTIONS),
            "suites": [s.to_dict() for s in self.suites],
            "passed": self.passed,
        }

    def json_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), indent=2, sort_keys=True)
                + "\n").encode("ascii")


def load_schema() -> dict:
    text = resources.files("wallindex").joinpath("data/report_schema.json") \
        .read_text(encoding="ascii")
    return json.loads(text)


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "pass" if x else "FAIL"
    if isinstance(x, float):
        return f"{x:+.6e}"
    return str(x)


def render_report(payload: dict) -> str:
    """Fixed-width text summary of a report payload; stable ordering, no
    volatile fields, so identical configs render to identical text."""
    lines = []
    lines.append(f"wall-index report (schema {payload['schema_version']})")
    cfg = payload.get("config", {})
    keys = sorted(cfg)
    if keys:
        lines.append("config: " + ", ".join(f"{k}={cfg[k]}" for k in keys))
    lines.append("")
    header = f"{'suite':<14}{'check':<38}{'value':>14}{'residual':>14}" \
             f"{'tolerance':>12}{'verdict':>9}"
    lines.append(header)
    lines.append("-" * len(header))
    for suite in payload.get("suites", []):
        if suite.get("error"):
            lines.append(f"{suite['name']:<14}{'(suite error: ' + suite['error'] + ')':<38}"
                         f"{'-':>14}{'-':>14}{'-':>12}{'FAIL':>9}")
            continue
        for chk in suite["checks"]:
            lines.append(f"{suite['name']:<14}{chk['name']:<38}"
                         f"{_fmt(chk['value']):>14}{_fmt(chk['residual']):>14}"
                         f"{chk['tolerance']:>12.1e}"
                         f"{_fmt(chk['passed']):>9}")
    lines.append("-" * len(header))
    lines.append(f"overall: {'pass' if payload.get('passed') else 'FAIL'}")
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows) -> None:
    """Plot data with full-precision floats and a fixed row order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, float) else x
                         for x in row])
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(buf.getvalue())
