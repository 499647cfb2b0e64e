"""Deterministic verification reports: typed check rows, CSV round-trip, merge.

A report is a list of checks, each carrying a pass flag, the worst witness
(base point, plane, value, bound) and a measured constant.  Serialization is
byte-stable: floats are written with ``repr`` (shortest round-trip form), the
configuration echo and hash ride in comment lines, and parsing a report and
re-serializing it reproduces the input exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import __version__

__all__ = [
    "CheckRow",
    "Check",
    "VerificationReport",
    "ConfigMismatch",
    "merge_reports",
    "report_to_csv",
    "parse_report",
    "config_hash",
    "rng_from_seed",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 0xC0FFEE


class ConfigMismatch(ValueError):
    """Reports built from different configurations cannot be merged."""


def rng_from_seed(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) so sampling is reproducible and
    order-independent across concurrent producers."""
    return np.random.Generator(np.random.Philox(int(seed)))


def config_hash(config: dict) -> str:
    text = ";".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _parse_float(s: str):
    return None if s == "" else float(s)


@dataclass(frozen=True)
class CheckRow:
    """Worst witness of a check: base point, plane, value against bound."""

    t: float | None = None
    x1: float | None = None
    x2: float | None = None
    mode: str = ""
    a: float | None = None
    value: float | None = None


@dataclass(frozen=True)
class Check:
    check_id: str
    passed: bool
    witness: CheckRow = field(default_factory=CheckRow)
    bound: float | None = None
    measured: float | None = None


@dataclass
class VerificationReport:
    checks: list[Check]
    config_echo: dict
    seed: int = DEFAULT_SEED
    version: str = __version__

    @property
    def hash(self) -> str:
        return config_hash(self.config_echo)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary_line(self) -> str:
        n_fail = sum(1 for c in self.checks if not c.passed)
        status = "PASS" if self.passed else "FAIL"
        return f"# summary: overall={status} checks={len(self.checks)} failed={n_fail}"

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def merge_reports(reports: list[VerificationReport]) -> VerificationReport:
    """Concatenate checks; all inputs must share the same config hash."""
    if not reports:
        raise ValueError("nothing to merge")
    h = reports[0].hash
    for r in reports[1:]:
        if r.hash != h:
            raise ConfigMismatch(f"config hash {r.hash} != {h}")
        if r.seed != reports[0].seed:
            raise ConfigMismatch(f"seed {r.seed} != {reports[0].seed}")
    checks = [c for r in reports for c in r.checks]
    return VerificationReport(checks, dict(reports[0].config_echo), reports[0].seed,
                              reports[0].version)


_COLUMNS = "check_id,t,x1,x2,mode,a,value,bound,pass,measured"


def report_to_csv(report: VerificationReport) -> str:
    lines = [
        f"# warpcollar-report version={report.version} config_hash={report.hash} "
        f"seed={report.seed}",
    ]
    for k in sorted(report.config_echo):
        lines.append(f"# config: {k}={report.config_echo[k]}")
    lines.append(_COLUMNS)
    for c in report.checks:
        w = c.witness
        lines.append(",".join([
            c.check_id, _fmt(w.t), _fmt(w.x1), _fmt(w.x2), w.mode, _fmt(w.a),
            _fmt(w.value), _fmt(c.bound), "1" if c.passed else "0", _fmt(c.measured),
        ]))
    lines.append(report.summary_line())
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> VerificationReport:
    lines = text.splitlines()
    header = lines[0]
    if not header.startswith("# warpcollar-report"):
        raise ValueError("not a warpcollar report")
    meta = dict(tok.split("=", 1) for tok in header.split()[2:])
    config: dict = {}
    checks: list[Check] = []
    for line in lines[1:]:
        if line.startswith("# config: "):
            k, v = line[len("# config: "):].split("=", 1)
            config[k] = v
        elif line.startswith("# summary") or line == _COLUMNS or not line:
            continue
        else:
            parts = line.split(",")
            checks.append(Check(
                check_id=parts[0],
                passed=parts[8] == "1",
                witness=CheckRow(
                    t=_parse_float(parts[1]), x1=_parse_float(parts[2]),
                    x2=_parse_float(parts[3]), mode=parts[4], a=_parse_float(parts[5]),
                    value=_parse_float(parts[6]),
                ),
                bound=_parse_float(parts[7]),
                measured=_parse_float(parts[9]),
            ))
    report = VerificationReport(checks, config, seed=int(meta["seed"]),
                                version=meta["version"])
    if report.hash != meta["config_hash"]:
        raise ValueError("config hash does not match echoed configuration")
    return report
