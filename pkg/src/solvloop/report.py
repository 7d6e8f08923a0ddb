"""Check aggregation and deterministic JSON reports.

Reports must be byte-identical across reruns with the same configuration and
seed, so serialization is hand-rolled: floats are written with 17 significant
digits (enough to round-trip a double), keys keep insertion order, and
non-finite floats are rejected.  Wall time is recorded only on request for
the same reason.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

__all__ = [
    "SCHEMA_VERSION",
    "Check",
    "VerificationReport",
    "RunReport",
    "render_json",
    "emit_report",
]

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    status: str  # "pass", "warn" or "fail"
    max_error: Optional[float] = None
    n_samples: int = 0
    notes: str = ""

    def __post_init__(self) -> None:
        if self.status not in ("pass", "warn", "fail"):
            raise ValueError(f"invalid check status {self.status!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "max_error": self.max_error,
            "n_samples": self.n_samples,
            "notes": self.notes,
        }


def _combined_status(checks: list[Check]) -> str:
    if any(c.status == "fail" for c in checks):
        return "fail"
    if any(c.status == "warn" for c in checks):
        return "warn"
    return "pass"


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    seed: Optional[int] = None
    data: dict = field(default_factory=dict)

    def record(
        self,
        name: str,
        passed: bool,
        max_error: Optional[float] = None,
        n_samples: int = 0,
        notes: str = "",
        warn_only: bool = False,
    ) -> Check:
        """Append a check; warn_only downgrades a failure to a warning."""
        status = "pass" if passed else ("warn" if warn_only else "fail")
        check = Check(name, status, max_error, n_samples, notes)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(
                Check(prefix + c.name, c.status, c.max_error, c.n_samples, c.notes)
            )
        for key, value in other.data.items():
            self.data[prefix + key] = value

    @property
    def status(self) -> str:
        return _combined_status(self.checks)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }


@dataclass
class RunReport:
    """Top-level report written by the command line interface."""

    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    seed: Optional[int] = None
    data: dict = field(default_factory=dict)
    rng: str = "PCG64"
    wall_time_s: Optional[float] = None

    @classmethod
    def from_verification(
        cls,
        command: str,
        config: dict,
        verification: VerificationReport,
        wall_time_s: Optional[float] = None,
    ) -> "RunReport":
        return cls(
            command=command,
            config=config,
            checks=list(verification.checks),
            seed=verification.seed,
            data=dict(verification.data),
            wall_time_s=wall_time_s,
        )

    @property
    def status(self) -> str:
        return _combined_status(self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status,
            "config": self.config,
            "seed": self.seed,
            "rng": self.rng,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
            "wall_time_s": self.wall_time_s,
        }


def _render(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ValueError("non-finite float in report")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {_render(v, indent + 1)}" for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_render(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def render_json(value) -> str:
    return _render(value, 0) + "\n"


def emit_report(report, path: Optional[str]) -> None:
    """Write a report (anything with to_dict, or a plain dict) as UTF-8 JSON.

    path None or "-" writes to standard output.
    """
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    text = render_json(payload)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
