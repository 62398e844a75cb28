"""Verification report records and CSV/JSON emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


CSV_HEADER = "check,n,params,residual,tolerance,pass,runtime_ms"


@dataclass
class VerificationReport:
    check: str
    n: int
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float
    metadata: dict = field(default_factory=dict)

    def finalized(self, tolerance: float) -> "VerificationReport":
        """Pin the tolerance and recompute the verdict."""
        self.tolerance = float(tolerance)
        self.passed = bool(self.residual <= self.tolerance)
        return self

    def csv_row(self, params_str: str) -> str:
        return ",".join([
            self.check, str(self.n), params_str, repr(float(self.residual)),
            repr(float(self.tolerance)), str(self.passed).lower(),
            f"{self.runtime_ms:.1f}",
        ])

    def to_json(self) -> dict:
        return {
            "check": self.check, "n": self.n, "residual": self.residual,
            "tolerance": self.tolerance, "pass": self.passed,
            "runtime_ms": self.runtime_ms, "metadata": self.metadata,
        }


def params_string(params) -> str:
    f = params.to_json()
    def fmt(key):
        re, im = f[key]
        return f"{key}={re!r}{'+' if im >= 0 else '-'}{abs(im)!r}j"
    return ";".join(fmt(k) for k in ("omega1", "omega2", "g"))


def write_csv(path, reports, params) -> None:
    pstr = params_string(params)
    lines = [CSV_HEADER] + [r.csv_row(pstr) for r in reports]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path, reports, params, config_echo=None) -> None:
    doc = {
        "params": params.to_json(),
        "config": config_echo or {},
        "reports": [r.to_json() for r in reports],
        "all_pass": all(r.passed for r in reports),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)
