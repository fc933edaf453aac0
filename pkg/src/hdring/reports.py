"""Machine-readable verification reports."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .ring import Element
from .serialize import to_json_obj, to_text


@dataclass
class CheckResult:
    """One verified identity: grid cell, check name, outcome, and the
    residual element when the identity fails."""

    name: str
    r: int | None = None
    s: int | None = None
    passed: bool = True
    residual: Element | None = None
    prime: int | None = None
    detail: str | None = None

    def to_obj(self) -> dict:
        obj: dict = {"check": self.name, "pass": self.passed}
        if self.r is not None:
            obj["r"] = self.r
        if self.s is not None:
            obj["s"] = self.s
        if self.prime is not None:
            obj["prime"] = self.prime
        if self.detail is not None:
            obj["detail"] = self.detail
        if self.residual is not None and not self.residual.is_zero():
            obj["residual"] = to_json_obj(self.residual)
        return obj


def all_passed(results: list[CheckResult]) -> bool:
    return all(res.passed for res in results)


def report_json(results: list[CheckResult], header: dict | None = None) -> str:
    payload = {"header": header or {}, "checks": [r.to_obj() for r in results]}
    payload["pass"] = all_passed(results)
    return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def report_lines(results: list[CheckResult]) -> list[str]:
    lines = []
    for res in results:
        cell = ""
        if res.r is not None or res.s is not None:
            cell = f" (r={res.r},s={res.s})"
        if res.prime is not None:
            cell += f" p={res.prime}"
        status = "pass" if res.passed else "FAIL"
        extra = ""
        if not res.passed and res.residual is not None:
            extra = f" residual: {to_text(res.residual)}"
        if res.detail and not res.passed:
            extra += f" [{res.detail}]"
        lines.append(f"{status} {res.name}{cell}{extra}")
    return lines


def report_csv_rows(results: list[CheckResult]) -> list[list[str]]:
    rows = [["check", "r", "s", "prime", "pass", "residual"]]
    for res in results:
        rows.append(
            [
                res.name,
                "" if res.r is None else str(res.r),
                "" if res.s is None else str(res.s),
                "" if res.prime is None else str(res.prime),
                "1" if res.passed else "0",
                "" if res.residual is None or res.residual.is_zero() else to_text(res.residual),
            ]
        )
    return rows
