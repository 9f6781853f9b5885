"""Check reports and their json_lines / text_table renderings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from qcheck.core.digest import canonical_json

OUTPUT_FORMATS = ("json_lines", "text_table")


@dataclass
class CheckReport:
    check_id: str
    params: dict[str, Any] = field(default_factory=dict)
    passed: bool = True
    witness_digest: str = ""
    elapsed_ms: int = 0
    detail_path: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "params": self.params,
            "pass": self.passed,
            "witness_digest": self.witness_digest,
            "elapsed_ms": self.elapsed_ms,
            "detail_path": self.detail_path,
        }


def _format_params(params: dict[str, Any]) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items()) or "-"


def _text_table(reports: list[CheckReport]) -> str:
    header = ("STATUS", "CHECK", "PARAMS", "MS", "DIGEST")
    rows = [
        (
            "ok" if r.passed else "FAIL",
            r.check_id,
            _format_params(r.params),
            str(r.elapsed_ms),
            r.witness_digest[:16],
        )
        for r in reports
    ]
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]
    failed = sum(1 for r in reports if not r.passed)
    lines.append(f"{len(reports)} checks: {len(reports) - failed} passed, {failed} failed")
    for r in reports:
        if r.detail_path:
            lines.append(f"witness for {r.check_id} {_format_params(r.params)}: {r.detail_path}")
    return "\n".join(lines) + "\n"


def format_report(reports: list[CheckReport], fmt: str = "json_lines") -> str:
    """Render ``reports``; json_lines gives one compact sorted-key JSON object per line."""
    if fmt == "json_lines":
        return "".join(canonical_json(r.to_dict()) + "\n" for r in reports)
    if fmt == "text_table":
        return _text_table(reports)
    raise ValueError(f"unknown output format {fmt!r}")
