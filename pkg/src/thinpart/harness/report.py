"""Report records and byte-stable persistence.

Reports carry no timestamps and serialize floats with 17 significant
digits, so a rerun with the same seed and worker count reproduces both
output files byte for byte.
"""

from __future__ import annotations

import json
import math
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .config import ExperimentConfig


@dataclass(frozen=True)
class Verdict:
    check: str
    passed: bool
    margin: float | None  # positive slack when passing; None when undefined


@dataclass
class ExperimentReport:
    experiment: str
    config: ExperimentConfig
    revision: str
    columns: tuple
    samples: list
    summary: dict
    verdicts: list

    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


_REVISION = None


def source_revision() -> str:
    global _REVISION
    if _REVISION is None:
        try:
            out = subprocess.run(
                ["git", "-C", str(Path(__file__).resolve().parent), "rev-parse", "HEAD"],
                capture_output=True,
                text=True,
                timeout=10,
            )
            _REVISION = out.stdout.strip() if out.returncode == 0 else "unknown"
        except (OSError, subprocess.SubprocessError):
            _REVISION = "unknown"
    return _REVISION


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"reports must not contain non-finite floats, got {x}")
    return format(float(x), ".17g")


def _emit(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [f"{inner}{json.dumps(str(k))}: {_emit(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        rows = [f"{inner}{_emit(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def render_report_json(report: ExperimentReport) -> str:
    doc = {
        "experiment": report.experiment,
        "config": report.config.to_json_dict(),
        "seed": report.config.seed,
        "revision": report.revision,
        "summary": report.summary,
        "verdicts": [
            {"check": v.check, "passed": v.passed, "margin": v.margin}
            for v in report.verdicts
        ],
    }
    return _emit(doc, 0) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise ValueError(f"csv cells must not contain separators: {value!r}")
        return value
    raise TypeError(f"cannot serialize {type(value).__name__} in a csv cell")


def render_samples_csv(report: ExperimentReport) -> str:
    lines = [",".join(report.columns)]
    for row in report.samples:
        if len(row) != len(report.columns):
            raise ValueError("sample row width disagrees with the header")
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_report(report: ExperimentReport, out_dir) -> tuple:
    out = Path(out_dir)
    json_path = out / "report.json"
    csv_path = out / "samples.csv"
    try:
        out.mkdir(parents=True, exist_ok=True)
        json_path.write_text(render_report_json(report), encoding="utf-8")
        csv_path.write_text(render_samples_csv(report), encoding="utf-8")
    except OSError as exc:
        raise RuntimeError(f"failed to write report under {out}: {exc}") from exc
    return json_path, csv_path
