"""Experiment report rows and deterministic CSV output."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field

from .. import __version__

COLUMNS = ("X", "empirical_sum", "predicted_main", "ratio", "secondary_constant_variant", "wall_time")


@dataclass(frozen=True)
class ReportRow:
    X: float
    empirical_sum: float
    predicted_main: float
    ratio: float
    secondary_constant_variant: str
    wall_time: float


@dataclass
class ExperimentReport:
    rows: list[ReportRow] = field(default_factory=list)
    # form, theorem, seed, region, ...
    metadata: dict[str, str] = field(default_factory=dict)

    def extend(self, other: ExperimentReport) -> None:
        self.rows.extend(other.rows)
        for k, v in other.metadata.items():
            self.metadata.setdefault(k, v)


def _fmt(x: float) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    buf.write(f"# qprime {__version__}\n")
    for k in sorted(report.metadata):
        buf.write(f"# {k}={report.metadata[k]}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in report.rows:
        w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def emit_report(report: ExperimentReport, path: str | os.PathLike) -> None:
    """Write the report as CSV with a version stamp and metadata comments."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(report_csv(report))


def read_report(path: str | os.PathLike) -> ExperimentReport:
    meta: dict[str, str] = {}
    lines = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k] = v
            else:
                lines.append(line)
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError("unexpected report header")
    rows = [
        ReportRow(
            float(d["X"]),
            float(d["empirical_sum"]),
            float(d["predicted_main"]),
            float(d["ratio"]),
            d["secondary_constant_variant"],
            float(d["wall_time"]),
        )
        for d in reader
    ]
    return ExperimentReport(rows, meta)
