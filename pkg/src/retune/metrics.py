"""Position-change quality metrics and the report export.

Per evaluation: delta = position_after - position_before (negative = the
result moved up). Per session: the sum of deltas plus a derived
mean_improvement = -sum/count, so the headline "how much did results climb
on average" keeps the raw sign convention intact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from retune.feedback import EvaluationRecord

REPORT_HEADER = ("evaluation_id", "p_before", "delta")


@dataclass(frozen=True)
class PositionDelta:
    evaluation_id: int
    doc_id: int
    p_before: int
    p_after: int
    delta: int


@dataclass(frozen=True)
class SessionReport:
    deltas: tuple[PositionDelta, ...]
    total: int
    count: int
    mean_improvement: float


def delta(p_before: int, p_after: int) -> int:
    if p_before < 1 or p_after < 1:
        raise ValueError("positions are 1-based")
    return p_after - p_before


def session_report(records: Iterable[EvaluationRecord]) -> SessionReport:
    deltas = tuple(
        PositionDelta(r.evaluation_id, r.doc_id, r.p_before, r.p_after, r.delta)
        for r in records
    )
    total = sum(d.delta for d in deltas)
    count = len(deltas)
    mean = (-total) / count if count else 0.0
    return SessionReport(deltas=deltas, total=total, count=count, mean_improvement=mean)


def export_report(records: Iterable[EvaluationRecord], destination: str | Path) -> None:
    """Write the per-evaluation CSV: one (p_before, delta) row per evaluation,
    in chronological order, LF line endings."""
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(REPORT_HEADER)
            for r in records:
                writer.writerow((r.evaluation_id, r.p_before, r.delta))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
