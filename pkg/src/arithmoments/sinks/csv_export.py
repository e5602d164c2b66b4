import csv
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from arithmoments.empirical.distribution import EmpiricalDistribution
from arithmoments.models.domain import ComparisonReport, ConditionProfile, MomentReport
from arithmoments.sinks.json_export import format_float


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        text = format_float(float(value))
        return "" if text == "null" else text
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    return path


def export_moment_report(report: MomentReport, path: Path) -> Path:
    rows: List[List[Any]] = [[1, report.mean]]
    rows += [[u, report.moment(u)] for u in range(2, report.max_order + 1)]
    return write_csv(path, ["order", "value"], rows)


def export_comparisons(comparisons: Sequence[ComparisonReport], path: Path) -> Path:
    header = ["mode", "order", "empirical", "predicted", "ratio"]
    rows = [
        [comparison.mode.value, row.order, row.empirical, row.predicted, row.ratio]
        for comparison in comparisons
        for row in comparison.rows
    ]
    return write_csv(path, header, rows)


def export_profile(profile: ConditionProfile, path: Path) -> Path:
    kolmogorov: Sequence[Optional[float]] = profile.kolmogorov or [None] * len(profile.grid)
    rows = []
    for u, value, k in zip(profile.grid, profile.values, kolmogorov):
        rows.append([u, value, k, abs(value - k) if k is not None else None])
    return write_csv(path, ["u", "F_n", "K", "abs_diff"], rows)


def export_histogram(distribution: EmpiricalDistribution, path: Path) -> Path:
    """Bin left edge and count; the outlier tails are written with edges -inf and the upper range end."""
    if distribution.edges is None or distribution.counts is None:
        raise ValueError("distribution is not histogram-backed")
    rows: List[List[Any]] = [["-inf", distribution.below]]
    rows += [[edge, int(count)] for edge, count in zip(distribution.edges[:-1], distribution.counts)]
    rows.append([distribution.edges[-1], distribution.above])
    return write_csv(path, ["bin_left_edge", "count"], rows)


def export_samples(samples: np.ndarray, path: Path, max_rows: int) -> Path:
    """First max_rows samples in draw order."""
    head = samples[:max_rows]
    return write_csv(path, ["trial", "value"], ([i, float(v)] for i, v in enumerate(head)))


def export_rows(rows: Sequence[dict], path: Path) -> Path:
    if not rows:
        return write_csv(path, [], [])
    header = list(rows[0])
    return write_csv(path, header, ([row[key] for key in header] for row in rows))
