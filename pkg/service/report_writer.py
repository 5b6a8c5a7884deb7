import csv
import logging
import os
from typing import List, Sequence, Tuple, Union

import numpy as np

from model import EnsembleSummary, RunTrace, SummaryRow

logger = logging.getLogger(__name__)

TRACE_HEADER = ["iteration", "stage", "cost_sampled", "infidelity_exact", "cum_shots"]
SUMMARY_HEADER = ["x", "median", "q1", "q3"]


def format_float(value: float) -> str:
    return format(float(value), ".12g")


def summarize(values: Sequence[float]) -> Tuple[float, float, float]:
    """(median, Q1, Q3); numpy 기본 선형 보간 분위수"""
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise ValueError("cannot summarize an empty ensemble")
    q1, median, q3 = np.percentile(array, [25.0, 50.0, 75.0])
    return float(median), float(q1), float(q3)


def summary_row(x: float, values: Sequence[float], bp_flags: Sequence[bool] = None) -> SummaryRow:
    median, q1, q3 = summarize(values)
    bp_pct = None
    if bp_flags is not None:
        bp_pct = 100.0 * float(np.mean(np.asarray(bp_flags, dtype=np.float64))) if len(bp_flags) else 0.0
    return SummaryRow(x, median, q1, q3, bp_pct)


def series_path(path: str, series: str) -> str:
    """out.csv -> out.<series>.csv"""
    root, ext = os.path.splitext(path)
    return f"{root}.{series}{ext or '.csv'}"


def _open_writer(path: str):
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise OSError(f"output directory does not exist: {directory}")
    handle = open(path, "w", encoding="utf-8", newline="")
    return handle, csv.writer(handle, lineterminator="\n")


def _write_trace(trace: RunTrace, path: str) -> List[str]:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(TRACE_HEADER)
        for record in trace.records:
            writer.writerow([
                record.iteration,
                record.stage,
                format_float(record.cost_sampled),
                format_float(record.infidelity_exact),
                record.cum_shots,
            ])
    logger.info(f"Trace written - path={path}, rows={len(trace.records)}")
    return [path]


def _write_rows(rows: List[SummaryRow], with_bp: bool, path: str) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(SUMMARY_HEADER + (["bp_pct"] if with_bp else []))
        for row in rows:
            values = [format_float(row.x), format_float(row.median), format_float(row.q1), format_float(row.q3)]
            if with_bp:
                values.append(format_float(row.bp_pct if row.bp_pct is not None else 0.0))
            writer.writerow(values)


def _write_summary(summary: EnsembleSummary, path: str) -> List[str]:
    names = list(summary.series)
    # 시리즈가 하나(또는 없음)면 out 경로에 그대로, 여러 개면 시리즈별 파일
    if len(names) <= 1:
        _write_rows(summary.rows(names[0]) if names else [], summary.with_bp, path)
        written = [path]
    else:
        written = []
        for name in names:
            target = series_path(path, name)
            _write_rows(summary.rows(name), summary.with_bp, target)
            written.append(target)
    logger.info(f"Summary written - label={summary.label}, files={written}")
    return written


def write_csv(data: Union[RunTrace, EnsembleSummary], path: str) -> List[str]:
    """
    RunTrace 또는 EnsembleSummary 를 UTF-8 CSV 로 저장

    Returns:
        실제로 쓴 파일 경로 목록
    """
    if isinstance(data, RunTrace):
        return _write_trace(data, path)
    if isinstance(data, EnsembleSummary):
        return _write_summary(data, path)
    raise TypeError(f"cannot write {type(data).__name__} as CSV")
