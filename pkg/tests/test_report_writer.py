import numpy as np
import pytest

from model import EnsembleSummary, RunTrace, SummaryRow
from service.report_writer import format_float, series_path, summarize, summary_row, write_csv


def _sorted_quartiles(values):
    # 선형 보간 분위수를 정렬로 직접 계산
    ordered = sorted(values)
    last = len(ordered) - 1

    def quantile(q):
        position = q * last
        lower = int(np.floor(position))
        upper = min(lower + 1, last)
        return ordered[lower] + (position - lower) * (ordered[upper] - ordered[lower])

    return quantile(0.5), quantile(0.25), quantile(0.75)


@pytest.mark.parametrize("size", [1, 2, 5, 20])
def test_summarize_matches_sorting(size, rng):
    values = rng.generator.uniform(0.0, 1.0, size).tolist()
    assert summarize(values) == pytest.approx(_sorted_quartiles(values))


def test_summarize_rejects_empty_input():
    with pytest.raises(ValueError):
        summarize([])


def test_summary_row_bp_percentage():
    row = summary_row(0.5, [0.2, 0.95, 0.99, 0.4], [False, True, True, False])
    assert row.bp_pct == pytest.approx(50.0)
    assert summary_row(0.5, [0.2]).bp_pct is None


def test_format_float():
    assert format_float(0.5) == "0.5"
    assert format_float(1.0 / 3.0) == "0.333333333333"
    assert format_float(2048) == "2048"


def test_series_path():
    assert series_path("/tmp/out.csv", "ivdge") == "/tmp/out.ivdge.csv"
    assert series_path("/tmp/out", "vdge") == "/tmp/out.vdge.csv"


def test_trace_rows(tmp_path):
    trace = RunTrace("ivdge", 3)
    trace.append("local", 0.25, 0.5, 128)
    trace.append("global", 0.125, 0.5, 512)
    path = tmp_path / "trace.csv"
    assert write_csv(trace, str(path)) == [str(path)]
    assert path.read_text(encoding="utf-8") == (
        "iteration,stage,cost_sampled,infidelity_exact,cum_shots\n"
        "1,local,0.25,0.5,128\n"
        "2,global,0.125,0.5,640\n"
    )


def test_empty_summary_writes_header_only(tmp_path):
    path = tmp_path / "summary.csv"
    assert write_csv(EnsembleSummary("empty"), str(path)) == [str(path)]
    assert path.read_text(encoding="utf-8") == "x,median,q1,q3\n"


def test_multi_series_summary_writes_one_file_per_series(tmp_path):
    summary = EnsembleSummary("sweep-s", with_bp=True)
    summary.add_row("vdge", SummaryRow(0.0, 0.5, 0.4, 0.6, 10.0))
    summary.add_row("ivdge", SummaryRow(0.0, 0.45, 0.4, 0.5, 0.0))
    path = tmp_path / "sweep.csv"
    written = write_csv(summary, str(path))
    assert written == [str(tmp_path / "sweep.vdge.csv"), str(tmp_path / "sweep.ivdge.csv")]
    assert (tmp_path / "sweep.vdge.csv").read_text(encoding="utf-8") == (
        "x,median,q1,q3,bp_pct\n"
        "0,0.5,0.4,0.6,10\n"
    )
    assert not path.exists()


def test_missing_directory_raises(tmp_path):
    with pytest.raises(OSError):
        write_csv(RunTrace("vdge", 2), str(tmp_path / "missing" / "trace.csv"))


def test_unknown_data_type_raises(tmp_path):
    with pytest.raises(TypeError):
        write_csv([1, 2, 3], str(tmp_path / "x.csv"))
