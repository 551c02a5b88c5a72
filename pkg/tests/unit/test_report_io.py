"""
리포트 출력 단위 테스트

CSV 헤더 / 빈 EOC, plot-data 블록, 파일 쓰기 / 읽기 오류
"""

import io
import math
import os
import sys

import numpy as np
import pandas as pd
import pytest

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.utils.config_models import REPORT_COLUMNS, ConvergenceReport, EmitFormat
from src.utils.errors import ReportIOError
from src.utils.report_io import emit, format_csv, format_plot_data, read_report


@pytest.fixture
def report():
    """세 레벨짜리 리포트"""
    data = pd.DataFrame({
        "ell": [2, 3, 4],
        "N": [4, 8, 16],
        "h": [1 / 9, 1 / 27, 1 / 81],
        "value_re": [-1.2, -1.3, -1.32],
        "value_im": [0.0, 0.0, 0.0],
        "abs_err": [0.12, 0.02, 0.002],
        "rel_err": [0.09, 0.015, 0.0015],
        "eoc": [np.nan, 1.63, 2.1],
    })
    return ConvergenceReport(data=data, metadata={"name": "cantor-test", "reference_value": -1.322})


class TestFormatCsv:
    """CSV 형식"""

    def test_header(self, report):
        lines = format_csv(report).splitlines()
        assert lines[0] == ",".join(REPORT_COLUMNS)
        assert len(lines) == 4

    def test_first_eoc_blank(self, report):
        first = format_csv(report).splitlines()[1]
        assert first.endswith(",")
        assert first.startswith("2,4,")

    def test_full_precision(self, report):
        row = format_csv(report).splitlines()[2].split(",")
        assert float(row[2]) == 1 / 27

    def test_missing_column(self, report):
        broken = ConvergenceReport(data=report.data.drop(columns=["eoc"]))
        with pytest.raises(ReportIOError, match="eoc"):
            format_csv(broken)


class TestPlotData:
    """plot-data 형식"""

    def test_single_series(self, report):
        lines = format_plot_data(report).splitlines()
        assert lines[0] == "# cantor-test"
        n, err = lines[1].split()
        assert n == "4"
        assert float(err) == 0.12
        assert len(lines) == 4

    def test_several_series(self, report):
        other = ConvergenceReport(data=report.data.copy(), metadata={"name": "other"})
        blocks = format_plot_data([report, other]).strip().split("\n\n")
        assert len(blocks) == 2
        assert blocks[1].startswith("# other")


class TestEmitAndRead:
    """파일 쓰기 / 읽기"""

    def test_stream(self, report):
        stream = io.StringIO()
        emit(report, EmitFormat.CSV, stream=stream)
        assert stream.getvalue() == format_csv(report)

    def test_stdout(self, report, capsys):
        emit(report, EmitFormat.PLOT_DATA)
        assert capsys.readouterr().out.startswith("# cantor-test")

    def test_round_trip(self, report, tmp_path):
        path = tmp_path / "nested" / "cantor.csv"
        emit(report, EmitFormat.CSV, path=path)
        loaded = read_report(path)
        assert list(loaded.data.columns) == REPORT_COLUMNS
        assert loaded.data["N"].tolist() == [4, 8, 16]
        assert math.isnan(loaded.data["eoc"].iloc[0])
        np.testing.assert_array_equal(loaded.data["h"].to_numpy(), report.data["h"].to_numpy())
        assert loaded.metadata["name"] == "cantor"

    def test_format_by_value(self, report, tmp_path):
        path = tmp_path / "cantor.dat"
        emit(report, "plot-data", path=path)
        assert path.read_text(encoding="utf-8").startswith("#")

    def test_unwritable_path(self, report, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(ReportIOError):
            emit(report, EmitFormat.CSV, path=blocker / "report.csv")

    def test_read_missing(self, tmp_path):
        with pytest.raises(ReportIOError):
            read_report(tmp_path / "missing.csv")

    def test_read_wrong_header(self, tmp_path):
        path = tmp_path / "wrong.csv"
        path.write_text("ell,N,h\n1,2,0.5\n", encoding="utf-8")
        with pytest.raises(ReportIOError, match="header"):
            read_report(path)

    def test_report_io_error_is_os_error(self, tmp_path):
        with pytest.raises(OSError):
            read_report(tmp_path / "missing.csv")


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
