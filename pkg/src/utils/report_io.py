"""
수렴 결과 출력 / 읽기 (CSV, plot-data)
"""

import io
import logging
import sys
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

import numpy as np
import pandas as pd

from .config_models import REPORT_COLUMNS, ConvergenceReport, EmitFormat
from .errors import ReportIOError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def format_csv(report: ConvergenceReport) -> str:
    """
    CSV 문자열 (헤더 고정, 첫 행의 eoc는 빈 칸)

    Example:
        >>> print(format_csv(report).splitlines()[0])
        ell,N,h,value_re,value_im,abs_err,rel_err,eoc
    """
    missing = [c for c in REPORT_COLUMNS if c not in report.data.columns]
    if missing:
        raise ReportIOError(f"report is missing columns {missing}")
    buffer = io.StringIO()
    report.data[REPORT_COLUMNS].to_csv(buffer, index=False, float_format=FLOAT_FORMAT,
                                       na_rep="", lineterminator="\n")
    return buffer.getvalue()


def format_plot_data(reports: Union[ConvergenceReport, Iterable[ConvergenceReport]]) -> str:
    """
    외부 log-log 플롯용 2열 블록 (N, abs_err)

    각 series는 '# name' 주석 줄로 시작하고 빈 줄로 구분됩니다.
    """
    if isinstance(reports, ConvergenceReport):
        reports = [reports]
    blocks = []
    for report in reports:
        name = (report.metadata or {}).get("name", "series")
        lines = [f"# {name}"]
        for n, err in zip(report.data["N"], report.data["abs_err"]):
            lines.append(f"{int(n)} {FLOAT_FORMAT % float(err)}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def emit(report: ConvergenceReport, format: EmitFormat = EmitFormat.CSV,
         path: Optional[Union[str, Path]] = None, stream: Optional[TextIO] = None) -> None:
    """
    리포트 출력

    Args:
        report: ConvergenceReport
        format: EmitFormat.CSV | EmitFormat.PLOT_DATA
        path: 출력 파일 (None이면 stream 또는 stdout)
        stream: path가 없을 때 사용할 text stream

    Raises:
        ReportIOError: 경로에 쓸 수 없음
    """
    text = format_csv(report) if EmitFormat(format) is EmitFormat.CSV else format_plot_data(report)
    if path is None:
        (stream or sys.stdout).write(text)
        return
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc}") from exc
    logger.info("Wrote %s report to %s", EmitFormat(format).value, path)


def read_report(path: Union[str, Path]) -> ConvergenceReport:
    """
    emit()으로 쓴 CSV 읽기

    Raises:
        ReportIOError: 파일 없음 또는 헤더 불일치
    """
    path = Path(path)
    try:
        data = pd.read_csv(path, dtype={"ell": np.int64, "N": np.int64})
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise ReportIOError(f"cannot read report {path}: {exc}") from exc
    if list(data.columns) != REPORT_COLUMNS:
        raise ReportIOError(f"{path}: unexpected header {list(data.columns)}")
    return ConvergenceReport(data=data, metadata={"name": path.stem, "source": str(path)})
