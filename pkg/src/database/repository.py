"""
Repository Pattern for Database Operations

Provides a clean interface for storing and reading convergence studies.
"""

import math
from typing import List, Optional

import pandas as pd
from sqlalchemy import select
from sqlalchemy.orm import Session

from ..utils.config_models import REPORT_COLUMNS, ConvergenceReport
from .models import LevelResult, StudyRun


def _optional(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


class StudyRunRepository:
    """Repository for StudyRun operations"""

    def __init__(self, session: Session):
        self.session = session

    def create(self, name: str, preset: str, kernel: str, dim: float, measure: float,
               diam: float, reference_value: complex, **kwargs) -> StudyRun:
        """Create new study run"""
        reference_value = complex(reference_value)
        run = StudyRun(
            name=name, preset=preset, kernel=kernel, dim=dim, measure=measure, diam=diam,
            reference_re=reference_value.real, reference_im=reference_value.imag, **kwargs
        )
        self.session.add(run)
        self.session.flush()
        return run

    def get_by_id(self, run_id: int) -> Optional[StudyRun]:
        """Get study run by ID"""
        return self.session.get(StudyRun, run_id)

    def get_by_name(self, name: str) -> List[StudyRun]:
        """All runs with this name, newest first"""
        stmt = select(StudyRun).where(StudyRun.name == name).order_by(StudyRun.id.desc())
        return list(self.session.scalars(stmt))

    def get_all(self) -> List[StudyRun]:
        """Get all study runs"""
        stmt = select(StudyRun).order_by(StudyRun.created_at.desc(), StudyRun.id.desc())
        return list(self.session.scalars(stmt))

    def delete(self, run: StudyRun) -> None:
        """Delete study run (cascades to level_results)"""
        self.session.delete(run)
        self.session.flush()


class LevelResultRepository:
    """Repository for LevelResult operations"""

    def __init__(self, session: Session):
        self.session = session

    def create_from_dataframe(self, run_id: int, df: pd.DataFrame) -> List[LevelResult]:
        """
        Create level rows from a report DataFrame

        Args:
            run_id: StudyRun ID
            df: DataFrame with REPORT_COLUMNS

        Returns:
            List of created LevelResult
        """
        entries = [
            LevelResult(
                run_id=run_id,
                ell=int(row["ell"]),
                n_nodes=int(row["N"]),
                h=float(row["h"]),
                value_re=float(row["value_re"]),
                value_im=float(row["value_im"]),
                abs_err=float(row["abs_err"]),
                rel_err=_optional(row["rel_err"]),
                eoc=_optional(row["eoc"]),
            )
            for _, row in df.iterrows()
        ]
        self.session.add_all(entries)
        self.session.flush()
        return entries

    def get_by_run(self, run_id: int) -> List[LevelResult]:
        """Level rows of a run, coarsest first"""
        stmt = select(LevelResult).where(LevelResult.run_id == run_id).order_by(LevelResult.h.desc())
        return list(self.session.scalars(stmt))

    def get_convergence_table(self, run_id: int) -> pd.DataFrame:
        """
        Level rows as a DataFrame with the CSV column names

        Returns:
            DataFrame with REPORT_COLUMNS (NULL → NaN)
        """
        rows = [
            {
                "ell": r.ell,
                "N": r.n_nodes,
                "h": r.h,
                "value_re": r.value_re,
                "value_im": r.value_im,
                "abs_err": r.abs_err,
                "rel_err": r.rel_err if r.rel_err is not None else float("nan"),
                "eoc": r.eoc if r.eoc is not None else float("nan"),
            }
            for r in self.get_by_run(run_id)
        ]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def save_report(session: Session, report: ConvergenceReport) -> StudyRun:
    """
    Persist a ConvergenceReport as one StudyRun with its LevelResult rows

    Example:
        >>> with session_scope() as session:
        ...     run = save_report(session, report)
    """
    meta = report.metadata or {}
    run = StudyRunRepository(session).create(
        name=meta.get("name", "study"),
        preset=meta.get("preset", "inline"),
        kernel=meta.get("kernel", "phi_t"),
        dim=float(meta.get("dim", float("nan"))),
        measure=float(meta.get("measure", float("nan"))),
        diam=float(meta.get("diam", float("nan"))),
        reference_value=report.reference_value if report.reference_value is not None else 0j,
        rho=meta.get("rho"),
        reference_level=meta.get("reference_level"),
        wall_time=meta.get("wall_time"),
    )
    LevelResultRepository(session).create_from_dataframe(run.id, report.data)
    return run
