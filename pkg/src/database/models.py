"""
SQLAlchemy ORM Models for the convergence results store

Tables:
- study_runs: 수렴 연구 실행 (attractor, kernel, reference value)
- level_results: 레벨별 결과 (N, h, 값, 오차, EOC)
"""

from datetime import datetime
from typing import List, Optional

from sqlalchemy import (
    CheckConstraint, DateTime, Float, ForeignKey, Index, Integer, String, UniqueConstraint
)
from sqlalchemy.orm import Mapped, declarative_base, mapped_column, relationship

Base = declarative_base()


class StudyRun(Base):
    """
    수렴 연구 실행

    하나의 attractor / kernel 조합에 대한 레벨 스윕
    예: "cantor-k5-rho1/3"
    """
    __tablename__ = "study_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    name: Mapped[str] = mapped_column(String(255), nullable=False)
    preset: Mapped[str] = mapped_column(String(100), nullable=False)
    kernel: Mapped[str] = mapped_column(
        String(30),
        CheckConstraint(
            "kernel IN ('phi_t', 'phi_t_fixed_point', 'helmholtz', 'smooth', 'smooth_double')"
        ),
        nullable=False
    )
    rho: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    dim: Mapped[float] = mapped_column(Float, nullable=False)  # Hausdorff dimension d
    measure: Mapped[float] = mapped_column(Float, nullable=False)  # μ(Γ)
    diam: Mapped[float] = mapped_column(Float, nullable=False)
    reference_re: Mapped[float] = mapped_column(Float, nullable=False)
    reference_im: Mapped[float] = mapped_column(Float, nullable=False, default=0.0)
    reference_level: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)  # None: exact value
    wall_time: Mapped[Optional[float]] = mapped_column(Float, nullable=True)  # s
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    # Relationships
    levels: Mapped[List["LevelResult"]] = relationship(
        "LevelResult", back_populates="run", cascade="all, delete-orphan"
    )

    __table_args__ = (
        Index("idx_study_runs_name", "name"),
        Index("idx_study_runs_preset_kernel", "preset", "kernel"),
    )

    @property
    def reference_value(self) -> complex:
        return complex(self.reference_re, self.reference_im)

    def __repr__(self) -> str:
        return f"<StudyRun(id={self.id}, name='{self.name}', kernel='{self.kernel}')>"


class LevelResult(Base):
    """
    레벨별 결과

    CSV 한 줄에 대응 (ell, N, h, value, abs_err, rel_err, eoc)
    """
    __tablename__ = "level_results"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(
        Integer, ForeignKey("study_runs.id", ondelete="CASCADE"), nullable=False
    )
    ell: Mapped[int] = mapped_column(Integer, nullable=False)
    n_nodes: Mapped[int] = mapped_column(Integer, CheckConstraint("n_nodes >= 1"), nullable=False)  # |L_h|
    h: Mapped[float] = mapped_column(Float, CheckConstraint("h > 0"), nullable=False)
    value_re: Mapped[float] = mapped_column(Float, nullable=False)
    value_im: Mapped[float] = mapped_column(Float, nullable=False, default=0.0)
    abs_err: Mapped[float] = mapped_column(Float, nullable=False)
    rel_err: Mapped[Optional[float]] = mapped_column(Float, nullable=True)
    eoc: Mapped[Optional[float]] = mapped_column(Float, nullable=True)  # 첫 행은 NULL

    # Relationships
    run: Mapped["StudyRun"] = relationship("StudyRun", back_populates="levels")

    __table_args__ = (
        UniqueConstraint("run_id", "h", name="uq_level_results_run_h"),
        Index("idx_level_results_run", "run_id"),
    )

    def __repr__(self) -> str:
        return (
            f"<LevelResult(id={self.id}, run_id={self.run_id}, "
            f"ell={self.ell}, N={self.n_nodes}, abs_err={self.abs_err:.3e})>"
        )
