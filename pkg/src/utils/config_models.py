"""
Configuration models using dataclasses
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Dict, List
from enum import Enum
import pandas as pd


# CSV 헤더 순서 (변경 금지)
REPORT_COLUMNS = ["ell", "N", "h", "value_re", "value_im", "abs_err", "rel_err", "eoc"]


class DiamProvenance(Enum):
    """Attractor 직경 출처"""
    EXACT = "exact-user-supplied"
    HULL = "hull-approximated"


class KernelType(Enum):
    """수렴 연구 대상 적분 종류"""
    PHI_T = "phi_t"
    PHI_T_FIXED_POINT = "phi_t_fixed_point"
    HELMHOLTZ = "helmholtz"
    SMOOTH = "smooth"
    SMOOTH_DOUBLE = "smooth_double"


class EmitFormat(Enum):
    """리포트 출력 형식"""
    CSV = "csv"
    PLOT_DATA = "plot-data"


@dataclass
class ExperimentConfig:
    """
    수렴 연구 설정

    Attributes:
        preset: 프리셋 이름 (inline maps와 택일)
        rho: 프리셋 파라미터 (cantor, cantor-dust 등)
        maps: inline IFS 정의 [{ratio, translation, rotation|angle, reflect}]
        ambient_dim: inline IFS의 공간 차원 n
        measure: μ(Γ) override
        diam: diam(Γ) override
        kernel: 적분 종류
        t: Φ_t 지수
        m: fixed point 번호 (1..M)
        k: Helmholtz wavenumber
        n: screen 차원 (None이면 ambient_dim)
        c_osc: 진동 임계값
        function: smooth 적분용 함수 이름
        c: smooth 함수 파라미터
        levels: 연구 레벨 ℓ 목록
        h_values: 연구 h 목록 (levels 대신)
        reference_level: 기준해 레벨 (None이면 exact_value 필요)
        exact_value: 정확한 적분값
        output_path: 출력 경로 (None이면 stdout)
        emit_format: csv | plot-data
        symmetry: 대칭 절반 계산 사용 여부
        strict: 전제조건 위반 시 warning 대신 오류
        workers: 스레드 수 (None이면 환경변수/코어 수)
        name: 연구 이름
    """
    preset: Optional[str] = None
    rho: Optional[float] = None
    maps: Optional[List[Dict]] = None
    ambient_dim: Optional[int] = None
    measure: Optional[float] = None
    diam: Optional[float] = None
    kernel: KernelType = KernelType.PHI_T
    t: float = 0.0
    m: int = 1
    k: float = 5.0
    n: Optional[int] = None
    c_osc: float = 2 * math.pi
    function: str = "cos"
    c: float = 1.0
    levels: List[int] = field(default_factory=list)
    h_values: List[float] = field(default_factory=list)
    reference_level: Optional[int] = None
    exact_value: Optional[complex] = None
    output_path: Optional[str] = None
    emit_format: EmitFormat = EmitFormat.CSV
    symmetry: bool = True
    strict: bool = False
    workers: Optional[int] = None
    name: str = ""


@dataclass
class ConvergenceReport:
    """
    수렴 연구 결과

    Attributes:
        data: REPORT_COLUMNS 순서의 레벨별 결과 DataFrame
        metadata: preset, kernel, reference value, wall time 등
    """
    data: pd.DataFrame
    metadata: Optional[Dict] = field(default_factory=dict)

    @property
    def reference_value(self) -> Optional[complex]:
        ref = (self.metadata or {}).get("reference_value")
        return None if ref is None else complex(ref)
