"""
Base Oracle Comparator

Template Method Pattern for comparing the quadrature rules with independent
reference values (deep-level naive rules, scipy Hankel functions).
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from ..core.hankel import hankel1_0, hankel1_1
from ..core.ifs import h_for_level
from ..core.kernel_phi_t import integrate_phi_t_at_fixed_point, integrate_phi_t_double
from ..core.presets import preset
from ..reference.oracles import hankel_oracle, naive_double_oracle, naive_single_oracle
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

# oracle level above the rule level
ORACLE_LEVEL_OFFSET = 7


@dataclass
class OracleComparisonConfig:
    """
    Configuration for rule-vs-oracle validation

    Attributes:
        preset: attractor preset name
        rho: preset parameter
        t: Φ_t exponent
        m: fixed point number (single-integral comparisons)
        level: rule level; the rule runs at h = diam·ρ_max^level
        oracle_level: oracle level (default level + 7)
        z_min, z_max, points: log grid of the Hankel comparison
        tolerance: relative tolerance (default per comparator)
    """
    preset: str = "cantor"
    rho: Optional[float] = None
    t: float = 0.0
    m: int = 1
    level: int = 3
    oracle_level: Optional[int] = None
    z_min: float = 1e-2
    z_max: float = 1e2
    points: int = 200
    tolerance: Optional[float] = None


@dataclass
class OracleComparisonResult:
    """Results of rule vs oracle comparison"""
    # Summary metrics
    total_comparisons: int
    within_tolerance: int
    max_rel_deviation: float
    max_abs_deviation: float
    tolerance: float

    # Overall result
    passed: bool
    message: str

    # Per-point rule / oracle values
    details: pd.DataFrame = field(repr=False)

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON export"""
        total = max(self.total_comparisons, 1)
        return {
            "summary": {
                "passed": self.passed,
                "message": self.message,
                "within_tolerance": self.within_tolerance,
                "total_comparisons": self.total_comparisons,
                "match_percentage": f"{(self.within_tolerance / total * 100):.2f}%",
                "max_rel_deviation": self.max_rel_deviation,
                "max_abs_deviation": self.max_abs_deviation,
                "tolerance": self.tolerance,
            },
        }


class BaseOracleComparator(ABC):
    """
    Base class for oracle comparison using Template Method Pattern

    compare():
    1. Run rule and oracle
    2. Pointwise relative deviations
    3. Pass / fail metrics
    """

    def __init__(self, config: OracleComparisonConfig):
        self.config = config
        self.tolerance = config.tolerance if config.tolerance is not None else self._default_tolerance()

    @abstractmethod
    def _run_rule(self) -> np.ndarray:
        """
        Values of the implementation under test

        Returns:
            complex array
        """
        pass

    @abstractmethod
    def _run_oracle(self) -> np.ndarray:
        """
        Reference values, same shape as _run_rule()
        """
        pass

    @abstractmethod
    def _default_tolerance(self) -> float:
        pass

    @property
    def oracle_level(self) -> int:
        if self.config.oracle_level is not None:
            return self.config.oracle_level
        return self.config.level + ORACLE_LEVEL_OFFSET

    def compare(self) -> OracleComparisonResult:
        """
        Main comparison pipeline

        Returns:
            OracleComparisonResult with per-point details
        """
        # Step 1: Run both
        try:
            rule = np.atleast_1d(np.asarray(self._run_rule(), dtype=complex))
            oracle = np.atleast_1d(np.asarray(self._run_oracle(), dtype=complex))
        except Exception as e:
            logger.exception("comparison failed")
            return OracleComparisonResult(
                total_comparisons=0, within_tolerance=0,
                max_rel_deviation=float("nan"), max_abs_deviation=float("nan"),
                tolerance=self.tolerance, passed=False,
                message=f"Execution error: {e}", details=pd.DataFrame(),
            )
        if rule.shape != oracle.shape:
            raise ValueError(f"shape mismatch: {rule.shape} vs {oracle.shape}")

        # Step 2: Deviations
        details = self._compare_values(rule, oracle)

        # Step 3: Metrics
        return self._calculate_metrics(details)

    def _compare_values(self, rule: np.ndarray, oracle: np.ndarray) -> pd.DataFrame:
        abs_dev = np.abs(rule - oracle)
        scale = np.abs(oracle)
        rel_dev = np.where(scale > 0, abs_dev / np.where(scale > 0, scale, 1.0), abs_dev)
        return pd.DataFrame({
            "rule_re": rule.real,
            "rule_im": rule.imag,
            "oracle_re": oracle.real,
            "oracle_im": oracle.imag,
            "abs_dev": abs_dev,
            "rel_dev": rel_dev,
            "match": rel_dev <= self.tolerance,
        })

    def _calculate_metrics(self, details: pd.DataFrame) -> OracleComparisonResult:
        total = len(details)
        within = int(details["match"].sum())
        max_rel = float(details["rel_dev"].max())
        passed = within == total
        if passed:
            message = f"PASSED: all {total} values within rel. tol {self.tolerance:.1e}"
        else:
            message = f"FAILED: {total - within} / {total} values exceed rel. tol {self.tolerance:.1e}"
        return OracleComparisonResult(
            total_comparisons=total,
            within_tolerance=within,
            max_rel_deviation=max_rel,
            max_abs_deviation=float(details["abs_dev"].max()),
            tolerance=self.tolerance,
            passed=passed,
            message=message,
            details=details,
        )

    def print_report(self, result: OracleComparisonResult) -> None:
        """
        Print comparison report

        Args:
            result: OracleComparisonResult to report
        """
        print("\n" + "=" * 70)
        print(f"=== {type(self).__name__} Report ===")
        print("=" * 70)

        print("\nConfiguration:")
        print(f"  Preset: {self.config.preset} (ρ={self.config.rho if self.config.rho is not None else 'default'})")
        print(f"  t: {self.config.t}  m: {self.config.m}")
        print(f"  Rule level: {self.config.level}  Oracle level: {self.oracle_level}")

        print("\nComparison:")
        print(f"  Values:            {result.total_comparisons}")
        print(f"  Within Tolerance:  {result.within_tolerance}")
        print(f"  Max Rel Deviation: {result.max_rel_deviation:.3e}")
        print(f"  Max Abs Deviation: {result.max_abs_deviation:.3e}")

        print(f"\nResult: {'PASSED ✓' if result.passed else 'FAILED ✗'}")
        print(f"Message: {result.message}")
        print("=" * 70 + "\n")


class FixedPointComparator(BaseOracleComparator):
    """integrate_phi_t_at_fixed_point vs the naive single-integral oracle"""

    def _default_tolerance(self) -> float:
        return 1e-3

    def _run_rule(self) -> np.ndarray:
        attractor = preset(self.config.preset, self.config.rho)
        h = h_for_level(attractor, self.config.level)
        return np.array([integrate_phi_t_at_fixed_point(attractor, self.config.t, self.config.m, h)])

    def _run_oracle(self) -> np.ndarray:
        attractor = preset(self.config.preset, self.config.rho)
        return np.array([naive_single_oracle(attractor, self.config.t, self.config.m, self.oracle_level)])


class DoubleIntegralComparator(BaseOracleComparator):
    """integrate_phi_t_double vs the staggered naive double-integral oracle"""

    def _default_tolerance(self) -> float:
        return 1e-3

    def _run_rule(self) -> np.ndarray:
        attractor = preset(self.config.preset, self.config.rho)
        h = h_for_level(attractor, self.config.level)
        return np.array([integrate_phi_t_double(attractor, self.config.t, h)])

    def _run_oracle(self) -> np.ndarray:
        attractor = preset(self.config.preset, self.config.rho)
        return np.array([naive_double_oracle(attractor, self.config.t, self.oracle_level)])


class HankelComparator(BaseOracleComparator):
    """hankel1_0 / hankel1_1 vs scipy.special.hankel1 on a log grid"""

    def _default_tolerance(self) -> float:
        return 1e-8

    @property
    def grid(self) -> np.ndarray:
        return np.logspace(np.log10(self.config.z_min), np.log10(self.config.z_max), self.config.points)

    def _run_rule(self) -> np.ndarray:
        z = self.grid
        return np.concatenate([hankel1_0(z), hankel1_1(z)])

    def _run_oracle(self) -> np.ndarray:
        z = self.grid
        return np.concatenate([hankel_oracle(0, z), hankel_oracle(1, z)])


COMPARATORS = {
    "fixed-point": FixedPointComparator,
    "double": DoubleIntegralComparator,
    "hankel": HankelComparator,
}


def quick_compare(kind: str, verbose: bool = False, **kwargs) -> OracleComparisonResult:
    """
    Quick comparison helper

    Args:
        kind: "fixed-point", "double" or "hankel"
        verbose: print the report
        **kwargs: OracleComparisonConfig fields

    Example:
        >>> quick_compare("double", preset="cantor", t=0.3, level=3).passed
        True
    """
    try:
        comparator_cls = COMPARATORS[kind]
    except KeyError:
        raise ConfigError(f"Unknown comparison '{kind}'. Available: {sorted(COMPARATORS)}") from None
    comparator = comparator_cls(OracleComparisonConfig(**kwargs))
    result = comparator.compare()
    if verbose:
        comparator.print_report(result)
    return result
