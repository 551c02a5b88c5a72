"""
Validation package for oracle comparison

Compares the quadrature rules with independent reference values.
"""

from src.validation.base_comparator import (
    BaseOracleComparator,
    DoubleIntegralComparator,
    FixedPointComparator,
    HankelComparator,
    OracleComparisonConfig,
    OracleComparisonResult,
    quick_compare,
)

__all__ = [
    "BaseOracleComparator",
    "OracleComparisonConfig",
    "OracleComparisonResult",
    "FixedPointComparator",
    "DoubleIntegralComparator",
    "HankelComparator",
    "quick_compare",
]
