"""
Oracle Comparison Tests

Singular rules and Hankel functions against independent reference values:
deep-level naive barycentre rules (ℓ + 7) and scipy.special.hankel1.
"""

import os
import sys

import pytest

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.core.presets import preset
from src.reference.oracles import naive_double_oracle, naive_single_oracle
from src.utils.config_loader import SLOW_ENV, slow_tests_enabled
from src.validation.base_comparator import (
    ORACLE_LEVEL_OFFSET,
    DoubleIntegralComparator,
    FixedPointComparator,
    HankelComparator,
    OracleComparisonConfig,
    quick_compare,
)
from src.utils.errors import ConfigError

slow = pytest.mark.skipif(not slow_tests_enabled(), reason=f"set {SLOW_ENV}=1 to run full-scale oracles")


class TestFixedPointOracle:
    """integrate_phi_t_at_fixed_point vs naive single-integral oracle"""

    @pytest.mark.parametrize("t, m", [(0.0, 1), (0.3, 2), (0.3, 1)])
    def test_cantor(self, t, m):
        config = OracleComparisonConfig(preset="cantor", rho=1 / 3, t=t, m=m, level=4)
        comparator = FixedPointComparator(config)
        result = comparator.compare()

        comparator.print_report(result)

        assert comparator.oracle_level == 4 + ORACLE_LEVEL_OFFSET
        assert result.passed, result.message
        assert result.max_rel_deviation < 1e-3

    def test_interval_exact(self):
        """∫_0^1 log y dy = −1: oracle itself is accurate"""
        value = naive_single_oracle(preset("interval"), 0.0, 1, level=12)
        assert value == pytest.approx(-1.0, abs=1e-5)


class TestDoubleIntegralOracle:
    """integrate_phi_t_double vs staggered naive double-integral oracle"""

    @pytest.mark.parametrize("t", [0.0, 0.3])
    def test_cantor(self, t):
        result = quick_compare("double", preset="cantor", rho=1 / 3, t=t, level=4)
        assert result.passed, result.message
        assert result.total_comparisons == 1

    def test_interval_exact(self):
        value = naive_double_oracle(preset("interval"), 0.0, level=9)
        assert value == pytest.approx(-1.5, abs=1e-3)

    @slow
    @pytest.mark.parametrize("name, rho", [("cantor", 0.2), ("golden-cantor", None)])
    def test_other_presets(self, name, rho):
        result = quick_compare("double", preset=name, rho=rho, t=0.3, level=5)
        assert result.passed, result.message


class TestHankelOracle:
    """hankel1_0 / hankel1_1 vs scipy"""

    def test_log_grid(self):
        comparator = HankelComparator(OracleComparisonConfig())
        result = comparator.compare()
        assert result.total_comparisons == 400
        assert result.passed, result.message
        assert result.max_rel_deviation < 1e-8

    def test_to_dict(self):
        summary = quick_compare("hankel", points=20).to_dict()["summary"]
        assert summary["passed"] is True
        assert summary["match_percentage"] == "100.00%"


class TestComparatorErrors:
    """비교 실행 실패 처리"""

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            quick_compare("triple")

    def test_execution_error(self):
        result = DoubleIntegralComparator(OracleComparisonConfig(preset="sierpinski")).compare()
        assert not result.passed
        assert result.message.startswith("Execution error")
        assert result.total_comparisons == 0


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
