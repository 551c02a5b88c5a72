"""
Helmholtz kernel 단위 테스트

Φ = C_nΦ_{n−1} + Φ* 분해, 대각 극한, 특이점 제거 규칙, 진동 분기, 평가 횟수
"""

import math
import os
import sys

import numpy as np
import pytest
from scipy import special

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.core.hankel import EULER_GAMMA
from src.core.ifs import Similarity, h_for_level, rescaled_copy
from src.core.kernel_helmholtz import (
    HelmholtzKernel,
    bound_helmholtz_regular,
    bound_helmholtz_singular,
    evaluation_counts,
    integrate_helmholtz_double,
    integrate_helmholtz_singular,
    phi,
    phi_star,
    predicted_rate_in_n,
)
from src.core.kernel_phi_t import PhiTKernel
from src.core.presets import preset
from src.utils.errors import NumericPreconditionError, SeparationError, SingularPointError


@pytest.fixture
def unit_square_points():
    rng = np.random.default_rng(7)
    return rng.random((50, 2)), rng.random((50, 2))


class TestKernel:
    """커널 값과 분해"""

    def test_star_closed_form_2d(self, unit_square_points):
        """n = 2: Φ* = (e^{ikr} − 1)/(4πr)"""
        k = 2.0
        x, y = unit_square_points
        r = np.linalg.norm(x - y, axis=-1)
        expected = (np.exp(1j * k * r) - 1) / (4 * math.pi * r)
        np.testing.assert_allclose(HelmholtzKernel(k, 2).evaluate_star(r), expected, rtol=1e-12)

    @pytest.mark.parametrize("k", [0.5, 2.0, 5.0])
    @pytest.mark.parametrize("r", [3e-7, 2e-6, 1e-4, 1e-2, 0.1, 0.4, 1.0])
    def test_star_series_1d(self, k, r):
        """n = 1: Φ* 를 J0 와 직접 합한 급수 S(kr) 로 계산한 값과 비교"""
        z = k * r
        q = -0.25 * z * z
        terms, term, harmonic = [], 1.0, 0.0
        for j in range(1, 60):
            term *= q / (j * j)
            harmonic += 1.0 / j
            terms.append(-harmonic * term)
        tail = math.fsum(terms)
        j0 = float(special.j0(z))
        expected = complex(
            -((math.log(k / 2) + EULER_GAMMA) * j0 + math.log(r) * (j0 - 1) + tail) / (2 * math.pi),
            0.25 * j0,
        )
        assert HelmholtzKernel(k, 1).evaluate_star(r) == pytest.approx(expected, rel=1e-10, abs=1e-13)

    def test_splitting_identity_2d(self, unit_square_points):
        """Φ = C_2Φ_1 + Φ*"""
        kernel = HelmholtzKernel(2.0, 2)
        x, y = unit_square_points
        r = np.linalg.norm(x - y, axis=-1)
        rhs = kernel.C_n * PhiTKernel(1).evaluate(r) + kernel.evaluate_star(r)
        np.testing.assert_allclose(kernel.evaluate(r), rhs, rtol=1e-12)

    def test_diagonal_constants(self):
        k = 3.0
        one = HelmholtzKernel(k, 1).diagonal_star()
        assert one.real == pytest.approx((-math.log(k / 2) - EULER_GAMMA) / (2 * math.pi))
        assert one.imag == pytest.approx(0.25)
        assert HelmholtzKernel(k, 2).diagonal_star() == pytest.approx(1j * k / (4 * math.pi))

    @pytest.mark.parametrize("n", [1, 2])
    def test_star_continuous_at_diagonal(self, n):
        kernel = HelmholtzKernel(5.0, n)
        assert kernel.evaluate_star(1e-9) == pytest.approx(kernel.diagonal_star(), abs=1e-7)
        assert kernel.evaluate_star(0.0) == kernel.diagonal_star()

    def test_series_branch_matches_regular(self):
        """k·r = 1e-6 경계 양쪽에서 Φ* 연속"""
        kernel = HelmholtzKernel(1.0, 1)
        below = kernel.evaluate_star(1e-6 * (1 - 1e-9))
        above = kernel.evaluate_star(1e-6)
        assert below == pytest.approx(above, abs=1e-9)

    def test_point_functions(self):
        kernel = HelmholtzKernel(2.0, 2)
        assert phi(kernel, [0.0, 0.0], [0.0, 0.5]) == pytest.approx(np.exp(1j) / (2 * math.pi))
        assert phi_star(kernel, [0.1, 0.2], [0.1, 0.2]) == kernel.diagonal_star()
        with pytest.raises(SingularPointError):
            phi(kernel, [0.1, 0.2], [0.1, 0.2])

    @pytest.mark.parametrize("kwargs", [{"k": 0.0, "n": 1}, {"k": 1.0, "n": 3}, {"k": 1.0, "n": 1, "c_osc": -1.0}])
    def test_invalid_kernel(self, kwargs):
        with pytest.raises(NumericPreconditionError):
            HelmholtzKernel(**kwargs)

    def test_oscillation_threshold(self):
        kernel = HelmholtzKernel(20.0, 1)
        assert kernel.h_star == pytest.approx(2 * math.pi / 20)
        assert kernel.is_oscillatory(1.0)
        assert not HelmholtzKernel(5.0, 1).is_oscillatory(1.0)


class TestSingularRule:
    """특이점 제거 규칙"""

    def test_dimension_precondition(self):
        """Cantor dust ρ = 0.2: d < 1 이라 n = 2 에서 불가"""
        with pytest.raises(NumericPreconditionError):
            integrate_helmholtz_singular(preset("cantor-dust", rho=0.2), HelmholtzKernel(5.0, 2), 0.1)

    def test_screen_mismatch(self):
        with pytest.raises(NumericPreconditionError):
            integrate_helmholtz_singular(preset("cantor"), HelmholtzKernel(5.0, 2), 0.1)

    def test_h_range(self):
        cantor = preset("cantor")
        with pytest.raises(NumericPreconditionError):
            integrate_helmholtz_singular(cantor, HelmholtzKernel(5.0, 1), 2.0)
        with pytest.raises(NumericPreconditionError):
            integrate_helmholtz_singular(cantor, HelmholtzKernel(20.0, 1), 0.5)

    def test_convergence(self):
        cantor = preset("cantor", rho=1 / 3)
        kernel = HelmholtzKernel(5.0, 1)
        reference = integrate_helmholtz_singular(cantor, kernel, h_for_level(cantor, 9))
        errors = [abs(integrate_helmholtz_singular(cantor, kernel, h_for_level(cantor, level)) - reference)
                  for level in (3, 4, 5)]
        assert errors[0] > errors[1] > errors[2]
        # uniform IFS: error ∝ h², so one level divides it by about 9
        assert errors[1] / errors[2] > 6.0

    def test_oscillatory_branch_agrees(self):
        cantor = preset("cantor", rho=1 / 3)
        h = 3.0 ** -7
        oscillatory = integrate_helmholtz_singular(cantor, HelmholtzKernel(20.0, 1), h)
        plain = integrate_helmholtz_singular(cantor, HelmholtzKernel(20.0, 1, c_osc=100.0), h)
        assert abs(oscillatory - plain) <= 1e-2 * abs(plain)

    def test_worker_invariance(self):
        dust = preset("cantor-dust", rho=1 / 3)
        kernel = HelmholtzKernel(5.0, 2)
        h = h_for_level(dust, 5)
        assert integrate_helmholtz_singular(dust, kernel, h, workers=1) == \
            integrate_helmholtz_singular(dust, kernel, h, workers=3)

    def test_symmetric_halving(self):
        dust = preset("cantor-dust", rho=1 / 3)
        kernel = HelmholtzKernel(5.0, 2)
        h = h_for_level(dust, 3)
        half = integrate_helmholtz_singular(dust, kernel, h, symmetric=True)
        full = integrate_helmholtz_singular(dust, kernel, h, symmetric=False)
        assert half == pytest.approx(full, rel=1e-12)


class TestRegularRule:
    """떨어진 두 집합의 Φ 적분"""

    def test_disjoint_copies(self):
        cantor = preset("cantor", rho=1 / 3)
        shifted = rescaled_copy(cantor, Similarity(0.5, np.eye(1), np.array([3.0])))
        kernel = HelmholtzKernel(2.0, 1)
        coarse = integrate_helmholtz_double(cantor, shifted, kernel, 3.0 ** -3)
        fine = integrate_helmholtz_double(cantor, shifted, kernel, 3.0 ** -6)
        assert abs(coarse - fine) <= bound_helmholtz_regular(cantor, shifted, kernel, 3.0 ** -3)

    def test_overlapping_strict(self):
        cantor = preset("cantor", rho=1 / 3)
        with pytest.raises(SeparationError, match="cannot verify disjointness"):
            integrate_helmholtz_double(cantor, cantor, HelmholtzKernel(2.0, 1), 0.1, strict=True)


class TestEvaluationCounts:
    """커널 평가 횟수"""

    def test_cantor_non_oscillatory(self):
        """h = 1/27, N = 8: Φ_0 16번, Φ* 36번, Φ 0번"""
        counts = evaluation_counts(preset("cantor", rho=1 / 3), HelmholtzKernel(1.0, 1), 1 / 27)
        assert counts == {"phi_t": 16, "phi_star": 36, "phi": 0, "N": 8}

    def test_full_counts(self):
        counts = evaluation_counts(preset("cantor", rho=1 / 3), HelmholtzKernel(1.0, 1), 1 / 27, symmetric=False)
        assert counts["phi_t"] == 32
        assert counts["phi_star"] == 64

    def test_oscillatory_blocks(self):
        """h* = 2π/20 < 1/3: 레벨 2 블록 4개, h = 1/27 에서 블록당 노드 2개"""
        counts = evaluation_counts(preset("cantor", rho=1 / 3), HelmholtzKernel(20.0, 1), 1 / 27)
        assert counts["N"] == 8
        assert counts["phi"] == (64 - 16) // 2
        assert counts["phi_star"] == 4 * 3
        assert counts["phi_t"] == 4 * 1


class TestBoundsAndRates:
    """수렴률 예측"""

    def test_predicted_rate(self):
        cantor = preset("cantor", rho=1 / 3)
        assert predicted_rate_in_n(cantor) == pytest.approx(-2 / cantor.dim)
        golden = preset("golden-cantor")
        assert predicted_rate_in_n(golden) == pytest.approx(-1 / golden.dim)

    def test_bound_scales_quadratically(self):
        cantor = preset("cantor", rho=1 / 3)
        kernel = HelmholtzKernel(5.0, 1)
        ratio = bound_helmholtz_singular(cantor, kernel, 0.1) / bound_helmholtz_singular(cantor, kernel, 0.05)
        assert ratio == pytest.approx(4.0)

    def test_bound_unavailable_when_touching(self):
        with pytest.raises(SeparationError):
            bound_helmholtz_singular(preset("vicsek"), HelmholtzKernel(5.0, 2), 0.1)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
