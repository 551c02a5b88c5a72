"""
Geometry 단위 테스트

볼록 껍질 근사, 껍질 거리, 분리 파라미터 R_Γ / R_{Γ,Hull} / R_{m,h} / R_{Γ,Hull,h}
"""

import math
import os
import sys

import numpy as np
import pytest

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.core.geometry import (
    ConvexHull,
    attractor_hull,
    distance_to_hull_set,
    hull_approx,
    hull_disjoint_h,
    hull_distance,
    point_hull_distance,
    r_gamma_hull,
    r_gamma_hull_h,
    r_m_h,
    separation_params,
)
from src.core.ifs import Similarity, common_prefix_level, compose, make_attractor, rescaled_copy
from src.core.presets import preset
from src.utils.errors import GeometryError, NumericPreconditionError


def _square(x0, y0, side):
    return ConvexHull(2, [[x0, y0], [x0 + side, y0], [x0 + side, y0 + side], [x0, y0 + side]])


def _reflected_cantor():
    """x ↦ −x/3 + 1/3, x ↦ −x/3 + 1 (고정점 1/4, 3/4)"""
    maps = [Similarity(1 / 3, np.array([[-1.0]]), np.array([1 / 3])),
            Similarity(1 / 3, np.array([[-1.0]]), np.array([1.0]))]
    return make_attractor(maps, 1, diam_override=1.0, name="reflected-cantor")


class TestConvexHull:
    """껍질 객체와 거리"""

    def test_interval_distance(self):
        assert hull_distance(ConvexHull(1, [[0.0], [1 / 3]]), ConvexHull(1, [[2 / 3], [1.0]])) == pytest.approx(1 / 3)

    def test_overlapping_squares(self):
        assert hull_distance(_square(0, 0, 1), _square(0.5, 0.5, 1)) == 0.0

    def test_crossing_without_contained_vertices(self):
        """꼭짓점 포함 없이 변만 교차하는 경우도 0"""
        wide = ConvexHull(2, [[-2.0, -0.1], [2.0, -0.1], [2.0, 0.1], [-2.0, 0.1]])
        tall = ConvexHull(2, [[-0.1, -2.0], [0.1, -2.0], [0.1, 2.0], [-0.1, 2.0]])
        assert hull_distance(wide, tall) == 0.0

    def test_diagonal_squares(self):
        assert hull_distance(_square(0, 0, 1), _square(2, 2, 1)) == pytest.approx(math.sqrt(2))

    def test_symmetry_and_nonnegativity(self):
        a, b = _square(0, 0, 1), ConvexHull(2, [[3.0, 0.0], [4.0, 1.0], [3.0, 2.0]])
        assert hull_distance(a, b) == pytest.approx(hull_distance(b, a))
        assert hull_distance(a, b) > 0

    def test_enlarging_never_increases_distance(self):
        a = _square(0, 0, 1)
        b = ConvexHull(2, [[3.0, 0.0], [4.0, 0.0], [4.0, 1.0], [3.0, 1.0]])
        bigger = ConvexHull(2, [[2.0, 0.5], [3.0, 0.0], [4.0, 0.0], [4.0, 1.0], [3.0, 1.0]])
        assert hull_distance(a, bigger) <= hull_distance(a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            hull_distance(ConvexHull(1, [[0.0], [1.0]]), _square(0, 0, 1))

    def test_reversed_interval_rejected(self):
        with pytest.raises(GeometryError):
            ConvexHull(1, [[1.0], [0.0]])

    def test_clockwise_polygon_rejected(self):
        with pytest.raises(GeometryError):
            ConvexHull(2, [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]])

    def test_point_distance(self):
        square = _square(0, 0, 1)
        assert point_hull_distance([0.5, 0.5], square) == 0.0
        assert point_hull_distance([2.0, 0.5], square) == pytest.approx(1.0)
        assert square.contains([1.0, 1.0])


class TestHullApprox:
    """고정점 구름 기반 껍질 근사"""

    def test_cantor_interval(self):
        hull = hull_approx(preset("cantor", rho=1 / 3), 1e-12)
        assert hull.interval == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_dust_square(self):
        hull = hull_approx(preset("cantor-dust", rho=1 / 3), 1e-12)
        assert len(hull.vertices) == 4
        assert hull.diameter() == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_triangle(self):
        hull = attractor_hull(preset("triangle-centre"))
        assert len(hull.vertices) == 3

    def test_koch_diameter(self):
        assert attractor_hull(preset("koch-snowflake")).diameter() == pytest.approx(2.0, rel=1e-10)

    def test_level_cap_failure(self):
        """반사 사상: 고정점이 껍질 끝점이 아니므로 수렴에 여러 레벨 필요"""
        attractor = _reflected_cantor()
        with pytest.raises(GeometryError):
            hull_approx(attractor, 1e-15, level_cap=2)
        assert hull_approx(attractor, 1e-12).interval == pytest.approx((0.0, 1.0), abs=1e-11)

    def test_invalid_tolerance(self):
        with pytest.raises(NumericPreconditionError):
            hull_approx(preset("cantor"), 0.0)

    def test_hull_approximated_diameter_matches_hull(self):
        attractor = preset("rotated-nonuniform")
        assert attractor.diam == pytest.approx(attractor_hull(attractor).diameter(), rel=1e-8)


class TestSeparationParameters:
    """분리 파라미터"""

    def test_cantor_dust(self):
        """R_Γ = R_{Γ,Hull} = R_{Γ,Hull,h} = 1 − 2ρ, min R_{m,h} = 1 − ρ"""
        rep = separation_params(preset("cantor-dust", rho=1 / 3), 0.2)
        assert rep.r_gamma == pytest.approx(1 / 3, rel=1e-12)
        assert rep.r_gamma_hull == pytest.approx(1 / 3, rel=1e-12)
        assert rep.r_gamma_hull_h == pytest.approx(1 / 3, rel=1e-12)
        assert rep.r_m_h == pytest.approx((2 / 3,) * 4, rel=1e-12)
        assert not rep.touching

    def test_dust_satellite(self):
        """Γ_5 ⊂ Hull(Γ_3) 이므로 R_{Γ,Hull} = 0"""
        rep = separation_params(preset("dust-satellite"), 0.2)
        assert rep.r_gamma_hull == 0.0
        assert rep.r_gamma == pytest.approx(math.sqrt(2) / 27, rel=1e-10)
        assert rep.r_gamma_hull_h == pytest.approx(math.sqrt(2) / 27, rel=1e-10)
        assert rep.min_r_m_h == pytest.approx(5 * math.sqrt(2) / 117, rel=1e-10)
        assert int(np.argmin(rep.r_m_h)) == 4

    def test_vicsek_touching(self):
        rep = separation_params(preset("vicsek"), 0.1)
        assert rep.touching
        assert rep.r_gamma_hull == 0.0
        assert rep.min_r_m_h == pytest.approx(1 / (3 * math.sqrt(2)), rel=1e-10)

    def test_triangle_centre(self):
        rho = 0.41
        rep = separation_params(preset("triangle-centre"), rho ** 3)
        assert rep.r_gamma_hull == 0.0
        assert rep.min_r_m_h == pytest.approx(math.sqrt(1 / 3 - rho + rho ** 2 - rho ** 3 + rho ** 4), rel=1e-10)
        assert int(np.argmin(rep.r_m_h)) == 3
        assert rep.r_gamma_upper >= (1 - rho - 3 * rho ** 2) / (2 * math.sqrt(3)) - 1e-12

    @pytest.mark.parametrize("name, h", [
        ("cantor-dust", 0.2),
        ("dust-satellite", 0.2),
        ("cantor", 0.05),
        ("golden-cantor", 0.05),
    ])
    def test_ordering_chain(self, name, h):
        assert separation_params(preset(name), h).ordering_holds()

    def test_h_out_of_range(self):
        with pytest.raises(NumericPreconditionError):
            separation_params(preset("cantor"), 1.0)
        with pytest.raises(NumericPreconditionError):
            r_m_h(preset("cantor"), 3, 0.1)

    def test_report_dict(self):
        data = separation_params(preset("cantor"), 0.1).to_dict()
        assert set(data) >= {"r_gamma", "r_gamma_hull", "r_m_h", "r_gamma_hull_h", "h", "touching"}
        assert len(data["r_m_h"]) == 2

    def test_individual_functions_agree(self):
        attractor = preset("cantor-dust", rho=0.3)
        rep = separation_params(attractor, 0.1)
        assert r_gamma_hull(attractor) == rep.r_gamma_hull
        assert r_gamma_hull_h(attractor, 0.1) == rep.r_gamma_hull_h
        assert r_m_h(attractor, 2, 0.1) == rep.r_m_h[1]

    def test_hull_disjoint_scaling(self):
        """hull-disjoint 집합: dist(Hull Γ_𝐦, Hull Γ_𝐧) ≥ R_{Γ,Hull}·∏_{i<ℓ*} ρ_{m_i}"""
        attractor = preset("cantor-dust", rho=0.3)
        base = attractor_hull(attractor)
        bound = r_gamma_hull(attractor)
        pairs = [((1, 1, 2), (1, 2, 1)), ((2, 3), (2, 4, 1)), ((4, 4, 4), (4, 4, 3)), ((1,), (3, 2))]
        for m, n in pairs:
            prefix = common_prefix_level(m, n) - 1
            scale = float(np.prod(attractor.ratios[[i - 1 for i in m[:prefix]]])) if prefix else 1.0
            dist = hull_distance(base.mapped(compose(attractor, m)), base.mapped(compose(attractor, n)))
            assert dist >= bound * scale - 1e-14


class TestHullSets:
    """Γ_Hull,h 관련 거리"""

    def test_point_in_hull_set(self):
        attractor = preset("cantor", rho=1 / 3)
        assert distance_to_hull_set([0.5], attractor, 0.1) == pytest.approx(1 / 6)
        assert distance_to_hull_set([0.0], attractor, 0.1) == 0.0

    def test_two_attractors(self):
        cantor = preset("cantor", rho=1 / 3)
        shifted = rescaled_copy(cantor, Similarity(0.5, np.eye(1), np.array([2.0])))
        assert hull_disjoint_h(cantor, shifted, 0.05) == pytest.approx(1.0)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
