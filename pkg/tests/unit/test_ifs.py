"""
IFS / Attractor 단위 테스트

차원 방정식, 닮음변환 검증, 부분집합 주소 검증
"""

import math
import os
import sys

import numpy as np
import pytest

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.core.ifs import (
    Similarity,
    common_prefix_level,
    compose,
    fixed_point,
    h_for_level,
    level_count_estimate,
    make_attractor,
    rescaled_copy,
    rotation_matrix,
    solve_dimension,
    subcomponent,
    validate_index,
)
from src.core.presets import preset
from src.utils.config_models import DiamProvenance
from src.utils.errors import AttractorError, IndexRangeError


@pytest.fixture
def cantor():
    return preset("cantor", rho=1 / 3)


class TestSolveDimension:
    """Σρ_m^d = 1"""

    def test_middle_third_cantor(self):
        assert solve_dimension([1 / 3, 1 / 3]) == pytest.approx(math.log(2) / math.log(3), abs=1e-14)

    def test_interval(self):
        assert solve_dimension([0.5, 0.5]) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("name, expected", [
        ("cantor-dust", 1.26),
        ("triangle-centre", 1.55),
        ("dust-satellite", 1.28),
        ("vicsek", 1.46),
        ("rotated-nonuniform", 1.20),
    ])
    def test_tabulated_dimensions(self, name, expected):
        """두 자리 반올림 값 일치"""
        assert round(preset(name).dim, 2) == expected

    def test_dust_satellite_cubic(self):
        """z = 3^d solves z³ − 4z² − 1 = 0"""
        z = 3 ** preset("dust-satellite").dim
        assert z ** 3 - 4 * z ** 2 - 1 == pytest.approx(0.0, abs=1e-9)

    def test_nonuniform_quadratic(self):
        """3(1/4)^d + (1/2)^d = 1 ⇒ 2^{−d} = (√13 − 1)/6"""
        d = preset("rotated-nonuniform").dim
        assert 2 ** -d == pytest.approx((math.sqrt(13) - 1) / 6, rel=1e-12)

    def test_too_few_ratios(self):
        with pytest.raises(AttractorError):
            solve_dimension([0.5])

    def test_ratio_out_of_range(self):
        with pytest.raises(AttractorError):
            solve_dimension([0.5, 1.2])


class TestSimilarity:
    """닮음변환 생성 및 합성"""

    def test_fixed_point(self):
        assert fixed_point(Similarity.scaling(1 / 3, [2 / 3]))[0] == pytest.approx(1.0)

    def test_non_orthogonal_rotation_rejected(self):
        with pytest.raises(AttractorError):
            Similarity(0.5, np.array([[1.0, 0.1], [0.0, 1.0]]), np.zeros(2))

    def test_ratio_must_contract(self):
        with pytest.raises(AttractorError):
            Similarity.scaling(1.0, [0.0])

    def test_rotation_quarter_turn(self):
        rot = rotation_matrix(math.pi / 2)
        np.testing.assert_allclose(rot @ [1.0, 0.0], [0.0, 1.0], atol=1e-15)

    def test_reflection_flag(self):
        s = Similarity(0.5, rotation_matrix(0.0, reflect=True), np.zeros(2))
        assert s.is_reflection

    def test_then_composes_right_to_left(self, cantor):
        s = compose(cantor, (2, 1))
        assert s.ratio == pytest.approx(1 / 9)
        assert s(0.0) == pytest.approx(2 / 3)
        assert s(1.0) == pytest.approx(2 / 3 + 1 / 9)

    def test_empty_index_is_identity(self, cantor):
        assert compose(cantor, ()).is_identity


class TestMakeAttractor:
    """IFS 검증"""

    def test_single_map_rejected(self):
        with pytest.raises(AttractorError):
            make_attractor([Similarity.scaling(0.5, [0.0])], 1)

    def test_dimension_exceeding_space_rejected(self):
        maps = [Similarity.scaling(0.5, [t]) for t in (0.0, 0.25, 0.5)]
        with pytest.raises(AttractorError):
            make_attractor(maps, 1)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(AttractorError):
            make_attractor([Similarity.scaling(0.5, [0.0]), Similarity.scaling(0.5, [0.5, 0.5])], 1)

    def test_hull_approximated_diameter(self):
        """diam override가 없으면 hull 근사"""
        maps = [Similarity.scaling(1 / 3, [0.0]), Similarity.scaling(1 / 3, [2 / 3])]
        attractor = make_attractor(maps, 1)
        assert attractor.diam_provenance is DiamProvenance.HULL
        assert attractor.diam == pytest.approx(1.0, rel=1e-8)

    def test_measure_default_normalized(self, cantor):
        assert cantor.measure == 1.0
        assert cantor.diam_provenance is DiamProvenance.EXACT

    def test_negative_measure_rejected(self):
        maps = [Similarity.scaling(0.5, [0.0]), Similarity.scaling(0.5, [0.5])]
        with pytest.raises(AttractorError):
            make_attractor(maps, 1, measure_override=-1.0)


class TestIndices:
    """벡터 인덱스와 부분집합"""

    def test_validate_index_range(self, cantor):
        with pytest.raises(IndexRangeError):
            validate_index(cantor, (1, 3))

    def test_subcomponent_scaling(self, cantor):
        piece = subcomponent(cantor, (1, 2))
        assert piece.diam == pytest.approx(1 / 9)
        assert piece.measure == pytest.approx(0.25)

    def test_common_prefix_level(self):
        assert common_prefix_level((1, 2, 1), (1, 2, 2)) == 3
        assert common_prefix_level((1,), (2,)) == 1

    def test_h_for_level(self, cantor):
        assert h_for_level(cantor, 2) == pytest.approx(1 / 9)
        with pytest.raises(IndexRangeError):
            h_for_level(cantor, -1)

    def test_level_count_estimate(self, cantor):
        assert level_count_estimate(cantor, 1 / 9) == 4
        assert level_count_estimate(cantor, 2.0) == 1

    def test_rescaled_copy(self, cantor):
        copy = rescaled_copy(cantor, Similarity.scaling(1 / 3, [2 / 3]))
        assert copy.measure == pytest.approx(0.5)
        assert copy.diam == pytest.approx(1 / 3)
        assert copy.dim == pytest.approx(cantor.dim)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
