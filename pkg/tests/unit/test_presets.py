"""
Preset attractor 단위 테스트

프리셋별 차원, 직경, ρ 범위, inline IFS 정의
"""

import math
import os
import sys

import numpy as np
import pytest

# src 모듈 import 경로 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.core.presets import PRESET_ALIASES, PRESETS, inline_attractor, preset, preset_names, preset_table
from src.utils.config_models import DiamProvenance
from src.utils.errors import AttractorError, ConfigError

GOLDEN = (1 + math.sqrt(5)) / 2


class TestPresetDimensions:
    """Σρ_m^d = 1 의 해"""

    @pytest.mark.parametrize("name, expected", [
        ("cantor", math.log(2) / math.log(3)),
        ("cantor-dust", math.log(4) / math.log(3)),
        ("triangle-centre", math.log(4) / math.log(1 / 0.41)),
        ("vicsek", math.log(5) / math.log(3)),
        ("koch-snowflake", 2.0),
        ("golden-cantor", math.log(GOLDEN) / math.log(2)),
        ("rotated-nonuniform", -math.log((math.sqrt(13) - 1) / 6) / math.log(2)),
        ("interval", 1.0),
    ])
    def test_dimension(self, name, expected):
        assert preset(name).dim == pytest.approx(expected, rel=1e-12)

    def test_dust_satellite(self):
        d = preset("dust-satellite").dim
        assert 4 * 3.0 ** -d + 27.0 ** -d == pytest.approx(1.0, abs=1e-13)

    @pytest.mark.parametrize("rho", [0.1, 0.25, 0.4, 0.5])
    def test_cantor_rho(self, rho):
        assert preset("cantor", rho=rho).dim == pytest.approx(math.log(2) / math.log(1 / rho))


class TestPresetGeometry:
    """직경, 측도, 메타데이터"""

    @pytest.mark.parametrize("name, diam", [
        ("cantor", 1.0),
        ("cantor-dust", math.sqrt(2)),
        ("vicsek", math.sqrt(2)),
        ("koch-snowflake", 2.0),
        ("interval", 1.0),
    ])
    def test_exact_diameter(self, name, diam):
        attractor = preset(name)
        assert attractor.diam == pytest.approx(diam)
        assert attractor.diam_provenance is DiamProvenance.EXACT

    def test_hull_diameter(self):
        """(0, 0) 과 (1, 1) 이 고정점이므로 diam ≥ √2"""
        attractor = preset("rotated-nonuniform")
        assert attractor.diam_provenance is DiamProvenance.HULL
        assert attractor.diam >= math.sqrt(2) - 1e-12

    def test_normalized_measure(self):
        for name in PRESETS:
            assert preset(name).measure == 1.0

    def test_dust_hausdorff_measure(self):
        attractor = preset("cantor-dust", rho=0.2)
        assert attractor.metadata["hausdorff_measure"] == pytest.approx(2 ** (attractor.dim / 2))
        assert "hausdorff_measure" not in preset("cantor-dust").metadata

    def test_koch_fixed_points(self):
        """꼭짓점 6개는 단위원 위, 중심 map 의 고정점은 원점"""
        points = preset("koch-snowflake").fixed_points
        np.testing.assert_allclose(np.linalg.norm(points[:6], axis=1), 1.0, atol=1e-14)
        np.testing.assert_allclose(points[6], 0.0, atol=1e-15)

    def test_uniformity(self):
        assert preset("cantor-dust").is_uniform
        assert not preset("golden-cantor").is_uniform


class TestPresetAliases:
    """공개 프리셋 이름 9개와 별칭"""

    @pytest.mark.parametrize("name", [
        "cantor", "cantor-dust", "table1-II", "table1-III", "vicsek",
        "koch-snowflake", "fig3-cantor", "eq62-nonuniform", "interval",
    ])
    def test_public_names(self, name):
        attractor = preset(name)
        assert 0 < attractor.dim <= attractor.ambient_dim
        assert name in preset_names()

    @pytest.mark.parametrize("alias, target", sorted(PRESET_ALIASES.items()))
    def test_alias_matches_target(self, alias, target):
        by_alias = preset(alias)
        by_name = preset(target)
        assert by_alias.dim == by_name.dim
        assert by_alias.diam == by_name.diam
        np.testing.assert_array_equal(by_alias.fixed_points, by_name.fixed_points)

    def test_rotated_alias_dimension(self):
        assert preset("eq62-nonuniform").dim == pytest.approx(math.log((1 + math.sqrt(13)) / 2) / math.log(2))

    def test_table_lists_aliases(self):
        table = preset_table().set_index("name")
        assert table.loc["golden-cantor", "aliases"] == "fig3-cantor"
        assert table.loc["cantor", "aliases"] == ""


class TestPresetErrors:
    """잘못된 이름 / ρ"""

    def test_unknown(self):
        with pytest.raises(ConfigError, match="Unknown preset"):
            preset("sierpinski")

    @pytest.mark.parametrize("name, rho", [
        ("cantor", 0.6),
        ("cantor", 0.0),
        ("cantor-dust", 0.5),
        ("triangle-centre", 0.5),
    ])
    def test_rho_out_of_range(self, name, rho):
        with pytest.raises(ConfigError):
            preset(name, rho=rho)

    def test_table(self):
        table = preset_table()
        assert list(table["name"]) == list(PRESETS)
        assert table.set_index("name").loc["koch-snowflake", "M"] == 7
        assert table.set_index("name").loc["rotated-nonuniform", "diam_provenance"] == "hull-approximated"


class TestInlineAttractor:
    """config 의 maps 목록"""

    def test_cantor_inline(self):
        attractor = inline_attractor(
            [{"ratio": 1 / 3, "translation": [0.0]}, {"ratio": 1 / 3, "translation": [2 / 3]}],
            ambient_dim=1, diam=1.0,
        )
        assert attractor.dim == pytest.approx(preset("cantor").dim)
        assert attractor.measure == 1.0
        assert attractor.name == "inline"

    def test_angle_and_reflect(self):
        attractor = inline_attractor(
            [
                {"ratio": 0.5, "translation": [0.0, 0.0]},
                {"ratio": 0.5, "translation": [1.0, 0.0], "angle": math.pi / 2},
                {"ratio": 0.5, "translation": [0.0, 1.0], "reflect": True},
            ],
            ambient_dim=2,
        )
        assert attractor.maps[1].rotation == pytest.approx(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert attractor.maps[2].is_reflection

    def test_explicit_rotation(self):
        attractor = inline_attractor(
            [{"ratio": 0.4, "translation": [0.0], "rotation": [[-1.0]]},
             {"ratio": 0.4, "translation": [1.0]}],
            ambient_dim=1,
        )
        assert attractor.maps[0].is_reflection

    @pytest.mark.parametrize("maps", [
        [],
        [{"ratio": 0.5}],
        [{"ratio": 0.5, "translation": [0.0, 0.0]}, {"ratio": 0.5, "translation": [1.0, 0.0]}],
    ])
    def test_malformed(self, maps):
        with pytest.raises(ConfigError):
            inline_attractor(maps, ambient_dim=1)

    def test_invalid_ifs(self):
        """ρ ≥ 1 은 축소 사상이 아님"""
        with pytest.raises(AttractorError):
            inline_attractor([{"ratio": 1.5, "translation": [0.0]}, {"ratio": 0.5, "translation": [1.0]}],
                             ambient_dim=1)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
