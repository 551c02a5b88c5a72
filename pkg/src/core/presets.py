"""
Preset IFS attractors used by the convergence studies

Measures are normalized (μ = 1) unless the exact H^d(Γ) is known; the
metadata records which. Diameters are exact where the set contains two
points realizing the hull diameter, otherwise hull-approximated.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from ..utils.errors import ConfigError
from .ifs import Attractor, Similarity, make_attractor, rotation_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PresetSpec:
    """프리셋 정의"""
    name: str
    description: str
    builder: Callable[[Optional[float]], Attractor]
    default_rho: Optional[float] = None


def _check_rho(name: str, rho: float, upper: float, closed: bool) -> float:
    rho = float(rho)
    ok = 0 < rho <= upper if closed else 0 < rho < upper
    if not ok:
        bracket = "]" if closed else ")"
        raise ConfigError(f"preset '{name}' needs ρ ∈ (0, {upper:g}{bracket}, got {rho}")
    return rho


def _dust_maps(rho: float):
    r = 1 - rho
    return [
        Similarity.scaling(rho, [0.0, r]),
        Similarity.scaling(rho, [r, r]),
        Similarity.scaling(rho, [0.0, 0.0]),
        Similarity.scaling(rho, [r, 0.0]),
    ]


def cantor(rho: Optional[float] = None) -> Attractor:
    rho = _check_rho("cantor", 1 / 3 if rho is None else rho, 0.5, closed=True)
    maps = [Similarity.scaling(rho, [0.0]), Similarity.scaling(rho, [1 - rho])]
    return make_attractor(
        maps, 1, measure_override=1.0, diam_override=1.0, name="cantor",
        metadata={"rho": rho, "measure_exact": True, "diam_exact": True},
    )


def interval(rho: Optional[float] = None) -> Attractor:
    """[0, 1] as the Cantor construction with ρ = 1/2 (H^1 = Lebesgue)"""
    maps = [Similarity.scaling(0.5, [0.0]), Similarity.scaling(0.5, [0.5])]
    return make_attractor(
        maps, 1, measure_override=1.0, diam_override=1.0, name="interval",
        metadata={"rho": 0.5, "measure_exact": True, "diam_exact": True},
    )


def cantor_dust(rho: Optional[float] = None) -> Attractor:
    rho = _check_rho("cantor-dust", 1 / 3 if rho is None else rho, 0.5, closed=False)
    d = math.log(4) / math.log(1 / rho)
    metadata = {"rho": rho, "measure_exact": False, "diam_exact": True}
    if rho <= 0.25:
        # H^d(Γ) = 2^{d/2} is known for ρ ≤ 1/4; the rule still uses μ = 1
        metadata["hausdorff_measure"] = 2 ** (d / 2)
    return make_attractor(
        _dust_maps(rho), 2, measure_override=1.0, diam_override=math.sqrt(2),
        name="cantor-dust", metadata=metadata,
    )


def triangle_centre(rho: Optional[float] = None) -> Attractor:
    """Three corner maps of the unit triangle plus one centred map, ρ = 0.41"""
    rho = 0.41 if rho is None else _check_rho("triangle-centre", rho, 0.5, closed=False)
    r = 1 - rho
    maps = [
        Similarity.scaling(rho, [0.0, 0.0]),
        Similarity.scaling(rho, [r, 0.0]),
        Similarity.scaling(rho, [r / 2, math.sqrt(3) * r / 2]),
        Similarity.scaling(rho, [r / 2, r / (2 * math.sqrt(3))]),
    ]
    return make_attractor(
        maps, 2, measure_override=1.0, diam_override=1.0, name="triangle-centre",
        metadata={"rho": rho, "measure_exact": False, "diam_exact": True},
    )


def dust_satellite(rho: Optional[float] = None) -> Attractor:
    """Cantor dust ρ = 1/3 with a fifth map x/27 + (4/27, 4/27)"""
    maps = _dust_maps(1 / 3) + [Similarity.scaling(1 / 27, [4 / 27, 4 / 27])]
    return make_attractor(
        maps, 2, measure_override=1.0, diam_override=math.sqrt(2), name="dust-satellite",
        metadata={"rho": 1 / 3, "measure_exact": False, "diam_exact": True},
    )


def vicsek(rho: Optional[float] = None) -> Attractor:
    """Vicsek fractal: dust corners plus the centre square"""
    rho = 1 / 3
    maps = _dust_maps(rho) + [Similarity.scaling(rho, [rho, rho])]
    return make_attractor(
        maps, 2, measure_override=1.0, diam_override=math.sqrt(2), name="vicsek",
        metadata={"rho": rho, "measure_exact": False, "diam_exact": True},
    )


def koch_snowflake(rho: Optional[float] = None) -> Attractor:
    """
    Filled Koch snowflake with tips on the unit circle

    Six maps x/3 + (2/3)(cos α_m, sin α_m), α_m = (2m−1)π/6, and a centre
    map of ratio 1/√3 rotated by π/6.
    """
    maps = []
    for m in range(1, 7):
        alpha = (2 * m - 1) * math.pi / 6
        maps.append(Similarity.scaling(1 / 3, [2 / 3 * math.cos(alpha), 2 / 3 * math.sin(alpha)]))
    maps.append(Similarity(1 / math.sqrt(3), rotation_matrix(math.pi / 6), np.zeros(2)))
    return make_attractor(
        maps, 2, measure_override=1.0, diam_override=2.0, name="koch-snowflake",
        metadata={"measure_exact": False, "diam_exact": True},
    )


def golden_cantor(rho: Optional[float] = None) -> Attractor:
    """Non-uniform Cantor set {x/2, x/4 + 3/4}"""
    maps = [Similarity.scaling(0.5, [0.0]), Similarity.scaling(0.25, [0.75])]
    return make_attractor(
        maps, 1, measure_override=1.0, diam_override=1.0, name="golden-cantor",
        metadata={"measure_exact": False, "diam_exact": True},
    )


def rotated_nonuniform(rho: Optional[float] = None) -> Attractor:
    """Non-uniform, hull-disjoint IFS with two quarter-turn maps; diameter from the hull"""
    quarter = rotation_matrix(math.pi / 2)
    maps = [
        Similarity.scaling(0.25, [0.0, 0.0]),
        Similarity(0.25, quarter, np.array([0.75, 0.0])),
        Similarity(0.25, quarter, np.array([0.0, 0.75])),
        Similarity.scaling(0.5, [0.5, 0.5]),
    ]
    return make_attractor(
        maps, 2, measure_override=1.0, name="rotated-nonuniform",
        metadata={"measure_exact": False, "diam_exact": False},
    )


PRESETS: Dict[str, PresetSpec] = {
    spec.name: spec
    for spec in (
        PresetSpec("cantor", "Cantor set {ρx, ρx+1−ρ}, ρ ∈ (0, 1/2]", cantor, 1 / 3),
        PresetSpec("cantor-dust", "Cantor dust (four corner maps), ρ ∈ (0, 1/2)", cantor_dust, 1 / 3),
        PresetSpec("triangle-centre", "triangle corners plus centre, ρ = 0.41", triangle_centre, 0.41),
        PresetSpec("dust-satellite", "dust ρ = 1/3 plus x/27 + (4/27, 4/27)", dust_satellite),
        PresetSpec("vicsek", "Vicsek fractal, ρ = 1/3", vicsek),
        PresetSpec("koch-snowflake", "filled Koch snowflake, 7 maps", koch_snowflake),
        PresetSpec("golden-cantor", "non-uniform Cantor set {x/2, x/4+3/4}", golden_cantor),
        PresetSpec("rotated-nonuniform", "4 maps with quarter-turn rotations", rotated_nonuniform),
        PresetSpec("interval", "[0, 1] as the ρ = 1/2 Cantor construction", interval),
    )
}


# public short names accepted alongside the descriptive ones
PRESET_ALIASES: Dict[str, str] = {
    "table1-II": "triangle-centre",
    "table1-III": "dust-satellite",
    "fig3-cantor": "golden-cantor",
    "eq62-nonuniform": "rotated-nonuniform",
}


def resolve_preset_name(name: str) -> str:
    """별칭을 프리셋 이름으로 변환"""
    return PRESET_ALIASES.get(name, name)


def preset_names() -> List[str]:
    """프리셋 이름과 별칭 (CLI choices)"""
    return sorted(set(PRESETS) | set(PRESET_ALIASES))


def preset(name: str, rho: Optional[float] = None) -> Attractor:
    """
    Build a preset attractor

    Args:
        name: one of PRESETS or PRESET_ALIASES
        rho: contraction parameter for cantor, cantor-dust and triangle-centre

    Raises:
        ConfigError: unknown name or ρ out of range

    Example:
        >>> preset("cantor", rho=1/3).dim
        0.6309297535714574
    """
    try:
        spec = PRESETS[resolve_preset_name(name)]
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}'. Available: {preset_names()}") from None
    attractor = spec.builder(rho)
    logger.debug("preset %s: %r", name, attractor)
    return attractor


def preset_table() -> pd.DataFrame:
    """이름, 설명, M, d, μ, diam 요약표"""
    rows = []
    for name, spec in PRESETS.items():
        attractor = spec.builder(None)
        rows.append({
            "name": name,
            "description": spec.description,
            "aliases": " ".join(sorted(a for a, target in PRESET_ALIASES.items() if target == name)),
            "M": attractor.M,
            "n": attractor.ambient_dim,
            "d": attractor.dim,
            "measure": attractor.measure,
            "diam": attractor.diam,
            "diam_provenance": attractor.diam_provenance.value,
        })
    return pd.DataFrame(rows)


def _map_from_spec(spec: Dict, ambient_dim: int, position: int) -> Similarity:
    if not isinstance(spec, dict) or "ratio" not in spec or "translation" not in spec:
        raise ConfigError(f"map {position}: needs 'ratio' and 'translation'")
    translation = np.atleast_1d(np.asarray(spec["translation"], dtype=float))
    if translation.shape != (ambient_dim,):
        raise ConfigError(f"map {position}: translation must have {ambient_dim} entries")
    if "rotation" in spec:
        rotation = np.asarray(spec["rotation"], dtype=float).reshape(ambient_dim, ambient_dim)
    elif ambient_dim == 2:
        rotation = rotation_matrix(float(spec.get("angle", 0.0)), bool(spec.get("reflect", False)))
    else:
        rotation = np.array([[-1.0 if spec.get("reflect", False) else 1.0]])
    return Similarity(float(spec["ratio"]), rotation, translation)


def inline_attractor(
    map_specs,
    ambient_dim: int,
    measure: Optional[float] = None,
    diam: Optional[float] = None,
    name: str = "inline",
) -> Attractor:
    """
    Attractor from config map entries {ratio, translation, rotation | angle, reflect}

    Raises:
        ConfigError: malformed map entry
        AttractorError: the maps do not define a valid IFS
    """
    if not map_specs:
        raise ConfigError("'maps' must be a non-empty list")
    maps = [_map_from_spec(spec, ambient_dim, i) for i, spec in enumerate(map_specs, start=1)]
    return make_attractor(maps, ambient_dim, measure_override=measure, diam_override=diam, name=name)
