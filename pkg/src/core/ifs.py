"""
Iterated function systems of contracting similarities

Similarity maps s(x) = ρ·A·x + δ, attractors Γ = ∪ s_m(Γ), vector indices
and the scaling of addressed sub-components Γ_𝐦 = s_𝐦(Γ).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..utils.config_models import DiamProvenance
from ..utils.errors import AttractorError, IndexRangeError

logger = logging.getLogger(__name__)

# Tolerance for ratio/orthogonality checks
ORTHO_TOL = 1e-12

# Relative tolerance for hull-approximated diameters in make_attractor
DIAM_HULL_TOL = 1e-9

# 1-based map numbers; () denotes Γ itself
VecIndex = Tuple[int, ...]


def rotation_matrix(theta: float, reflect: bool = False) -> np.ndarray:
    """
    2-D rotation by theta (radians), optionally followed by reflection in the x-axis

    Example:
        >>> rotation_matrix(math.pi / 2)
        array([[ 0., -1.],
               [ 1.,  0.]])
    """
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    if reflect:
        rot = rot @ np.diag([1.0, -1.0])
    # snap cos/sin round-off at multiples of π/2
    rot[np.abs(rot) < 1e-15] = 0.0
    return rot


@dataclass(frozen=True, eq=False)
class Similarity:
    """
    Contracting similarity x ↦ ratio·rotation·x + translation

    Attributes:
        ratio: contraction factor ρ in (0, 1)
        rotation: n×n orthogonal matrix A (reflections allowed)
        translation: n-vector δ
        is_identity: True only for the identity returned by compose(Γ, ())
    """
    ratio: float
    rotation: np.ndarray
    translation: np.ndarray
    is_identity: bool = False

    def __post_init__(self):
        translation = np.atleast_1d(np.array(self.translation, dtype=float))
        if translation.ndim != 1:
            raise AttractorError(f"translation must be a vector, got shape {translation.shape}")
        n = translation.shape[0]
        rotation = np.array(self.rotation, dtype=float)
        if rotation.ndim == 0:
            rotation = rotation.reshape(1, 1)
        if rotation.shape != (n, n):
            raise AttractorError(
                f"rotation shape {rotation.shape} does not match translation dimension {n}"
            )

        ratio = float(self.ratio)
        if self.is_identity:
            if ratio != 1.0:
                raise AttractorError("identity similarity must have ratio 1")
        elif not 0.0 < ratio < 1.0:
            raise AttractorError(f"similarity ratio must lie in (0, 1), got {ratio}")

        deviation = np.max(np.abs(rotation.T @ rotation - np.eye(n)))
        if deviation > ORTHO_TOL:
            raise AttractorError(f"rotation is not orthogonal (max |AᵀA - I| = {deviation:.3e})")

        rotation.flags.writeable = False
        translation.flags.writeable = False
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls, ambient_dim: int) -> "Similarity":
        return cls(1.0, np.eye(ambient_dim), np.zeros(ambient_dim), is_identity=True)

    @classmethod
    def scaling(cls, ratio: float, translation, rotation=None) -> "Similarity":
        """
        Convenience constructor; rotation defaults to the identity matrix

        Example:
            >>> s = Similarity.scaling(1/3, [2/3])   # Cantor s₂
        """
        translation = np.atleast_1d(np.array(translation, dtype=float))
        if rotation is None:
            rotation = np.eye(translation.shape[0])
        return cls(ratio, rotation, translation)

    @property
    def ambient_dim(self) -> int:
        return self.translation.shape[0]

    @cached_property
    def linear(self) -> np.ndarray:
        """ρ·A"""
        return self.ratio * self.rotation

    @property
    def is_reflection(self) -> bool:
        return bool(np.linalg.det(self.rotation) < 0)

    def __call__(self, x):
        """Apply to a point or an array of points with trailing axis n (scalars allowed for n=1)"""
        x = np.asarray(x, dtype=float)
        if self.ambient_dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            return self.ratio * self.rotation[0, 0] * x + self.translation[0]
        return x @ self.linear.T + self.translation

    def then(self, inner: "Similarity") -> "Similarity":
        """Return self ∘ inner"""
        if self.is_identity:
            return inner
        if inner.is_identity:
            return self
        return Similarity(
            self.ratio * inner.ratio,
            self.rotation @ inner.rotation,
            self.linear @ inner.translation + self.translation,
        )

    def __repr__(self) -> str:
        return (f"<Similarity(ratio={self.ratio:.6g}, "
                f"translation={np.array2string(self.translation, precision=6)})>")


@dataclass(frozen=True, eq=False)
class Attractor:
    """
    Attractor of an IFS with its solved dimension, measure and diameter

    eq=False: attractors compare and hash by identity, which lets the
    geometry module cache per-attractor quantities.

    Attributes:
        ambient_dim: n ∈ {1, 2}
        maps: M ≥ 2 contracting similarities
        dim: Hausdorff dimension d, Σρ_m^d = 1
        measure: μ(Γ) = H^d(Γ) (1 under the normalized convention)
        diam: diam(Γ)
        diam_provenance: exact (user supplied) or hull-approximated
        name: preset name or ""
        metadata: exact values known for presets, hull defect etc.
    """
    ambient_dim: int
    maps: Tuple[Similarity, ...]
    dim: float
    measure: float
    diam: float
    diam_provenance: DiamProvenance
    name: str = ""
    metadata: Dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return len(self.maps)

    @cached_property
    def ratios(self) -> np.ndarray:
        return np.array([s.ratio for s in self.maps])

    @cached_property
    def log_ratios(self) -> np.ndarray:
        return np.log(self.ratios)

    @property
    def rho_max(self) -> float:
        return float(self.ratios.max())

    @property
    def rho_min(self) -> float:
        return float(self.ratios.min())

    @property
    def is_uniform(self) -> bool:
        return bool(np.allclose(self.ratios, self.ratios[0], rtol=1e-14, atol=0.0))

    @cached_property
    def fixed_points(self) -> np.ndarray:
        """(M, n) array of η_m"""
        return np.array([fixed_point(s) for s in self.maps])

    @cached_property
    def linears(self) -> np.ndarray:
        """(M, n, n) array of ρ_m A_m"""
        return np.array([s.linear for s in self.maps])

    @cached_property
    def translations(self) -> np.ndarray:
        """(M, n) array of δ_m"""
        return np.array([s.translation for s in self.maps])

    def __repr__(self) -> str:
        return (f"<Attractor(name='{self.name}', n={self.ambient_dim}, M={self.M}, "
                f"d={self.dim:.6g}, mu={self.measure:.6g}, diam={self.diam:.6g})>")


@dataclass(frozen=True, eq=False)
class SubComponent:
    """Addressed piece Γ_𝐦 = s_𝐦(Γ)"""
    index: VecIndex
    map: Similarity
    diam: float
    measure: float
    parent: Attractor


def solve_dimension(ratios: Sequence[float]) -> float:
    """
    Solve Σ ρ_m^d = 1 for the similarity dimension d

    F(d) = Σρ_m^d is strictly decreasing with F(0) = M > 1, so the root is
    bracketed by [0, hi] once F(hi) < 1. Bisection to width 1e-15, then one
    Newton step (kept only if it reduces the residual).

    Args:
        ratios: contraction factors in (0, 1), at least two

    Returns:
        float: d

    Raises:
        AttractorError: fewer than two ratios or a ratio outside (0, 1)

    Example:
        >>> solve_dimension([1/3, 1/3])
        0.6309297535714574
    """
    r = np.asarray(list(ratios), dtype=float)
    if r.size < 2:
        raise AttractorError(f"at least two ratios are required, got {r.size}")
    if np.any((r <= 0.0) | (r >= 1.0)):
        raise AttractorError(f"all ratios must lie in (0, 1), got {r.tolist()}")

    log_r = np.log(r)

    def residual(d: float) -> float:
        return float(np.sum(np.exp(d * log_r))) - 1.0

    hi = 1.0
    while residual(hi) > 0.0:
        hi *= 2.0

    d = optimize.bisect(residual, 0.0, hi, xtol=1e-15, maxiter=500)

    slope = float(np.sum(log_r * np.exp(d * log_r)))
    polished = d - residual(d) / slope
    if abs(residual(polished)) <= abs(residual(d)):
        d = polished
    return float(d)


def fixed_point(s: Similarity) -> np.ndarray:
    """
    Fixed point η = (I - ρA)⁻¹ δ of a similarity

    Example:
        >>> fixed_point(Similarity.scaling(1/3, [2/3]))
        array([1.])
    """
    n = s.ambient_dim
    return np.linalg.solve(np.eye(n) - s.linear, s.translation)


def make_attractor(
    maps: Sequence[Similarity],
    ambient_dim: int,
    measure_override: Optional[float] = None,
    diam_override: Optional[float] = None,
    name: str = "",
    metadata: Optional[Dict] = None,
) -> Attractor:
    """
    Validate an IFS and build its attractor

    Args:
        maps: M ≥ 2 similarities of dimension ambient_dim
        ambient_dim: 1 or 2
        measure_override: exact H^d(Γ) if known (default: normalized 1)
        diam_override: exact diam(Γ) if known (default: hull-approximated)
        name: label carried into reports
        metadata: extra known values (exact measure flag, table values)

    Returns:
        Attractor

    Raises:
        AttractorError: unsupported dimension, M < 2, invalid maps, d > n
    """
    if ambient_dim not in (1, 2):
        raise AttractorError(f"ambient dimension must be 1 or 2, got {ambient_dim}")
    maps = tuple(maps)
    if len(maps) < 2:
        raise AttractorError(f"an IFS needs at least two maps, got {len(maps)}")
    for i, s in enumerate(maps, start=1):
        if not isinstance(s, Similarity):
            raise AttractorError(f"map {i} is not a Similarity")
        if s.is_identity:
            raise AttractorError(f"map {i} is the identity, not a contraction")
        if s.ambient_dim != ambient_dim:
            raise AttractorError(
                f"map {i} acts on R^{s.ambient_dim}, expected R^{ambient_dim}"
            )

    dim = solve_dimension([s.ratio for s in maps])
    if dim > ambient_dim + ORTHO_TOL:
        raise AttractorError(
            f"similarity dimension {dim:.6g} exceeds ambient dimension {ambient_dim}; "
            f"the maps overlap too much to satisfy the open set condition"
        )

    if measure_override is not None and not measure_override > 0:
        raise AttractorError(f"measure must be positive, got {measure_override}")
    if diam_override is not None and not diam_override > 0:
        raise AttractorError(f"diameter must be positive, got {diam_override}")

    meta = dict(metadata or {})
    if diam_override is not None:
        diam = float(diam_override)
        provenance = DiamProvenance.EXACT
    else:
        from .geometry import iterate_hull, level_cap_for, vertex_diameter

        vertices, level, displacement, converged = iterate_hull(
            maps, ambient_dim, tol=None, rel_tol=DIAM_HULL_TOL,
            level_cap=level_cap_for(DIAM_HULL_TOL, max(s.ratio for s in maps)),
        )
        if not converged:
            logger.warning(
                "hull iteration for diam(Γ) stopped at level %d with displacement %.3e",
                level, displacement,
            )
        diam = vertex_diameter(vertices)
        provenance = DiamProvenance.HULL
        meta.setdefault("hull_level", level)
        meta.setdefault("hull_displacement", displacement)
        if not diam > 0:
            raise AttractorError("attractor is a single point (zero diameter)")

    attractor = Attractor(
        ambient_dim=ambient_dim,
        maps=maps,
        dim=dim,
        measure=float(measure_override) if measure_override is not None else 1.0,
        diam=diam,
        diam_provenance=provenance,
        name=name,
        metadata=meta,
    )
    logger.debug("built %r", attractor)
    return attractor


def validate_index(attractor: Attractor, index) -> VecIndex:
    """
    Normalize and range-check a vector index

    Raises:
        IndexRangeError: an entry is outside 1..M
    """
    index = tuple(int(i) for i in index)
    for position, entry in enumerate(index):
        if not 1 <= entry <= attractor.M:
            raise IndexRangeError(
                f"index entry {entry} at position {position} is outside 1..{attractor.M}"
            )
    return index


def compose(attractor: Attractor, index) -> Similarity:
    """
    s_𝐦 = s_{m_1} ∘ … ∘ s_{m_ℓ}; the empty index gives the identity

    Example:
        >>> compose(cantor, (2, 1))   # x ↦ x/9 + 2/3
    """
    index = validate_index(attractor, index)
    result = Similarity.identity(attractor.ambient_dim)
    for entry in index:
        result = result.then(attractor.maps[entry - 1])
    return result


def subcomponent(attractor: Attractor, index) -> SubComponent:
    """
    Γ_𝐦 with diam = (∏ρ)·diam(Γ) and measure = (∏ρ)^d·μ(Γ)
    """
    index = validate_index(attractor, index)
    s = compose(attractor, index)
    log_ratio = float(sum(attractor.log_ratios[i - 1] for i in index))
    return SubComponent(
        index=index,
        map=s,
        diam=math.exp(log_ratio) * attractor.diam,
        measure=math.exp(attractor.dim * log_ratio) * attractor.measure,
        parent=attractor,
    )


def rescaled_copy(attractor: Attractor, s: Similarity, name: str = "") -> Attractor:
    """
    The attractor s(Γ), realized as the IFS {s ∘ s_m ∘ s⁻¹}

    Measure and diameter are scaled exactly (μ·ρ^d, diam·ρ), so the copy
    keeps the provenance of the original diameter. Used for the self-similar
    scaling identities of the singular rules.
    """
    if s.ambient_dim != attractor.ambient_dim:
        raise AttractorError("similarity and attractor live in different dimensions")
    conj_maps = []
    for sm in attractor.maps:
        rotation = s.rotation @ sm.rotation @ s.rotation.T
        translation = (s.translation + s.linear @ sm.translation
                       - sm.ratio * rotation @ s.translation)
        conj_maps.append(Similarity(sm.ratio, rotation, translation))
    copy = make_attractor(
        conj_maps,
        attractor.ambient_dim,
        measure_override=attractor.measure * s.ratio ** attractor.dim,
        diam_override=attractor.diam * s.ratio,
        name=name or f"{attractor.name}-copy",
        metadata={"source": attractor.name},
    )
    if attractor.diam_provenance is DiamProvenance.HULL:
        copy = replace(copy, diam_provenance=DiamProvenance.HULL)
    return copy


def common_prefix_level(a: VecIndex, b: VecIndex) -> int:
    """ℓ_*(𝐦, 𝐧): length of the longest common prefix plus one"""
    length = 0
    for x, y in zip(a, b):
        if x != y:
            break
        length += 1
    return length + 1


def h_for_level(attractor: Attractor, level: int) -> float:
    """
    Partition parameter of a study level: h = diam(Γ)·ρ_max^ℓ

    For a uniform IFS, L_h(Γ) = I_ℓ at this h.
    """
    if level < 0:
        raise IndexRangeError(f"level must be non-negative, got {level}")
    return attractor.diam * attractor.rho_max ** level


def level_count_estimate(attractor: Attractor, h: float) -> int:
    """
    N = M^⌈log(h/diam)/log ρ⌉ for a uniform IFS (exact), ValueError otherwise
    """
    if not attractor.is_uniform:
        raise ValueError("closed-form count only holds for uniform IFS")
    if h >= attractor.diam:
        return 1
    level = math.ceil(math.log(h / attractor.diam) / math.log(attractor.ratios[0]) - 1e-12)
    return attractor.M ** level
