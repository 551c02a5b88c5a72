"""
Convex hulls, hull distances and separation parameters of IFS attractors
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull as QhullHull
from scipy.spatial import QhullError, cKDTree

from ..utils.errors import GeometryError, NumericPreconditionError
from .ifs import Attractor, Similarity, fixed_point
from .partition import Partition, partition_lh

logger = logging.getLogger(__name__)

HULL_LEVEL_CAP = 24
TOUCHING_TOL = 1e-12

# relative tolerance of the cached attractor hull
HULL_REL_TOL = 1e-12

# default refinement depth of the R_Γ estimate
SEPARATION_DEPTH = 4


def _hull_vertices(points: np.ndarray, ambient_dim: int) -> np.ndarray:
    """
    Extreme points of a cloud

    n=1: [[a], [b]]; n=2: counterclockwise vertices. Collinear or coincident
    clouds return a segment (2 vertices) or a point (1 vertex).
    """
    points = np.asarray(points, dtype=float).reshape(-1, ambient_dim)
    if ambient_dim == 1:
        return np.array([[points.min()], [points.max()]])

    scale = max(float(np.ptp(points, axis=0).max()), 1e-300)
    try:
        qhull = QhullHull(points)
        vertices = points[qhull.vertices]
        if qhull.volume > 1e-14 * scale * scale:
            return vertices
    except (QhullError, ValueError):
        pass

    # degenerate cloud: project on the direction of largest spread
    centred = points - points.mean(axis=0)
    if np.max(np.abs(centred)) <= 1e-15 * max(1.0, np.max(np.abs(points))):
        return points[:1].copy()
    _, _, vt = np.linalg.svd(centred, full_matrices=False)
    proj = centred @ vt[0]
    return points[[int(np.argmin(proj)), int(np.argmax(proj))]]


def level_cap_for(rel_tol: float, rho_max: float) -> int:
    """Refinement levels after which ρ_max^ℓ drops below rel_tol (at least HULL_LEVEL_CAP)"""
    return max(HULL_LEVEL_CAP, math.ceil(math.log(rel_tol) / math.log(rho_max)) + 1)


def vertex_diameter(vertices: np.ndarray) -> float:
    """Largest pairwise distance between hull vertices"""
    v = np.asarray(vertices, dtype=float)
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


def _orient(a, b, c):
    """Cross product (b - a) × (c - a), broadcasting"""
    return ((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
            - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))


def _point_segment_distances(p, a, b):
    ab = b - a
    ap = p - a
    denom = np.sum(ab * ab, axis=-1)
    safe = np.where(denom > 0, denom, 1.0)
    t = np.where(denom > 0, np.sum(ap * ab, axis=-1) / safe, 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.sqrt(np.sum((p - proj) ** 2, axis=-1))


def _point_polygon_distances(points: np.ndarray, polys: np.ndarray) -> np.ndarray:
    """
    Distances of points (P, 2) to convex CCW polygons (P, k, 2); 0 inside
    """
    a = polys
    b = np.roll(polys, -1, axis=1)
    p = points[:, None, :]
    dist = _point_segment_distances(p, a, b).min(axis=1)
    if polys.shape[1] >= 3:
        scale = np.max(np.abs(polys), axis=(1, 2)) + 1.0
        inside = np.all(_orient(a, b, p) >= -1e-14 * scale[:, None] ** 2, axis=1)
        dist = np.where(inside, 0.0, dist)
    return dist


def _segments_cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Proper crossing of any edge of a (P, ka, 2) with any edge of b (P, kb, 2)"""
    a1 = a[:, :, None, :]
    a2 = np.roll(a, -1, axis=1)[:, :, None, :]
    b1 = b[:, None, :, :]
    b2 = np.roll(b, -1, axis=1)[:, None, :, :]
    o1 = _orient(a1, a2, b1)
    o2 = _orient(a1, a2, b2)
    o3 = _orient(b1, b2, a1)
    o4 = _orient(b1, b2, a2)
    return np.any((o1 * o2 < 0) & (o3 * o4 < 0), axis=(1, 2))


def _pair_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Distances between hull pairs a[i], b[i]

    n=1 hulls are (P, 2, 1) intervals; n=2 hulls are (P, k, 2) polygons.
    """
    if a.shape[-1] == 1:
        gap = np.maximum(b[:, 0, 0] - a[:, 1, 0], a[:, 0, 0] - b[:, 1, 0])
        return np.maximum(gap, 0.0)

    count, ka, _ = a.shape
    kb = b.shape[1]
    d_ab = _point_polygon_distances(
        a.reshape(count * ka, 2), np.repeat(b, ka, axis=0)
    ).reshape(count, ka).min(axis=1)
    d_ba = _point_polygon_distances(
        b.reshape(count * kb, 2), np.repeat(a, kb, axis=0)
    ).reshape(count, kb).min(axis=1)
    dist = np.minimum(d_ab, d_ba)
    return np.where(_segments_cross(a, b), 0.0, dist)


def _clamp(distance: float) -> float:
    return 0.0 if distance < TOUCHING_TOL else float(distance)


@dataclass(frozen=True, eq=False)
class ConvexHull:
    """
    Convex hull of a planar or linear set

    Attributes:
        ambient_dim: 1 or 2
        vertices: n=1 → [[a], [b]] with a ≤ b; n=2 → counterclockwise (k, 2),
            with k = 1 or 2 for degenerate (point / segment) hulls
        metadata: construction details (level, defect bound, displacement)
    """
    ambient_dim: int
    vertices: np.ndarray
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, self.ambient_dim)
        if self.ambient_dim == 1:
            if v.shape[0] != 2 or v[0, 0] > v[1, 0]:
                raise GeometryError(f"1-D hull must be an interval [a, b], got {v.ravel()}")
        elif v.shape[0] >= 3:
            cross = _orient(v, np.roll(v, -1, axis=0), np.roll(v, -2, axis=0))
            scale = max(float(np.abs(v).max()), 1.0)
            if np.any(cross < -1e-14 * scale * scale):
                raise GeometryError("polygon vertices are not strictly convex counterclockwise")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @property
    def interval(self) -> Tuple[float, float]:
        return float(self.vertices[0, 0]), float(self.vertices[1, 0])

    def mapped(self, s: Similarity) -> "ConvexHull":
        """Image hull s(H), reoriented for reflections"""
        v = s(self.vertices).reshape(-1, self.ambient_dim)
        if self.ambient_dim == 1:
            v = np.sort(v, axis=0)
        elif s.is_reflection:
            v = v[::-1]
        return ConvexHull(self.ambient_dim, v)

    def diameter(self) -> float:
        return vertex_diameter(self.vertices)

    def contains(self, point, tol: float = 0.0) -> bool:
        return point_hull_distance(point, self) <= tol

    def __repr__(self) -> str:
        return f"<ConvexHull(n={self.ambient_dim}, vertices={len(self.vertices)})>"


def iterate_hull(
    maps: Sequence[Similarity],
    ambient_dim: int,
    tol: Optional[float] = None,
    rel_tol: Optional[float] = None,
    level_cap: int = HULL_LEVEL_CAP,
) -> Tuple[np.ndarray, int, float, bool]:
    """
    Hull of the level-ℓ fixed-point cloud, refined until it stops moving

    Hull(P_{ℓ+1}) = Hull(∪_m s_m(Hull(P_ℓ))), so only hull vertices are
    mapped. Iteration stops at the first ℓ with Hausdorff distance between
    Hull(P_ℓ) and Hull(P_{ℓ+1}) below tol (or rel_tol·diameter).

    Returns:
        (vertices of Hull(P_ℓ), ℓ, last displacement, converged flag)
    """
    points = np.array([fixed_point(s) for s in maps])
    vertices = _hull_vertices(points, ambient_dim)
    displacement = math.inf
    for level in range(level_cap + 1):
        images = np.concatenate([s(vertices).reshape(-1, ambient_dim) for s in maps])
        refined = _hull_vertices(np.concatenate([vertices, images]), ambient_dim)
        displacement = _nested_hull_displacement(vertices, refined, ambient_dim)
        threshold = tol if tol is not None else rel_tol * max(vertex_diameter(refined), 1e-300)
        logger.debug("hull level %d: %d vertices, displacement %.3e", level, len(vertices), displacement)
        if displacement < threshold:
            return vertices, level, displacement, True
        vertices = refined
    return vertices, level_cap, displacement, False


def _nested_hull_displacement(inner: np.ndarray, outer: np.ndarray, ambient_dim: int) -> float:
    """Hausdorff distance between nested hulls: farthest outer vertex from the inner hull"""
    if ambient_dim == 1:
        return float(max(inner[0, 0] - outer[0, 0], outer[1, 0] - inner[1, 0], 0.0))
    polys = np.repeat(inner[None], len(outer), axis=0)
    return float(_point_polygon_distances(outer, polys).max())


def hull_approx(attractor: Attractor, tol: float, level_cap: int = HULL_LEVEL_CAP) -> ConvexHull:
    """
    Inner approximation of Hull(Γ) from fixed-point image clouds

    Args:
        attractor: valid attractor
        tol: stop when successive hulls are closer than tol (Hausdorff)
        level_cap: maximum refinement level

    Returns:
        ConvexHull with metadata {level, defect_bound, displacement}

    Raises:
        NumericPreconditionError: tol ≤ 0
        GeometryError: level_cap reached before tol was met

    Example:
        >>> hull_approx(preset("cantor", rho=1/3), 1e-12).interval
        (0.0, 1.0)
    """
    if not tol > 0:
        raise NumericPreconditionError(f"hull tolerance must be positive, got {tol}")
    vertices, level, displacement, converged = iterate_hull(
        attractor.maps, attractor.ambient_dim, tol=tol, level_cap=level_cap
    )
    if not converged:
        raise GeometryError(
            f"hull of '{attractor.name}' did not reach tol={tol:g} within {level_cap} levels "
            f"(last displacement {displacement:.3e})"
        )
    return ConvexHull(
        attractor.ambient_dim,
        vertices,
        metadata={
            "level": level,
            "defect_bound": attractor.rho_max ** level * attractor.diam,
            "displacement": displacement,
        },
    )


@lru_cache(maxsize=128)
def attractor_hull(attractor: Attractor) -> ConvexHull:
    """Cached Hull(Γ) used by all separation quantities"""
    tol = HULL_REL_TOL * attractor.diam
    cap = level_cap_for(HULL_REL_TOL, attractor.rho_max)
    try:
        return hull_approx(attractor, tol, level_cap=cap)
    except GeometryError as exc:
        logger.warning("%s; using the last refinement", exc)
        vertices, level, displacement, _ = iterate_hull(
            attractor.maps, attractor.ambient_dim, tol=tol, level_cap=cap
        )
        return ConvexHull(
            attractor.ambient_dim, vertices,
            metadata={"level": level, "displacement": displacement, "converged": False},
        )


def hull_distance(h1: ConvexHull, h2: ConvexHull) -> float:
    """
    Euclidean distance between two convex hulls (0 iff they intersect)

    Raises:
        GeometryError: dimension mismatch

    Example:
        >>> hull_distance(ConvexHull(1, [[0], [1/3]]), ConvexHull(1, [[2/3], [1]]))
        0.3333333333333333
    """
    if h1.ambient_dim != h2.ambient_dim:
        raise GeometryError(f"hull dimensions differ: {h1.ambient_dim} vs {h2.ambient_dim}")
    dist = _pair_distances(h1.vertices[None], h2.vertices[None])[0]
    return _clamp(float(dist))


def point_hull_distance(point, hull: ConvexHull) -> float:
    """Distance from a point to a hull (0 inside)"""
    p = np.asarray(point, dtype=float).reshape(hull.ambient_dim)
    if hull.ambient_dim == 1:
        a, b = hull.interval
        return _clamp(max(a - p[0], p[0] - b, 0.0))
    return _clamp(float(_point_polygon_distances(p[None], hull.vertices[None])[0]))


def _point_to_hulls(point, hulls: np.ndarray) -> np.ndarray:
    """Distances from one point to each hull of a piece-hull array"""
    point = np.asarray(point, dtype=float).reshape(-1)
    if hulls.shape[-1] == 1:
        gap = np.maximum(hulls[:, 0, 0] - point[0], point[0] - hulls[:, 1, 0])
        return np.maximum(gap, 0.0)
    return _point_polygon_distances(np.repeat(point[None], len(hulls), axis=0), hulls)


def distance_to_hull_set(point, attractor: Attractor, h: float) -> float:
    """Distance from a point to Γ_Hull,h, the union of the L_h piece hulls"""
    hulls = piece_hulls(partition_lh(attractor, h))
    return _clamp(float(_point_to_hulls(point, hulls).min()))


def piece_hulls(partition: Partition, base: Optional[ConvexHull] = None) -> np.ndarray:
    """
    Hulls s_𝐦(Hull Γ) of all partition members as an array

    Returns:
        (N, 2, 1) intervals for n=1, (N, k, 2) CCW polygons for n=2
    """
    base = base or attractor_hull(partition.attractor)
    v = base.vertices
    hulls = np.einsum("nij,kj->nki", partition.linear, v) + partition.translation[:, None, :]
    if partition.attractor.ambient_dim == 1:
        return np.sort(hulls, axis=1)
    flipped = np.linalg.det(partition.linear) < 0
    hulls[flipped] = hulls[flipped, ::-1]
    return hulls


def _min_hull_distance(
    hulls_a: np.ndarray,
    hulls_b: np.ndarray,
    labels_a: Optional[np.ndarray] = None,
    labels_b: Optional[np.ndarray] = None,
    upper_triangle: bool = False,
) -> float:
    """
    min over admissible pairs (i, j) of dist(hulls_a[i], hulls_b[j])

    Pairs with equal labels are skipped; bounding-ball lower bounds prune
    pairs that cannot beat the current minimum.
    """
    centres_a = hulls_a.mean(axis=1)
    centres_b = hulls_b.mean(axis=1)
    radii_a = np.sqrt(np.max(np.sum((hulls_a - centres_a[:, None]) ** 2, axis=-1), axis=1))
    radii_b = np.sqrt(np.max(np.sum((hulls_b - centres_b[:, None]) ** 2, axis=-1), axis=1))

    best = math.inf
    columns = np.arange(len(hulls_b))
    for i in range(len(hulls_a)):
        cand = columns[columns > i] if upper_triangle else columns
        if labels_a is not None:
            cand = cand[labels_b[cand] != labels_a[i]]
        if cand.size == 0:
            continue
        lower = (np.sqrt(np.sum((centres_b[cand] - centres_a[i]) ** 2, axis=-1))
                 - radii_a[i] - radii_b[cand])
        cand = cand[lower <= best]
        if cand.size == 0:
            continue
        dist = _pair_distances(np.repeat(hulls_a[i][None], cand.size, axis=0), hulls_b[cand])
        best = min(best, float(dist.min()))
        if best < TOUCHING_TOL:
            return 0.0
    return best


def _check_h(attractor: Attractor, h: float) -> None:
    if not 0.0 < h < attractor.diam:
        raise NumericPreconditionError(
            f"h must satisfy 0 < h < diam(Γ) = {attractor.diam:.6g}, got {h}"
        )


def r_gamma_hull(attractor: Attractor) -> float:
    """R_{Γ,Hull}: min distance between the level-1 hulls s_m(Hull Γ)"""
    base = attractor_hull(attractor)
    hulls = [base.mapped(s) for s in attractor.maps]
    best = math.inf
    for i in range(attractor.M):
        for j in range(i + 1, attractor.M):
            best = min(best, hull_distance(hulls[i], hulls[j]))
    return _clamp(best)


def r_m_h(attractor: Attractor, m: int, h: float) -> float:
    """
    R_{m,h}: distance from η_m to the hulls of L_h members outside Γ_m

    Raises:
        NumericPreconditionError: h out of range or m outside 1..M
    """
    _check_h(attractor, h)
    if not 1 <= m <= attractor.M:
        raise NumericPreconditionError(f"m must lie in 1..{attractor.M}, got {m}")
    partition = partition_lh(attractor, h)
    hulls = piece_hulls(partition)
    others = hulls[partition.labels(1) != m - 1]
    return _clamp(float(_point_to_hulls(attractor.fixed_points[m - 1], others).min()))


def r_gamma_hull_h(attractor: Attractor, h: float) -> float:
    """R_{Γ,Hull,h}: min hull distance between L_h members with different first index"""
    _check_h(attractor, h)
    partition = partition_lh(attractor, h)
    hulls = piece_hulls(partition)
    labels = partition.labels(1)
    return _clamp(_min_hull_distance(hulls, hulls, labels, labels, upper_triangle=True))


def hull_disjoint_h(attr1: Attractor, attr2: Attractor, h: float) -> float:
    """dist(Γ_{Hull,h}, Γ'_{Hull,h}) between the h-hull sets of two attractors"""
    if attr1.ambient_dim != attr2.ambient_dim:
        raise GeometryError("attractors live in different dimensions")
    hulls1 = piece_hulls(partition_lh(attr1, h))
    hulls2 = piece_hulls(partition_lh(attr2, h))
    return _clamp(_min_hull_distance(hulls1, hulls2))


def _cloud_distance(partition: Partition) -> float:
    """Upper estimate of R_Γ from fixed-point images s_𝐦(η_j) of the partition"""
    attractor = partition.attractor
    cloud = (np.einsum("nij,kj->nki", partition.linear, attractor.fixed_points)
             + partition.translation[:, None, :])
    labels = np.repeat(partition.labels(1), attractor.M)
    cloud = cloud.reshape(-1, attractor.ambient_dim)
    best = math.inf
    for m in np.unique(labels):
        inside = labels == m
        tree = cKDTree(cloud[~inside])
        dist, _ = tree.query(cloud[inside], k=1)
        best = min(best, float(dist.min()))
    return _clamp(best)


@dataclass(frozen=True)
class SeparationReport:
    """
    Separation parameters of an attractor

    Attributes:
        r_gamma: R_Γ lower estimate (deep hull distances)
        r_gamma_hull: R_{Γ,Hull}
        r_m_h: R_{m,h}, m = 1..M
        r_gamma_hull_h: R_{Γ,Hull,h}
        h: partition parameter
        r_gamma_upper: R_Γ upper estimate (deep point clouds)
        r_gamma_error: a-priori two-sided error 2ρ_max^ℓ·diam(Γ)
        depth: refinement depth of the R_Γ estimate
    """
    r_gamma: float
    r_gamma_hull: float
    r_m_h: Tuple[float, ...]
    r_gamma_hull_h: float
    h: float
    r_gamma_upper: float = math.nan
    r_gamma_error: float = math.nan
    depth: int = SEPARATION_DEPTH

    @property
    def touching(self) -> bool:
        """Level-1 pieces touch or overlap (R_Γ clamped to 0)"""
        return self.r_gamma == 0.0

    @property
    def min_r_m_h(self) -> float:
        return min(self.r_m_h)

    def ordering_holds(self, tol: float = 1e-12) -> bool:
        """R_{Γ,Hull} ≤ R_{Γ,Hull,h} ≤ R_Γ and R_{Γ,Hull,h} ≤ min_m R_{m,h}"""
        return (self.r_gamma_hull <= self.r_gamma_hull_h + tol
                and self.r_gamma_hull_h <= self.r_gamma + tol
                and self.r_gamma_hull_h <= self.min_r_m_h + tol)

    def to_dict(self) -> Dict:
        return {
            "r_gamma": self.r_gamma,
            "r_gamma_upper": self.r_gamma_upper,
            "r_gamma_error": self.r_gamma_error,
            "r_gamma_hull": self.r_gamma_hull,
            "r_m_h": list(self.r_m_h),
            "r_gamma_hull_h": self.r_gamma_hull_h,
            "h": self.h,
            "depth": self.depth,
            "touching": self.touching,
        }


def separation_params(attractor: Attractor, h: float, depth: int = SEPARATION_DEPTH) -> SeparationReport:
    """
    The four separation parameters of an attractor at partition parameter h

    R_Γ is estimated from L_{h_R} with h_R = min(h, diam·ρ_max^depth): the
    hull distance there is a lower bound, the point-cloud distance an upper
    bound.

    Raises:
        NumericPreconditionError: h outside (0, diam Γ)

    Example:
        >>> rep = separation_params(preset("cantor-dust", rho=1/3), 0.2)
        >>> rep.r_gamma_hull_h, rep.min_r_m_h
        (0.3333333333333333, 0.6666666666666667)
    """
    _check_h(attractor, h)
    h_deep = min(h, attractor.diam * attractor.rho_max ** depth)
    deep = partition_lh(attractor, h_deep)
    r_gamma = r_gamma_hull_h(attractor, h_deep)
    level = int(deep.lengths.min())

    report = SeparationReport(
        r_gamma=r_gamma,
        r_gamma_hull=r_gamma_hull(attractor),
        r_m_h=tuple(r_m_h(attractor, m, h) for m in range(1, attractor.M + 1)),
        r_gamma_hull_h=r_gamma_hull_h(attractor, h),
        h=h,
        r_gamma_upper=max(_cloud_distance(deep), r_gamma),
        r_gamma_error=2.0 * attractor.rho_max ** level * attractor.diam,
        depth=depth,
    )
    if report.touching:
        logger.info("'%s' level-1 pieces touch or overlap (R_Γ = 0)", attractor.name)
    return report
