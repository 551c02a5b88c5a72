"""
Singular kernels Φ_t and their integrals over attractors

Φ_0(x, y) = log|x − y| and Φ_t(x, y) = |x − y|^{−t} for t > 0. Both are
homogeneous under scaling, Φ_t(ρx, ρy) = ρ^{−t}Φ_t(x, y) and
Φ_0(ρx, ρy) = log ρ + Φ_0(x, y), which turns the singular integrals into
regular ones over pairs of distinct sub-components.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..utils.errors import (
    DivergentIntegralError,
    NumericPreconditionError,
    SeparationError,
    SingularPointError,
)
from .geometry import distance_to_hull_set, hull_disjoint_h, r_gamma_hull_h, r_m_h
from .ifs import Attractor, subcomponent, validate_index
from .partition import partition_level, partition_lh, rule_from_partition
from .summation import NeumaierAccumulator, PairSelection, double_sum, lane_sum

logger = logging.getLogger(__name__)

# depth of the fixed-point and disjointness checks
CHECK_DEPTH = 6


@dataclass(frozen=True)
class PhiTKernel:
    """
    Φ_t kernel

    Attributes:
        t: exponent ≥ 0 (t = 0 selects the logarithm)
    """
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise NumericPreconditionError(f"t must be non-negative, got {self.t}")

    @property
    def a_t(self) -> float:
        """Hessian constant: 2 for t = 0, t(t+2) otherwise"""
        return 2.0 if self.t == 0 else self.t * (self.t + 2)

    def evaluate(self, r):
        """Φ_t as a function of r = |x − y| > 0"""
        r = np.asarray(r, dtype=float)
        if self.t == 0:
            return np.log(r)
        return r ** (-self.t)

    def block_kernel(self, xb: np.ndarray, y: np.ndarray, mask: np.ndarray) -> np.ndarray:
        """Values on a node block; masked-out pairs are evaluated at r = 1"""
        r = np.linalg.norm(xb[:, None, :] - y[None, :, :], axis=-1)
        r = np.where(mask, r, 1.0)
        if np.any(r == 0.0):
            raise SingularPointError("Φ_t evaluated at coincident nodes")
        return self.evaluate(r)


def phi_t(t: float, x, y) -> float:
    """
    Φ_t(x, y)

    Raises:
        SingularPointError: x = y

    Example:
        >>> phi_t(1.0, [0.0], [2.0])
        0.5
    """
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))))
    if r == 0.0:
        raise SingularPointError("Φ_t is singular at x = y")
    return float(PhiTKernel(t).evaluate(r))


def check_integrable(t: float, d: float) -> None:
    """
    Φ_t is H^d-integrable on a d-set iff t < d

    Raises:
        NumericPreconditionError: t < 0
        DivergentIntegralError: t ≥ d
    """
    if t < 0:
        raise NumericPreconditionError(f"t must be non-negative, got {t}")
    if t >= d:
        raise DivergentIntegralError(f"divergent integral: t = {t} ≥ d = {d:.6g}")


def scaling_ratio(attractor: Attractor, t: float) -> float:
    """Σ_m ρ_m^{2d−t} (t > 0) or Σ_m ρ_m^{2d} (t = 0)"""
    exponent = 2 * attractor.dim - (t if t > 0 else 0.0)
    return float(np.sum(attractor.ratios ** exponent))


def precondition_failed(message: str, strict: bool) -> None:
    if strict:
        raise SeparationError(message)
    logger.warning(message)


def _check_depth_h(attractor: Attractor, depth: int) -> float:
    return attractor.diam * attractor.rho_max ** depth


def integrate_phi_t_at_fixed_point(
    attractor: Attractor,
    t: float,
    m: int,
    h: float,
    strict: bool = False,
    check_depth: int = CHECK_DEPTH,
) -> float:
    """
    ∫_Γ Φ_t(η_m, y) dH^d(y) via self-similarity around the fixed point η_m

    t > 0: I = (1 − ρ_m^{d−t})^{−1} Σ_{m'≠m} Q^h_{Γ_m'}[Φ_t(η_m, ·)]
    t = 0: I = (1 − ρ_m^d)^{−1} (μ ρ_m^d log ρ_m + Σ_{m'≠m} Q^h_{Γ_m'}[Φ_0(η_m, ·)])

    Args:
        attractor: Γ
        t: 0 ≤ t < d
        m: fixed point number 1..M
        h: partition parameter of the regular rules
        strict: raise instead of warning if η_m may lie in another Γ_m'
        check_depth: partition depth of the η_m ∉ Γ_m' check

    Raises:
        DivergentIntegralError: t ≥ d
        IndexRangeError: m outside 1..M

    Example:
        >>> integrate_phi_t_at_fixed_point(preset("interval"), 0.0, 1, 2.0 ** -10)
        -1.0000...
    """
    check_integrable(t, attractor.dim)
    validate_index(attractor, (m,))
    if not h > 0:
        raise NumericPreconditionError(f"h must be positive, got {h}")

    if r_m_h(attractor, m, _check_depth_h(attractor, check_depth)) == 0.0:
        precondition_failed(f"η_{m} may lie in another first-level piece of '{attractor.name}'", strict)

    kernel = PhiTKernel(t)
    eta = attractor.fixed_points[m - 1]
    acc = NeumaierAccumulator()
    for other in range(1, attractor.M + 1):
        if other == m:
            continue
        rule = rule_from_partition(partition_lh(attractor, h, (other,)))
        r = np.linalg.norm(rule.nodes - eta, axis=-1)
        if np.any(r == 0.0):
            raise SingularPointError(f"a node of Γ_{other} coincides with η_{m}")
        acc.add(lane_sum(rule.weights * kernel.evaluate(r)))

    rho = attractor.ratios[m - 1]
    d = attractor.dim
    if t == 0:
        acc.add(attractor.measure * rho ** d * math.log(rho))
        return acc.value.real / (1 - rho ** d)
    return acc.value.real / (1 - rho ** (d - t))


def split_partition(attractor: Attractor, h: float, root):
    """L_h(Γ_root) refined at least once, so every leaf lies in one child"""
    partition = partition_lh(attractor, h, root)
    if partition.N == 1:
        partition = partition_level(attractor, 1, root)
    return partition


def integrate_phi_t_double(
    attractor: Attractor,
    t: float,
    h: float,
    root=(),
    strict: bool = False,
    symmetric: bool = True,
    workers: Optional[int] = None,
    check: bool = True,
    check_depth: int = CHECK_DEPTH,
) -> float:
    """
    ∫_Γ∫_Γ Φ_t(x, y) dH^d(y) dH^d(x) via self-similarity

    With Q_off the barycentre rule over pairs Γ_m × Γ_m', m ≠ m':
      t > 0: I = Q_off / (1 − Σρ_m^{2d−t})
      t = 0: I = (Σ_m μ²ρ_m^{2d} log ρ_m + Q_off) / (1 − Σρ_m^{2d})

    Args:
        attractor: Γ
        t: 0 ≤ t < d
        h: partition parameter
        root: evaluate on Γ_root × Γ_root instead (μ becomes μ(Γ_root))
        strict: raise when disjointness cannot be verified
        symmetric: evaluate only j ≥ i
        workers: thread count
        check: run the disjointness check
        check_depth: partition depth of the disjointness check

    Raises:
        DivergentIntegralError: t ≥ d

    Example:
        >>> integrate_phi_t_double(preset("interval"), 0.0, 2.0 ** -10)
        -1.49999...
    """
    check_integrable(t, attractor.dim)
    if not h > 0:
        raise NumericPreconditionError(f"h must be positive, got {h}")
    root = validate_index(attractor, root)
    if check and r_gamma_hull_h(attractor, _check_depth_h(attractor, check_depth)) == 0.0:
        precondition_failed(
            f"cannot verify disjointness of '{attractor.name}': the depth-{check_depth} hull "
            "lower bound on R_Γ is 0 (the rule still converges when Γ is disjoint)", strict
        )

    partition = split_partition(attractor, h, root)
    rule = rule_from_partition(partition)
    kernel = PhiTKernel(t)
    off_diagonal = double_sum(
        rule.nodes, rule.weights, rule.nodes, rule.weights,
        kernel.block_kernel, symmetric=symmetric,
        labels=partition.labels(1), pairs=PairSelection.DIFFERENT_LABEL, workers=workers,
    ).real

    mu = subcomponent(attractor, root).measure
    d = attractor.dim
    if t == 0:
        acc = NeumaierAccumulator()
        for rho in attractor.ratios:
            acc.add(mu * mu * rho ** (2 * d) * math.log(rho))
        acc.add(off_diagonal)
        return acc.value.real / (1 - scaling_ratio(attractor, 0.0))
    return off_diagonal / (1 - scaling_ratio(attractor, t))


def bound_phi_t_single(attractor: Attractor, t: float, m: int, h: float) -> float:
    """
    n a_t h² μ / (2 (1 − ρ_m^{d−t}) R_{m,h}^{t+2})

    Raises:
        SeparationError: R_{m,h} = 0
    """
    check_integrable(t, attractor.dim)
    r = r_m_h(attractor, m, h)
    if r == 0.0:
        raise SeparationError(f"R_{{{m},h}} = 0 at h = {h:g}; the bound is unavailable")
    rho = attractor.ratios[m - 1]
    d = attractor.dim
    contraction = 1 - rho ** (d - t) if t > 0 else 1 - rho ** d
    a_t = PhiTKernel(t).a_t
    return attractor.ambient_dim * a_t * h * h * attractor.measure / (2 * contraction * r ** (t + 2))


def bound_phi_t_double(attractor: Attractor, t: float, h: float) -> float:
    """
    2 n a_t h² μ² / ((1 − Σρ_m^{2d−t}) R_{Γ,Hull,h}^{t+2})

    Raises:
        SeparationError: R_{Γ,Hull,h} = 0

    Example:
        >>> bound_phi_t_double(preset("cantor", rho=1/3), 0.0, 1/9)
        0.888...
    """
    check_integrable(t, attractor.dim)
    r = r_gamma_hull_h(attractor, h)
    if r == 0.0:
        raise SeparationError(f"R_Γ,Hull,h = 0 at h = {h:g}; the bound is unavailable")
    a_t = PhiTKernel(t).a_t
    mu = attractor.measure
    return (2 * attractor.ambient_dim * a_t * h * h * mu * mu
            / ((1 - scaling_ratio(attractor, t)) * r ** (t + 2)))


def bound_phi_t_regular_single(attractor: Attractor, t: float, eta, h: float) -> float:
    """
    Error bound n a_t h² μ / (2 δ^{t+2}) of the plain rule for ∫Φ_t(η, y) dy

    δ is the distance from η to the h-hull set Γ_Hull,h.

    Raises:
        SeparationError: η touches Γ_Hull,h
    """
    delta = distance_to_hull_set(eta, attractor, h)
    if delta == 0.0:
        raise SeparationError("η lies in the h-hull set of Γ")
    a_t = PhiTKernel(t).a_t
    return attractor.ambient_dim * a_t * h * h * attractor.measure / (2 * delta ** (t + 2))


def bound_phi_t_regular_double(attr1: Attractor, attr2: Attractor, t: float, h: float) -> float:
    """2 n a_t h² μμ' / δ^{t+2} with δ = dist(Γ_Hull,h, Γ'_Hull,h)"""
    delta = hull_disjoint_h(attr1, attr2, h)
    if delta == 0.0:
        raise SeparationError("h-hull sets of the two attractors intersect")
    a_t = PhiTKernel(t).a_t
    return 2 * attr1.ambient_dim * a_t * h * h * attr1.measure * attr2.measure / delta ** (t + 2)
