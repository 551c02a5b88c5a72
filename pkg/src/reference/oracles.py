"""
Independent reference values for validating the quadrature rules

These avoid the self-similarity identities of the singular rules: they
evaluate the singular integrand directly on deep fixed-level barycentre
rules, whose nodes never coincide with the singularity, and remove the
leading error term with one geometric extrapolation step. They are not
rigorous; their accuracy is only observed.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.special import hankel1

from ..core.ifs import Attractor, validate_index
from ..core.kernel_phi_t import PhiTKernel, check_integrable, scaling_ratio
from ..core.partition import partition_level, rule_from_partition
from ..core.summation import double_sum, lane_sum

logger = logging.getLogger(__name__)


def hankel_oracle(nu: int, z) -> np.ndarray:
    """H_ν^(1)(z) from scipy.special"""
    return hankel1(nu, np.asarray(z, dtype=float))


def _richardson(coarse: complex, fine: complex, factor: float) -> complex:
    # error_L ≈ C·factor^L  ⇒  I ≈ (Q_{L+1} − factor·Q_L)/(1 − factor)
    return (fine - factor * coarse) / (1 - factor)


def _single_level(attractor: Attractor, kernel: PhiTKernel, eta: np.ndarray, level: int) -> float:
    rule = rule_from_partition(partition_level(attractor, level))
    r = np.linalg.norm(rule.nodes - eta, axis=-1)
    keep = r > 0
    return lane_sum(rule.weights[keep] * kernel.evaluate(r[keep])).real


def naive_single_oracle(attractor: Attractor, t: float, m: int, level: int,
                        extrapolate: bool = True) -> float:
    """
    ∫_Γ Φ_t(η_m, y) dH^d(y) from fixed-level rules at ``level`` and ``level + 1``

    The piece containing η_m contributes an error proportional to
    ρ_m^{(d−t)L} (ρ_m^{dL} for t = 0), which the extrapolation removes.

    Args:
        attractor: Γ
        t: 0 ≤ t < d
        m: fixed point number 1..M
        level: oracle level
        extrapolate: apply the geometric extrapolation step
    """
    check_integrable(t, attractor.dim)
    validate_index(attractor, (m,))
    kernel = PhiTKernel(t)
    eta = attractor.fixed_points[m - 1]
    coarse = _single_level(attractor, kernel, eta, level)
    if not extrapolate:
        return coarse
    fine = _single_level(attractor, kernel, eta, level + 1)
    rho = attractor.ratios[m - 1]
    factor = rho ** (attractor.dim - t) if t > 0 else rho ** attractor.dim
    value = _richardson(coarse, fine, factor).real
    logger.debug("single oracle L=%d: %.12g → %.12g", level, fine, value)
    return value


def _double_level(attractor: Attractor, kernel: PhiTKernel, level: int,
                  workers: Optional[int]) -> float:
    x = rule_from_partition(partition_level(attractor, level))
    y = rule_from_partition(partition_level(attractor, level + 1))

    def block(xb, yy, mask):
        r = np.linalg.norm(xb[:, None, :] - yy[None, :, :], axis=-1)
        apart = r > 0
        return np.where(apart, kernel.evaluate(np.where(apart, r, 1.0)), 0.0)

    return double_sum(x.nodes, x.weights, y.nodes, y.weights, block, workers=workers).real


def naive_double_oracle(attractor: Attractor, t: float, level: int, extrapolate: bool = True,
                        workers: Optional[int] = None) -> float:
    """
    ∫_Γ∫_Γ Φ_t(x, y) from staggered fixed-level rules

    x runs over the level-L barycentres and y over level L+1, so no pair
    coincides; coincident pairs (possible only for degenerate sets) are
    skipped. The diagonal error shrinks by Σρ_m^{2d−t} (Σρ_m^{2d} for t = 0)
    per level, which sets the extrapolation factor.
    """
    check_integrable(t, attractor.dim)
    kernel = PhiTKernel(t)
    coarse = _double_level(attractor, kernel, level, workers)
    if not extrapolate:
        return coarse
    fine = _double_level(attractor, kernel, level + 1, workers)
    factor = scaling_ratio(attractor, t)
    if not 0 < factor < 1 or math.isclose(factor, 1.0):
        return fine
    return _richardson(coarse, fine, factor).real
