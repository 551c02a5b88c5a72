"""
Helmholtz fundamental solution and singularity-subtraction quadrature

Φ(x, y) = (i/4)H_0^(1)(k|x−y|) (n=1) or e^{ik|x−y|}/(4π|x−y|) (n=2) splits as
Φ = C_n Φ_{n−1} + Φ*, with Φ_{n−1} the singular kernel of kernel_phi_t and Φ*
continuous across the diagonal.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..utils.errors import NumericPreconditionError, SeparationError, SingularPointError
from .geometry import hull_disjoint_h, r_gamma_hull
from .hankel import EULER_GAMMA, bessel_series, hankel1_0
from .ifs import Attractor
from .kernel_phi_t import check_integrable, integrate_phi_t_double, precondition_failed, split_partition
from .partition import partition_lh, rule_from_partition
from .summation import NeumaierAccumulator, PairSelection, double_sum

logger = logging.getLogger(__name__)

C_OSC_DEFAULT = 2 * math.pi

# below k·r = 1e-6 the n=1 remainder is summed from the ascending series
PHI_STAR_SERIES_SWITCH = 1e-6


@dataclass(frozen=True)
class HelmholtzKernel:
    """
    Helmholtz kernel with wavenumber k on an n-dimensional screen

    Attributes:
        k: wavenumber > 0
        n: screen dimension, 1 or 2
        c_osc: oscillation threshold; Γ counts as oscillatory when k·diam > c_osc
    """
    k: float
    n: int
    c_osc: float = C_OSC_DEFAULT

    def __post_init__(self):
        if not self.k > 0:
            raise NumericPreconditionError(f"wavenumber must be positive, got k = {self.k}")
        if self.n not in (1, 2):
            raise NumericPreconditionError(f"screen dimension must be 1 or 2, got n = {self.n}")
        if not self.c_osc > 0:
            raise NumericPreconditionError(f"c_osc must be positive, got {self.c_osc}")

    @property
    def C_n(self) -> float:
        return -1 / (2 * math.pi) if self.n == 1 else 1 / (4 * math.pi)

    @property
    def h_star(self) -> float:
        """Oscillatory partition parameter h* = c_osc/k"""
        return self.c_osc / self.k

    def is_oscillatory(self, diam: float) -> bool:
        return self.k * diam > self.c_osc

    def evaluate(self, r) -> np.ndarray:
        """Φ as a function of r > 0"""
        r = np.asarray(r, dtype=float)
        if self.n == 1:
            return 0.25j * hankel1_0(self.k * r)
        return np.exp(1j * self.k * r) / (4 * math.pi * r)

    def diagonal_star(self) -> complex:
        """lim Φ*(x, y) as y → x"""
        if self.n == 1:
            return complex((-math.log(self.k / 2) - EULER_GAMMA) / (2 * math.pi), 0.25)
        return 1j * self.k / (4 * math.pi)

    def evaluate_star(self, r) -> np.ndarray:
        """Φ* = Φ − C_nΦ_{n−1} as a function of r ≥ 0"""
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.full(r.shape, self.diagonal_star(), dtype=complex)
        kr = self.k * r
        if self.n == 2:
            pos = r > 0
            out[pos] = ((-2 * np.sin(kr[pos] / 2) ** 2 + 1j * np.sin(kr[pos]))
                        / (4 * math.pi * r[pos]))
        else:
            small = (r > 0) & (kr < PHI_STAR_SERIES_SWITCH)
            regular = kr >= PHI_STAR_SERIES_SWITCH
            if small.any():
                series = bessel_series(kr[small])
                log_r = np.log(r[small])
                out[small] = 0.25j * series.j0 - (
                    (math.log(self.k / 2) + EULER_GAMMA) * series.j0
                    + log_r * (series.j0 - 1)
                    + series.s
                ) / (2 * math.pi)
            if regular.any():
                out[regular] = 0.25j * hankel1_0(kr[regular]) + np.log(r[regular]) / (2 * math.pi)
        return complex(out[0]) if scalar else out

    def block_kernel(self, xb: np.ndarray, y: np.ndarray, mask: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(xb[:, None, :] - y[None, :, :], axis=-1)
        r = np.where(mask, r, 1.0)
        if np.any(r == 0.0):
            raise SingularPointError("Φ evaluated at coincident nodes")
        return self.evaluate(r)

    def star_block_kernel(self, xb: np.ndarray, y: np.ndarray, mask: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(xb[:, None, :] - y[None, :, :], axis=-1)
        return self.evaluate_star(np.where(mask, r, 0.0))


def _distance(x, y) -> float:
    return float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))))


def phi(kernel: HelmholtzKernel, x, y) -> complex:
    """
    Φ(x, y)

    Raises:
        SingularPointError: x = y
    """
    r = _distance(x, y)
    if r == 0.0:
        raise SingularPointError("Φ is singular at x = y")
    return complex(kernel.evaluate(r))


def phi_star(kernel: HelmholtzKernel, x, y) -> complex:
    """Φ*(x, y), defined everywhere (diagonal limit at x = y)"""
    return complex(kernel.evaluate_star(_distance(x, y)))


def _check_screen(attractor: Attractor, kernel: HelmholtzKernel) -> None:
    if attractor.ambient_dim != kernel.n:
        raise NumericPreconditionError(
            f"kernel is for n = {kernel.n} but Γ lives in R^{attractor.ambient_dim}"
        )
    if not attractor.dim > kernel.n - 1:
        raise NumericPreconditionError(
            f"singularity subtraction needs d > n − 1, got d = {attractor.dim:.6g}, n = {kernel.n}"
        )


def integrate_helmholtz_double(
    attractor: Attractor,
    attractor2: Attractor,
    kernel: HelmholtzKernel,
    h: float,
    strict: bool = False,
    workers: Optional[int] = None,
) -> complex:
    """
    Plain barycentre rule for ∫_Γ∫_Γ' Φ(x, y) on hull-disjoint sets

    Raises:
        SeparationError: h-hull sets intersect and strict is set
    """
    if attractor.ambient_dim != kernel.n or attractor2.ambient_dim != kernel.n:
        raise NumericPreconditionError(f"kernel is for n = {kernel.n}")
    if hull_disjoint_h(attractor, attractor2, h) == 0.0:
        precondition_failed("cannot verify disjointness: the h-hull sets of the two attractors intersect", strict)
    rule1 = rule_from_partition(partition_lh(attractor, h))
    rule2 = rule_from_partition(partition_lh(attractor2, h))
    return double_sum(rule1.nodes, rule1.weights, rule2.nodes, rule2.weights,
                      kernel.block_kernel, workers=workers)


def integrate_helmholtz_singular(
    attractor: Attractor,
    kernel: HelmholtzKernel,
    h: float,
    strict: bool = False,
    symmetric: bool = True,
    workers: Optional[int] = None,
) -> complex:
    """
    Singularity-subtraction rule for ∫_Γ∫_Γ Φ(x, y) dH^d(y) dH^d(x)

    k·diam ≤ c_osc: C_n Q^h[Φ_{n−1}] + Q^h[Φ*] over all node pairs.
    k·diam > c_osc: partition Γ at h* = c_osc/k; each diagonal block
    Γ_𝐦 × Γ_𝐦 gets the rule above with the same h, off-diagonal blocks the
    plain barycentre rule for Φ.

    Args:
        attractor: Γ with d > n − 1
        kernel: HelmholtzKernel
        h: partition parameter, h ≤ diam(Γ) or h ≤ h* (oscillatory)
        strict: raise on failed disjointness checks
        symmetric: evaluate only j ≥ i
        workers: thread count

    Raises:
        NumericPreconditionError: h out of range, d ≤ n − 1 or dimension mismatch
    """
    _check_screen(attractor, kernel)
    check_integrable(kernel.n - 1, attractor.dim)
    t = float(kernel.n - 1)
    oscillatory = kernel.is_oscillatory(attractor.diam)

    if not oscillatory:
        if not 0 < h <= attractor.diam:
            raise NumericPreconditionError(f"h must lie in (0, diam Γ] = (0, {attractor.diam:.6g}], got {h}")
        singular = integrate_phi_t_double(attractor, t, h, strict=strict,
                                          symmetric=symmetric, workers=workers)
        rule = rule_from_partition(partition_lh(attractor, h))
        remainder = double_sum(rule.nodes, rule.weights, rule.nodes, rule.weights,
                               kernel.star_block_kernel, symmetric=symmetric, workers=workers)
        return kernel.C_n * singular + remainder

    if not 0 < h <= kernel.h_star:
        raise NumericPreconditionError(
            f"oscillatory branch needs 0 < h ≤ c_osc/k = {kernel.h_star:.6g}, got {h}"
        )
    coarse = partition_lh(attractor, kernel.h_star)
    fine = partition_lh(attractor, h)
    labels = fine.ancestor_labels(coarse)
    rule = rule_from_partition(fine)
    logger.info("oscillatory branch: %d diagonal blocks, N = %d", coarse.N, fine.N)

    off_diagonal = double_sum(rule.nodes, rule.weights, rule.nodes, rule.weights,
                              kernel.block_kernel, symmetric=symmetric, labels=labels,
                              pairs=PairSelection.DIFFERENT_LABEL, workers=workers)
    remainder = double_sum(rule.nodes, rule.weights, rule.nodes, rule.weights,
                           kernel.star_block_kernel, symmetric=symmetric, labels=labels,
                           pairs=PairSelection.SAME_LABEL, workers=workers)
    singular = NeumaierAccumulator()
    for index in coarse.indices:
        singular.add(integrate_phi_t_double(attractor, t, h, root=index, strict=strict,
                                            symmetric=symmetric, workers=workers, check=False))
    acc = NeumaierAccumulator()
    acc.add(off_diagonal)
    acc.add(remainder)
    acc.add(kernel.C_n * singular.value.real)
    return acc.value


def bound_helmholtz_singular(attractor: Attractor, kernel: HelmholtzKernel, h: float) -> float:
    """
    Rate predictor of the singularity-subtraction rule, up to a constant

    Uniform Γ: c′h²μ² with
      c′ = M^{(n+1)/d} / ((1 − M^{1/d−1})^{n−1} R^{n+1})                  (k·diam ≤ c_osc)
      c′ = (1 + M^{(n+1)/d} / ((1 − M^{1/d−1})^{n−1}(k diam)^d))(k diam/R)^{n+1}
    Non-uniform Γ: c″hμ² with
      c″ = 1 / (ρ_min^n (1 − Σρ^{2d−n+1}) R^n)
      c″ = (1 + 1/(ρ_min^n (k diam)^d (1 − Σρ^{2d−n+1}))) (k diam/R)^n
    R = R_{Γ,Hull}.

    Raises:
        SeparationError: R_{Γ,Hull} = 0
    """
    _check_screen(attractor, kernel)
    R = r_gamma_hull(attractor)
    if R == 0.0:
        raise SeparationError(f"R_Γ,Hull = 0 for '{attractor.name}'; the bound is unavailable")
    n = kernel.n
    d = attractor.dim
    M = attractor.M
    mu = attractor.measure
    kd = kernel.k * attractor.diam
    oscillatory = kernel.is_oscillatory(attractor.diam)

    if attractor.is_uniform:
        growth = M ** ((n + 1) / d) / (1 - M ** (1 / d - 1)) ** (n - 1)
        if oscillatory:
            constant = (1 + growth / kd ** d) * (kd / R) ** (n + 1)
        else:
            constant = growth / R ** (n + 1)
        return constant * h * h * mu * mu

    contraction = 1 - float(np.sum(attractor.ratios ** (2 * d - n + 1)))
    if oscillatory:
        constant = (1 + 1 / (attractor.rho_min ** n * kd ** d * contraction)) * (kd / R) ** n
    else:
        constant = 1 / (attractor.rho_min ** n * contraction * R ** n)
    return constant * h * mu * mu


def bound_helmholtz_regular(attr1: Attractor, attr2: Attractor, kernel: HelmholtzKernel, h: float) -> float:
    """
    h²μμ'(1 + (kδ)^{n/2+1})/δ^{n+1}, δ = dist(Γ_Hull,h, Γ'_Hull,h), up to a constant

    Raises:
        SeparationError: δ = 0
    """
    delta = hull_disjoint_h(attr1, attr2, h)
    if delta == 0.0:
        raise SeparationError("h-hull sets of the two attractors intersect")
    n = kernel.n
    return (h * h * attr1.measure * attr2.measure
            * (1 + (kernel.k * delta) ** (n / 2 + 1)) / delta ** (n + 1))


def _pair_count(group_sizes: np.ndarray, symmetric: bool, same: bool) -> int:
    sizes = np.asarray(group_sizes, dtype=np.int64)
    total = int(sizes.sum())
    if same:
        return int(np.sum(sizes * (sizes + 1) // 2)) if symmetric else int(np.sum(sizes * sizes))
    different = total * total - int(np.sum(sizes * sizes))
    return different // 2 if symmetric else different


def evaluation_counts(attractor: Attractor, kernel: HelmholtzKernel, h: float,
                      symmetric: bool = True) -> Dict[str, int]:
    """
    Kernel evaluations of integrate_helmholtz_singular

    Returns:
        {"phi_t": Φ_{n−1} calls, "phi_star": Φ* calls, "phi": Φ calls, "N": |L_h|}
    """
    if not kernel.is_oscillatory(attractor.diam):
        split = split_partition(attractor, h, ())
        N = partition_lh(attractor, h).N
        return {
            "phi_t": _pair_count(np.bincount(split.labels(1)), symmetric, same=False),
            "phi_star": _pair_count(np.array([N]), symmetric, same=True),
            "phi": 0,
            "N": N,
        }
    coarse = partition_lh(attractor, kernel.h_star)
    fine = partition_lh(attractor, h)
    sizes = np.bincount(fine.ancestor_labels(coarse), minlength=coarse.N)
    phi_t_calls = 0
    for index in coarse.indices:
        split = split_partition(attractor, h, index)
        phi_t_calls += _pair_count(np.bincount(split.labels(1)), symmetric, same=False)
    return {
        "phi_t": phi_t_calls,
        "phi_star": _pair_count(sizes, symmetric, same=True),
        "phi": _pair_count(sizes, symmetric, same=False),
        "N": fine.N,
    }


def predicted_rate_in_n(attractor: Attractor) -> float:
    """Predicted slope of log error against log N: −2/d (uniform) or −1/d"""
    return (-2.0 if attractor.is_uniform else -1.0) / attractor.dim
