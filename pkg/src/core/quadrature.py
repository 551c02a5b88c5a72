"""
Barycentre rules for smooth single and double integrals over attractors

∫_Γ f dH^d ≈ Σ_𝐦 μ(Γ_𝐦) f(x_𝐦) and the tensor-product rule for Γ × Γ',
with a-priori error bounds from Lipschitz constants or derivative sup-norms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..utils.errors import ConfigError, IntegrandEvaluationError, NumericPreconditionError
from .geometry import attractor_hull
from .ifs import Attractor
from .partition import QuadratureRule, barycentre_rule
from .summation import double_sum, lane_sum

logger = logging.getLogger(__name__)

# pairs drawn for the symmetry spot check
SYMMETRY_SAMPLES = 16
SYMMETRY_RTOL = 1e-10


@dataclass
class Integrand1:
    """
    Integrand f: Γ → C with optional smoothness data

    func is numpy-vectorized over the trailing point axis ((..., n) → (...)),
    unless vectorized=False, in which case it is called once per node.

    Attributes:
        func: f
        vectorized: func accepts arrays of points
        sup_grad: sup |∇f| on Hull(Γ)
        sup_hess: sup ‖Hf‖ (operator norm) on Hull(Γ)
        lip0: Lipschitz constant of f
        lip1: Lipschitz constant of ∇f
    """
    func: Callable
    vectorized: bool = True
    sup_grad: Optional[float] = None
    sup_hess: Optional[float] = None
    lip0: Optional[float] = None
    lip1: Optional[float] = None


@dataclass
class Integrand2:
    """
    Integrand f: Γ × Γ' → C; func(x, y) broadcasts over (..., n) point arrays

    symmetric=True allows halving the double sum when Γ = Γ'; the claim is
    spot-checked on a few node pairs.
    """
    func: Callable
    vectorized: bool = True
    symmetric: bool = False
    sup_grad: Optional[float] = None
    sup_hess: Optional[float] = None
    lip0: Optional[float] = None
    lip1: Optional[float] = None


def rule_on(attractor: Attractor, h: float, root=()) -> QuadratureRule:
    """Barycentre rule on Γ_root at partition parameter h"""
    return barycentre_rule(attractor, h, root)


def _evaluate_single(integrand: Integrand1, nodes: np.ndarray) -> np.ndarray:
    if integrand.vectorized:
        try:
            values = np.asarray(integrand.func(nodes))
        except Exception as exc:
            raise IntegrandEvaluationError(
                f"integrand failed on node block of {len(nodes)} nodes starting at {nodes[0]}: {exc}",
                node=nodes[0],
            ) from exc
        return np.broadcast_to(values, (len(nodes),))
    values = np.empty(len(nodes), dtype=complex)
    for i, node in enumerate(nodes):
        try:
            values[i] = integrand.func(node)
        except Exception as exc:
            raise IntegrandEvaluationError(f"integrand failed at node {node}: {exc}", node=node) from exc
    return values


def _evaluate_pairs(integrand: Integrand2, xb: np.ndarray, y: np.ndarray) -> np.ndarray:
    if integrand.vectorized:
        try:
            values = integrand.func(xb[:, None, :], y[None, :, :])
        except Exception as exc:
            raise IntegrandEvaluationError(
                f"integrand failed on node block starting at x={xb[0]}: {exc}", node=xb[0]
            ) from exc
        return np.broadcast_to(np.asarray(values), (len(xb), len(y)))
    values = np.empty((len(xb), len(y)), dtype=complex)
    for i, xi in enumerate(xb):
        for j, yj in enumerate(y):
            try:
                values[i, j] = integrand.func(xi, yj)
            except Exception as exc:
                raise IntegrandEvaluationError(
                    f"integrand failed at (x, y) = ({xi}, {yj}): {exc}", node=(xi, yj)
                ) from exc
    return values


def _check_symmetry(integrand: Integrand2, nodes: np.ndarray) -> None:
    rng = np.random.default_rng(0)
    count = min(SYMMETRY_SAMPLES, len(nodes))
    i = rng.integers(0, len(nodes), count)
    j = rng.integers(0, len(nodes), count)
    a = np.diagonal(_evaluate_pairs(integrand, nodes[i], nodes[j]))
    b = np.diagonal(_evaluate_pairs(integrand, nodes[j], nodes[i]))
    if not np.allclose(a, b, rtol=SYMMETRY_RTOL, atol=1e-300):
        raise NumericPreconditionError("integrand is flagged symmetric but f(x, y) ≠ f(y, x)")


def integrate_single(attractor: Attractor, integrand: Integrand1, h: float, root=()) -> complex:
    """
    Q_h[f] = Σ_{𝐦 ∈ L_h} μ(Γ_𝐦) f(x_𝐦)

    Raises:
        NumericPreconditionError: h ≤ 0
        IntegrandEvaluationError: f raised at a node

    Example:
        >>> integrate_single(preset("interval"), Integrand1(lambda x: x[..., 0] ** 2), 0.25)
        (0.328125+0j)
    """
    rule = rule_on(attractor, h, root)
    values = _evaluate_single(integrand, rule.nodes)
    return lane_sum(rule.weights * values)


def integrate_double(
    attr1: Attractor,
    attr2: Attractor,
    integrand: Integrand2,
    h: float,
    symmetric: Optional[bool] = None,
    workers: Optional[int] = None,
) -> complex:
    """
    Q_h^{Γ×Γ'}[f] = Σ_𝐦 Σ_𝐧 μ(Γ_𝐦) μ(Γ'_𝐧) f(x_𝐦, x'_𝐧)

    Args:
        attr1, attr2: Γ and Γ' (pass the same object for Γ × Γ)
        integrand: f with broadcasting func(x, y)
        h: partition parameter of both factors
        symmetric: use j ≥ i halving; default integrand.symmetric when attr1 is attr2
        workers: thread count for the double sum
    """
    if attr1.ambient_dim != attr2.ambient_dim:
        raise NumericPreconditionError("attractors live in different dimensions")
    rule1 = rule_on(attr1, h)
    rule2 = rule1 if attr2 is attr1 else rule_on(attr2, h)
    if symmetric is None:
        symmetric = integrand.symmetric and attr1 is attr2
    if symmetric:
        if attr1 is not attr2:
            raise NumericPreconditionError("symmetric halving needs Γ = Γ'")
        _check_symmetry(integrand, rule1.nodes)

    def kernel(xb, y, mask):
        return _evaluate_pairs(integrand, xb, y)

    return double_sum(rule1.nodes, rule1.weights, rule2.nodes, rule2.weights,
                      kernel, symmetric=symmetric, workers=workers)


def bound_single(attractor: Attractor, integrand: Integrand1, h: float) -> float:
    """
    min of hμL0, hμ·sup|∇f|, h²μL1, (h²/2)μ·sup‖Hf‖ over the supplied data

    Raises:
        NumericPreconditionError: no smoothness datum supplied
    """
    mu = attractor.measure
    candidates = []
    if integrand.lip0 is not None:
        candidates.append(h * mu * integrand.lip0)
    if integrand.sup_grad is not None:
        candidates.append(h * mu * integrand.sup_grad)
    if integrand.lip1 is not None:
        candidates.append(h * h * mu * integrand.lip1)
    if integrand.sup_hess is not None:
        candidates.append(0.5 * h * h * mu * integrand.sup_hess)
    if not candidates:
        raise NumericPreconditionError("integrand carries no Lipschitz or derivative bound")
    return float(min(candidates))


def bound_double(attr1: Attractor, attr2: Attractor, integrand: Integrand2, h: float) -> float:
    """min of √2hμμ'L0, √2hμμ'·sup|∇f|, 2h²μμ'L1, h²μμ'·sup‖Hf‖"""
    mm = attr1.measure * attr2.measure
    candidates = []
    if integrand.lip0 is not None:
        candidates.append(math.sqrt(2) * h * mm * integrand.lip0)
    if integrand.sup_grad is not None:
        candidates.append(math.sqrt(2) * h * mm * integrand.sup_grad)
    if integrand.lip1 is not None:
        candidates.append(2 * h * h * mm * integrand.lip1)
    if integrand.sup_hess is not None:
        candidates.append(h * h * mm * integrand.sup_hess)
    if not candidates:
        raise NumericPreconditionError("integrand carries no Lipschitz or derivative bound")
    return float(min(candidates))


SINGLE_INTEGRANDS = ("one", "linear", "square", "cos", "exp")
DOUBLE_INTEGRANDS = ("cos-diff", "exp-sum")


def smooth_integrand(name: str, attractor: Attractor, c: float = 1.0):
    """
    Named smooth test integrand with its derivative sup-norms on Hull(Γ)

    Single: one, linear (cΣx_i), square (c|x|²), cos (cos cx_1), exp (e^{cx_1}).
    Double: cos-diff (cos c(x_1−y_1)), exp-sum (e^{c(x_1+y_1)}).

    Raises:
        ConfigError: unknown name
    """
    n = attractor.ambient_dim
    radius = float(np.max(np.linalg.norm(attractor_hull(attractor).vertices, axis=-1)))
    a = abs(c)

    if name == "one":
        return Integrand1(lambda x: np.ones(x.shape[:-1]), sup_grad=0.0, sup_hess=0.0)
    if name == "linear":
        return Integrand1(lambda x: c * x.sum(axis=-1), sup_grad=a * math.sqrt(n), sup_hess=0.0)
    if name == "square":
        return Integrand1(lambda x: c * np.sum(x * x, axis=-1),
                          sup_grad=2 * a * radius, sup_hess=2 * a)
    if name == "cos":
        return Integrand1(lambda x: np.cos(c * x[..., 0]), sup_grad=a, sup_hess=a * a)
    if name == "exp":
        growth = math.exp(a * radius)
        return Integrand1(lambda x: np.exp(c * x[..., 0]), sup_grad=a * growth, sup_hess=a * a * growth)
    if name == "cos-diff":
        return Integrand2(lambda x, y: np.cos(c * (x[..., 0] - y[..., 0])), symmetric=True,
                          sup_grad=math.sqrt(2) * a, sup_hess=2 * a * a)
    if name == "exp-sum":
        growth = math.exp(2 * a * radius)
        return Integrand2(lambda x, y: np.exp(c * (x[..., 0] + y[..., 0])), symmetric=True,
                          sup_grad=math.sqrt(2) * a * growth, sup_hess=2 * a * a * growth)
    raise ConfigError(
        f"Unknown integrand '{name}'. Choose from {SINGLE_INTEGRANDS + DOUBLE_INTEGRANDS}"
    )


def cantor_exp_moment(rho: float, c: float, terms: int = 80) -> float:
    """
    ∫ e^{cx} dH^d over the Cantor set {ρx, ρx+1−ρ} (μ = 1)

    The uniform measure makes x = Σ_j (1−ρ)ρ^j b_j with fair bits b_j, so
    the integral is ∏_j ½(1 + e^{c(1−ρ)ρ^j}).
    """
    log_value = 0.0
    for j in range(terms):
        step = c * (1 - rho) * rho ** j
        if abs(step) < 1e-18:
            break
        log_value += math.log(0.5 * (1 + math.exp(step)))
    return math.exp(log_value)
