"""
Core numerics: IFS attractors, partitions, quadrature rules, singular kernels
and the convergence-study harness
"""

from .ifs import Attractor, Similarity, h_for_level, make_attractor, solve_dimension
from .partition import Partition, QuadratureRule, barycentre, barycentre_rule, partition_lh
from .geometry import ConvexHull, SeparationReport, hull_approx, separation_params
from .quadrature import Integrand1, Integrand2, integrate_double, integrate_single
from .kernel_phi_t import integrate_phi_t_at_fixed_point, integrate_phi_t_double
from .kernel_helmholtz import HelmholtzKernel, integrate_helmholtz_singular
from .hankel import hankel1_0, hankel1_1
from .presets import preset
from .convergence_studies import run_convergence

__all__ = [
    "Attractor",
    "Similarity",
    "make_attractor",
    "solve_dimension",
    "h_for_level",
    "Partition",
    "QuadratureRule",
    "partition_lh",
    "barycentre",
    "barycentre_rule",
    "ConvexHull",
    "SeparationReport",
    "hull_approx",
    "separation_params",
    "Integrand1",
    "Integrand2",
    "integrate_single",
    "integrate_double",
    "integrate_phi_t_at_fixed_point",
    "integrate_phi_t_double",
    "HelmholtzKernel",
    "integrate_helmholtz_singular",
    "hankel1_0",
    "hankel1_1",
    "preset",
    "run_convergence",
]
