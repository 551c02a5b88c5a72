"""
Concrete convergence studies and the ready-made study catalogue
"""

import logging
import math
from typing import Any, Dict, List

import numpy as np

from ..utils.config_loader import ConfigLoader
from ..utils.config_models import ConvergenceReport, ExperimentConfig, KernelType
from ..utils.errors import ConfigError, NumericPreconditionError
from .base_convergence_study import BaseConvergenceStudy
from .ifs import validate_index
from .kernel_helmholtz import HelmholtzKernel, integrate_helmholtz_singular
from .kernel_phi_t import check_integrable, integrate_phi_t_at_fixed_point, integrate_phi_t_double
from .quadrature import Integrand1, Integrand2, integrate_double, integrate_single, smooth_integrand

logger = logging.getLogger(__name__)


class PhiTDoubleStudy(BaseConvergenceStudy):
    """∫_Γ∫_Γ Φ_t via the self-similar double rule"""

    def _validate(self) -> None:
        check_integrable(self.config.t, self.attractor.dim)

    def _evaluate(self, h: float) -> complex:
        cfg = self.config
        return integrate_phi_t_double(self.attractor, cfg.t, h, strict=cfg.strict,
                                      symmetric=cfg.symmetry, workers=cfg.workers)

    def _kernel_label(self) -> str:
        return f"Φ_{self.config.t:g} double"


class PhiTFixedPointStudy(BaseConvergenceStudy):
    """∫_Γ Φ_t(η_m, y) dy at the fixed point η_m"""

    def _validate(self) -> None:
        check_integrable(self.config.t, self.attractor.dim)
        validate_index(self.attractor, (self.config.m,))

    def _evaluate(self, h: float) -> complex:
        cfg = self.config
        return integrate_phi_t_at_fixed_point(self.attractor, cfg.t, cfg.m, h, strict=cfg.strict)

    def _kernel_label(self) -> str:
        return f"Φ_{self.config.t:g} at η_{self.config.m}"


class HelmholtzStudy(BaseConvergenceStudy):
    """Helmholtz double integral by singularity subtraction"""

    def _validate(self) -> None:
        cfg = self.config
        n = cfg.n if cfg.n is not None else self.attractor.ambient_dim
        self.kernel = HelmholtzKernel(k=cfg.k, n=n, c_osc=cfg.c_osc)
        if self.kernel.is_oscillatory(self.attractor.diam):
            logger.info("k·diam = %.4g > c_osc: oscillatory branch, h* = %.6g",
                        cfg.k * self.attractor.diam, self.kernel.h_star)

    def _evaluate(self, h: float) -> complex:
        cfg = self.config
        return integrate_helmholtz_singular(self.attractor, self.kernel, h, strict=cfg.strict,
                                            symmetric=cfg.symmetry, workers=cfg.workers)

    def _kernel_label(self) -> str:
        return f"Helmholtz k={self.config.k:g}"


class SmoothSingleStudy(BaseConvergenceStudy):
    """Barycentre rule for a named smooth single integrand"""

    def _validate(self) -> None:
        self.integrand = smooth_integrand(self.config.function, self.attractor, self.config.c)
        if not isinstance(self.integrand, Integrand1):
            raise ConfigError(f"'{self.config.function}' is a double integrand; use kernel smooth_double")

    def _evaluate(self, h: float) -> complex:
        return integrate_single(self.attractor, self.integrand, h)

    def _kernel_label(self) -> str:
        return f"{self.config.function} (c={self.config.c:g})"


class SmoothDoubleStudy(BaseConvergenceStudy):
    """Tensor barycentre rule for a named smooth double integrand on Γ × Γ"""

    def _validate(self) -> None:
        self.integrand = smooth_integrand(self.config.function, self.attractor, self.config.c)
        if not isinstance(self.integrand, Integrand2):
            raise ConfigError(f"'{self.config.function}' is a single integrand; use kernel smooth")

    def _evaluate(self, h: float) -> complex:
        symmetric = self.config.symmetry and self.integrand.symmetric
        return integrate_double(self.attractor, self.attractor, self.integrand, h,
                                symmetric=symmetric, workers=self.config.workers)

    def _kernel_label(self) -> str:
        return f"{self.config.function} (c={self.config.c:g}) double"


STUDY_TYPES = {
    KernelType.PHI_T: PhiTDoubleStudy,
    KernelType.PHI_T_FIXED_POINT: PhiTFixedPointStudy,
    KernelType.HELMHOLTZ: HelmholtzStudy,
    KernelType.SMOOTH: SmoothSingleStudy,
    KernelType.SMOOTH_DOUBLE: SmoothDoubleStudy,
}


def run_convergence(config: ExperimentConfig) -> ConvergenceReport:
    """
    Run one convergence study

    Args:
        config: validated ExperimentConfig

    Returns:
        ConvergenceReport (columns ell, N, h, value_re, value_im, abs_err, rel_err, eoc)

    Raises:
        ConfigError: inconsistent configuration
        NumericPreconditionError: kernel preconditions fail

    Example:
        >>> cfg = ConfigLoader.from_dict({"preset": "interval", "kernel": "phi_t", "t": 0,
        ...                               "levels": [3, 4, 5], "exact_value": -1.5})
        >>> run_convergence(cfg).data["eoc"].iloc[-1]
        1.7...
    """
    ConfigLoader.validate(config)
    study = STUDY_TYPES[config.kernel](config)
    report = study.run()
    logger.info("study %s finished in %.2fs", report.metadata["name"], study.wall_time)
    return report


def fit_slope(report: ConvergenceReport) -> float:
    """
    Least-squares slope of log(abs_err) against log(N)

    Raises:
        NumericPreconditionError: fewer than two rows with positive error
    """
    df = report.data
    keep = (df["abs_err"] > 0) & (df["N"] > 0)
    if int(keep.sum()) < 2 or df.loc[keep, "N"].nunique() < 2:
        raise NumericPreconditionError("slope needs two rows with distinct N and positive error")
    slope, _ = np.polyfit(np.log(df.loc[keep, "N"].to_numpy(dtype=float)),
                          np.log(df.loc[keep, "abs_err"].to_numpy(dtype=float)), 1)
    return float(slope)


def _catalogue() -> Dict[str, Dict[str, Any]]:
    studies: Dict[str, Dict[str, Any]] = {}

    for label, rho in (("1/3", 1 / 3), ("0.1", 0.1), ("0.01", 0.01), ("0.001", 0.001)):
        studies[f"cantor-k5-rho{label}"] = {
            "description": f"Helmholtz k=5 on the Cantor set ρ={label}",
            "config": {"preset": "cantor", "rho": rho, "kernel": "helmholtz", "k": 5.0,
                       "levels": list(range(2, 9)), "reference_level": 11},
            "full_scale": {"levels": list(range(2, 10)), "reference_level": 13},
        }

    for label, rho in (("1/3", 1 / 3), ("0.26", 0.26), ("0.251", 0.251), ("0.2501", 0.2501)):
        studies[f"dust-k5-rho{label}"] = {
            "description": f"Helmholtz k=5 on the Cantor dust ρ={label}",
            "config": {"preset": "cantor-dust", "rho": rho, "kernel": "helmholtz", "k": 5.0,
                       "levels": [3, 4], "reference_level": 5},
            "full_scale": {"levels": [3, 4, 5], "reference_level": 7},
        }

    for label, gap in (("0.1", 0.1), ("0.01", 0.01), ("1e-3", 1e-3), ("1e-4", 1e-4), ("1e-5", 1e-5)):
        studies[f"gap-k5-R{label}"] = {
            "description": f"Helmholtz k=5 on the Cantor set with gap R={label}",
            "config": {"preset": "cantor", "rho": (1 - gap) / 2, "kernel": "helmholtz", "k": 5.0,
                       "levels": list(range(2, 8)), "reference_level": 10},
            "full_scale": {"levels": list(range(2, 10)), "reference_level": 13},
        }

    studies["interval-log"] = {
        "description": "∫∫ log|x−y| over [0, 1]², exact value −3/2",
        "config": {"preset": "interval", "kernel": "phi_t", "t": 0.0,
                   "levels": list(range(2, 10)), "exact_value": -1.5},
        "full_scale": {"levels": list(range(2, 14))},
    }

    for name, preset_name, scaled_ref, full_ref in (
        ("dust-k2", "cantor-dust", 6, 8),
        ("triangle-centre-k2", "triangle-centre", 6, 8),
        ("vicsek-k2", "vicsek", 5, 7),
        ("rotated-nonuniform-k2", "rotated-nonuniform", 9, 13),
    ):
        studies[name] = {
            "description": f"Helmholtz k=2 on {preset_name}",
            "config": {"preset": preset_name, "kernel": "helmholtz", "k": 2.0,
                       "levels": list(range(2, scaled_ref - 1)), "reference_level": scaled_ref},
            "full_scale": {"levels": list(range(2, full_ref - 1)), "reference_level": full_ref},
        }
    return studies


STUDY_CATALOGUE: Dict[str, Dict[str, Any]] = _catalogue()


def catalogue_config(name: str, full_scale: bool = False) -> ExperimentConfig:
    """
    ExperimentConfig of a catalogue study

    Args:
        name: key of STUDY_CATALOGUE
        full_scale: use the full-resolution levels and reference level

    Raises:
        ConfigError: unknown study
    """
    try:
        entry = STUDY_CATALOGUE[name]
    except KeyError:
        raise ConfigError(f"Unknown study '{name}'. Available: {sorted(STUDY_CATALOGUE)}") from None
    raw = dict(entry["config"], name=name)
    if full_scale:
        raw.update(entry["full_scale"])
    return ConfigLoader.from_dict(raw)


def catalogue_names() -> List[str]:
    return sorted(STUDY_CATALOGUE)
