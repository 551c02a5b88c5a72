"""
Base Convergence Study - Template Method Pattern

Abstract base class for convergence studies of the quadrature rules.
Provides the common pipeline: attractor → level schedule → reference value
→ rule value per level → error / EOC table.
"""

import logging
import math
import time
from abc import ABC, abstractmethod
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..utils.config_models import REPORT_COLUMNS, ConvergenceReport, ExperimentConfig
from ..utils.errors import ConfigError, FractalQuadError
from .ifs import Attractor, h_for_level, make_attractor
from .partition import partition_lh
from .presets import inline_attractor, preset

logger = logging.getLogger(__name__)


def eoc_column(h: np.ndarray, err: np.ndarray) -> np.ndarray:
    """
    EOC_i = log(e_{i−1}/e_i) / log(h_{i−1}/h_i); NaN on the first row

    Rows with a zero or non-finite error, or equal h, also give NaN.
    """
    h = np.asarray(h, dtype=float)
    err = np.asarray(err, dtype=float)
    eoc = np.full(h.shape, np.nan)
    for i in range(1, len(h)):
        if err[i - 1] > 0 and err[i] > 0 and h[i - 1] != h[i]:
            eoc[i] = math.log(err[i - 1] / err[i]) / math.log(h[i - 1] / h[i])
    return eoc


class BaseConvergenceStudy(ABC):
    """
    Base class for convergence studies

    Template Method Pattern:
    1. Build Attractor
    2. Validate Configuration
    3. Level Schedule (ℓ, h)
    4. Reference Value (exact or fine-level rule)
    5. Evaluate Rule per Level
    6. Format Output (errors, EOC)
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize convergence study

        Args:
            config: ExperimentConfig with study parameters
        """
        self.config = config
        self.attractor: Attractor = None
        self.wall_time = 0.0

    def run(self) -> ConvergenceReport:
        """
        Main study pipeline (Template Method)

        Returns:
            ConvergenceReport with one row per study level, coarsest first
        """
        start = time.perf_counter()

        # Step 1: Build attractor
        self.attractor = self._build_attractor()

        # Step 2: Kernel-specific preconditions
        self._validate()

        # Step 3: Level schedule
        schedule = self._level_schedule()

        # Step 4: Reference value
        reference = self._reference_value(schedule)

        # Step 5: Rule value per level
        rows = []
        for ell, h in schedule:
            try:
                value = complex(self._evaluate(h))
            except FractalQuadError as exc:
                exc.add_note(f"while evaluating study row ℓ={ell}, h={h:.6g}")
                raise
            rows.append({"ell": ell, "N": self._node_count(h), "h": h, "value": value})
            logger.info("ℓ=%d N=%d h=%.6g value=%s", ell, rows[-1]["N"], h, value)

        # Step 6: Format output
        data = self._format_output(rows, reference)

        self.wall_time = time.perf_counter() - start
        return ConvergenceReport(data=data, metadata=self._get_metadata(reference))

    @abstractmethod
    def _evaluate(self, h: float) -> complex:
        """
        Rule value at partition parameter h

        Returns:
            complex: quadrature value
        """
        pass

    @abstractmethod
    def _kernel_label(self) -> str:
        """Short kernel description for the report metadata"""
        pass

    def _build_attractor(self) -> Attractor:
        """Preset or inline IFS, with optional measure / diameter overrides"""
        cfg = self.config
        if cfg.maps is not None:
            return inline_attractor(cfg.maps, cfg.ambient_dim, cfg.measure, cfg.diam,
                                    name=cfg.name or "inline")
        attractor = preset(cfg.preset, cfg.rho)
        if cfg.measure is not None or cfg.diam is not None:
            attractor = make_attractor(
                attractor.maps, attractor.ambient_dim,
                measure_override=cfg.measure if cfg.measure is not None else attractor.measure,
                diam_override=cfg.diam if cfg.diam is not None else attractor.diam,
                name=attractor.name, metadata=attractor.metadata,
            )
        return attractor

    def _validate(self) -> None:
        """Kernel-specific checks (override as needed)"""
        pass

    def _level_schedule(self) -> List[Tuple[int, float]]:
        """
        (ℓ, h) pairs in increasing resolution

        levels → h = diam·ρ_max^ℓ; h_values are used as given. The ℓ column
        holds the longest index length of L_h.
        """
        cfg = self.config
        if cfg.levels:
            hs = [h_for_level(self.attractor, int(level)) for level in sorted(set(cfg.levels))]
        elif cfg.h_values:
            hs = sorted(set(float(h) for h in cfg.h_values), reverse=True)
        else:
            raise ConfigError("empty level list")
        return [(int(partition_lh(self.attractor, h).lengths.max()), h) for h in hs]

    def _reference_value(self, schedule: List[Tuple[int, float]]) -> complex:
        """Exact value if given, else the rule at the reference level"""
        cfg = self.config
        if cfg.exact_value is not None:
            return complex(cfg.exact_value)
        h_ref = h_for_level(self.attractor, int(cfg.reference_level))
        if h_ref >= min(h for _, h in schedule):
            raise ConfigError(
                f"reference level {cfg.reference_level} must be finer than every study level"
            )
        logger.info("reference level %d (h=%.6g)", cfg.reference_level, h_ref)
        try:
            return complex(self._evaluate(h_ref))
        except FractalQuadError as exc:
            exc.add_note(f"while evaluating the reference level {cfg.reference_level}")
            raise

    def _node_count(self, h: float) -> int:
        return partition_lh(self.attractor, h).N

    def _format_output(self, rows: List[Dict], reference: complex) -> pd.DataFrame:
        """
        Errors and EOC in REPORT_COLUMNS order

        Args:
            rows: dicts with ell, N, h, value
            reference: reference value

        Returns:
            pd.DataFrame: one row per level
        """
        df = pd.DataFrame(rows)
        values = df["value"].to_numpy(dtype=complex)
        df["value_re"] = values.real
        df["value_im"] = values.imag
        df["abs_err"] = np.abs(values - reference)
        df["rel_err"] = df["abs_err"] / abs(reference) if reference != 0 else np.nan
        df["eoc"] = eoc_column(df["h"].to_numpy(), df["abs_err"].to_numpy())
        return df[REPORT_COLUMNS].astype({"ell": int, "N": int})

    def _get_metadata(self, reference: complex) -> Dict:
        cfg = self.config
        return {
            "name": cfg.name or f"{self.attractor.name}-{cfg.kernel.value}",
            "preset": self.attractor.name,
            "rho": cfg.rho,
            "kernel": cfg.kernel.value,
            "kernel_label": self._kernel_label(),
            "dim": self.attractor.dim,
            "measure": self.attractor.measure,
            "diam": self.attractor.diam,
            "reference_value": reference,
            "reference_level": cfg.reference_level,
            "wall_time": self.wall_time,
        }
