"""
Experiment configuration loading (YAML + .env)
"""

import logging
import math
import os
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

from .config_models import EmitFormat, ExperimentConfig, KernelType
from .errors import ConfigError

logger = logging.getLogger(__name__)

WORKERS_ENV = "FRACTALQUAD_WORKERS"
SLOW_ENV = "FRACTALQUAD_RUN_SLOW"

_env_loaded = False


def load_env() -> None:
    """.env 파일을 한 번만 로드 (이미 설정된 환경변수는 덮어쓰지 않음)"""
    global _env_loaded
    if not _env_loaded:
        load_dotenv(override=False)
        _env_loaded = True


def env_workers() -> Optional[int]:
    """
    FRACTALQUAD_WORKERS 환경변수 값

    Returns:
        양의 정수 또는 None (미설정)

    Raises:
        ConfigError: 정수가 아니거나 1 미만
    """
    load_env()
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got '{raw}'") from exc
    if value < 1:
        raise ConfigError(f"{WORKERS_ENV} must be ≥ 1, got {value}")
    return value


def slow_tests_enabled() -> bool:
    load_env()
    return os.environ.get(SLOW_ENV, "0").strip().lower() in ("1", "true", "yes")


class ConfigLoader:
    """
    ExperimentConfig 생성기

    Example:
        >>> cfg = ConfigLoader.from_yaml("experiments/cantor_k5.yaml")
        >>> cfg = ConfigLoader.from_dict({"preset": "cantor", "rho": 1/3, "levels": [2, 3]})
    """

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> ExperimentConfig:
        """
        YAML 파일에서 설정 로드

        Raises:
            ConfigError: 파일이 없거나 YAML 구문 오류, 또는 검증 실패
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                raw = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Invalid YAML in {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        logger.info("Loaded experiment config from %s", path)
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> ExperimentConfig:
        """
        dict에서 설정 생성 및 검증

        Raises:
            ConfigError: 알 수 없는 키, 잘못된 값
        """
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"Unknown config keys: {sorted(unknown)}")

        values = dict(raw)
        try:
            if "kernel" in values:
                values["kernel"] = KernelType(values["kernel"])
            if "emit_format" in values:
                values["emit_format"] = EmitFormat(values["emit_format"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        if values.get("exact_value") is not None:
            values["exact_value"] = cls._parse_complex(values["exact_value"])
        for key in ("rho", "measure", "diam", "t", "k", "c_osc", "c"):
            if values.get(key) is not None:
                values[key] = cls._parse_float(key, values[key])
        for key in ("m", "n", "ambient_dim", "reference_level", "workers"):
            if values.get(key) is not None:
                values[key] = cls._parse_int(key, values[key])
        for key, parse in (("levels", cls._parse_int), ("h_values", cls._parse_float)):
            if values.get(key) is not None:
                if not isinstance(values[key], (list, tuple)):
                    raise ConfigError(f"'{key}' must be a list, got {values[key]!r}")
                values[key] = [parse(key, v) for v in values[key]]

        config = ExperimentConfig(**values)
        cls.validate(config)
        return config

    @staticmethod
    def _parse_float(key: str, value: Any) -> float:
        try:
            return float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"'{key}' must be a number, got {value!r}") from exc

    @staticmethod
    def _parse_int(key: str, value: Any) -> int:
        """정수 값만 허용 (2.0 은 허용, 2.5 나 "four" 는 거부)"""
        try:
            number = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"'{key}' must be an integer, got {value!r}") from exc
        if isinstance(value, bool) or not number.is_integer():
            raise ConfigError(f"'{key}' must be an integer, got {value!r}")
        return int(number)

    @staticmethod
    def _parse_complex(value: Any) -> complex:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        try:
            return complex(str(value).replace(" ", "")) if isinstance(value, str) else complex(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"'exact_value' must be a number or [re, im], got {value!r}") from exc

    @staticmethod
    def validate(config: ExperimentConfig) -> None:
        """설정 일관성 검사"""
        if (config.preset is None) == (config.maps is None):
            raise ConfigError("exactly one of 'preset' and 'maps' must be given")
        if config.maps is not None and config.ambient_dim not in (1, 2):
            raise ConfigError("inline 'maps' need ambient_dim 1 or 2")
        if not config.levels and not config.h_values:
            raise ConfigError("one of 'levels' or 'h_values' must be non-empty")
        if config.levels and config.h_values:
            raise ConfigError("'levels' and 'h_values' are mutually exclusive")
        if any(ConfigLoader._parse_int("levels", level) < 0 for level in config.levels):
            raise ConfigError("levels must be non-negative")
        if any(not h > 0 for h in config.h_values):
            raise ConfigError("h_values must be positive")
        if config.reference_level is None and config.exact_value is None:
            raise ConfigError("one of 'reference_level' or 'exact_value' is required")
        if config.kernel is KernelType.HELMHOLTZ and not config.k > 0:
            raise ConfigError(f"Helmholtz wavenumber must be positive, got {config.k}")
        if config.kernel in (KernelType.PHI_T, KernelType.PHI_T_FIXED_POINT) and config.t < 0:
            raise ConfigError(f"t must be non-negative, got {config.t}")
        if config.m < 1:
            raise ConfigError(f"m must be ≥ 1, got {config.m}")
        if config.workers is not None and ConfigLoader._parse_int("workers", config.workers) < 1:
            raise ConfigError(f"workers must be ≥ 1, got {config.workers}")
        if not math.isfinite(config.c_osc) or config.c_osc <= 0:
            raise ConfigError(f"c_osc must be positive, got {config.c_osc}")
