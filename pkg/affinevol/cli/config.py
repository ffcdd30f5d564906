"""Run configuration for the command line."""

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from affinevol.core.errors import ModelSpecError, ParameterError
from affinevol.models.factory import load_model_spec, preset_spec
from affinevol.pricing.fourier import FourierConfig
from affinevol.riccati.solver import SolverConfig


def _grid(lo: float, hi: float, count: int, what: str) -> List[float]:
    if count < 1:
        raise ParameterError(f"{what} grid needs at least one point")
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ParameterError(f"{what} range must be finite")
    if count == 1:
        return [float(lo)]
    if hi < lo:
        raise ParameterError(f"{what} range is empty: [{lo}, {hi}]")
    return [float(x) for x in np.linspace(lo, hi, count)]


@dataclass
class RunConfig:
    """Settings of one CLI run.

    Attributes:
    ----------
    model : str
        JSON model spec, inline or as a file path; wins over ``preset``
    preset : str
        Name of a built-in model
    params : str
        Inline JSON object overriding preset fields
    V0 : float
        Initial variance for primary-regime commands
    T : float
        Maturity for the smile command
    regime : str
        ``primary`` or ``stationary``
    out : str
        Output path; stdout when empty
    format : str
        ``csv`` or ``json``
    tol : float
        Overrides both solver tolerances
    """

    model: Optional[str] = None
    preset: str = "heston"
    params: Optional[str] = None
    u_min: float = -10.0
    u_max: float = 30.0
    u_count: int = 81
    t_min: float = 0.1
    t_max: float = 10.0
    t_count: int = 50
    xi_min: float = -1.0
    xi_max: float = 1.0
    xi_count: int = 9
    w_min: float = -20.0
    w_max: float = 10.0
    w_count: int = 31
    V0: float = 0.0354
    T: float = 1.0
    regime: str = "primary"
    trajectory_u: List[float] = field(default_factory=lambda: [-1.0, 0.5, 2.0])
    out: Optional[str] = None
    format: str = "csv"
    tol: Optional[float] = None
    log_level: str = "INFO"
    solver: Dict[str, Any] = field(default_factory=dict)
    fourier: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ParameterError(f"unknown output format {self.format!r}")
        if self.regime not in ("primary", "stationary"):
            raise ParameterError(f"unknown regime {self.regime!r}")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "RunConfig":
        """Build a RunConfig, ignoring unknown keys and None values."""
        known = {f.name for f in fields(cls)}
        return cls(
            **{
                k: v
                for k, v in config_dict.items()
                if k in known and v is not None
            }
        )

    @classmethod
    def from_config_file(cls, config_path: Path, **kwargs) -> "RunConfig":
        """Read defaults from a YAML file, then apply ``kwargs`` overrides.

        Raises:
        ------
            FileNotFoundError: If the configuration file does not exist
        """
        if not config_path.exists():
            raise FileNotFoundError(
                f"Configuration file not found: {config_path}"
            )
        with open(config_path, "r") as f:
            config = yaml.safe_load(f) or {}
        config.update({k: v for k, v in kwargs.items() if v is not None})
        return cls.from_dict(config)

    def model_spec(self) -> Dict[str, Any]:
        """The JSON model spec selected by --model or --preset/--params."""
        if self.model:
            return load_model_spec(self.model)
        overrides = {}
        if self.params:
            try:
                overrides = json.loads(self.params)
            except json.JSONDecodeError as exc:
                raise ModelSpecError(
                    "--params", f"column {exc.colno}: {exc.msg}"
                ) from exc
            if not isinstance(overrides, dict):
                raise ModelSpecError("--params", "expected a JSON object")
        return preset_spec(self.preset, overrides)

    def solver_config(self) -> SolverConfig:
        cfg = SolverConfig.from_dict(self.solver)
        return cfg.with_tolerance(self.tol) if self.tol else cfg

    def fourier_config(self) -> FourierConfig:
        return FourierConfig.from_dict(self.fourier)

    def u_grid(self) -> List[float]:
        return _grid(self.u_min, self.u_max, self.u_count, "u")

    def t_grid(self) -> List[float]:
        return _grid(self.t_min, self.t_max, self.t_count, "t")

    def xi_grid(self) -> List[float]:
        return _grid(self.xi_min, self.xi_max, self.xi_count, "xi")

    def w_grid(self) -> List[float]:
        return _grid(self.w_min, self.w_max, self.w_count, "w")
