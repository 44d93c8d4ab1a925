"""
Configuration module for the Clifford-bundle verifier
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Verifier settings loaded from environment variables"""

    # Run Configuration
    app_name: str = "cliffordcheck"
    version: str = "1.0.0"
    seed: int = 20240101
    samples: int = 6
    acceptance_samples: int = 100
    algebra_samples: int = 1000
    provider: str = "analytic"
    fd_step: float = 1e-5
    log_level: str = "WARNING"

    # Tolerance Configuration
    algebra_tolerance: float = 1e-10
    representation_tolerance: float = 1e-12
    geometry_tolerance: float = 1e-8
    forms_tolerance: float = 1e-6
    forms_flat_tolerance: float = 1e-10
    einstein_tolerance: float = 1e-6
    sachs_tolerance: float = 1e-6
    energy_tolerance: float = 1e-6
    closedness_tolerance: float = 1e-5
    dirac_tolerance: float = 1e-6
    wave_tolerance: float = 1e-5
    constraint_tolerance: float = 1e-8
    transport_tolerance: float = 1e-6
    mass_tolerance: float = 1e-3
    mass_flat_tolerance: float = 1e-6
    chart_dependence_threshold: float = 1e-2
    gauge_dependence_threshold: float = 0.1
    fd_tolerance_scale: float = 1e4

    # Finite Difference Configuration
    fd_convergence_step: float = 1e-3
    fd_rate_tolerance: float = 0.25

    # Mass Integral Configuration
    mass_radii: List[float] = [1e2, 1e3, 1e4]
    mass_quadrature_start: int = 8
    mass_quadrature_max: int = 128
    mass_convergence: float = 1e-8

    # Transport Oracle Configuration
    fermi_duration: float = 2.0
    fermi_convergence: float = 1e-8

    # Report Configuration
    report_format: str = "json"
    report_path: Optional[str] = None

    class Config:
        env_file = ".env"
        env_prefix = "CLIFFORDCHECK_"
        case_sensitive = False


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get verifier settings"""
    return settings


def configure_logging(level: Optional[str] = None):
    """Install a stderr handler for the cliffordcheck loggers"""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def get_tolerance(name: str, provider: str = "analytic") -> float:
    """Tolerance for a named check family, loosened for finite-difference providers"""
    tolerance = getattr(settings, f"{name}_tolerance")
    if provider == "fd" and name not in ("algebra", "representation") and not name.startswith("mass"):
        tolerance *= settings.fd_tolerance_scale
    return tolerance


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON object or `key = value` lines into a dictionary.

    Dotted keys such as `metric.params.m = 1` become nested records.
    """
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("{"):
        return json.loads(stripped)

    values: Dict[str, Any] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"Malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        target = values
        *parents, leaf = key.split(".")
        for parent in parents:
            target = target.setdefault(parent, {})
            if not isinstance(target, dict):
                raise ValueError(f"Config key {key!r} nests under a plain value")
        target[leaf] = value
    return values
