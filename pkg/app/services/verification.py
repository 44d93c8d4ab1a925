"""
Verification service: builds the tetrad, runs the selected suites concurrently and merges their records
"""
import asyncio
import logging
import platform
from typing import Dict, List, Type

import numpy as np
import pydantic
import sympy

from app.config import get_settings
from app.core.tetrads import TetradField, builtin_spacetime, custom_spacetime
from app.models.schemas import (
    CheckRecord, EnvironmentBlock, MetricSpec, SuiteConfig, VerificationReport
)
from app.services.algebra import AlgebraSuiteService
from app.services.constraints import ConstraintsSuiteService
from app.services.dirac import DiracSuiteService
from app.services.einstein import EinsteinSuiteService
from app.services.energy import EnergySuiteService
from app.services.forms import FormsSuiteService
from app.services.geometry import GeometrySuiteService
from app.services.sachs import SachsSuiteService
from app.services.spinor import SpinorSuiteService
from app.services.suite import SuiteService
from app.utils.helpers import failed_record

logger = logging.getLogger(__name__)

SUITES: Dict[str, Type[SuiteService]] = {
    "algebra": AlgebraSuiteService,
    "spinor": SpinorSuiteService,
    "geometry": GeometrySuiteService,
    "forms": FormsSuiteService,
    "einstein": EinsteinSuiteService,
    "sachs": SachsSuiteService,
    "energy": EnergySuiteService,
    "dirac": DiracSuiteService,
    "constraints": ConstraintsSuiteService,
}


def versions() -> Dict[str, str]:
    return {
        "numpy": np.__version__,
        "sympy": sympy.__version__,
        "pydantic": pydantic.VERSION,
        "python": platform.python_version(),
    }


class VerificationService:
    """Service for running verification suites on one metric"""

    def __init__(self):
        self.settings = get_settings()

    def build_tetrad(self, metric: MetricSpec) -> TetradField:
        """Builtin or custom tetrad; bad names and parameters raise ConfigError"""
        if metric.name == "custom":
            bounds = [tuple(pair) for pair in metric.bounds] if metric.bounds else None
            return custom_spacetime(metric.coordinates, metric.tetrad, metric.energy_momentum, bounds,
                                    metric.params, metric.provider, metric.fd_step)
        return builtin_spacetime(metric.name, metric.params, metric.chart, metric.provider, metric.fd_step)

    async def _run_one(self, name: str, tetrad: TetradField, config: SuiteConfig) -> List[CheckRecord]:
        suite = SUITES[name](tetrad, config.seed, config.samples, config.tolerances, config.algebra_samples)
        try:
            return await suite.run_suite()
        except Exception as e:
            logger.error("suite %s aborted: %s", name, str(e))
            return [failed_record(f"{name}.suite", name, f"{name} suite ran to completion", tetrad.label,
                                  suite.tolerance(), suite.digest(f"{name}.suite"), e)]

    async def run(self, config: SuiteConfig) -> VerificationReport:
        """Run the configured suites concurrently and merge their records by id"""
        tetrad = self.build_tetrad(config.metric)
        logger.info("verifying %s with suites %s", tetrad.label, config.suites)
        batches = await asyncio.gather(*(self._run_one(name, tetrad, config) for name in config.suites))
        records = sorted((record for batch in batches for record in batch), key=lambda r: r.id)
        environment = EnvironmentBlock(provider=tetrad.provider, fd_step=tetrad.fd_step, seed=config.seed,
                                       samples=config.samples, versions=versions())
        return VerificationReport(metric=tetrad.label, environment=environment, records=records)

    @staticmethod
    def exit_code(report: VerificationReport) -> int:
        return 0 if report.all_passed else 1
