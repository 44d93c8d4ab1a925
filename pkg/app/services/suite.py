"""
Shared machinery of the verification suites
"""
import asyncio
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from app.config import get_settings, get_tolerance
from app.core.errors import ChartDomainError
from app.models.schemas import SUITE_NAMES, CheckRecord
from app.utils.helpers import (
    create_check_record, create_refutation_record, failed_record, inputs_digest, skipped_record, worst
)

logger = logging.getLogger(__name__)

Evaluation = Dict[str, float]


@dataclass
class Check:
    """How one record is read off a dictionary of measured values.

    `key` names the residual; `witness` (if any) names an independent measure
    of the discrepancy a literal form predicts, making the record a refutation.
    `expect` forces the expectation when no witness is available.
    """
    id: str
    label: str
    key: str
    witness: Optional[str] = None
    tolerance: Optional[str] = None
    threshold: Optional[float] = None
    expect: Optional[str] = None
    details: Dict = field(default_factory=dict)


class SuiteService:
    """Base class of the suites: sample points, tolerances and guarded checks"""

    name = "suite"
    tolerance_name = "geometry"

    def __init__(self, tetrad, seed: int, samples: int, tolerances: Optional[Dict[str, float]] = None,
                 algebra_samples: Optional[int] = None):
        self.settings = get_settings()
        self.tetrad = tetrad
        self.seed = seed
        self.samples = samples
        self.algebra_samples = algebra_samples or self.settings.algebra_samples
        self.tolerances = dict(tolerances or {})
        self.rng = np.random.default_rng([seed, SUITE_NAMES.index(self.name)])
        self.records: List[CheckRecord] = []

    @property
    def metric(self) -> str:
        return self.tetrad.label

    def tolerance(self, name: Optional[str] = None) -> float:
        name = name or self.tolerance_name
        if name in self.tolerances:
            return self.tolerances[name]
        return get_tolerance(name, self.tetrad.provider)

    def sample_points(self, include_strong_field: bool = True) -> List[np.ndarray]:
        """Seeded chart points, plus the chart's strong-field point when it has one"""
        points = self.tetrad.sample_points(self.rng, self.samples)
        strong = self.tetrad.chart.strong_field_point
        if include_strong_field and strong is not None and self.tetrad.chart.domain(strong) is None:
            points.append(np.asarray(strong, dtype=float))
        return points

    def digest(self, check_id: str, points: Sequence[np.ndarray] = ()) -> str:
        return inputs_digest(check_id, self.metric, self.tetrad.provider, self.tetrad.fd_step, self.seed,
                             [np.round(p, 12) for p in points])

    def measure(self, checks: Sequence[Check], evaluate: Callable[[np.ndarray], Evaluation],
                points: Optional[Sequence[np.ndarray]] = None, details: Optional[Dict] = None):
        """Evaluate at every point, keep the worst value per key and append one record per check.

        A ChartDomainError skips the whole group; any other error fails it with a diagnostic.
        """
        points = [None] if points is None else list(points)
        try:
            measured: Dict[str, List[float]] = {}
            for x in points:
                for key, value in evaluate(x).items():
                    measured.setdefault(key, []).append(value)
        except ChartDomainError as e:
            logger.info("%s: skipping %s (%s)", self.name, [c.id for c in checks], str(e))
            for check in checks:
                self.records.append(skipped_record(check.id, self.name, check.label, self.metric,
                                                   self._threshold(check), self.digest(check.id), str(e),
                                                   check.expect or "holds"))
            return
        except Exception as e:
            logger.warning("%s: %s failed: %s", self.name, [c.id for c in checks], str(e))
            for check in checks:
                self.records.append(failed_record(check.id, self.name, check.label, self.metric,
                                                  self._threshold(check), self.digest(check.id), e,
                                                  check.expect or "holds"))
            return

        sampled = [p for p in points if p is not None]
        for check in checks:
            tolerance = self._threshold(check)
            residual = worst(measured.get(check.key, []))
            digest = self.digest(check.id, sampled)
            extra = dict(details or {}, **check.details)
            if sampled:
                extra["points"] = len(sampled)
            if check.witness is not None:
                record = create_refutation_record(check.id, self.name, check.label, self.metric, residual,
                                                  worst(measured.get(check.witness, [])), tolerance, digest, extra)
            else:
                record = create_check_record(check.id, self.name, check.label, self.metric, residual, tolerance,
                                             digest, check.expect or "holds", extra)
            if not record.passed:
                logger.warning("%s: %s did not pass (residual %s, tolerance %.1e, expect %s)", self.name,
                               check.id, record.residual, tolerance, record.expect)
            self.records.append(record)

    def skip(self, checks: Sequence[Check], reason: str):
        for check in checks:
            self.records.append(skipped_record(check.id, self.name, check.label, self.metric, self._threshold(check),
                                               self.digest(check.id), reason, check.expect or "holds"))

    def _threshold(self, check: Check) -> float:
        if check.threshold is not None:
            return check.threshold
        return self.tolerance(check.tolerance)

    def collect(self) -> List[CheckRecord]:
        raise NotImplementedError

    async def run_suite(self) -> List[CheckRecord]:
        """Run the suite's checks in a worker thread"""
        logger.info("%s suite started on %s", self.name, self.metric)
        try:
            records = await asyncio.to_thread(self.collect)
        except Exception as e:
            raise Exception(f"{self.name} suite failed: {str(e)}") from e
        logger.info("%s suite finished with %d records", self.name, len(records))
        return records
