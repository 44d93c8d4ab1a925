"""
Pydantic models for verification requests and reports
"""
from typing import List, Optional, Dict, Any
from pydantic import BaseModel, Field, field_validator, model_validator

SUITE_NAMES = ("algebra", "spinor", "geometry", "forms", "einstein", "sachs", "energy", "dirac", "constraints")
TOLERANCE_NAMES = ("algebra", "representation", "geometry", "forms", "forms_flat", "einstein", "sachs", "energy",
                   "closedness", "dirac", "wave", "constraint", "transport", "mass", "mass_flat")


# === METRIC MODELS ===
class MetricSpec(BaseModel):
    """Which tetrad to verify on and how to differentiate it"""
    name: str = Field(default="minkowski", min_length=1)
    params: Dict[str, float] = Field(default_factory=dict)
    chart: Optional[str] = None
    provider: str = Field(default="analytic", pattern="^(analytic|fd)$")
    fd_step: float = Field(default=1e-5, gt=0.0, le=1e-1)
    bounds: Optional[List[List[float]]] = None
    coordinates: Optional[List[str]] = None
    tetrad: Optional[List[List[str]]] = None
    energy_momentum: Optional[List[List[str]]] = None

    @field_validator("bounds")
    @classmethod
    def check_bounds(cls, value: Optional[List[List[float]]]) -> Optional[List[List[float]]]:
        if value is None:
            return value
        if len(value) != 4 or any(len(pair) != 2 or pair[0] >= pair[1] for pair in value):
            raise ValueError("bounds needs four increasing [low, high] pairs")
        return value

    @model_validator(mode="after")
    def check_custom(self) -> "MetricSpec":
        if self.name == "custom" and (self.coordinates is None or self.tetrad is None):
            raise ValueError("a custom metric needs coordinates and tetrad")
        return self


# === SUITE MODELS ===
class SuiteConfig(BaseModel):
    """One verification run"""
    metric: MetricSpec = Field(default_factory=MetricSpec)
    suites: List[str] = Field(default_factory=list)
    seed: int = Field(default=20240101, ge=0)
    samples: int = Field(default=6, ge=1, le=1000)
    algebra_samples: int = Field(default=1000, ge=1, le=100000)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    out: Optional[str] = None
    format: str = Field(default="json", pattern="^(json|markdown)$")

    @field_validator("suites", mode="before")
    @classmethod
    def split_suites(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("suites")
    @classmethod
    def check_suites(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(value) - set(SUITE_NAMES))
        if unknown:
            raise ValueError(f"unknown suites {unknown}; choose from {list(SUITE_NAMES)}")
        return list(dict.fromkeys(value))

    @field_validator("tolerances")
    @classmethod
    def check_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(TOLERANCE_NAMES))
        if unknown:
            raise ValueError(f"unknown tolerance names {unknown}; choose from {list(TOLERANCE_NAMES)}")
        if any(v <= 0 for v in value.values()):
            raise ValueError("tolerances must be positive")
        return value


# === REPORT MODELS ===
class CheckRecord(BaseModel):
    """Outcome of one identity on one metric"""
    id: str
    suite: str
    label: str
    metric: str
    inputs_digest: str
    residual: Optional[float] = None
    tolerance: float
    expect: str = Field(default="holds", pattern="^(holds|fails)$")
    passed: bool
    skipped: bool = False
    diagnostic: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class EnvironmentBlock(BaseModel):
    """Everything besides the metric that the residuals depend on"""
    provider: str
    fd_step: float
    seed: int
    samples: int
    versions: Dict[str, str]


class VerificationReport(BaseModel):
    """All records of a run, merged in id order"""
    metric: str
    environment: EnvironmentBlock
    records: List[CheckRecord] = Field(default_factory=list)
    summary: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def count_records(self) -> "VerificationReport":
        skipped = sum(1 for r in self.records if r.skipped)
        failed = sum(1 for r in self.records if not r.skipped and not r.passed)
        self.summary = {
            "total": len(self.records),
            "passed": len(self.records) - skipped - failed,
            "failed": failed,
            "skipped": skipped,
        }
        return self

    @property
    def all_passed(self) -> bool:
        return self.summary.get("failed", 0) == 0
