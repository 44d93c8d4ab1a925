"""
Utility functions for check records and report output
"""
import hashlib
import json
import math
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from app.models.schemas import CheckRecord, VerificationReport


def _plain(value: Any) -> Any:
    """JSON-safe copy: numpy scalars and arrays become Python values, non-finite floats strings"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def inputs_digest(*parts: Any) -> str:
    """Short stable hash of whatever went into a check"""
    payload = json.dumps(_plain(list(parts)), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def worst(values: Iterable[float]) -> float:
    """Largest value, NaN if any value is NaN"""
    values = [float(v) for v in values]
    if not values:
        return 0.0
    if any(math.isnan(v) for v in values):
        return float("nan")
    return max(values)


def create_check_record(check_id: str, suite: str, label: str, metric: str, residual: float, tolerance: float,
                        digest: str, expect: str = "holds", details: Optional[Dict[str, Any]] = None) -> CheckRecord:
    """Record for an identity expected to hold (residual <= tolerance) or to fail (residual > tolerance)"""
    residual = float(residual)
    exceeded = not math.isfinite(residual) or residual > tolerance
    if expect == "holds":
        passed = math.isfinite(residual) and not exceeded
    else:
        passed = exceeded and not math.isnan(residual)
    return CheckRecord(
        id=check_id,
        suite=suite,
        label=label,
        metric=metric,
        inputs_digest=digest,
        residual=_plain(residual) if math.isfinite(residual) else None,
        tolerance=tolerance,
        expect=expect,
        passed=passed,
        details=_plain({**(details or {}), **({} if math.isfinite(residual) else {"residual": residual})}),
    )


def create_refutation_record(check_id: str, suite: str, label: str, metric: str, residual: float, witness: float,
                             tolerance: float, digest: str, details: Optional[Dict[str, Any]] = None) -> CheckRecord:
    """Record for a literal form whose failure is predicted by an independently computed witness.

    The literal form is expected to fail exactly when the witness exceeds the
    tolerance, and the record passes when the residual agrees with that.
    """
    witness = float(witness)
    expect = "fails" if (not math.isfinite(witness) or witness > tolerance) else "holds"
    return create_check_record(check_id, suite, label, metric, residual, tolerance, digest, expect,
                               {**(details or {}), "witness": witness})


def failed_record(check_id: str, suite: str, label: str, metric: str, tolerance: float, digest: str,
                  error: Exception, expect: str = "holds") -> CheckRecord:
    return CheckRecord(id=check_id, suite=suite, label=label, metric=metric, inputs_digest=digest,
                       tolerance=tolerance, expect=expect, passed=False,
                       diagnostic=f"{type(error).__name__}: {str(error)}")


def skipped_record(check_id: str, suite: str, label: str, metric: str, tolerance: float, digest: str,
                   reason: str, expect: str = "holds") -> CheckRecord:
    return CheckRecord(id=check_id, suite=suite, label=label, metric=metric, inputs_digest=digest,
                       tolerance=tolerance, expect=expect, passed=False, skipped=True, diagnostic=reason)


def emit_json(report: VerificationReport) -> str:
    """Deterministic JSON: sorted keys, floats by repr"""
    return json.dumps(_plain(report.model_dump()), sort_keys=True, indent=2) + "\n"


def _badge(record: CheckRecord) -> str:
    if record.skipped:
        return "SKIP"
    return "PASS" if record.passed else "FAIL"


def _number(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.3e}"


def emit_markdown(report: VerificationReport) -> str:
    """Markdown report grouped by suite with PASS, FAIL and SKIP badges"""
    env = report.environment
    lines: List[str] = [
        f"# Verification report: {report.metric}",
        "",
        f"provider `{env.provider}`, fd step {env.fd_step:g}, seed {env.seed}, samples {env.samples}",
        "",
        f"**{report.summary.get('passed', 0)} passed, {report.summary.get('failed', 0)} failed, "
        f"{report.summary.get('skipped', 0)} skipped** of {report.summary.get('total', 0)}",
    ]
    suites: Dict[str, List[CheckRecord]] = {}
    for record in report.records:
        suites.setdefault(record.suite, []).append(record)
    for suite in sorted(suites):
        lines += ["", f"## {suite}", "", "| | check | identity | expect | residual | tolerance |",
                  "|---|---|---|---|---|---|"]
        for record in suites[suite]:
            lines.append(f"| {_badge(record)} | `{record.id}` | {record.label} | {record.expect} | "
                         f"{_number(record.residual)} | {record.tolerance:.1e} |")
        notes = [r for r in suites[suite] if r.diagnostic]
        if notes:
            lines.append("")
            lines += [f"- `{r.id}`: {r.diagnostic}" for r in notes]
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, format: str = "json") -> str:
    if format == "json":
        return emit_json(report)
    if format == "markdown":
        return emit_markdown(report)
    raise ValueError(f"unknown report format {format!r}")
