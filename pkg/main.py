"""
Command-line entry point: verify Clifford-bundle identities on a tetrad and write a report
"""
import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.config import configure_logging, get_settings, load_config_file
from app.core.errors import ConfigError
from app.models.schemas import SUITE_NAMES, SuiteConfig
from app.services.verification import VerificationService
from app.utils.helpers import emit_report

logger = logging.getLogger("cliffordcheck")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffordcheck",
        description="Verify or refute identities of the Clifford-bundle calculus on a tetrad",
    )
    parser.add_argument("--metric", help="minkowski, schwarzschild, einstein_de_sitter or custom")
    parser.add_argument("--param", action="append", default=[], metavar="K=V", help="metric parameter, repeatable")
    parser.add_argument("--chart", help="chart of the builtin metric")
    parser.add_argument("--suite", action="append", default=None, metavar="NAME",
                        help=f"suite to run, repeatable; one of {', '.join(SUITE_NAMES)} (default: all)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--acceptance", action="store_true",
                        help="sample as many points as the acceptance runs (default: a quick run)")
    parser.add_argument("--provider", help="analytic or fd")
    parser.add_argument("--fd-step", type=float, dest="fd_step")
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--format", help="json or markdown")
    parser.add_argument("--config", help="JSON or key = value file merged under the flags")
    parser.add_argument("--log-level", dest="log_level")
    return parser


def parse_params(pairs: List[str]) -> Dict[str, str]:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--param expects k=v, got {pair!r}")
        params[key.strip()] = value.strip()
    return params


def merge_config(args: argparse.Namespace) -> SuiteConfig:
    """Config file first, then flags; settings fill whatever neither gives"""
    settings = get_settings()
    values: Dict[str, Any] = load_config_file(args.config) if args.config else {}
    metric: Dict[str, Any] = dict(values.pop("metric", {}) or {})

    if args.metric is not None:
        metric["name"] = args.metric
    if args.chart is not None:
        metric["chart"] = args.chart
    if args.provider is not None:
        metric["provider"] = args.provider
    if args.fd_step is not None:
        metric["fd_step"] = args.fd_step
    if args.param:
        metric["params"] = {**(metric.get("params") or {}), **parse_params(args.param)}
    metric.setdefault("provider", settings.provider)
    metric.setdefault("fd_step", settings.fd_step)

    for name in ("seed", "samples", "out", "format"):
        flag = getattr(args, name)
        if flag is not None:
            values[name] = flag
    if args.suite is not None:
        values["suites"] = args.suite
    if args.acceptance:
        values.setdefault("samples", settings.acceptance_samples)
    values.setdefault("suites", list(SUITE_NAMES))
    values.setdefault("seed", settings.seed)
    values.setdefault("samples", settings.samples)
    values.setdefault("format", settings.report_format)
    values.setdefault("out", settings.report_path)
    values["metric"] = metric
    return SuiteConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = merge_config(args)
        report = asyncio.run(VerificationService().run(config))
        text = emit_report(report, config.format)
        if config.out:
            Path(config.out).write_text(text, encoding="utf-8")
            logger.info("report written to %s", config.out)
        else:
            sys.stdout.write(text)
    except (ConfigError, ValidationError, OSError, ValueError) as e:
        print(f"cliffordcheck: configuration error: {str(e)}", file=sys.stderr)
        return 2
    logger.info("%s: %s", report.metric, report.summary)
    return VerificationService.exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
