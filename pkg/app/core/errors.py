"""
Error types raised by the numerical kernel
"""


class CliffordCheckError(Exception):
    """Base class for verifier errors"""


class DomainError(CliffordCheckError, ValueError):
    """A point lies outside a chart, or an argument is out of range"""


class ChartDomainError(DomainError):
    """A point lies outside the chart, or the chart lacks what a quantity needs"""


class DegenerateMetricError(ChartDomainError):
    """The tetrad or metric is singular at the requested point"""


class ConfigError(CliffordCheckError, ValueError):
    """Unknown metric, chart, parameter or suite"""


class FormAlgebraError(CliffordCheckError):
    """Inconsistent degrees, flavours or shapes in the Clifford form calculus"""
