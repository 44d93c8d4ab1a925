"""
Derivative providers: anything with jet(x, order) -> Jet
"""
import logging
import threading
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Dict, Optional, Protocol, Sequence, Tuple

import numpy as np
import sympy

from app.core.jets import N, Jet

logger = logging.getLogger(__name__)


class Field(Protocol):
    def jet(self, x: np.ndarray, order: int) -> Jet:
        ...


class ConstantField:
    def __init__(self, value):
        self.value = np.asarray(value, dtype=float)

    def jet(self, x: np.ndarray, order: int) -> Jet:
        return Jet.constant(self.value, order)


class SymbolicField:
    """Array of sympy expressions with derivatives by derive_by_array.

    Derivative arrays and evaluators are built lazily, one per order, under
    a lock: the suite threads share one field.
    """

    def __init__(self, expressions, symbols: Sequence[sympy.Symbol]):
        if isinstance(expressions, (list, tuple, sympy.NDimArray, sympy.MatrixBase)):
            self.expressions = sympy.Array(expressions)
        else:
            self.expressions = sympy.sympify(expressions)
        self.symbols = list(symbols)
        self._derivatives = [self.expressions]
        self._evaluators: Dict[int, Callable] = {}
        self._lock = threading.RLock()

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(getattr(self.expressions, "shape", ()))

    def derivative_array(self, k: int):
        with self._lock:
            while len(self._derivatives) <= k:
                self._derivatives.append(sympy.derive_by_array(self._derivatives[-1], self.symbols))
            return self._derivatives[k]

    def _evaluator(self, k: int) -> Callable:
        with self._lock:
            if k not in self._evaluators:
                array = self.derivative_array(k)
                body = array.tolist() if isinstance(array, sympy.NDimArray) else array
                logger.debug("compiling derivative order %d for shape %s", k, self.shape)
                self._evaluators[k] = sympy.lambdify(self.symbols, body, modules="numpy", cse=True)
            return self._evaluators[k]

    def evaluate(self, x: np.ndarray, k: int = 0) -> np.ndarray:
        shape = (N,) * k + self.shape
        with np.errstate(all="ignore"):
            raw = self._evaluator(k)(*[float(c) for c in x])
        return np.broadcast_to(np.asarray(raw, dtype=float), shape).copy()

    def jet(self, x: np.ndarray, order: int) -> Jet:
        return Jet([self.evaluate(x, k) for k in range(order + 1)])


class FiniteDifferenceField:
    """Nested central differences of a value function.

    Order k uses the step fd_step * 10**(k-1) * (1 + |x_mu|) per coordinate.
    """

    def __init__(self, value_fn: Callable[[np.ndarray], np.ndarray], fd_step: float = 1e-5):
        self.value_fn = value_fn
        self.fd_step = fd_step
        self._values: Dict[bytes, np.ndarray] = {}
        self._lock = threading.Lock()

    def _value(self, x: np.ndarray) -> np.ndarray:
        key = x.tobytes()
        with self._lock:
            value = self._values.get(key)
        if value is None:
            value = np.asarray(self.value_fn(x), dtype=float)
            with self._lock:
                if len(self._values) > 50000:
                    self._values.clear()
                self._values[key] = value
        return value

    def steps(self, x: np.ndarray, k: int) -> np.ndarray:
        return self.fd_step * 10.0 ** (k - 1) * (1.0 + np.abs(x))

    def _nested(self, x: np.ndarray, k: int, step: np.ndarray) -> np.ndarray:
        if k == 0:
            return self._value(x)
        slices = []
        for mu in range(N):
            shift = np.zeros(N)
            shift[mu] = step[mu]
            forward = self._nested(x + shift, k - 1, step)
            backward = self._nested(x - shift, k - 1, step)
            slices.append((forward - backward) / (2.0 * step[mu]))
        return np.stack(slices)

    def jet(self, x: np.ndarray, order: int) -> Jet:
        x = np.asarray(x, dtype=float)
        parts = [self._value(x)]
        for k in range(1, order + 1):
            parts.append(self._nested(x, k, self.steps(x, k)))
        return Jet(parts)


class PolynomialField:
    """Cubic polynomial field with exact jets, for seeded random test fields"""

    def __init__(self, shape: Tuple[int, ...], rng: np.random.Generator, center: Optional[np.ndarray] = None,
                 scale: float = 1.0, mask: Optional[np.ndarray] = None):
        self.shape = tuple(shape)
        self.center = np.zeros(N) if center is None else np.asarray(center, dtype=float)
        coefficients = []
        for k in range(4):
            c = rng.normal(scale=scale / (1 + k), size=(N,) * k + self.shape)
            c = _symmetrize(c, k)
            if mask is not None:
                c = c * mask
            coefficients.append(c)
        self.coefficients = coefficients

    def jet(self, x: np.ndarray, order: int) -> Jet:
        y = np.asarray(x, dtype=float) - self.center
        parts = []
        for k in range(order + 1):
            total = np.zeros((N,) * k + self.shape)
            for j in range(k, 4):
                c = self.coefficients[j]
                for _ in range(j - k):
                    c = np.tensordot(y, c, axes=([0], [0]))
                total = total + c / _factorial(j - k)
            parts.append(total)
        return Jet(parts)


def _factorial(n: int) -> float:
    return float(np.prod(np.arange(1, n + 1))) if n > 1 else 1.0


def _symmetrize(c: np.ndarray, k: int) -> np.ndarray:
    if k < 2:
        return c
    perms = list(permutations(range(k)))
    rest = list(range(k, c.ndim))
    return sum(np.transpose(c, list(p) + rest) for p in perms) / len(perms)


@dataclass
class ConvergenceResult:
    """Errors of central differences at a step and at half that step"""
    order: int
    coarse_error: float
    fine_error: float

    @property
    def rate(self) -> float:
        """Observed order of accuracy, log2 of the error ratio"""
        if self.coarse_error <= 0.0 or self.fine_error <= 0.0:
            return float("nan")
        return float(np.log2(self.coarse_error / self.fine_error))


def central_difference_convergence(value_fn: Callable[[np.ndarray], np.ndarray], exact: Field, x: np.ndarray,
                                   fd_step: float, order: int = 1) -> ConvergenceResult:
    """Compare order-k central differences with exact derivatives at fd_step and fd_step / 2"""
    x = np.asarray(x, dtype=float)
    truth = exact.jet(x, order).parts[order]
    errors = []
    for step in (fd_step, 0.5 * fd_step):
        approximation = FiniteDifferenceField(value_fn, step).jet(x, order).parts[order]
        errors.append(float(np.max(np.abs(approximation - truth))))
    return ConvergenceResult(order, errors[0], errors[1])
