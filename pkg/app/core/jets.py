"""
Truncated Taylor jets over the four chart coordinates.

parts[k] is the k-th derivative tensor with its k derivative axes first,
followed by the value shape. Products follow the Leibniz rule, so a jet built
from exact tetrad derivatives stays exact through any chain of bilinear
operations.
"""
from itertools import combinations
from typing import Callable, List, Sequence, Tuple

import numpy as np

from app.core import algebra as ga
from app.core.errors import DegenerateMetricError

N = 4


def _placements(term: np.ndarray, k: int, n: int) -> np.ndarray:
    """Sum over the ways of sharing n derivative slots between two factors"""
    if k == 0 or k == n:
        return term
    total = None
    for chosen in combinations(range(n), k):
        rest = [i for i in range(n) if i not in chosen]
        order = list(chosen) + rest
        perm = [order.index(i) for i in range(n)] + list(range(n, term.ndim))
        placed = np.transpose(term, perm)
        total = placed if total is None else total + placed
    return total


class Jet:
    """Value plus symmetric derivative tensors up to a fixed order"""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[np.ndarray]):
        self.parts = [np.asarray(p, dtype=float) for p in parts]

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        return cls([value] + [np.zeros((N,) * k + value.shape) for k in range(1, order + 1)])

    @property
    def order(self) -> int:
        return len(self.parts) - 1

    @property
    def value(self) -> np.ndarray:
        return self.parts[0]

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.parts[0].shape

    def truncate(self, order: int) -> "Jet":
        return Jet(self.parts[: order + 1])

    def grad(self) -> "Jet":
        """Jet of the first derivatives, derivative axis leading the value shape"""
        return Jet(self.parts[1:])

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Jet":
        """Apply a linear map acting on the trailing value axes of every part"""
        return Jet([fn(p) for p in self.parts])

    def _aligned(self, other: "Jet") -> Tuple[List[np.ndarray], List[np.ndarray]]:
        order = min(self.order, other.order)
        rank = max(len(self.shape), len(other.shape))
        left = [_pad(p, k, rank - len(self.shape)) for k, p in enumerate(self.parts[: order + 1])]
        right = [_pad(p, k, rank - len(other.shape)) for k, p in enumerate(other.parts[: order + 1])]
        return left, right

    def __add__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet([self.parts[0] + other] + self.parts[1:])
        left, right = self._aligned(other)
        return Jet([a + b for a, b in zip(left, right)])

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-1.0) * other

    def __rsub__(self, other) -> "Jet":
        return (-1.0) * self + other

    def __neg__(self) -> "Jet":
        return Jet([-p for p in self.parts])

    def __mul__(self, scalar: float) -> "Jet":
        return Jet([p * scalar for p in self.parts])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape})"


def _pad(part: np.ndarray, k: int, extra: int) -> np.ndarray:
    if extra <= 0:
        return part
    return part.reshape(part.shape[:k] + (1,) * extra + part.shape[k:])


def bilinear(x: Jet, y: Jet, fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
             core: Tuple[int, int] = (1, 1)) -> Jet:
    """Leibniz product of two jets under a bilinear fn.

    fn acts on the last core[0] axes of its first argument and the last
    core[1] axes of its second, broadcasting over everything before them.
    """
    order = min(x.order, y.order)
    batch_x = len(x.shape) - core[0]
    batch_y = len(y.shape) - core[1]
    batch = max(batch_x, batch_y)
    parts = []
    for n in range(order + 1):
        total = None
        for k in range(n + 1):
            l = n - k
            xp = x.parts[k]
            yp = y.parts[l]
            xp = xp.reshape(xp.shape[:k] + (1,) * l + (1,) * (batch - batch_x) + xp.shape[k:])
            yp = yp.reshape((1,) * k + yp.shape[:l] + (1,) * (batch - batch_y) + yp.shape[l:])
            term = _placements(fn(xp, yp), k, n)
            total = term if total is None else total + term
        parts.append(total)
    return Jet(parts)


def gp(x: Jet, y: Jet) -> Jet:
    return bilinear(x, y, ga.geometric_product)


def outer(x: Jet, y: Jet) -> Jet:
    return bilinear(x, y, ga.outer_product)


def left_contract(x: Jet, y: Jet) -> Jet:
    return bilinear(x, y, ga.left_contract)


def commutator(x: Jet, y: Jet) -> Jet:
    return bilinear(x, y, ga.commutator)


def scale(x: Jet, y: Jet) -> Jet:
    """Scalar jet times a multivector jet, both batched alike"""
    return bilinear(x, y, lambda a, b: a[..., None] * b, core=(0, 1))


def matmul(x: Jet, y: Jet) -> Jet:
    return bilinear(x, y, lambda a, b: np.einsum("...ij,...jk->...ik", a, b), core=(2, 2))


def einsum(spec: str, x: Jet, y: Jet, core: Tuple[int, int]) -> Jet:
    """Contraction of two jets; spec must start both operands with '...'"""
    return bilinear(x, y, lambda a, b: np.einsum(spec, a, b), core=core)


def stack(jets: Sequence[Jet], axis: int = 0) -> Jet:
    """Stack equal-shape jets along a new value axis"""
    order = min(j.order for j in jets)
    return Jet([np.stack([j.parts[k] for j in jets], axis=k + axis) for k in range(order + 1)])


def inverse(m: Jet) -> Jet:
    """Inverse of a matrix jet by the Neumann series around its value"""
    try:
        base_value = np.linalg.inv(m.value)
    except np.linalg.LinAlgError as e:
        raise DegenerateMetricError(f"singular matrix in jet inverse: {str(e)}") from e
    if not np.all(np.isfinite(base_value)) or abs(np.linalg.det(m.value)) < 1e-14:
        raise DegenerateMetricError("singular matrix in jet inverse")
    base = Jet.constant(base_value, m.order)
    delta = m - Jet.constant(m.value, m.order)
    step = -1.0 * matmul(base, delta)
    term = base
    total = base
    for _ in range(m.order):
        term = matmul(step, term)
        total = total + term
    return total


def directional(x: Jet, frame: Jet) -> Jet:
    """Frame derivatives E^mu_r d_mu X, result axis r leading the value shape"""
    gradient = x.grad()
    rank = len(x.shape)
    return bilinear(frame, gradient, lambda e, g: np.einsum("...mr,...m->...r", e, g)
                    if rank == 0 else _frame_contract(e, g, rank), core=(2, 1 + rank))


def _frame_contract(e: np.ndarray, g: np.ndarray, rank: int) -> np.ndarray:
    # e: (..., mu, r), g: (..., mu, *value)
    e = e.reshape(e.shape + (1,) * rank)
    g = g.reshape(g.shape[:-rank - 1] + (g.shape[-rank - 1], 1) + g.shape[-rank:])
    return np.sum(e * g, axis=-rank - 2)
