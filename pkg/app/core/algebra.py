"""
Spacetime algebra Cl(1,3) on real 16-component arrays.

Component k of an array belongs to the blade whose generators are the set bits
of k, so bit a stands for theta^a (or e_a; both fibres share this kernel).
Every function works on arrays of shape (..., 16) and broadcasts over the
leading axes.
"""
from itertools import combinations
from typing import Iterable, List, Sequence, Union

import numpy as np

from app.core.errors import DomainError

DIM = 16
ETA = np.array([1.0, -1.0, -1.0, -1.0])
GRADE = np.array([bin(mask).count("1") for mask in range(DIM)])
PSEUDOSCALAR = 15

MASKS_BY_GRADE: List[List[int]] = [[m for m in range(DIM) if GRADE[m] == k] for k in range(5)]
VECTOR_MASKS = [1, 2, 4, 8]
BIVECTOR_PAIRS = list(combinations(range(4), 2))
BIVECTOR_MASKS = [(1 << a) | (1 << b) for a, b in BIVECTOR_PAIRS]
EVEN_MASKS = [m for m in range(DIM) if GRADE[m] % 2 == 0]

REVERSE_SIGN = np.array([(-1.0) ** (g * (g - 1) // 2) for g in GRADE])
INVOLUTION_SIGN = np.array([(-1.0) ** g for g in GRADE])
CONJUGATE_SIGN = REVERSE_SIGN * INVOLUTION_SIGN
# Product of eta over the generators of each blade; switches index position.
LOWER_SIGN = np.array([np.prod([ETA[a] for a in range(4) if mask >> a & 1]) for mask in range(DIM)])


def _reorder_sign(a: int, b: int) -> float:
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1.0 if swaps & 1 else 1.0


def _build_tables():
    gp = np.zeros((DIM, DIM))
    outer = np.zeros((DIM, DIM))
    left = np.zeros((DIM, DIM))
    right = np.zeros((DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            sign = _reorder_sign(i, j) * LOWER_SIGN[i & j]
            gp[i, j] = sign
            if i & j == 0:
                outer[i, j] = sign
            if i & j == i:
                left[i, j] = sign
            if i & j == j:
                right[i, j] = sign
    return gp, outer, left, right


GP_TABLE, OUTER_TABLE, LEFT_TABLE, RIGHT_TABLE = _build_tables()

_INDEX = np.array([[i ^ k for k in range(DIM)] for i in range(DIM)])
_ROWS = np.arange(DIM)[:, None]


def _kernel(table: np.ndarray) -> np.ndarray:
    return table[_ROWS, _INDEX]


GP_KERNEL = _kernel(GP_TABLE)
OUTER_KERNEL = _kernel(OUTER_TABLE)
LEFT_KERNEL = _kernel(LEFT_TABLE)
RIGHT_KERNEL = _kernel(RIGHT_TABLE)


def product(a: np.ndarray, b: np.ndarray, kernel: np.ndarray = GP_KERNEL) -> np.ndarray:
    """Bilinear blade product described by a sign kernel (geometric by default)"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,...ik,ik->...k", a, b[..., _INDEX], kernel)


def geometric_product(a, b) -> np.ndarray:
    return product(a, b, GP_KERNEL)


def outer_product(a, b) -> np.ndarray:
    return product(a, b, OUTER_KERNEL)


def left_contract(a, b) -> np.ndarray:
    return product(a, b, LEFT_KERNEL)


def right_contract(a, b) -> np.ndarray:
    return product(a, b, RIGHT_KERNEL)


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA"""
    return geometric_product(a, b) - geometric_product(b, a)


def reverse(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * REVERSE_SIGN


def grade_involution(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * INVOLUTION_SIGN


def clifford_conjugate(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * CONJUGATE_SIGN


def lower_indices(a) -> np.ndarray:
    """Read the components of a tangent multivector as those of the cotangent one"""
    return np.asarray(a, dtype=float) * LOWER_SIGN


def scalar_product(a, b) -> np.ndarray:
    """A . B = <A reverse(B)>_0"""
    weights = REVERSE_SIGN * np.diag(GP_TABLE)
    return np.einsum("...i,...i,i->...", np.asarray(a, dtype=float), np.asarray(b, dtype=float), weights)


def grade_project(a, k: int) -> np.ndarray:
    if not 0 <= k <= 4:
        raise DomainError(f"grade must lie in 0..4, got {k}")
    return np.asarray(a, dtype=float) * (GRADE == k)


def even_part(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * (GRADE % 2 == 0)


def basis(mask: int) -> np.ndarray:
    out = np.zeros(DIM)
    out[mask] = 1.0
    return out


PSEUDOSCALAR_BLADE = basis(PSEUDOSCALAR)


def hodge_star(a) -> np.ndarray:
    """Star A = reverse(A) theta5"""
    return geometric_product(reverse(a), PSEUDOSCALAR_BLADE)


def hodge_star_inverse(a) -> np.ndarray:
    return -hodge_star(grade_involution(a))


def blade(indices: Sequence[int]) -> np.ndarray:
    """Outer product of generators in the given order, e.g. blade([1, 0]) = -theta^01"""
    out = basis(0)
    for index in indices:
        out = outer_product(out, basis(1 << index))
    return out


def vector(components: Iterable[float]) -> np.ndarray:
    """Grade-1 multivector from 4 components, batched over leading axes"""
    components = np.asarray(components, dtype=float)
    out = np.zeros(components.shape[:-1] + (DIM,))
    out[..., VECTOR_MASKS] = components
    return out


def bivector(matrix: np.ndarray) -> np.ndarray:
    """Bivector sum_{a<b} M[a, b] theta^a ^ theta^b from a (..., 4, 4) array"""
    matrix = np.asarray(matrix, dtype=float)
    out = np.zeros(matrix.shape[:-2] + (DIM,))
    for (a, b), mask in zip(BIVECTOR_PAIRS, BIVECTOR_MASKS):
        out[..., mask] = matrix[..., a, b]
    return out


def norm(a) -> np.ndarray:
    """Euclidean norm of the components (a residual measure, not a metric norm)"""
    return np.sqrt(np.sum(np.asarray(a, dtype=float) ** 2, axis=-1))


def residual(a) -> float:
    """Largest component magnitude of an array of any shape"""
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def isclose_mv(a, b) -> bool:
    scale = max(float(np.max(norm(a))), float(np.max(norm(b))), 1.0)
    return residual(np.asarray(a) - np.asarray(b)) <= max(1e-12, 1e-10 * scale)


Operand = Union["Multivector", float, int]


class Multivector:
    """Value wrapper over the array functions with operator sugar"""

    __slots__ = ("values",)

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape[-1:] != (DIM,):
            raise DomainError(f"multivector arrays end in {DIM} components, got shape {values.shape}")
        self.values = values

    @classmethod
    def scalar(cls, value: float) -> "Multivector":
        return cls(float(value) * basis(0))

    @classmethod
    def basis(cls, mask: int) -> "Multivector":
        return cls(basis(mask))

    @classmethod
    def blade(cls, indices: Sequence[int]) -> "Multivector":
        return cls(blade(indices))

    @classmethod
    def vector(cls, components: Iterable[float]) -> "Multivector":
        return cls(vector(components))

    def _wrap(self, other: Operand) -> np.ndarray:
        if isinstance(other, Multivector):
            return other.values
        return float(other) * basis(0)

    def __add__(self, other: Operand) -> "Multivector":
        return Multivector(self.values + self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Multivector":
        return Multivector(self.values - self._wrap(other))

    def __rsub__(self, other: Operand) -> "Multivector":
        return Multivector(self._wrap(other) - self.values)

    def __neg__(self) -> "Multivector":
        return Multivector(-self.values)

    def __mul__(self, other: Operand) -> "Multivector":
        if isinstance(other, Multivector):
            return Multivector(geometric_product(self.values, other.values))
        return Multivector(self.values * float(other))

    def __rmul__(self, other: Operand) -> "Multivector":
        return Multivector(self.values * float(other))

    def __truediv__(self, other: float) -> "Multivector":
        return Multivector(self.values / float(other))

    def __xor__(self, other: "Multivector") -> "Multivector":
        return Multivector(outer_product(self.values, other.values))

    def left_contract(self, other: "Multivector") -> "Multivector":
        return Multivector(left_contract(self.values, other.values))

    def right_contract(self, other: "Multivector") -> "Multivector":
        return Multivector(right_contract(self.values, other.values))

    def scalar_product(self, other: "Multivector") -> np.ndarray:
        return scalar_product(self.values, other.values)

    def commutator(self, other: "Multivector") -> "Multivector":
        return Multivector(commutator(self.values, other.values))

    def grade(self, k: int) -> "Multivector":
        return Multivector(grade_project(self.values, k))

    def reverse(self) -> "Multivector":
        return Multivector(reverse(self.values))

    def grade_involution(self) -> "Multivector":
        return Multivector(grade_involution(self.values))

    def hodge(self) -> "Multivector":
        return Multivector(hodge_star(self.values))

    def hodge_inverse(self) -> "Multivector":
        return Multivector(hodge_star_inverse(self.values))

    def norm(self) -> np.ndarray:
        return norm(self.values)

    def allclose(self, other: Operand) -> bool:
        return isclose_mv(self.values, self._wrap(other))

    def __repr__(self) -> str:
        terms = [f"{v:+.6g}*[{m:04b}]" for m, v in enumerate(np.atleast_2d(self.values)[0]) if v != 0.0]
        return f"Multivector({' '.join(terms) or '0'})"
