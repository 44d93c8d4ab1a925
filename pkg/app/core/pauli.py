"""
Pauli even subalgebra of Cl(1,3) and its complex 2x2 representation.

The kernel element theta^k theta^0 is sigma^k and maps to the k-th Pauli
matrix, theta5 maps to iI. Two-component spinors use eps = [[0, 1], [-1, 0]]
for index gymnastics.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from app.core import algebra as ga
from app.core.errors import DomainError

PAULI_MATRICES = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
EPSILON = np.array([[0, 1], [-1, 0]], dtype=complex)

E0 = ga.basis(1)
ONE = ga.basis(0)
I5 = ga.PSEUDOSCALAR_BLADE
SIGMA = np.array([ga.geometric_product(ga.basis(1 << k), E0) for k in (1, 2, 3)])
I_SIGMA = np.array([ga.geometric_product(I5, s) for s in SIGMA])

# Each even basis element is plus or minus a single blade.
_EVEN_BASIS = np.vstack([ONE[None], SIGMA, I_SIGMA, I5[None]])
_EVEN_MATRICES = np.array(
    [PAULI_MATRICES[0]]
    + [PAULI_MATRICES[k] for k in (1, 2, 3)]
    + [1j * PAULI_MATRICES[k] for k in (1, 2, 3)]
    + [1j * PAULI_MATRICES[0]]
)
_EVEN_MASKS = np.argmax(np.abs(_EVEN_BASIS), axis=1)
_EVEN_SIGNS = _EVEN_BASIS[np.arange(8), _EVEN_MASKS]


def to_matrix(a: np.ndarray, tolerance: float = 1e-12) -> np.ndarray:
    """Complex 2x2 image of an even multivector, batched over leading axes"""
    a = np.asarray(a, dtype=float)
    odd = a * (ga.GRADE % 2 == 1)
    if ga.residual(odd) > tolerance * max(1.0, ga.residual(a)):
        raise DomainError("to_matrix needs an even multivector")
    coefficients = a[..., _EVEN_MASKS] * _EVEN_SIGNS
    return np.einsum("...j,jab->...ab", coefficients, _EVEN_MATRICES)


def from_matrix(x: np.ndarray) -> np.ndarray:
    """Even multivector whose image is the complex matrix x"""
    x = np.asarray(x, dtype=complex)
    z = np.einsum("kab,...ba->...k", PAULI_MATRICES, x) / 2.0
    coefficients = np.concatenate([z.real, z.imag[..., 1:], z.imag[..., :1]], axis=-1)
    out = np.zeros(x.shape[:-2] + (ga.DIM,))
    out[..., _EVEN_MASKS] = coefficients * _EVEN_SIGNS
    return out


def hermitian_conjugate(a: np.ndarray) -> np.ndarray:
    """A-dagger = e0 reverse(A) e0, the conjugate transpose of the image"""
    return ga.geometric_product(ga.geometric_product(E0, ga.reverse(a)), E0)


def check(q: np.ndarray) -> np.ndarray:
    """q-check = -reverse(q): flips sigma_0 and keeps sigma_j"""
    return -ga.reverse(q)


def paravector(components: np.ndarray) -> np.ndarray:
    """q^0 + q^k sigma^k from components (..., 4)"""
    components = np.asarray(components, dtype=float)
    return components[..., 0, None] * ONE + np.einsum("...k,kz->...z", components[..., 1:], SIGMA)


def idempotent() -> np.ndarray:
    """e = (1 + sigma^3) / 2"""
    return 0.5 * (ONE + SIGMA[2])


def ideal_basis() -> Tuple[np.ndarray, np.ndarray]:
    """s1 = e and s2 = sigma^1 e, images E11 and E21"""
    e = idempotent()
    return e, ga.geometric_product(SIGMA[0], e)


@dataclass
class IdealSpinor:
    """Element of the minimal left ideal C(2) e, stored as its image column"""
    column: np.ndarray

    def __post_init__(self):
        self.column = np.asarray(self.column, dtype=complex).reshape(2)

    @classmethod
    def from_multivector(cls, value: np.ndarray, tolerance: float = 1e-12) -> "IdealSpinor":
        product = ga.geometric_product(value, idempotent())
        if ga.residual(product - value) > tolerance * max(1.0, ga.residual(value)):
            raise DomainError("value is not in the left ideal generated by e")
        return cls(to_matrix(value)[:, 0])

    def multivector(self) -> np.ndarray:
        matrix = np.zeros((2, 2), dtype=complex)
        matrix[:, 0] = self.column
        return from_matrix(matrix)


@dataclass
class DottedSpinor:
    """Row spinor, the conjugate partner of an ideal spinor"""
    row: np.ndarray

    def __post_init__(self):
        self.row = np.asarray(self.row, dtype=complex).reshape(2)


def iota(phi: np.ndarray, xidot: np.ndarray) -> np.ndarray:
    """Even multivector whose image is the column phi times the row xidot"""
    return from_matrix(np.einsum("...a,...b->...ab", np.asarray(phi, dtype=complex), np.asarray(xidot, dtype=complex)))


def ideal_reconstruction() -> Dict[str, np.ndarray]:
    """sigma_0..sigma_3 (lower index) rebuilt from ideal spinor products"""
    basis = np.eye(2, dtype=complex)
    s = {(a, b): iota(basis[a], basis[b]) for a in range(2) for b in range(2)}
    return {
        "sigma_0": s[0, 0] + s[1, 1],
        "sigma_1": -(s[0, 1] + s[1, 0]),
        "sigma_2": _times_i(s[0, 1] - s[1, 0]),
        "sigma_3": -(s[0, 0] - s[1, 1]),
    }


def _times_i(a: np.ndarray) -> np.ndarray:
    return ga.geometric_product(I5, a)


def lower_index(phi: np.ndarray) -> np.ndarray:
    """phi_A = phi^B eps_BA"""
    return np.einsum("ba,...b->...a", EPSILON, np.asarray(phi, dtype=complex))


def raise_index(phi: np.ndarray) -> np.ndarray:
    """phi^B = eps^BA phi_A"""
    return np.einsum("ba,...a->...b", EPSILON, np.asarray(phi, dtype=complex))


def dotted(xi: np.ndarray) -> np.ndarray:
    """Row spinor xi-dot = conj(xi) eps"""
    return np.einsum("...a,ab->...b", np.conj(np.asarray(xi, dtype=complex)), EPSILON)


def mixed_components(p: np.ndarray) -> np.ndarray:
    """P^A_B, the plain matrix image"""
    return to_matrix(p)


def lowered_components(p: np.ndarray) -> np.ndarray:
    """P_AB with the first index lowered by eps"""
    return np.einsum("ba,...bc->...ac", EPSILON, to_matrix(p))


def quaternion_embed(w: float, x: float, y: float, z: float) -> np.ndarray:
    """1, i, j, k go to 1, -i sigma^1, -i sigma^2, -i sigma^3"""
    return w * ONE - x * I_SIGMA[0] - y * I_SIGMA[1] - z * I_SIGMA[2]


def paravector_closure_witness() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two paravectors whose product has an i sigma part"""
    a, b = SIGMA[0], SIGMA[1]
    return a, b, ga.geometric_product(a, b)


def quaternion_span_residual(a: np.ndarray) -> float:
    """Distance of a from span{1, i sigma^k}; sigma^1 sits at distance 1"""
    span = np.vstack([ONE[None], I_SIGMA])
    coefficients = span @ a
    return float(np.linalg.norm(a - coefficients @ span))
