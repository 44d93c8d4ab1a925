"""
Algebra suite: identities of Cl(1,3) fuzzed on seeded random multivectors
"""
import logging
from typing import Dict, List

import numpy as np

from app.core import algebra as ga
from app.core.errors import DomainError
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


def _relative(difference: np.ndarray, *scales: np.ndarray) -> float:
    size = max([1.0] + [ga.residual(s) for s in scales])
    return ga.residual(difference) / size


def _homogeneous(rng: np.random.Generator, count: int, grade: int) -> np.ndarray:
    return ga.grade_project(rng.normal(size=(count, ga.DIM)), grade)


class AlgebraSuiteService(SuiteService):
    """Service for the product, contraction and Hodge identities of the kernel"""

    name = "algebra"
    tolerance_name = "algebra"

    def _evaluate(self) -> Dict[str, float]:
        count = self.algebra_samples
        rng = self.rng
        a, b, c = (rng.normal(size=(count, ga.DIM)) for _ in range(3))
        v = ga.grade_project(rng.normal(size=(count, ga.DIM)), 1)
        biv = ga.grade_project(rng.normal(size=(count, ga.DIM)), 2)
        out: Dict[str, float] = {}

        ab_c = ga.geometric_product(ga.geometric_product(a, b), c)
        a_bc = ga.geometric_product(a, ga.geometric_product(b, c))
        out["associativity"] = _relative(ab_c - a_bc, ab_c)

        split = ga.left_contract(v, b) + ga.outer_product(v, b)
        out["vector_split"] = _relative(ga.geometric_product(v, b) - split, split)
        out["bivector_commutator"] = _relative(0.5 * ga.commutator(biv, v) + ga.left_contract(v, biv), biv)

        spectrum = 0.0
        for r in range(5):
            for s in range(5):
                x, y = _homogeneous(rng, 8, r), _homogeneous(rng, 8, s)
                product = ga.geometric_product(x, y)
                allowed = [k for k in range(abs(r - s), min(r + s, 8 - r - s) + 1, 2)]
                stray = product * ~np.isin(ga.GRADE, allowed)
                spectrum = max(spectrum, _relative(stray, product))
        out["grade_spectrum"] = spectrum

        double, inverse, inverse_sign, pairing = 0.0, 0.0, 0.0, 0.0
        for p in range(5):
            x, y = _homogeneous(rng, 16, p), _homogeneous(rng, 16, p)
            star = ga.hodge_star(x)
            double = max(double, _relative(ga.hodge_star(star) - (-1.0) ** (p + 1) * x, x))
            inverse = max(inverse, _relative(ga.hodge_star_inverse(star) - x, x),
                          _relative(ga.hodge_star(ga.hodge_star_inverse(x)) - x, x))
            sign = (-1.0) ** (p * (4 - p) + 1)
            inverse_sign = max(inverse_sign, _relative(ga.hodge_star_inverse(x) - sign * star, x))
            wedge = ga.outer_product(x, ga.hodge_star(y))
            expected = ga.scalar_product(x, y)[:, None] * ga.PSEUDOSCALAR_BLADE
            pairing = max(pairing, _relative(wedge - expected, wedge))
        out["hodge_double"] = double
        out["hodge_inverse"] = inverse
        out["hodge_inverse_sign"] = inverse_sign
        out["hodge_pairing"] = pairing

        even_a, even_b = ga.even_part(a), ga.even_part(b)
        out["even_closure"] = _relative(ga.geometric_product(even_a, even_b) * (ga.GRADE % 2 == 1), even_a)

        x, y, z, w = (ga.grade_project(rng.normal(size=(count, ga.DIM)), 1) for _ in range(4))
        gram = (ga.scalar_product(x, z) * ga.scalar_product(y, w) - ga.scalar_product(x, w) * ga.scalar_product(y, z))
        pairs = ga.scalar_product(ga.outer_product(x, y), ga.outer_product(z, w))
        unit = ga.scalar_product(ga.blade([0, 1]), ga.blade([0, 1]))
        out["gram_determinant"] = max(_relative(pairs - gram, pairs), abs(float(unit) + 1.0))

        try:
            ga.grade_project(a[0], 5)
            out["grade_domain"] = 1.0
        except DomainError:
            out["grade_domain"] = 0.0
        return out

    def collect(self) -> List[CheckRecord]:
        checks = [
            Check("algebra.associativity", "associativity of the geometric product", "associativity"),
            Check("algebra.vector_split", "vector split aB = a _| B + a ^ B", "vector_split"),
            Check("algebra.bivector_commutator", "half commutator [B, a] / 2 = -a _| B", "bivector_commutator"),
            Check("algebra.grade_spectrum", "grades of a product of an r- and an s-vector", "grade_spectrum"),
            Check("algebra.hodge_double", "double star equals (-1)^(p+1)", "hodge_double"),
            Check("algebra.hodge_inverse", "inverse star undoes star", "hodge_inverse"),
            Check("algebra.hodge_inverse_sign", "inverse star as a signed star", "hodge_inverse_sign"),
            Check("algebra.hodge_pairing", "A ^ star B = (A . B) theta5", "hodge_pairing"),
            Check("algebra.even_closure", "even subalgebra closure", "even_closure"),
            Check("algebra.gram_determinant", "scalar product of 2-blades is a Gram determinant", "gram_determinant"),
            Check("algebra.grade_domain", "grade projection outside 0..4 is rejected", "grade_domain"),
        ]
        self.measure(checks, lambda _: self._evaluate(), details={"samples": self.algebra_samples})
        return self.records
