"""
Seeded random inputs for identity suites.
"""
import random
from typing import List, Optional, Sequence

from sympy.polys.matrices import DomainMatrix

from src.algebra import linalg
from src.algebra.endomorphisms import EndoContext, GradedEndo
from src.algebra.exterior import WedgeEndo, wedge_basis
from src.algebra.scalars import ZERO, Scalar, from_fraction, qpow


class Sampler:
    """
    Small-integer Laurent polynomials Σ_{k=-1..1} c_k q^k with |c_k| ≤ span.

    Seeded with (seed, label) so each identity draws the same inputs no
    matter which suites ran before it.
    """

    def __init__(self, seed: int, label: str, span: int):
        self.rng = random.Random(f"{seed}:{label}")
        self.span = span

    def scalar(self, nonzero: bool = False) -> Scalar:
        while True:
            value = ZERO
            for k in (-1, 0, 1):
                c = self.rng.randint(-self.span, self.span)
                if c:
                    value += from_fraction(c) * qpow(k)
            if value or not nonzero:
                return value

    def scalars(self, n: int) -> List[Scalar]:
        return [self.scalar() for _ in range(n)]

    def matrix(self, n: int) -> DomainMatrix:
        return linalg.matrix([self.scalars(n) for _ in range(n)], (n, n))

    def diagonal_matrix(self, diagonal: Sequence[Scalar]) -> DomainMatrix:
        n = len(diagonal)
        return linalg.matrix([[diagonal[r] if r == c else ZERO for c in range(n)] for r in range(n)], (n, n))

    def graded(self, ctx: EndoContext, grades: Optional[Sequence[int]] = None) -> GradedEndo:
        """Random blocks in the given grades (all grades by default), zero elsewhere."""
        chosen = set(range(ctx.max_grade + 1) if grades is None else grades)
        blocks = [self.matrix(n) if p in chosen else linalg.zeros(n) for p, n in enumerate(ctx.dims)]
        return GradedEndo.from_blocks(ctx, blocks)

    def wedge_endo(self, dim: int, p: int) -> WedgeEndo:
        basis = wedge_basis(dim, p)
        coefficients = {(rows, cols): self.scalar() for rows in basis for cols in basis}
        return WedgeEndo(dim, p, coefficients)
