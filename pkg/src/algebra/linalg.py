"""
Exact linear algebra over Q(q).

Dense matrices are sympy DomainMatrix objects over the scalar field. Column
spaces of sparse vectors are computed with an incremental fraction-free
elimination whose pivot is the entry with the fewest stored monomials, which
keeps the rational functions small.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from src.algebra.scalars import FIELD, ONE, ZERO, Scalar, term_count
from src.utils.exceptions import GradeMismatchError, NotInSubspaceError

logger = logging.getLogger(__name__)

SparseVector = Dict[Hashable, Scalar]


def matrix(rows: Sequence[Sequence[Scalar]], shape: Optional[Tuple[int, int]] = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix(rows, shape, FIELD)


def identity(n: int) -> DomainMatrix:
    return matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], (n, n))


def zeros(n: int, m: Optional[int] = None) -> DomainMatrix:
    m = n if m is None else m
    return matrix([[ZERO] * m for _ in range(n)], (n, m))


def entry(m: DomainMatrix, i: int, j: int) -> Scalar:
    return rows_of(m)[i][j]


def rows_of(m: DomainMatrix) -> List[List[Scalar]]:
    return [list(row) for row in m.rep.to_ddm()]


def equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    return a.shape == b.shape and rows_of(a) == rows_of(b)


def scale(m: DomainMatrix, s: Scalar) -> DomainMatrix:
    return m.scalarmul(s)


def kron(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    """Kronecker product; row (r, s) of the result has index r * rows(b) + s."""
    ra, ca = a.shape
    rb, cb = b.shape
    a_rows, b_rows = rows_of(a), rows_of(b)
    rows = [[ZERO] * (ca * cb) for _ in range(ra * rb)]
    for r in range(ra):
        for c in range(ca):
            x = a_rows[r][c]
            if not x:
                continue
            for s in range(rb):
                for t in range(cb):
                    y = b_rows[s][t]
                    if y:
                        rows[r * rb + s][c * cb + t] = x * y
    return matrix(rows, (ra * rb, ca * cb))


def is_zero_matrix(m: DomainMatrix) -> bool:
    return all(not x for row in rows_of(m) for x in row)


def matrix_power(m: DomainMatrix, p: int) -> DomainMatrix:
    result = identity(m.shape[0])
    for _ in range(p):
        result = result * m
    return result


def trace(m: DomainMatrix) -> Scalar:
    rows = rows_of(m)
    total = ZERO
    for i in range(m.shape[0]):
        total += rows[i][i]
    return total


def _subtract_multiple(v: SparseVector, pivot_value: Scalar, row: SparseVector, factor: Scalar) -> SparseVector:
    """pivot_value * v - factor * row, dropping zeros."""
    result = {}
    for k in set(v) | set(row):
        value = pivot_value * v.get(k, ZERO) - factor * row.get(k, ZERO)
        if value:
            result[k] = value
    return result


@dataclass
class Echelon:
    """
    Row-echelon state for a growing family of sparse vectors.

    `rows[t]` is the reduced form of the t-th independent vector accepted and
    `pivots[t]` its pivot key; `rows[t]` vanishes at the pivots of all
    earlier rows.
    """
    rows: List[SparseVector] = field(default_factory=list)
    pivots: List[Hashable] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: SparseVector) -> SparseVector:
        v = {k: x for k, x in v.items() if x}
        for pivot, row in zip(self.pivots, self.rows):
            factor = v.get(pivot)
            if factor:
                v = _subtract_multiple(v, row[pivot], row, factor)
        return v

    def insert(self, v: SparseVector) -> bool:
        """Add v if it is independent of the accepted vectors; report whether it was."""
        residual = self.reduce(v)
        if not residual:
            return False
        pivot = min(residual, key=lambda k: (term_count(residual[k]), k))
        lead = residual[pivot]
        self.rows.append({k: x / lead for k, x in residual.items()})
        self.pivots.append(pivot)
        return True


def independent_columns(vectors: Sequence[SparseVector]) -> Tuple[List[int], Echelon]:
    """Indices of the first independent vectors, in input order, and the echelon they span."""
    echelon = Echelon()
    chosen = []
    for index, v in enumerate(vectors):
        if echelon.insert(v):
            chosen.append(index)
    logger.debug("independent columns: %d of %d", len(chosen), len(vectors))
    return chosen, echelon


def rank(vectors: Sequence[SparseVector]) -> int:
    return len(independent_columns(vectors)[0])


@dataclass(frozen=True)
class Coordinates:
    """
    Coordinates with respect to a fixed basis of a subspace.

    The basis matrix restricted to `keys` is invertible; `inverse` maps the
    restriction of a vector to its coordinates, and `basis` is used to check
    that the vector really lies in the span.
    """
    basis: Tuple[Dict[Hashable, Scalar], ...]
    keys: Tuple[Hashable, ...]
    inverse: DomainMatrix

    @classmethod
    def from_basis(cls, basis: Sequence[SparseVector], keys: Sequence[Hashable]) -> "Coordinates":
        n = len(basis)
        if len(keys) != n:
            raise GradeMismatchError(f"{len(keys)} pivot keys for {n} basis vectors")
        if n == 0:
            return cls((), (), zeros(0))
        restriction = matrix([[b.get(k, ZERO) for b in basis] for k in keys], (n, n))
        return cls(tuple(dict(b) for b in basis), tuple(keys), restriction.inv())

    def __len__(self) -> int:
        return len(self.basis)

    def coordinates(self, v: SparseVector, check: bool = True) -> List[Scalar]:
        n = len(self.basis)
        if n == 0:
            if check and any(x for x in v.values()):
                raise NotInSubspaceError("nonzero vector in the zero subspace")
            return []
        column = matrix([[v.get(k, ZERO)] for k in self.keys], (n, 1))
        coords = [row[0] for row in rows_of(self.inverse * column)]
        if check:
            residual = {k: x for k, x in v.items() if x}
            for c, b in zip(coords, self.basis):
                if not c:
                    continue
                for k, x in b.items():
                    value = residual.get(k, ZERO) - c * x
                    if value:
                        residual[k] = value
                    else:
                        residual.pop(k, None)
            if residual:
                sample = sorted(residual, key=str)[0]
                raise NotInSubspaceError(f"projection leaves a nonzero residual at {sample}")
        return coords

    def combine(self, coords: Sequence[Scalar]) -> SparseVector:
        result: SparseVector = {}
        for c, b in zip(coords, self.basis):
            if not c:
                continue
            for k, x in b.items():
                value = result.get(k, ZERO) + c * x
                if value:
                    result[k] = value
                else:
                    result.pop(k, None)
        return result


def unit_vector(n: int, i: int) -> List[Scalar]:
    return [ONE if k == i else ZERO for k in range(n)]
