"""
The quantum exterior algebra of V = Q(q)^{N+1} for the braiding -c.

Wedges e_{i_1} ∧ ... ∧ e_{i_p} with i_1 < ... < i_p form a basis; they are
identified with A^(p)(e_{i_1} ⊗ ... ⊗ e_{i_p}) in S_{-c}^p(V). Relations:
e_i ∧ e_i = 0 and e_j ∧ e_i = -q^-1 e_i ∧ e_j for i < j. The dual algebra
on V* obeys the same relations for the f_j.

Endomorphisms of ∧^p are written in the convolution basis
E_{i⃗ j⃗} = E_{i_1 j_1} ∗ ... ∗ E_{i_p j_p}, which acts as the matrix unit
e_{j⃗} ↦ e_{i⃗} on the wedge basis.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, NewType, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from src.algebra import linalg
from src.algebra.braiding import Braiding, builtin, symmetrizer
from src.algebra.endomorphisms import EndoContext, GradedEndo, matrix_unit, q_trace, star
from src.algebra.permutations import enumerate_shuffles, length
from src.algebra.scalars import ONE, ZERO, Scalar, qpow
from src.algebra.tensors import Tensor, accumulate
from src.utils.exceptions import GradeMismatchError, NotInSubspaceError

logger = logging.getLogger(__name__)

# strictly increasing indices in 1..dim
WedgeIndex = NewType("WedgeIndex", Tuple[int, ...])


def validate_wedge_index(indices: Iterable[int], dim: int) -> WedgeIndex:
    indices = tuple(indices)
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise NotInSubspaceError(f"{indices} is not strictly increasing")
    if any(not 1 <= i <= dim for i in indices):
        raise NotInSubspaceError(f"{indices} has an index outside 1..{dim}")
    return WedgeIndex(indices)


def wedge_basis(dim: int, p: int) -> List[WedgeIndex]:
    """Strictly increasing p-tuples over 1..dim in lexicographic order."""
    return [WedgeIndex(c) for c in combinations(range(1, dim + 1), p)]


def minus_q_power(k: int) -> Scalar:
    """(-q)^k."""
    return (-ONE) ** (k % 2) * qpow(k)


@dataclass(frozen=True, eq=False)
class WedgeElement:
    """Σ s_I e_I in ∧^grade with dim V = dim; zero coefficients are dropped."""
    dim: int
    grade: int
    terms: Dict[WedgeIndex, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for index, value in self.terms.items():
            if not value:
                continue
            if len(index) != self.grade:
                raise GradeMismatchError(f"wedge {index} in grade {self.grade}")
            cleaned[validate_wedge_index(index, self.dim)] = value
        object.__setattr__(self, "terms", cleaned)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WedgeElement):
            return NotImplemented
        return (self.dim, self.grade, self.terms) == (other.dim, other.grade, other.terms)

    def __add__(self, other: "WedgeElement") -> "WedgeElement":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise GradeMismatchError("wedges of different grades")
        terms = dict(self.terms)
        for index, value in other.terms.items():
            accumulate(terms, index, value)
        return WedgeElement(self.dim, self.grade, terms)

    def scale(self, s: Scalar) -> "WedgeElement":
        return WedgeElement(self.dim, self.grade, {i: v * s for i, v in self.terms.items()})

    def coefficient(self, index: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(index), ZERO)


def wedge_normal_form(word: Sequence[int], dim: int) -> WedgeElement:
    """
    e_{w_1} ∧ ... ∧ e_{w_p} in the increasing basis: zero on a repeated index,
    otherwise (-q^-1)^{inv} times the sorted wedge.

    Args:
        word: Indices in 1..dim, in any order
        dim: dim V

    Returns:
        The wedge as a combination of increasing wedges
    """
    word = tuple(word)
    if len(set(word)) < len(word):
        return WedgeElement(dim, len(word), {})
    inversions = length(word)
    return WedgeElement(dim, len(word), {tuple(sorted(word)): minus_q_power(-inversions)})


def wedge_product(x: WedgeElement, y: WedgeElement) -> WedgeElement:
    if x.dim != y.dim:
        raise GradeMismatchError("wedges over different spaces")
    result = WedgeElement(x.dim, x.grade + y.grade, {})
    for i, a in x.terms.items():
        for j, b in y.terms.items():
            result = result + wedge_normal_form(i + j, x.dim).scale(a * b)
    return result


def wedge_coproduct(index: Sequence[int], t: int) -> Dict[Tuple[WedgeIndex, WedgeIndex], Scalar]:
    """
    δ_{t,p-t}(e_I) = Σ_{w ∈ S_{t,p-t}} (-q)^{-l(w)} e_{I_w(1..t)} ⊗ e_{I_w(t+1..p)}.

    Args:
        index: Increasing indices I of a grade-p wedge
        t: Grade of the left tensor factor, 0 <= t <= p

    Returns:
        Coefficients keyed by (left index, right index)
    """
    index = tuple(index)
    p = len(index)
    if not 0 <= t <= p:
        raise GradeMismatchError(f"cannot split a grade-{p} wedge at {t}")
    terms: Dict[Tuple[WedgeIndex, WedgeIndex], Scalar] = {}
    for w in enumerate_shuffles(t, p - t):
        left = WedgeIndex(tuple(index[w[k] - 1] for k in range(t)))
        right = WedgeIndex(tuple(index[w[k] - 1] for k in range(t, p)))
        accumulate(terms, (left, right), minus_q_power(-length(w)))
    return terms


def wedge_tensor(dim: int, index: Sequence[int]) -> Tensor:
    """The image A^(p) e_I of a wedge inside V^{⊗p}, for the braiding -c."""
    b = exterior_braiding(dim - 1)
    return symmetrizer(b, len(index)).apply(Tensor.basis(dim, index))


@dataclass(frozen=True)
class ConvBasisEndo:
    """The convolution basis element E_{rows, cols}."""
    rows: WedgeIndex
    cols: WedgeIndex

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise GradeMismatchError(f"rows {self.rows} and cols {self.cols} have different grades")

    @property
    def grade(self) -> int:
        return len(self.rows)


def conv_basis_endo_matrix(e: ConvBasisEndo, dim: int) -> DomainMatrix:
    """The matrix unit e_{cols} ↦ e_{rows} on the wedge basis of ∧^p."""
    basis = wedge_basis(dim, e.grade)
    position = {index: k for k, index in enumerate(basis)}
    rows = validate_wedge_index(e.rows, dim)
    cols = validate_wedge_index(e.cols, dim)
    return matrix_unit(len(basis), position[rows] + 1, position[cols] + 1)


@dataclass(frozen=True, eq=False)
class WedgeEndo:
    """
    A = Σ a^{I}_{J} E_{I J} in End ∧^grade(V), dim V = dim.

    In the wedge basis the coefficient a^{I}_{J} is the entry in row I and
    column J.
    """
    dim: int
    grade: int
    coefficients: Dict[Tuple[WedgeIndex, WedgeIndex], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (rows, cols), value in self.coefficients.items():
            if not value:
                continue
            if len(rows) != self.grade or len(cols) != self.grade:
                raise GradeMismatchError(f"record ({rows}, {cols}) in grade {self.grade}")
            key = (validate_wedge_index(rows, self.dim), validate_wedge_index(cols, self.dim))
            cleaned[key] = value
        object.__setattr__(self, "coefficients", cleaned)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WedgeEndo):
            return NotImplemented
        return (self.dim, self.grade, self.coefficients) == (other.dim, other.grade, other.coefficients)

    def __add__(self, other: "WedgeEndo") -> "WedgeEndo":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise GradeMismatchError("endomorphisms of different wedge powers")
        coefficients = dict(self.coefficients)
        for key, value in other.coefficients.items():
            accumulate(coefficients, key, value)
        return WedgeEndo(self.dim, self.grade, coefficients)

    def scale(self, s: Scalar) -> "WedgeEndo":
        return WedgeEndo(self.dim, self.grade, {k: v * s for k, v in self.coefficients.items()})

    def coefficient(self, rows: Sequence[int], cols: Sequence[int]) -> Scalar:
        return self.coefficients.get((tuple(rows), tuple(cols)), ZERO)

    def records(self) -> List[Tuple[WedgeIndex, WedgeIndex, Scalar]]:
        return [(r, c, v) for (r, c), v in sorted(self.coefficients.items())]

    def to_matrix(self) -> DomainMatrix:
        basis = wedge_basis(self.dim, self.grade)
        position = {index: k for k, index in enumerate(basis)}
        n = len(basis)
        rows = [[ZERO] * n for _ in range(n)]
        for (r, c), value in self.coefficients.items():
            rows[position[r]][position[c]] = value
        return linalg.matrix(rows, (n, n))

    @classmethod
    def from_matrix(cls, dim: int, grade: int, m: DomainMatrix) -> "WedgeEndo":
        basis = wedge_basis(dim, grade)
        rows = linalg.rows_of(m)
        coefficients = {
            (basis[i], basis[j]): rows[i][j]
            for i in range(len(basis))
            for j in range(len(basis))
            if rows[i][j]
        }
        return cls(dim, grade, coefficients)

    @classmethod
    def basis_element(cls, dim: int, e: ConvBasisEndo) -> "WedgeEndo":
        return cls(dim, e.grade, {(e.rows, e.cols): ONE})

    @classmethod
    def grade_one(cls, m: DomainMatrix) -> "WedgeEndo":
        """A grade-1 endomorphism from a d × d matrix with a^i_j in row i, column j."""
        return cls.from_matrix(m.shape[0], 1, m)


def exterior_braiding(N: int) -> Braiding:
    """-c for V = Q(q)^{N+1}, Hecke-normalized with ν = q^-2."""
    return builtin("sl-exterior", N)


class ExteriorContext:
    """
    The generic endomorphism context of -c together with the change of basis
    between the computed component bases and the wedge bases.

    change[p] has as column I the component coordinates of the wedge e_I.
    """

    def __init__(self, context: EndoContext):
        self.context = context
        self.dim = context.braiding.dim
        self.N = self.dim - 1
        if context.top != self.dim:
            raise GradeMismatchError(
                f"context '{context.name}' has top grade {context.top}, expected {self.dim}"
            )
        self.change: List[DomainMatrix] = []
        self.change_inv: List[DomainMatrix] = []
        for p in range(self.dim + 1):
            basis = context.bases[p]
            wedges = wedge_basis(self.dim, p)
            sym = symmetrizer(context.braiding, p)
            columns = [basis.project(sym.apply(Tensor.basis(self.dim, w))) for w in wedges]
            m = linalg.matrix(
                [[columns[k][r] for k in range(len(wedges))] for r in range(basis.dim)],
                (basis.dim, len(wedges)),
            )
            self.change.append(m)
            self.change_inv.append(m.inv())
        logger.debug("exterior context N=%d: change of basis ready", self.N)

    def to_graded(self, a: WedgeEndo) -> GradedEndo:
        if a.dim != self.dim:
            raise GradeMismatchError(f"endomorphism over dim {a.dim} in a context over dim {self.dim}")
        p = a.grade
        block = self.change[p] * a.to_matrix() * self.change_inv[p]
        return GradedEndo.single(self.context, p, block)

    def block_to_wedge(self, block: DomainMatrix, p: int) -> WedgeEndo:
        return WedgeEndo.from_matrix(self.dim, p, self.change_inv[p] * block * self.change[p])

    def from_graded(self, a: GradedEndo, p: int) -> WedgeEndo:
        return self.block_to_wedge(a.component(p), p)

    def star(self, a: WedgeEndo, b: WedgeEndo) -> WedgeEndo:
        """A ∗ B through the generic convolution machinery."""
        ctx = self.context
        block = star(
            ctx,
            self.change[a.grade] * a.to_matrix() * self.change_inv[a.grade],
            a.grade,
            self.change[b.grade] * b.to_matrix() * self.change_inv[b.grade],
            b.grade,
        )
        return self.block_to_wedge(block, a.grade + b.grade)

    def unit_product(self, rows: Sequence[int], cols: Sequence[int]) -> WedgeEndo:
        """E_{i_1 j_1} ∗ ... ∗ E_{i_p j_p} for arbitrary (not necessarily increasing) index lists."""
        if len(rows) != len(cols):
            raise GradeMismatchError("rows and cols of different lengths")
        result = WedgeEndo(self.dim, 0, {((), ()): ONE})
        for i, j in zip(rows, cols):
            result = self.star(result, WedgeEndo(self.dim, 1, {((i,), (j,)): ONE}))
        return result

    def q_trace(self, a: WedgeEndo) -> Scalar:
        """Tr_q through the generic definition."""
        return q_trace(self.to_graded(a))


@dataclass(frozen=True, eq=False)
class BiWedge:
    """Σ s_{I,J} e_I ⊗ f_J in ∧_c(V) ⊗ ∧_{c^∨}(V*)."""
    dim: int
    terms: Dict[Tuple[WedgeIndex, WedgeIndex], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: v for k, v in self.terms.items() if v})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiWedge):
            return NotImplemented
        return (self.dim, self.terms) == (other.dim, other.terms)

    def __mul__(self, other: "BiWedge") -> "BiWedge":
        """(e_I ⊗ f_J)(e_K ⊗ f_L) = (e_I ∧ e_K) ⊗ (f_J ∧ f_L)."""
        terms: Dict[Tuple[WedgeIndex, WedgeIndex], Scalar] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                left = wedge_normal_form(i + k, self.dim)
                right = wedge_normal_form(j + l, self.dim)
                for ik, x in left.terms.items():
                    for jl, y in right.terms.items():
                        accumulate(terms, (ik, jl), a * b * x * y)
        return BiWedge(self.dim, terms)


def iota(a: WedgeEndo) -> BiWedge:
    """E_{I J} ↦ e_I ⊗ f_J, extended linearly."""
    return BiWedge(a.dim, dict(a.coefficients))


def iota_inverse(x: BiWedge, grade: int) -> WedgeEndo:
    return WedgeEndo(x.dim, grade, {k: v for k, v in x.terms.items() if len(k[0]) == grade})
