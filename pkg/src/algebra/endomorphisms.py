"""
Graded endomorphisms ⊕_{p=0}^{M} End S_σ^p(V) and their three products.

Matrices are written in the component bases of `src.algebra.symmetric`.
For a split p = i + j the convolution of a grade-i and a grade-j block is

    A_i ∗ B_j = G_{i,j} · (A_i ⊗ B_j) · D_{i,j}

where D_{i,j} expands deconcatenation in (basis i) ⊗ (basis j) and G_{i,j}
writes shuffle products of basis vectors back in the grade-p basis. Both
are computed once per context.
"""
import logging
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from src.algebra import linalg
from src.algebra.braiding import Braiding
from src.algebra.scalars import ONE, ZERO, Scalar, q_factorial
from src.algebra.symmetric import (
    ComponentBasis,
    GradeProfile,
    component_basis,
    deconcat,
    grade_profile,
    shuffle_product,
    split_coordinates,
)
from src.utils.exceptions import ContextMismatchError, GradeMismatchError, NoTopGradeError

logger = logging.getLogger(__name__)


class EndoContext:
    """
    Read-only data shared by all endomorphisms of one braiding: component
    bases for grades 0..max_grade and the split/shuffle structure constants.

    max_grade is the top grade M when the profile declares one, otherwise
    the profiling bound (products are then truncated there and the q-trace
    is unavailable). Contexts compare by identity.
    """

    def __init__(self, braiding: Braiding, bound: int, name: Optional[str] = None):
        started = time.perf_counter()
        self.braiding = braiding
        self.name = name or braiding.name
        self.nu: Scalar = braiding.require_hecke()
        self.profile: GradeProfile = grade_profile(braiding, bound)
        self.top: Optional[int] = self.profile.top
        self.max_grade: int = self.top if self.top is not None else bound
        self.bases: Tuple[ComponentBasis, ...] = tuple(
            component_basis(braiding, p) for p in range(self.max_grade + 1)
        )
        self.dims: Tuple[int, ...] = tuple(basis.dim for basis in self.bases)
        self._split: Dict[Tuple[int, int], DomainMatrix] = {}
        self._shuffle: Dict[Tuple[int, int], DomainMatrix] = {}
        for p in range(self.max_grade + 1):
            for i in range(p + 1):
                self._split[(i, p - i)] = self._split_matrix(i, p - i)
                self._shuffle[(i, p - i)] = self._shuffle_matrix(i, p - i)
        logger.info(
            "context %s: dims=%s top=%s (%.2fs)", self.name, self.dims, self.top, time.perf_counter() - started
        )

    def __repr__(self) -> str:
        return f"EndoContext(name={self.name!r}, dims={self.dims}, top={self.top})"

    def _split_matrix(self, i: int, j: int) -> DomainMatrix:
        n_i, n_j, n_p = self.dims[i], self.dims[j], self.dims[i + j]
        rows = [[ZERO] * n_p for _ in range(n_i * n_j)]
        for k, v in enumerate(self.bases[i + j].vectors):
            table = split_coordinates(deconcat(v, i, j), self.bases[i], self.bases[j])
            for a in range(n_i):
                for b in range(n_j):
                    rows[a * n_j + b][k] = table[a][b]
        return linalg.matrix(rows, (n_i * n_j, n_p))

    def _shuffle_matrix(self, i: int, j: int) -> DomainMatrix:
        n_i, n_j, n_p = self.dims[i], self.dims[j], self.dims[i + j]
        rows = [[ZERO] * (n_i * n_j) for _ in range(n_p)]
        for a, x in enumerate(self.bases[i].vectors):
            for b, y in enumerate(self.bases[j].vectors):
                coordinates = self.bases[i + j].project(shuffle_product(self.braiding, x, y))
                for k, c in enumerate(coordinates):
                    rows[k][a * n_j + b] = c
        return linalg.matrix(rows, (n_p, n_i * n_j))

    def split_matrix(self, i: int, j: int) -> DomainMatrix:
        return self._split[(i, j)]

    def shuffle_matrix(self, i: int, j: int) -> DomainMatrix:
        return self._shuffle[(i, j)]

    def check_grade(self, p: int) -> None:
        if not 0 <= p <= self.max_grade:
            raise GradeMismatchError(f"grade {p} outside 0..{self.max_grade} in context '{self.name}'")

    @cached_property
    def exp_identity(self) -> "GradedEndo":
        """e^{∗I_1}_ν = (I_0, I_1, ..., I_M) computed through the products."""
        return conv_exp(self, _grade_one_identity(self))

    @cached_property
    def exp_identity_inv(self) -> "GradedEndo":
        return conv_exp_inv(self, _grade_one_identity(self))

    def identity_block(self, p: int) -> Optional[DomainMatrix]:
        """I_p, or None for p < 0 (I_p = 0 there)."""
        if p < 0:
            return None
        self.check_grade(p)
        return linalg.identity(self.dims[p])


def build_context(braiding: Braiding, bound: int, name: Optional[str] = None) -> EndoContext:
    return EndoContext(braiding, bound, name)


def star(ctx: EndoContext, a: DomainMatrix, i: int, b: DomainMatrix, j: int) -> DomainMatrix:
    """A_i ∗ B_j = sh ∘ (A_i ⊗ B_j) ∘ δ_{i,j} as a grade-(i+j) matrix."""
    if i + j > ctx.max_grade:
        raise GradeMismatchError(f"i + j = {i + j} exceeds the top grade {ctx.max_grade}")
    if a.shape != (ctx.dims[i], ctx.dims[i]) or b.shape != (ctx.dims[j], ctx.dims[j]):
        raise GradeMismatchError(f"block shapes {a.shape}, {b.shape} do not match grades ({i}, {j})")
    return ctx.shuffle_matrix(i, j) * linalg.kron(a, b) * ctx.split_matrix(i, j)


def matrix_unit(n: int, i: int, j: int) -> DomainMatrix:
    """E_ij (1-based): sends basis vector j to basis vector i."""
    rows = [[ZERO] * n for _ in range(n)]
    rows[i - 1][j - 1] = ONE
    return linalg.matrix(rows, (n, n))


@dataclass(frozen=True, eq=False)
class GradedEndo:
    """A = (A_0, ..., A_M) with A_p a dim S^p × dim S^p matrix."""
    context: EndoContext
    components: Tuple[DomainMatrix, ...]

    def __post_init__(self):
        ctx = self.context
        if len(self.components) != ctx.max_grade + 1:
            raise GradeMismatchError(
                f"{len(self.components)} components for grades 0..{ctx.max_grade}"
            )
        for p, block in enumerate(self.components):
            if block.shape != (ctx.dims[p], ctx.dims[p]):
                raise GradeMismatchError(f"grade {p} block has shape {block.shape}, expected {ctx.dims[p]}")

    @classmethod
    def zero(cls, ctx: EndoContext) -> "GradedEndo":
        return cls(ctx, tuple(linalg.zeros(n) for n in ctx.dims))

    @classmethod
    def identity(cls, ctx: EndoContext) -> "GradedEndo":
        """𝐈 = (I_0, ..., I_M), the unit of composition."""
        return cls(ctx, tuple(linalg.identity(n) for n in ctx.dims))

    @classmethod
    def unit(cls, ctx: EndoContext) -> "GradedEndo":
        """I_0 = (I_0, 0, ..., 0), the unit of convolution and of the third product."""
        return cls.single(ctx, 0, linalg.identity(1))

    @classmethod
    def single(cls, ctx: EndoContext, p: int, block: DomainMatrix) -> "GradedEndo":
        """The endomorphism supported in grade p."""
        ctx.check_grade(p)
        blocks = [linalg.zeros(n) for n in ctx.dims]
        blocks[p] = block
        return cls(ctx, tuple(blocks))

    @classmethod
    def from_blocks(cls, ctx: EndoContext, blocks: Sequence[DomainMatrix]) -> "GradedEndo":
        return cls(ctx, tuple(blocks))

    def component(self, p: int) -> DomainMatrix:
        self.context.check_grade(p)
        return self.components[p]

    def support(self) -> List[int]:
        return [p for p, block in enumerate(self.components) if not linalg.is_zero_matrix(block)]

    def _same_context(self, other: "GradedEndo") -> None:
        if self.context is not other.context:
            raise ContextMismatchError(
                f"Operands belong to different contexts ('{self.context.name}' and '{other.context.name}')"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedEndo):
            return NotImplemented
        return self.context is other.context and all(
            linalg.equal(x, y) for x, y in zip(self.components, other.components)
        )

    def __add__(self, other: "GradedEndo") -> "GradedEndo":
        self._same_context(other)
        return GradedEndo(self.context, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "GradedEndo") -> "GradedEndo":
        self._same_context(other)
        return GradedEndo(self.context, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, s: Scalar) -> "GradedEndo":
        return GradedEndo(self.context, tuple(linalg.scale(block, s) for block in self.components))


def compose(a: GradedEndo, b: GradedEndo) -> GradedEndo:
    """(A ∘ B)_p = A_p ∘ B_p."""
    a._same_context(b)
    return GradedEndo(a.context, tuple(x * y for x, y in zip(a.components, b.components)))


def convolve(a: GradedEndo, b: GradedEndo) -> GradedEndo:
    """
    Convolution (A ∗ B)_p = Σ_{l=0}^{p} A_l ∗ B_{p-l}, truncated at the top grade.

    Args:
        a: Left factor
        b: Right factor, in the same context

    Returns:
        The convolution; I_0 is its unit

    Raises:
        ContextMismatchError: The factors belong to different contexts
    """
    a._same_context(b)
    ctx = a.context
    blocks = []
    for p in range(ctx.max_grade + 1):
        total = linalg.zeros(ctx.dims[p])
        for l in range(p + 1):
            x, y = a.components[l], b.components[p - l]
            if linalg.is_zero_matrix(x) or linalg.is_zero_matrix(y):
                continue
            total = total + star(ctx, x, l, y, p - l)
        blocks.append(total)
    return GradedEndo(ctx, tuple(blocks))


def conv_power(ctx: EndoContext, a1: DomainMatrix, p: int) -> DomainMatrix:
    """A^{∗p} for a grade-1 block; A^{∗0} = I_0."""
    ctx.check_grade(p)
    power = linalg.identity(1)
    for k in range(p):
        power = star(ctx, power, k, a1, 1)
    return power


def _exp_components(ctx: EndoContext, a1: DomainMatrix, inverse: bool) -> GradedEndo:
    nu = ctx.nu
    blocks = []
    power = linalg.identity(1)
    for p in range(ctx.max_grade + 1):
        if p > 0:
            power = star(ctx, power, p - 1, a1, 1)
        coefficient = ONE / q_factorial(p, nu)
        if inverse:
            coefficient *= (-ONE) ** p * nu ** (p * (p - 1) // 2)
        blocks.append(linalg.scale(power, coefficient))
    return GradedEndo(ctx, tuple(blocks))


def conv_exp(ctx: EndoContext, a1: DomainMatrix) -> GradedEndo:
    """e^{∗A}_ν = (I_0, A/(1)_ν!, A^{∗2}/(2)_ν!, ...)."""
    return _exp_components(ctx, a1, inverse=False)


def conv_exp_inv(ctx: EndoContext, a1: DomainMatrix) -> GradedEndo:
    """(e^{∗A}_ν)^{-1}, whose p-th block is (-1)^p ν^{p(p-1)/2} A^{∗p}/(p)_ν!."""
    return _exp_components(ctx, a1, inverse=True)


def _grade_one_identity(ctx: EndoContext) -> DomainMatrix:
    if ctx.max_grade < 1:
        raise GradeMismatchError(f"context '{ctx.name}' has no grade 1")
    return linalg.identity(ctx.dims[1])


def alpha(a: GradedEndo) -> GradedEndo:
    """α(A) = A ∗ e^{∗I_1}_ν."""
    return convolve(a, a.context.exp_identity)


def alpha_inv(a: GradedEndo) -> GradedEndo:
    return convolve(a, a.context.exp_identity_inv)


def third_product(a: GradedEndo, b: GradedEndo) -> GradedEndo:
    """A × B = α^{-1}((αA) ∘ (αB))."""
    a._same_context(b)
    return alpha_inv(compose(alpha(a), alpha(b)))


@dataclass(frozen=True)
class ClosedFormComparison:
    """Both readings of the closed third-product formula next to the definitional block."""
    printed: DomainMatrix
    corrected: DomainMatrix
    definitional: DomainMatrix

    @property
    def printed_matches(self) -> bool:
        return linalg.equal(self.printed, self.definitional)

    @property
    def corrected_matches(self) -> bool:
        return linalg.equal(self.corrected, self.definitional)

    @property
    def matching(self) -> List[str]:
        return [name for name, ok in (("printed", self.printed_matches), ("corrected", self.corrected_matches)) if ok]


def third_product_closed(
    ctx: EndoContext, a: DomainMatrix, i: int, b: DomainMatrix, j: int, r: int
) -> ClosedFormComparison:
    """
    (A_i × B_j)_r = Σ_{s=0}^{r} κ_s ((A_i ∗ I_{r-s-i}) ∘ (B_j ∗ I_{r-s-j})) ∗ I_1^{∗s}

    with κ_s = ν^{s(s-1)/2}/(s)_ν! ("printed") and κ_s = (-1)^s ν^{s(s-1)/2}/(s)_ν!
    ("corrected"). I_t = 0 for t < 0.
    """
    ctx.check_grade(r)
    nu = ctx.nu
    n = ctx.dims[r]
    printed, corrected = linalg.zeros(n), linalg.zeros(n)
    unit = linalg.identity(ctx.dims[1]) if ctx.max_grade >= 1 else None
    for s in range(r + 1):
        left_pad, right_pad = r - s - i, r - s - j
        if left_pad < 0 or right_pad < 0:
            continue
        left = star(ctx, a, i, ctx.identity_block(left_pad), left_pad)
        right = star(ctx, b, j, ctx.identity_block(right_pad), right_pad)
        inner = left * right
        term = star(ctx, inner, r - s, conv_power(ctx, unit, s) if s else linalg.identity(1), s)
        weight = nu ** (s * (s - 1) // 2) / q_factorial(s, nu)
        printed = printed + linalg.scale(term, weight)
        corrected = corrected + linalg.scale(term, (-ONE) ** s * weight)
    definitional = third_product(GradedEndo.single(ctx, i, a), GradedEndo.single(ctx, j, b)).component(r)
    return ClosedFormComparison(printed, corrected, definitional)


def q_trace(a: GradedEndo) -> Scalar:
    """
    The q-trace: the scalar λ with (αA)_M = λ I_M.

    Args:
        a: A graded endomorphism of a context with a top grade M

    Returns:
        λ; additive, multiplicative over the third product and commutative there

    Raises:
        NoTopGradeError: The context has no top grade
    """
    ctx = a.context
    if ctx.top is None:
        raise NoTopGradeError(ctx.name)
    return linalg.entry(alpha(a).component(ctx.top), 0, 0)
