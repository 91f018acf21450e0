"""
Braidings on V ⊗ V, the operators σ_i on V^{⊗p}, braid lifts and quantum symmetrizers.

A braiding is stored with its quadratic data: the two roots (λ, μ) of
(σ - λ)(σ - μ) = 0. It is Hecke-normalized when one root is -1, and then
the other root is the Hecke parameter ν of (σ + id)(σ - ν id) = 0. The
graded machinery only accepts Hecke-normalized braidings.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from sympy.polys.matrices import DomainMatrix

from src.algebra import linalg
from src.algebra.permutations import Perm, check_bound, enumerate_group, reduced_word
from src.algebra.scalars import ONE, ZERO, Scalar, qpow
from src.algebra.tensors import Key, Tensor, TensorOperator, accumulate, all_keys
from src.utils.exceptions import BraidingValidationError, GradeMismatchError, NotHeckeNormalizedError

logger = logging.getLogger(__name__)

MINUS_ONE = -ONE


@dataclass(frozen=True, eq=False)
class Braiding:
    """
    A validated braiding on V ⊗ V with dim V = `dim`.

    `operator` is the grade-2 TensorOperator; its column (a, b) is the image
    of e_a ⊗ e_b. Braidings compare by identity: contexts and caches are
    keyed on the constructed object.
    """
    name: str
    dim: int
    operator: TensorOperator
    roots: Tuple[Scalar, Scalar]

    @property
    def hecke_param(self) -> Optional[Scalar]:
        first, second = self.roots
        if first == MINUS_ONE:
            return second
        if second == MINUS_ONE:
            return first
        return None

    @property
    def is_hecke_normalized(self) -> bool:
        return self.hecke_param is not None

    def require_hecke(self) -> Scalar:
        nu = self.hecke_param
        if nu is None:
            raise NotHeckeNormalizedError(self.name)
        return nu

    def image(self, a: int, b: int) -> Dict[Key, Scalar]:
        return self.operator.columns.get((a, b), {})

    def matrix(self) -> DomainMatrix:
        return operator_matrix(self.operator)

    def same_data(self, other: "Braiding") -> bool:
        """Structural equality (operator and quadratic data), ignoring the name."""
        return (
            self.dim == other.dim
            and self.operator == other.operator
            and set(self.roots) == set(other.roots)
        )

    def __repr__(self) -> str:
        return f"Braiding(name={self.name!r}, dim={self.dim})"


def operator_from_entries(dim: int, grade: int, entries: Iterable[Tuple[Key, Key, Scalar]]) -> TensorOperator:
    """Build an operator from (row, column, value) triples."""
    columns: Dict[Key, Dict[Key, Scalar]] = {}
    for row, col, value in entries:
        accumulate(columns.setdefault(tuple(col), {}), tuple(row), value)
    return TensorOperator(dim, grade, columns)


def operator_matrix(op: TensorOperator) -> DomainMatrix:
    """Dense matrix in the lexicographic basis of V^{⊗grade}."""
    keys = list(all_keys(op.dim, op.grade))
    index = {k: i for i, k in enumerate(keys)}
    rows = [[ZERO] * len(keys) for _ in keys]
    for col, column in op.columns.items():
        for row, value in column.items():
            rows[index[row]][index[col]] = value
    return linalg.matrix(rows, (len(keys), len(keys)))


def operator_from_matrix(dim: int, grade: int, m: DomainMatrix) -> TensorOperator:
    keys = list(all_keys(dim, grade))
    rows = linalg.rows_of(m)
    columns = {
        col: {row: rows[i][j] for i, row in enumerate(keys) if rows[i][j]}
        for j, col in enumerate(keys)
    }
    return TensorOperator(dim, grade, columns)


def apply_sigma(b: Braiding, x: Tensor, i: int) -> Tensor:
    """Apply σ_i = id^{⊗(i-1)} ⊗ σ ⊗ id^{⊗(p-i-1)} to a grade-p tensor."""
    if not 1 <= i <= x.grade - 1:
        raise GradeMismatchError(f"σ_{i} is undefined on grade {x.grade}")
    entries: Dict[Key, Scalar] = {}
    for key, value in x.entries.items():
        head, pair, tail = key[: i - 1], key[i - 1: i + 1], key[i + 1:]
        for image, coefficient in b.image(*pair).items():
            accumulate(entries, head + image + tail, value * coefficient)
    return Tensor(x.dim, x.grade, entries)


def apply_word(b: Braiding, word: Iterable[int], x: Tensor) -> Tensor:
    """σ_{i_1} ⋯ σ_{i_l} x; the last letter acts first."""
    for i in reversed(tuple(word)):
        x = apply_sigma(b, x, i)
    return x


def sigma_i(b: Braiding, p: int, i: int) -> TensorOperator:
    """
    σ_i = id^{⊗(i-1)} ⊗ σ ⊗ id^{⊗(p-i-1)} on V^⊗p.

    Args:
        b: The braiding σ
        p: Tensor degree
        i: Position of the braided pair, 1 <= i <= p - 1

    Returns:
        The operator on V^⊗p, stored by columns
    """
    if not 1 <= i <= p - 1:
        raise GradeMismatchError(f"σ_{i} is undefined on V^⊗{p}")
    columns = {
        key: apply_sigma(b, Tensor.basis(b.dim, key), i).entries
        for key in all_keys(b.dim, p)
    }
    return TensorOperator(b.dim, p, columns)


def braid_lift_word(b: Braiding, word: Iterable[int], p: int) -> TensorOperator:
    """T for an explicit word, reduced or not."""
    word = tuple(word)
    columns = {key: apply_word(b, word, Tensor.basis(b.dim, key)).entries for key in all_keys(b.dim, p)}
    return TensorOperator(b.dim, p, columns)


def braid_lift(b: Braiding, w: Perm) -> TensorOperator:
    """T_w along the canonical reduced word of w."""
    return braid_lift_word(b, reduced_word(w), len(w))


def _insertion_sum(b: Braiding, y: Tensor) -> Tensor:
    """Σ_m σ_m σ_{m+1} ⋯ σ_{p-1} y over m = 1..p, the braid lifts of the (p-1, 1)-shuffles."""
    total = y
    current = y
    for m in range(y.grade - 1, 0, -1):
        current = apply_sigma(b, current, m)
        total = total + current
    return total


# per (braiding, grade); contexts keep their own bases once built
SYMMETRIZER_CACHE_SIZE = 64


@lru_cache(maxsize=SYMMETRIZER_CACHE_SIZE)
def _symmetrizer_columns(b: Braiding, p: int) -> Dict[Key, Dict[Key, Scalar]]:
    if p <= 1:
        return {k: {k: ONE} for k in all_keys(b.dim, p)}
    previous = _symmetrizer_columns(b, p - 1)
    columns = {}
    for key in all_keys(b.dim, p):
        head = previous.get(key[:-1])
        if not head:
            continue
        y = Tensor(b.dim, p - 1, head).concat(Tensor.basis(b.dim, key[-1:]))
        image = _insertion_sum(b, y)
        if image:
            columns[key] = image.entries
    logger.debug("symmetrizer %s p=%d: %d nonzero columns", b.name, p, len(columns))
    return columns


def symmetrizer(b: Braiding, p: int) -> TensorOperator:
    """
    A^(p) = Σ_{w ∈ S_p} T_w, assembled as A^(p) = (Σ_m T_{u_m}) ∘ (A^(p-1) ⊗ id)
    where u_m runs over the (p-1, 1)-shuffles.

    Args:
        b: A braiding
        p: Tensor degree

    Returns:
        A^(p) on V^⊗p; for a Hecke braiding (A^(p))^2 = (p)_ν! A^(p)

    Raises:
        BoundExceededError: p is above the enumeration limit
    """
    check_bound(p)
    return TensorOperator(b.dim, p, {k: dict(v) for k, v in _symmetrizer_columns(b, p).items()})


def symmetrizer_naive(b: Braiding, p: int) -> TensorOperator:
    """A^(p) summed term by term over the whole group; used as a cross-check."""
    total = TensorOperator.zero(b.dim, p)
    for w in enumerate_group(p):
        total = total + braid_lift(b, w)
    return total


def braiding_report(
    dim: int,
    op: TensorOperator,
    roots: Tuple[Scalar, Scalar],
) -> Dict[str, str]:
    """Check invertibility, the Yang-Baxter equation and the quadratic relation; return the failures."""
    failures: Dict[str, str] = {}
    if op.grade != 2 or op.dim != dim:
        return {"shape": f"expected an operator on V⊗V with dim V = {dim}"}
    keys = list(all_keys(dim, 2))
    columns = [op.columns.get(k, {}) for k in keys]
    r = linalg.rank(columns)
    if r != len(keys):
        failures["invertible"] = f"rank {r} < {len(keys)}"
    candidate = Braiding("candidate", dim, op, roots)
    s1, s2 = sigma_i(candidate, 3, 1), sigma_i(candidate, 3, 2)
    if s1 @ s2 @ s1 != s2 @ s1 @ s2:
        failures["yang_baxter"] = "σ1σ2σ1 ≠ σ2σ1σ2 on V^⊗3"
    lam, mu = roots
    quadratic = op @ op - op.scale(lam + mu) + TensorOperator.identity(dim, 2).scale(lam * mu)
    if not quadratic.is_zero():
        failures["quadratic"] = "(σ - λ)(σ - μ) ≠ 0 for the supplied roots"
    return failures


def validate_braiding(
    dim: int,
    op: TensorOperator,
    hecke_param: Optional[Scalar] = None,
    roots: Optional[Tuple[Scalar, Scalar]] = None,
    name: str = "custom",
) -> Braiding:
    """
    Validate op as a braiding.

    Pass either the Hecke parameter ν, meaning (σ + id)(σ - ν id) = 0, or
    the roots of a general quadratic relation.

    Args:
        dim: dim V
        op: Candidate operator on V ⊗ V
        hecke_param: ν, when σ is Hecke-normalized
        roots: (λ, μ) with (σ - λ)(σ - μ) = 0
        name: Label used in logs and context names

    Returns:
        The validated Braiding

    Raises:
        BraidingValidationError: Invertibility, Yang-Baxter or the quadratic
            relation fails; the failures are carried by name
    """
    if (hecke_param is None) == (roots is None):
        raise ValueError("Supply exactly one of hecke_param or roots")
    if roots is None:
        roots = (MINUS_ONE, hecke_param)
    failures = braiding_report(dim, op, roots)
    if failures:
        logger.info("braiding %s rejected: %s", name, failures)
        raise BraidingValidationError(failures)
    logger.debug("braiding %s validated (dim %d)", name, dim)
    return Braiding(name, dim, op, tuple(roots))


def negate(b: Braiding) -> Braiding:
    """-σ; the quadratic roots change sign, so -c is Hecke-normalized with ν = q^-2."""
    name = b.name[1:] if b.name.startswith("-") else f"-{b.name}"
    return Braiding(name, b.dim, b.operator.scale(MINUS_ONE), (-b.roots[0], -b.roots[1]))


def flip(dim: int) -> Braiding:
    """The classical flip e_a ⊗ e_b ↦ e_b ⊗ e_a, Hecke-normalized with ν = 1."""
    op = operator_from_entries(dim, 2, (((b, a), (a, b), ONE) for a, b in product(range(1, dim + 1), repeat=2)))
    return validate_braiding(dim, op, hecke_param=ONE, name="flip")


def r_matrix(N: int) -> TensorOperator:
    """R = q Σ E_ii⊗E_ii + Σ_{i≠j} E_ij⊗E_ji + (q - q^-1) Σ_{i<j} E_jj⊗E_ii on V = Q(q)^{N+1}."""
    d = N + 1
    q, q_inv = qpow(1), qpow(-1)
    entries = []
    for i in range(1, d + 1):
        entries.append(((i, i), (i, i), q))
        for j in range(1, d + 1):
            if i != j:
                # E_ij ⊗ E_ji sends e_j ⊗ e_i to e_i ⊗ e_j
                entries.append(((i, j), (j, i), ONE))
            if i < j:
                entries.append(((j, i), (j, i), q - q_inv))
    return operator_from_entries(d, 2, entries)


def c_operator(N: int) -> TensorOperator:
    """The displayed action of c on e_i ⊗ e_j."""
    d = N + 1
    q_inv = qpow(-1)
    entries = []
    for i, j in product(range(1, d + 1), repeat=2):
        if i == j:
            entries.append(((i, i), (i, i), ONE))
        elif i < j:
            entries.append(((j, i), (i, j), q_inv))
        else:
            entries.append(((j, i), (i, j), q_inv))
            entries.append(((i, j), (i, j), ONE - qpow(-2)))
    return operator_from_entries(d, 2, entries)


def builtin_c(N: int) -> Braiding:
    """c = q^-1 R, with its own quadratic data (c - id)(c + q^-2 id) = 0."""
    if N < 1:
        raise GradeMismatchError("N must be at least 1")
    op = r_matrix(N).scale(qpow(-1))
    return validate_braiding(N + 1, op, roots=(ONE, -qpow(-2)), name=f"c[N={N}]")


def c_dual_operator(N: int) -> TensorOperator:
    """The displayed action of c^∨ on f_i ⊗ f_j."""
    d = N + 1
    q = qpow(1)
    entries = []
    for i, j in product(range(1, d + 1), repeat=2):
        if i == j:
            entries.append(((i, i), (i, i), ONE))
        elif i < j:
            entries.append(((j, i), (i, j), q))
            entries.append(((i, j), (i, j), ONE - qpow(2)))
        else:
            entries.append(((j, i), (i, j), q))
    return operator_from_entries(d, 2, entries)


def builtin_c_dual(N: int) -> Braiding:
    """c^∨ on V*, satisfying (c^∨ - id)(c^∨ + q^2 id) = 0."""
    if N < 1:
        raise GradeMismatchError("N must be at least 1")
    return validate_braiding(N + 1, c_dual_operator(N), roots=(ONE, -qpow(2)), name=f"c_dual[N={N}]")


def transpose_inverse(b: Braiding) -> TensorOperator:
    """(σ^-1)^t as an operator on V* ⊗ V* in the dual basis."""
    inverse = b.matrix().inv()
    return operator_from_matrix(b.dim, 2, inverse.transpose())


def exterior_relations(N: int) -> List[Tensor]:
    """Spanning set of Ker(id - c): e_i⊗e_i and q^-1 e_i⊗e_j + e_j⊗e_i for i < j."""
    d = N + 1
    relations = [Tensor.basis(d, (i, i)) for i in range(1, d + 1)]
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            relations.append(Tensor(d, 2, {(i, j): qpow(-1), (j, i): ONE}))
    return relations


BUILTIN_NAMES = ("sl-exterior", "sl-dual", "flip")


@lru_cache(maxsize=None)
def builtin(name: str, N: int) -> Braiding:
    """The Hecke-normalized builtin braidings offered on the command line."""
    if name == "sl-exterior":
        return negate(builtin_c(N))
    if name == "sl-dual":
        return negate(builtin_c_dual(N))
    if name == "flip":
        return flip(N + 1)
    raise ValueError(f"Unknown builtin braiding '{name}'. Known: {', '.join(BUILTIN_NAMES)}")
