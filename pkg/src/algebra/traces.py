"""
Closed q-trace formulas on quantum exterior powers, the partial q-traces
along V(1) ⊂ V(2) ⊂ ..., and the quantum trace twisted by K.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from src.algebra import linalg
from src.algebra.endomorphisms import matrix_unit
from src.algebra.exterior import WedgeEndo, WedgeIndex, minus_q_power, wedge_basis
from src.algebra.permutations import enumerate_group, enumerate_shuffles, length
from src.algebra.scalars import ONE, ZERO, Scalar, q_factorial, qpow
from src.algebra.tensors import accumulate
from src.utils.exceptions import GradeMismatchError, IdentityViolation, NotInSubspaceError

logger = logging.getLogger(__name__)

COMPOSITION = "composition"
CONVOLUTION = "convolution"


def q_trace_monotone(a: WedgeEndo) -> Scalar:
    """Σ_{l_1<...<l_p} q^{(p+1)p - 2(l_1+...+l_p)} a^{l⃗}_{l⃗}."""
    p = a.grade
    total = ZERO
    for index in wedge_basis(a.dim, p):
        value = a.coefficient(index, index)
        if value:
            total += qpow((p + 1) * p - 2 * sum(index)) * value
    return total


def q_trace_shuffle(a: WedgeEndo) -> Scalar:
    """Σ_{w ∈ S_{p,d-p}} (-q)^{-2l(w)} a^{w(1)...w(p)}_{w(1)...w(p)}."""
    p = a.grade
    total = ZERO
    for w in enumerate_shuffles(p, a.dim - p):
        index = tuple(w[:p])
        value = a.coefficient(index, index)
        if value:
            total += minus_q_power(-2 * length(w)) * value
    return total


def q_trace_closed(a: WedgeEndo) -> Scalar:
    """The closed q-trace; the monotone and shuffle forms are both evaluated and must agree."""
    monotone, shuffled = q_trace_monotone(a), q_trace_shuffle(a)
    if monotone != shuffled:
        raise IdentityViolation("closed q-trace forms", f"grade {a.grade}, dim {a.dim}")
    return monotone


def grade_one_q_trace(i: int, j: int) -> Scalar:
    """Tr_q E_ij = δ_ij q^{-2(i-1)}."""
    return qpow(-2 * (i - 1)) if i == j else ZERO


def q_trace_powers(a: DomainMatrix, p: int, mode: str) -> Scalar:
    """
    Tr_q of A^p (composition) or of A^{∗p} (convolution) for a d × d matrix
    with a^j_i in row j, column i.

    In the convolution form the factor a^{τw(k)}_{θw(k)} is the entry in row
    l_{τ(k)} and column l_{θ(k)}, where l_1 < ... < l_p are w(1), ..., w(p).

    Args:
        a: d × d matrix of a grade-1 endomorphism
        p: Power, 0 <= p <= d
        mode: COMPOSITION or CONVOLUTION

    Returns:
        Tr_q A^p on grade 1, or Tr_q A^{∗p} on grade p
    """
    d = a.shape[0]
    if not 0 <= p <= d:
        raise GradeMismatchError(f"power {p} outside 0..{d}")
    rows = linalg.rows_of(a)
    if mode == COMPOSITION:
        power = linalg.rows_of(linalg.matrix_power(a, p))
        return sum((qpow(-2 * (i - 1)) * power[i - 1][i - 1] for i in range(1, d + 1)), ZERO)
    if mode != CONVOLUTION:
        raise ValueError(f"Unknown power mode '{mode}'")
    orders = enumerate_group(p)
    total = ZERO
    for w in enumerate_shuffles(p, d - p):
        chosen = w[:p]
        base = minus_q_power(-2 * length(w))
        for theta in orders:
            for tau in orders:
                value = ONE
                for k in range(p):
                    value *= rows[chosen[tau[k] - 1] - 1][chosen[theta[k] - 1] - 1]
                    if not value:
                        break
                if value:
                    total += base * minus_q_power(-(length(theta) + length(tau))) * value
    return total


def diagonal_power_trace(diagonal: Sequence[Scalar], p: int, mode: str) -> Scalar:
    """
    The diagonal displays: (p)_{q^-2}! Σ_w (-q)^{-2l(w)} Π_k a^{w(k)}_{w(k)}
    for convolution powers, Σ_i q^{-2(i-1)} (a^i_i)^p for composition powers.
    """
    d = len(diagonal)
    if mode == COMPOSITION:
        return sum((qpow(-2 * (i - 1)) * diagonal[i - 1] ** p for i in range(1, d + 1)), ZERO)
    if mode != CONVOLUTION:
        raise ValueError(f"Unknown power mode '{mode}'")
    total = ZERO
    for w in enumerate_shuffles(p, d - p):
        product = ONE
        for k in range(p):
            product *= diagonal[w[k] - 1]
        total += minus_q_power(-2 * length(w)) * product
    return q_factorial(p, qpow(-2)) * total


def partial_trace(a: WedgeEndo) -> WedgeEndo:
    """
    (Tr_q)_{p+1}: End ∧^{p+1}(V(d)) -> End ∧^p(V(d-1)),
    E_{i_1 j_1} ∗ ... ∗ E_{i_{p+1} j_{p+1}} ↦ (Tr_q E_{i_{p+1} j_{p+1}}) E_{i_1 j_1} ∗ ... ∗ E_{i_p j_p}.

    Args:
        a: A grade-(p+1) endomorphism over V(d), in the convolution basis

    Returns:
        The grade-p endomorphism over V(d-1)

    Raises:
        NotInSubspaceError: A surviving term indexes e_d, so it does not
            live over V(d-1)
    """
    if a.grade < 1:
        raise GradeMismatchError("the partial trace needs grade at least 1")
    target_dim = a.dim - 1
    coefficients: Dict[Tuple[WedgeIndex, WedgeIndex], Scalar] = {}
    for (rows, cols), value in a.coefficients.items():
        weight = grade_one_q_trace(rows[-1], cols[-1])
        if not weight:
            continue
        kept_rows, kept_cols = rows[:-1], cols[:-1]
        if any(i > target_dim for i in kept_rows + kept_cols):
            raise NotInSubspaceError(
                f"retained indices {kept_rows}, {kept_cols} leave V({target_dim})"
            )
        accumulate(coefficients, (kept_rows, kept_cols), value * weight)
    return WedgeEndo(target_dim, a.grade - 1, coefficients)


def partial_trace_chain(a: WedgeEndo) -> Scalar:
    """(Tr_q)_1 (Tr_q)_2 ⋯ (Tr_q)_p A."""
    current = a
    while current.grade > 0:
        current = partial_trace(current)
    return current.coefficient((), ())


def rho_K(N: int, i: int) -> DomainMatrix:
    """ρ(K_i) = Σ_{l≠i,i+1} E_ll + q E_ii + q^-1 E_{i+1,i+1}."""
    d = N + 1
    if not 1 <= i <= N:
        raise GradeMismatchError(f"K_{i} is undefined for N = {N}")
    diagonal = [ONE] * d
    diagonal[i - 1] = qpow(1)
    diagonal[i] = qpow(-1)
    return linalg.matrix([[diagonal[r] if r == c else ZERO for c in range(d)] for r in range(d)], (d, d))


def rho_E(N: int, i: int) -> DomainMatrix:
    """ρ(E_i) = E_{i,i+1}."""
    return matrix_unit(N + 1, i, i + 1)


def rho_F(N: int, i: int) -> DomainMatrix:
    """ρ(F_i) = E_{i+1,i}."""
    return matrix_unit(N + 1, i + 1, i)


@dataclass(frozen=True)
class KMatrix:
    """ρ(K) = diag(q^N, q^{N-2}, ..., q^-N) for K = Π_i K_i^{i(N+1-i)}."""
    N: int
    diagonal: Tuple[Scalar, ...]

    @classmethod
    def standard(cls, N: int) -> "KMatrix":
        return cls(N, tuple(qpow(N - 2 * k) for k in range(N + 1)))

    @classmethod
    def from_generators(cls, N: int) -> "KMatrix":
        """Multiply out ρ(K_1)^{N} ρ(K_2)^{2(N-1)} ⋯ ρ(K_N)^{N}."""
        product = linalg.identity(N + 1)
        for i in range(1, N + 1):
            product = product * linalg.matrix_power(rho_K(N, i), i * (N + 1 - i))
        rows = linalg.rows_of(product)
        if any(rows[r][c] for r in range(N + 1) for c in range(N + 1) if r != c):
            raise IdentityViolation("K is diagonal", f"N = {N}")
        return cls(N, tuple(rows[k][k] for k in range(N + 1)))

    def wedge_eigenvalue(self, index: Sequence[int]) -> Scalar:
        """ρ^p(K) on e_{i_1} ∧ ... ∧ e_{i_p}: the product of the diagonal entries."""
        value = ONE
        for i in index:
            value *= self.diagonal[i - 1]
        return value


def quantum_trace(a: WedgeEndo) -> Scalar:
    """
    The quantum trace tr_q A = tr(ρ^p(K) A).

    Args:
        a: A grade-p endomorphism in the wedge basis of V = Q(q)^{N+1}

    Returns:
        Σ_I q^{p(N+2) - 2(i_1+...+i_p)} a^I_I; equals q^{p(N+1-p)} Tr_q A
    """
    k = KMatrix.standard(a.dim - 1)
    total = ZERO
    for index in wedge_basis(a.dim, a.grade):
        value = a.coefficient(index, index)
        if value:
            total += k.wedge_eigenvalue(index) * value
    return total


def trace_ratio_exponent(N: int, p: int) -> int:
    """Tr_q A = q^{e} tr_q A with e = -p(N+1-p)."""
    return -p * (N + 1 - p)
