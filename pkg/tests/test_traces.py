"""
Closed q-trace formulas, power traces, partial traces and the quantum trace.
"""
import pytest

from src.agents.sampling import Sampler
from src.algebra import linalg
from src.algebra.braiding import flip, negate, symmetrizer
from src.algebra.endomorphisms import GradedEndo, build_context, conv_power, q_trace
from src.algebra.exterior import WedgeEndo
from src.algebra.scalars import ONE, ZERO, parse_scalar, q_factorial, qpow
from src.algebra.tensors import Tensor
from src.algebra.traces import (
    COMPOSITION,
    CONVOLUTION,
    KMatrix,
    diagonal_power_trace,
    grade_one_q_trace,
    partial_trace,
    partial_trace_chain,
    q_trace_closed,
    q_trace_monotone,
    q_trace_powers,
    q_trace_shuffle,
    quantum_trace,
    rho_E,
    rho_F,
    rho_K,
    trace_ratio_exponent,
)
from src.utils.exceptions import GradeMismatchError


def _sampler(label):
    return Sampler(11, label, 2)


def test_grade_one_q_trace():
    assert grade_one_q_trace(1, 1) == ONE
    assert grade_one_q_trace(2, 2) == qpow(-2)
    assert grade_one_q_trace(1, 2) == ZERO


def test_single_matrix_unit(ext1):
    e22 = WedgeEndo(2, 1, {((2,), (2,)): ONE})
    assert ext1.q_trace(e22) == qpow(-2)
    assert quantum_trace(e22) == qpow(-1)
    assert trace_ratio_exponent(1, 1) == -1


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_generic_trace_equals_closed_forms(ext2, p):
    a = _sampler(f"closed {p}").wedge_endo(3, p)
    assert q_trace_monotone(a) == q_trace_shuffle(a)
    assert ext2.q_trace(a) == q_trace_closed(a)


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_trace_ratio(ext2, p):
    a = _sampler(f"ratio {p}").wedge_endo(3, p)
    assert ext2.q_trace(a) == qpow(trace_ratio_exponent(2, p)) * quantum_trace(a)


def test_top_grade_identity(ext2):
    top = WedgeEndo(3, 3, {((1, 2, 3), (1, 2, 3)): ONE})
    assert ext2.q_trace(top) == ONE
    assert quantum_trace(top) == ONE


@pytest.mark.parametrize("N", [1, 2, 3])
def test_k_from_generators(N):
    assert KMatrix.from_generators(N) == KMatrix.standard(N)


def test_generators_of_the_representation():
    k, e, f = rho_K(1, 1), rho_E(1, 1), rho_F(1, 1)
    assert linalg.equal(k * e, linalg.scale(e * k, qpow(2)))
    assert linalg.equal(k * f, linalg.scale(f * k, qpow(-2)))
    with pytest.raises(GradeMismatchError):
        rho_K(1, 2)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_partial_trace_chain(ext2, p):
    a = _sampler(f"chain {p}").wedge_endo(3, p)
    assert ext2.q_trace(a) == qpow(p * (p - 1)) * partial_trace_chain(a)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_nested_partial_trace(ext1, ext2, p):
    a = _sampler(f"nested {p}").wedge_endo(3, p)
    reduced = partial_trace(a)
    assert (reduced.dim, reduced.grade) == (2, p - 1)
    assert ext2.q_trace(a) == qpow(2 * (p - 1)) * ext1.q_trace(reduced)


def test_partial_trace_needs_a_grade():
    with pytest.raises(GradeMismatchError):
        partial_trace(WedgeEndo(2, 0, {((), ()): ONE}))


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_composition_power_trace(ext2, p):
    m = _sampler(f"composition {p}").matrix(3)
    assert q_trace_powers(m, p, COMPOSITION) == ext2.q_trace(WedgeEndo.grade_one(linalg.matrix_power(m, p)))


@pytest.mark.parametrize("p", [0, 1, 2])
def test_convolution_power_trace(ext2, p):
    ctx = ext2.context
    m = _sampler(f"convolution {p}").matrix(3)
    block = ext2.to_graded(WedgeEndo.grade_one(m)).component(1)
    assert q_trace_powers(m, p, CONVOLUTION) == q_trace(GradedEndo.single(ctx, p, conv_power(ctx, block, p)))


def test_diagonal_power_traces():
    diagonal = [parse_scalar("q + 1"), parse_scalar("2"), parse_scalar("q^-1")]
    m = _sampler("diagonal").diagonal_matrix(diagonal)
    for p in range(4):
        for mode in (COMPOSITION, CONVOLUTION):
            assert q_trace_powers(m, p, mode) == diagonal_power_trace(diagonal, p, mode)
    product = diagonal[0] * diagonal[1] * diagonal[2]
    assert q_trace_powers(m, 3, CONVOLUTION) == q_factorial(3, qpow(-2)) * product


def test_power_trace_arguments():
    m = linalg.identity(2)
    with pytest.raises(GradeMismatchError):
        q_trace_powers(m, 3, COMPOSITION)
    with pytest.raises(ValueError):
        q_trace_powers(m, 1, "sideways")


@pytest.fixture(scope="module")
def classical():
    return build_context(negate(flip(3)), 4)


def test_negated_flip_is_the_exterior_algebra(classical):
    assert classical.nu == ONE
    assert classical.top == 3
    assert classical.dims == (1, 3, 3, 1)


def test_negated_flip_antisymmetrizes():
    b = negate(flip(3))
    assert not symmetrizer(b, 2).apply(Tensor.basis(3, (2, 2)))
    assert symmetrizer(b, 2).apply(Tensor.basis(3, (1, 2))) == Tensor.basis(3, (1, 2)) - Tensor.basis(3, (2, 1))
    image = symmetrizer(b, 3).apply(Tensor.basis(3, (1, 2, 3)))
    assert image[(1, 2, 3)] == ONE
    assert image[(2, 1, 3)] == -ONE
    assert image[(3, 1, 2)] == ONE
    assert image[(3, 2, 1)] == -ONE


def test_negated_flip_q_trace_is_the_ordinary_trace(classical):
    rows = (("q", "2", "1/q"), ("3", "q^2 - 1", "0"), ("q^-3", "5", "7"))
    a = linalg.matrix([[parse_scalar(text) for text in row] for row in rows], (3, 3))
    assert q_trace(GradedEndo.single(classical, 1, a)) == linalg.trace(a)
    assert q_trace(GradedEndo.identity(classical)) == 8 * ONE
