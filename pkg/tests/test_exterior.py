"""
Quantum exterior algebra tests: wedge normal forms, the convolution basis and ι.
"""
import pytest

from src.agents.sampling import Sampler
from src.algebra import linalg
from src.algebra.endomorphisms import GradedEndo
from src.algebra.exterior import (
    BiWedge,
    ConvBasisEndo,
    ExteriorContext,
    WedgeElement,
    WedgeEndo,
    conv_basis_endo_matrix,
    iota,
    iota_inverse,
    validate_wedge_index,
    wedge_basis,
    wedge_coproduct,
    wedge_normal_form,
    wedge_product,
    wedge_tensor,
)
from src.algebra.scalars import ONE, qpow
from src.algebra.symmetric import shuffle_product
from src.utils.exceptions import GradeMismatchError, NotInSubspaceError


def test_wedge_basis():
    assert wedge_basis(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert wedge_basis(2, 3) == []


def test_normal_form():
    assert wedge_normal_form((2, 1), 2).terms == {(1, 2): -qpow(-1)}
    assert wedge_normal_form((3, 2, 1), 3).coefficient((1, 2, 3)) == -qpow(-3)
    assert wedge_normal_form((1, 1), 2).terms == {}


def test_wedge_index_validation():
    with pytest.raises(NotInSubspaceError):
        validate_wedge_index((2, 1), 3)
    with pytest.raises(NotInSubspaceError):
        validate_wedge_index((1, 4), 3)


def test_wedge_product_associative():
    e = {i: WedgeElement(3, 1, {(i,): ONE}) for i in (1, 2, 3)}
    left = wedge_product(wedge_product(e[3], e[1]), e[2])
    right = wedge_product(e[3], wedge_product(e[1], e[2]))
    assert left == right
    assert left.terms == {(1, 2, 3): qpow(-2)}


def test_wedge_equals_shuffle(ext2):
    b = ext2.context.braiding
    x = wedge_product(WedgeElement(3, 1, {(2,): ONE}), WedgeElement(3, 1, {(1,): ONE}))
    assert shuffle_product(b, wedge_tensor(3, (2,)), wedge_tensor(3, (1,))) == wedge_tensor(3, (1, 2)).scale(
        x.coefficient((1, 2))
    )


def test_coproduct_of_a_pair():
    split = wedge_coproduct((1, 2), 1)
    assert split == {((1,), (2,)): ONE, ((2,), (1,)): -qpow(-1)}
    with pytest.raises(GradeMismatchError):
        wedge_coproduct((1, 2), 3)


def test_conv_basis_matrix():
    m = conv_basis_endo_matrix(ConvBasisEndo((1, 3), (2, 3)), 3)
    assert linalg.entry(m, 1, 2) == ONE
    assert sum(1 for row in linalg.rows_of(m) for x in row if x) == 1
    with pytest.raises(GradeMismatchError):
        ConvBasisEndo((1,), (1, 2))


@pytest.mark.parametrize("p", [0, 1, 2])
def test_convolution_basis_is_matrix_units(ext1, p):
    for rows in wedge_basis(2, p):
        for cols in wedge_basis(2, p):
            assert ext1.unit_product(rows, cols) == WedgeEndo(2, p, {(rows, cols): ONE})


def test_matrix_unit_rules(ext1):
    zero = WedgeEndo(2, 2, {})
    assert ext1.unit_product((1, 1), (1, 2)) == zero
    assert ext1.unit_product((1, 2), (1, 1)) == zero
    # E_21 ∗ E_11 = -q^-1 E_11 ∗ E_21
    assert ext1.unit_product((2, 1), (1, 1)) == ext1.unit_product((1, 2), (1, 1)).scale(-qpow(-1))


def test_graded_round_trip(ext1):
    w = Sampler(3, "round-trip", 2).wedge_endo(2, 1)
    graded = ext1.to_graded(w)
    assert isinstance(graded, GradedEndo)
    assert graded.support() in ([], [1])
    assert ext1.from_graded(graded, 1) == w


def test_iota_is_multiplicative(ext2):
    sampler = Sampler(3, "iota", 2)
    x, y = sampler.wedge_endo(3, 1), sampler.wedge_endo(3, 1)
    assert iota(ext2.star(x, y)) == iota(x) * iota(y)


def test_iota_inverse():
    a = WedgeEndo(2, 1, {((1,), (2,)): qpow(3)})
    assert iota_inverse(iota(a), 1) == a
    assert iota(a) == BiWedge(2, {((1,), (2,)): qpow(3)})


def test_wedge_endo_records_are_sorted():
    a = WedgeEndo(2, 1, {((2,), (1,)): ONE, ((1,), (1,)): qpow(1)})
    assert [r[:2] for r in a.records()] == [((1,), (1,)), ((2,), (1,))]
    assert a.to_matrix().shape == (2, 2)
    assert WedgeEndo.from_matrix(2, 1, a.to_matrix()) == a


def test_exterior_context_needs_a_top_grade(store):
    with pytest.raises(GradeMismatchError):
        ExteriorContext(store.context(store.builtin_descriptor("flip", 1, 3)))
