"""
Quantum symmetric algebra tests: component bases, profiles, shuffles and deconcatenation.
"""
from math import comb

import pytest

from src.algebra.braiding import SYMMETRIZER_CACHE_SIZE, _symmetrizer_columns, builtin, flip, symmetrizer
from src.algebra.symmetric import (
    BASIS_CACHE_SIZE,
    component_basis,
    deconcat,
    detect_top,
    grade_profile,
    shuffle_product,
)
from src.algebra.tensors import Tensor
from src.utils.exceptions import GradeMismatchError, NotInSubspaceError


@pytest.mark.parametrize("name", ["sl-exterior", "sl-dual"])
@pytest.mark.parametrize("N", [1, 2])
def test_terminating_profiles(name, N):
    profile = grade_profile(builtin(name, N), N + 2)
    assert profile.dims == tuple(comb(N + 1, p) for p in range(N + 3))
    assert profile.top == N + 1


def test_flip_profile_has_no_top():
    profile = grade_profile(builtin("flip", 1), 3)
    assert profile.dims == (1, 2, 3, 4)
    assert profile.top is None
    assert profile.bound == 3


@pytest.mark.parametrize(
    "dims,top",
    [((1, 2, 1, 0), 2), ((1, 2, 1), None), ((1, 2, 2, 0), None), ((1, 3, 3, 1, 0, 0), 3), ((0,), None)],
)
def test_detect_top(dims, top):
    assert detect_top(dims) == top


def test_projection_round_trip():
    basis = component_basis(builtin("sl-exterior", 2), 2)
    for v in basis.vectors:
        assert basis.contains(v)
        assert basis.embed(basis.project(v)) == v


def test_projection_outside_the_component():
    basis = component_basis(builtin("sl-exterior", 1), 2)
    with pytest.raises(NotInSubspaceError):
        basis.project(Tensor.basis(2, (1, 1)))
    assert not basis.contains(Tensor.basis(2, (1, 1)))


def test_projection_grade_mismatch():
    basis = component_basis(builtin("sl-exterior", 1), 2)
    with pytest.raises(GradeMismatchError):
        basis.project(Tensor.basis(2, (1,)))


@pytest.mark.parametrize("name", ["sl-exterior", "sl-dual", "flip"])
def test_shuffle_closure(name):
    b = builtin(name, 1)
    one, two = component_basis(b, 1), component_basis(b, 2)
    for x in one.vectors:
        for y in one.vectors:
            assert two.contains(shuffle_product(b, x, y))


def test_shuffle_associativity():
    b = builtin("sl-exterior", 2)
    x, y, z = component_basis(b, 1).vectors
    assert shuffle_product(b, shuffle_product(b, x, y), z) == shuffle_product(b, x, shuffle_product(b, y, z))


def test_deconcat_splits_keys():
    x = Tensor.basis(3, (1, 2, 3)) + Tensor.basis(3, (2, 1, 3))
    split = deconcat(x, 1, 2)
    assert set(split) == {((1,), (2, 3)), ((2,), (1, 3))}
    with pytest.raises(GradeMismatchError):
        deconcat(x, 2, 2)


def test_unit_shuffles_trivially():
    b = builtin("sl-exterior", 1)
    x = component_basis(b, 1).vectors[0]
    assert shuffle_product(b, Tensor.unit(2), x) == x


def test_braiding_caches_are_bounded():
    for _ in range(3):
        b = flip(2)
        symmetrizer(b, 2)
        component_basis(b, 2)
    assert _symmetrizer_columns.cache_info().maxsize == SYMMETRIZER_CACHE_SIZE
    assert _symmetrizer_columns.cache_info().currsize <= SYMMETRIZER_CACHE_SIZE
    assert component_basis.cache_info().maxsize == BASIS_CACHE_SIZE
    assert component_basis.cache_info().currsize <= BASIS_CACHE_SIZE
