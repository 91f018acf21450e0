"""
Sparse tensors in V^{⊗p} and sparse operators on them.

Basis vectors of V are numbered 1..d; a key of a grade-p tensor is the
p-tuple (a_1, ..., a_p) naming e_{a_1} ⊗ ... ⊗ e_{a_p}. Grade 0 has the
single key () for the scalars.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from src.algebra.scalars import ONE, ZERO, Scalar, to_text
from src.utils.exceptions import GradeMismatchError

Key = Tuple[int, ...]


def _clean(entries: Mapping[Key, Scalar]) -> Dict[Key, Scalar]:
    return {k: v for k, v in entries.items() if v}


def accumulate(target: Dict[Key, Scalar], key: Key, value: Scalar) -> None:
    """target[key] += value, dropping the key when the sum vanishes."""
    total = target.get(key, ZERO) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


@dataclass(frozen=True, eq=False)
class Tensor:
    """An element of V^{⊗grade} stored as a sparse map key -> nonzero Scalar."""
    dim: int
    grade: int
    entries: Dict[Key, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = _clean(self.entries)
        for key in cleaned:
            if len(key) != self.grade:
                raise GradeMismatchError(f"key {key} in a grade-{self.grade} tensor")
            if any(not 1 <= a <= self.dim for a in key):
                raise GradeMismatchError(f"key {key} outside 1..{self.dim}")
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def zero(cls, dim: int, grade: int) -> "Tensor":
        return cls(dim, grade, {})

    @classmethod
    def basis(cls, dim: int, key: Iterable[int]) -> "Tensor":
        key = tuple(key)
        return cls(dim, len(key), {key: ONE})

    @classmethod
    def unit(cls, dim: int) -> "Tensor":
        return cls(dim, 0, {(): ONE})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.dim, self.grade, self.entries) == (other.dim, other.grade, other.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self) -> Iterator[Tuple[Key, Scalar]]:
        return iter(sorted(self.entries.items()))

    def __getitem__(self, key: Key) -> Scalar:
        return self.entries.get(tuple(key), ZERO)

    def _check(self, other: "Tensor") -> None:
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise GradeMismatchError(
                f"cannot combine grade {self.grade} (d={self.dim}) with grade {other.grade} (d={other.dim})"
            )

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        entries = dict(self.entries)
        for k, v in other.entries.items():
            accumulate(entries, k, v)
        return Tensor(self.dim, self.grade, entries)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + other.scale(-ONE)

    def __neg__(self) -> "Tensor":
        return self.scale(-ONE)

    def scale(self, s: Scalar) -> "Tensor":
        if not s:
            return Tensor.zero(self.dim, self.grade)
        return Tensor(self.dim, self.grade, {k: v * s for k, v in self.entries.items()})

    def concat(self, other: "Tensor") -> "Tensor":
        """x ⊗ y as an element of V^{⊗(i+j)}."""
        if self.dim != other.dim:
            raise GradeMismatchError("tensors over different spaces")
        entries: Dict[Key, Scalar] = {}
        for k1, v1 in self.entries.items():
            for k2, v2 in other.entries.items():
                accumulate(entries, k1 + k2, v1 * v2)
        return Tensor(self.dim, self.grade + other.grade, entries)

    def to_records(self):
        return [[list(k), to_text(v)] for k, v in self]


def all_keys(dim: int, grade: int) -> Iterator[Key]:
    """Every p-tuple over 1..d in lexicographic order."""
    return product(range(1, dim + 1), repeat=grade)


@dataclass(frozen=True, eq=False)
class TensorOperator:
    """
    A linear operator on V^{⊗grade} stored by columns: columns[key] is the
    image of the basis tensor `key`. Missing columns map to zero.
    """
    dim: int
    grade: int
    columns: Dict[Key, Dict[Key, Scalar]] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for key, column in self.columns.items():
            column = _clean(column)
            if column:
                cleaned[key] = column
        object.__setattr__(self, "columns", cleaned)

    @classmethod
    def identity(cls, dim: int, grade: int) -> "TensorOperator":
        return cls(dim, grade, {k: {k: ONE} for k in all_keys(dim, grade)})

    @classmethod
    def zero(cls, dim: int, grade: int) -> "TensorOperator":
        return cls(dim, grade, {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return (self.dim, self.grade, self.columns) == (other.dim, other.grade, other.columns)

    def column(self, key: Key) -> Tensor:
        return Tensor(self.dim, self.grade, dict(self.columns.get(tuple(key), {})))

    def apply(self, x: Tensor) -> Tensor:
        if (x.dim, x.grade) != (self.dim, self.grade):
            raise GradeMismatchError(f"operator on grade {self.grade} applied to grade {x.grade}")
        entries: Dict[Key, Scalar] = {}
        for key, coefficient in x.entries.items():
            for row, value in self.columns.get(key, {}).items():
                accumulate(entries, row, coefficient * value)
        return Tensor(self.dim, self.grade, entries)

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        """Composition self ∘ other."""
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise GradeMismatchError("operators on different tensor powers")
        columns = {}
        for key, column in other.columns.items():
            columns[key] = self.apply(Tensor(self.dim, self.grade, column)).entries
        return TensorOperator(self.dim, self.grade, columns)

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise GradeMismatchError("operators on different tensor powers")
        columns = {k: dict(v) for k, v in self.columns.items()}
        for key, column in other.columns.items():
            target = columns.setdefault(key, {})
            for row, value in column.items():
                accumulate(target, row, value)
        return TensorOperator(self.dim, self.grade, columns)

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        return self + other.scale(-ONE)

    def scale(self, s: Scalar) -> "TensorOperator":
        return TensorOperator(
            self.dim,
            self.grade,
            {k: {r: v * s for r, v in col.items()} for k, col in self.columns.items()},
        )

    def is_zero(self) -> bool:
        return not self.columns

    def transpose(self) -> "TensorOperator":
        columns: Dict[Key, Dict[Key, Scalar]] = {}
        for key, column in self.columns.items():
            for row, value in column.items():
                columns.setdefault(row, {})[key] = value
        return TensorOperator(self.dim, self.grade, columns)

    def entries(self) -> Iterator[Tuple[Key, Key, Scalar]]:
        """(row, column, value) triples in lexicographic (row, column) order."""
        triples = [(r, c, v) for c, col in self.columns.items() for r, v in col.items()]
        return iter(sorted(triples, key=lambda t: (t[0], t[1])))
