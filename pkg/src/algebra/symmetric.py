"""
The quantum symmetric algebra S_σ(V) = ⊕_p Im A^(p).

Each grade gets a deterministic basis (the first independent columns of
A^(p) in lexicographic column order) and a projection back to coordinates.
The algebra structure is the quantum shuffle product; the coalgebra
structure is deconcatenation.
"""
import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra import linalg
from src.algebra.braiding import Braiding, apply_word, symmetrizer
from src.algebra.permutations import enumerate_shuffles, reduced_word
from src.algebra.scalars import Scalar
from src.algebra.tensors import Key, Tensor, accumulate, all_keys
from src.utils.exceptions import GradeMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ComponentBasis:
    """A basis of S_σ^p(V) inside V^{⊗p} together with its coordinate map."""
    braiding: Braiding
    grade: int
    vectors: Tuple[Tensor, ...]
    coords: linalg.Coordinates

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def project(self, x: Tensor, check: bool = True) -> List[Scalar]:
        """Coordinates of x; raises NotInSubspaceError when x is outside S_σ^p(V)."""
        if x.grade != self.grade:
            raise GradeMismatchError(f"grade-{x.grade} tensor projected to grade {self.grade}")
        return self.coords.coordinates(x.entries, check=check)

    def embed(self, coordinates: Sequence[Scalar]) -> Tensor:
        if len(coordinates) != self.dim:
            raise GradeMismatchError(f"{len(coordinates)} coordinates for a {self.dim}-dimensional component")
        return Tensor(self.braiding.dim, self.grade, self.coords.combine(coordinates))

    def contains(self, x: Tensor) -> bool:
        coordinates = self.project(x, check=False)
        return self.embed(coordinates) == x


BASIS_CACHE_SIZE = 64


@lru_cache(maxsize=BASIS_CACHE_SIZE)
def component_basis(b: Braiding, p: int) -> ComponentBasis:
    """
    Basis of Im A^(p) from a rank-revealing elimination of its columns.

    Args:
        b: A braiding
        p: Grade

    Returns:
        The pivot columns of A^(p) with a projection back to coordinates;
        any basis is acceptable, only its span is fixed
    """
    started = time.perf_counter()
    sym = symmetrizer(b, p)
    keys = list(all_keys(b.dim, p))
    columns = [sym.columns.get(k, {}) for k in keys]
    chosen, echelon = linalg.independent_columns(columns)
    vectors = tuple(Tensor(b.dim, p, dict(columns[i])) for i in chosen)
    coords = linalg.Coordinates.from_basis([v.entries for v in vectors], echelon.pivots)
    logger.info(
        "component basis %s p=%d: dim %d (%.2fs)", b.name, p, len(vectors), time.perf_counter() - started
    )
    return ComponentBasis(b, p, vectors, coords)


def shuffle_sum(b: Braiding, z: Tensor, i: int) -> Tensor:
    """Σ_{w ∈ S_{i,p-i}} T_w z."""
    total = Tensor.zero(z.dim, z.grade)
    for w in enumerate_shuffles(i, z.grade - i):
        total = total + apply_word(b, reduced_word(w), z)
    return total


def shuffle_product(b: Braiding, x: Tensor, y: Tensor) -> Tensor:
    """The quantum shuffle product sh(x ⊗ y)."""
    return shuffle_sum(b, x.concat(y), x.grade)


def deconcat(x: Tensor, i: int, j: int) -> Dict[Tuple[Key, Key], Scalar]:
    """
    δ_{i,j}(x): every stored key is split after position i.

    >>> from src.algebra.scalars import ONE
    >>> deconcat(Tensor(2, 2, {(1, 2): ONE}), 1, 1) == {((1,), (2,)): ONE}
    True
    """
    if i < 0 or j < 0 or i + j != x.grade:
        raise GradeMismatchError(f"cannot split grade {x.grade} as ({i}, {j})")
    split: Dict[Tuple[Key, Key], Scalar] = {}
    for key, value in x.entries.items():
        accumulate(split, (key[:i], key[i:]), value)
    return split


def split_coordinates(
    split: Dict[Tuple[Key, Key], Scalar], left: ComponentBasis, right: ComponentBasis
) -> List[List[Scalar]]:
    """
    Expand Σ c_{s,t} e_s ⊗ e_t in (basis of left) ⊗ (basis of right).

    Returns the coefficient table D[a][b] of v_a ⊗ w_b; the left factor is
    projected first, then each right factor. Both projections check their
    residuals, so a split that leaves S_σ raises NotInSubspaceError.
    """
    d = left.braiding.dim
    by_right: Dict[Key, Dict[Key, Scalar]] = {}
    for (s, t), value in split.items():
        by_right.setdefault(t, {})[s] = value
    right_parts: List[Dict[Key, Scalar]] = [dict() for _ in range(left.dim)]
    for t, column in by_right.items():
        coordinates = left.project(Tensor(d, left.grade, column))
        for a, c in enumerate(coordinates):
            if c:
                accumulate(right_parts[a], t, c)
    return [right.project(Tensor(d, right.grade, part)) for part in right_parts]


@dataclass(frozen=True)
class GradeProfile:
    """Dimensions of S_σ^p(V) for p = 0..bound, and the top grade when one is observed."""
    dims: Tuple[int, ...]
    top: Optional[int]

    @property
    def bound(self) -> int:
        return len(self.dims) - 1


def detect_top(dims: Sequence[int]) -> Optional[int]:
    """M with dims[M] = 1 and zeros after it, provided at least one zero is observed."""
    last = len(dims) - 1
    nonzero = [p for p, n in enumerate(dims) if n]
    if not nonzero:
        return None
    m = nonzero[-1]
    if m == last or dims[m] != 1:
        return None
    return m


def grade_profile(b: Braiding, bound: int) -> GradeProfile:
    """
    dim S_σ^p(V) for p = 0..bound and the top grade.

    Args:
        b: A braiding
        bound: Last grade to compute

    Returns:
        The dimensions and the top grade M, or no top grade when no zero
        dimension was observed up to bound
    """
    dims = tuple(component_basis(b, p).dim for p in range(bound + 1))
    profile = GradeProfile(dims, detect_top(dims))
    logger.info("grade profile %s: dims=%s top=%s", b.name, dims, profile.top)
    return profile
