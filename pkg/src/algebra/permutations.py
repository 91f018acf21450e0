"""
Symmetric-group combinatorics on one-line notation (w(1), ..., w(p)).

Products are function composition. A word (i_1, ..., i_l) stands for
s_{i_1} o ... o s_{i_l}, and right multiplication by s_k swaps positions
k and k+1 of the one-line notation.

>>> reduced_word((3, 1, 2))
(2, 1)
>>> word_to_perm((2, 1), 3)
(3, 1, 2)
"""
from contextlib import contextmanager
from contextvars import ContextVar
from itertools import combinations, permutations
from typing import Iterator, List, NewType, Optional, Tuple

from src.utils.exceptions import BoundExceededError, GradeMismatchError
from src.utils.settings import get_settings

# a permutation of 1..p in one-line notation
Perm = NewType("Perm", Tuple[int, ...])

# adjacent-transposition indices, each in 1..p-1
ReducedWord = NewType("ReducedWord", Tuple[int, ...])


def identity(p: int) -> Perm:
    return Perm(tuple(range(1, p + 1)))


def validate_perm(w: Tuple[int, ...]) -> Perm:
    if sorted(w) != list(range(1, len(w) + 1)):
        raise GradeMismatchError(f"{w} is not a permutation of 1..{len(w)}")
    return Perm(tuple(w))


def length(w: Tuple[int, ...]) -> int:
    """Number of pairs s < t with w(s) > w(t)."""
    return sum(1 for s, t in combinations(range(len(w)), 2) if w[s] > w[t])


def reduced_word(w: Tuple[int, ...]) -> ReducedWord:
    """
    Canonical reduced word by insertion sort.

    Sorting the one-line notation with adjacent swaps at positions
    k_1, ..., k_l gives w o s_{k_1} o ... o s_{k_l} = id, so the word is the
    swap sequence reversed. Every swap removes exactly one inversion.
    """
    images = list(w)
    swaps: List[int] = []
    for j in range(1, len(images)):
        k = j
        while k > 0 and images[k - 1] > images[k]:
            images[k - 1], images[k] = images[k], images[k - 1]
            swaps.append(k)
            k -= 1
    return ReducedWord(tuple(reversed(swaps)))


def word_to_perm(word: Tuple[int, ...], p: int) -> Perm:
    """Apply the letters of a word to the identity of S_p, left to right."""
    images = list(range(1, p + 1))
    for k in word:
        if not 1 <= k <= p - 1:
            raise GradeMismatchError(f"letter {k} out of range for S_{p}")
        images[k - 1], images[k] = images[k], images[k - 1]
    return Perm(tuple(images))


def reduced_words(w: Tuple[int, ...]) -> List[ReducedWord]:
    """All reduced words of w, in lexicographic order."""
    w = tuple(w)
    if length(w) == 0:
        return [ReducedWord(())]
    words = []
    for k in range(1, len(w)):
        # k is a right descent: w = (w o s_k) o s_k with shorter w o s_k
        if w[k - 1] > w[k]:
            shorter = list(w)
            shorter[k - 1], shorter[k] = shorter[k], shorter[k - 1]
            words.extend(ReducedWord(prefix + (k,)) for prefix in reduced_words(tuple(shorter)))
    return sorted(words)


# set by lifted_bound for the duration of a forced command
_lifted: ContextVar[Optional[int]] = ContextVar("enumeration_bound", default=None)


def enumeration_limit() -> int:
    """The largest p that may be enumerated: the configured bound, or a lifted one."""
    lifted = _lifted.get()
    return lifted if lifted is not None else get_settings().enumeration_bound


@contextmanager
def lifted_bound(limit: int) -> Iterator[int]:
    """
    Allow enumeration up to `limit` inside the block.

    The configured bound only ever grows here: a limit below it leaves the
    configured bound in force.

    Args:
        limit: Largest p to enumerate while the block runs

    Yields:
        The limit in force inside the block
    """
    effective = max(limit, get_settings().enumeration_bound)
    token = _lifted.set(effective)
    try:
        yield effective
    finally:
        _lifted.reset(token)


def check_bound(p: int) -> None:
    bound = enumeration_limit()
    if p > bound:
        raise BoundExceededError("p", p, bound)


def enumerate_group(p: int) -> List[Perm]:
    """All p! permutations of 1..p in lexicographic order of one-line notation."""
    check_bound(p)
    return [Perm(w) for w in permutations(range(1, p + 1))]


def enumerate_shuffles(i: int, j: int) -> List[Perm]:
    """
    All (i, j)-shuffles: w(1) < ... < w(i) and w(i+1) < ... < w(i+j).

    A shuffle is fixed by the set {w(1), ..., w(i)}, so enumeration is over
    i-subsets, which yields lexicographic order without touching S_{i+j}.
    """
    if i < 0 or j < 0:
        raise GradeMismatchError("shuffle sizes must be nonnegative")
    n = i + j
    shuffles = []
    for head in combinations(range(1, n + 1), i):
        tail = tuple(v for v in range(1, n + 1) if v not in head)
        shuffles.append(Perm(head + tail))
    return shuffles


def compose(u: Tuple[int, ...], v: Tuple[int, ...]) -> Perm:
    """(u o v)(k) = u(v(k))."""
    return Perm(tuple(u[v[k] - 1] for k in range(len(v))))


def inverse(w: Tuple[int, ...]) -> Perm:
    images = [0] * len(w)
    for k, value in enumerate(w, start=1):
        images[value - 1] = k
    return Perm(tuple(images))
