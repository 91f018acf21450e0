"""
Hypothesis strategies for Scalars, permutations, small matrices and documents.
"""
from itertools import combinations

from hypothesis import strategies as st

from src.algebra import linalg
from src.algebra.scalars import ZERO, from_fraction, qpow, to_text
from src.schemas.documents import BraidingDocument, ContextDescriptor, EndoComponent, EndoDocument

coefficients = st.integers(min_value=-3, max_value=3)


@st.composite
def laurent(draw, low=-2, high=2):
    """Σ_{k=low..high} c_k q^k with small integer c_k."""
    value = ZERO
    for k in range(low, high + 1):
        c = draw(coefficients)
        if c:
            value += from_fraction(c) * qpow(k)
    return value


def nonzero_laurent():
    return laurent().filter(bool)


@st.composite
def scalars(draw):
    """Quotients of Laurent polynomials."""
    return draw(laurent()) / draw(nonzero_laurent())


def perms(max_p=6):
    return st.integers(min_value=0, max_value=max_p).flatmap(
        lambda p: st.permutations(list(range(1, p + 1))).map(tuple)
    )


@st.composite
def matrices(draw, n):
    return linalg.matrix([[draw(laurent(-1, 1)) for _ in range(n)] for _ in range(n)], (n, n))


def scalar_texts():
    return scalars().map(to_text)


@st.composite
def braiding_documents(draw):
    """Braiding documents with canonical fields; the axioms are not imposed."""
    dim = draw(st.integers(min_value=1, max_value=3))
    pairs = [(a, b) for a in range(1, dim + 1) for b in range(1, dim + 1)]
    hecke_param = None
    if draw(st.booleans()):
        hecke_param = draw(scalar_texts())
        roots = draw(st.permutations(["-1", hecke_param]))
    else:
        roots = [draw(scalar_texts()), draw(scalar_texts())]
    keys = st.tuples(st.sampled_from(pairs), st.sampled_from(pairs))
    values = draw(st.dictionaries(keys, scalar_texts(), max_size=6))
    return BraidingDocument(
        dim=dim,
        roots=tuple(roots),
        hecke_param=hecke_param,
        entries=[(row, col, value) for (row, col), value in values.items()],
    )


@st.composite
def _square(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    return [[draw(scalar_texts()) for _ in range(n)] for _ in range(n)]


@st.composite
def endo_documents(draw):
    """Endomorphism documents over builtin contexts, in matrix or wedge-record form."""
    name = draw(st.sampled_from(["sl-exterior", "sl-dual", "flip"]))
    N = draw(st.integers(min_value=1, max_value=2))
    bound = draw(st.integers(min_value=1, max_value=4))
    grades = draw(st.lists(st.integers(min_value=0, max_value=N + 1), unique=True, max_size=3))
    wedge = name == "sl-exterior" and draw(st.booleans())
    components = []
    for grade in grades:
        if wedge:
            indices = [tuple(c) for c in combinations(range(1, N + 2), grade)]
            values = draw(st.dictionaries(
                st.tuples(st.sampled_from(indices), st.sampled_from(indices)), scalar_texts(), max_size=4
            ))
            records = [(row, col, value) for (row, col), value in values.items()]
            components.append(EndoComponent(grade=grade, entries=records))
        else:
            components.append(EndoComponent(grade=grade, matrix=draw(_square())))
    return EndoDocument(
        context=ContextDescriptor(builtin=name, N=N, bound=bound),
        components=components,
    )
