"""Hypothesis strategies for surfaces, words and loop combinations."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from totaljohnson.goldman import GoldmanElement, PathElement
from totaljohnson.magnus import TensorSeries, TruncationContext, cyclic_project
from totaljohnson.surface import FatSurface
from totaljohnson.words import Alphabet, cyclic_canonical, reduce


@st.composite
def surfaces(draw, min_rank=1, max_rank=5):
    """One-vertex ribbon graph with a random cyclic order of half-edges."""
    n = draw(st.integers(min_rank, max_rank))
    halves = [i + 1 for i in range(n)] + [-(i + 1) for i in range(n)]
    rest = draw(st.permutations(halves[1:]))
    return FatSurface(Alphabet.standard(n), [halves[0], *rest])


def letters(n):
    return st.integers(1, n).flatmap(lambda i: st.sampled_from((i, -i)))


@st.composite
def cyclic_words(draw, n, max_len=3):
    """Nonempty cyclically reduced word, canonically rotated."""
    while True:
        w = draw(st.lists(letters(n), min_size=1, max_size=max_len))
        c = cyclic_canonical(w)
        if c.letters:
            return c


@st.composite
def words(draw, n, max_len=4):
    return reduce(draw(st.lists(letters(n), max_size=max_len)))


coefficients = st.integers(-3, 3).filter(bool).map(Fraction)


@st.composite
def loop_combinations(draw, s: FatSurface, N=6, max_terms=2, max_len=3):
    """Word-form element with a few small terms."""
    k = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(k):
        terms[draw(cyclic_words(s.rank, max_len))] = draw(coefficients)
    return GoldmanElement(s, terms, TruncationContext(N, s.alphabet))


@st.composite
def paths(draw, s: FatSurface, N=6, max_len=3):
    return PathElement.word(s, draw(words(s.rank, max_len)), TruncationContext(N, s.alphabet))


@st.composite
def keys(draw, n, degree):
    return tuple(draw(st.lists(st.integers(0, n - 1), min_size=degree, max_size=degree)))


@st.composite
def homogeneous_elements(draw, s: FatSurface, degree, N=6, max_terms=2):
    """Key-form element ``sum c |prod(x_i - 1)|`` of exact degree ``degree``."""
    acc = TensorSeries.zero(N)
    for _ in range(draw(st.integers(1, max_terms))):
        acc = acc + TensorSeries.monomial(draw(keys(s.rank, degree)), N, draw(coefficients))
    return GoldmanElement.from_series(s, cyclic_project(acc), TruncationContext(N, s.alphabet))


@st.composite
def filtered_elements(draw, s: FatSurface, low=3, N=6, max_terms=3):
    """Key-form element in ``F^low`` with terms spread over degrees ``low .. N-1``."""
    acc = TensorSeries.zero(N)
    for _ in range(draw(st.integers(1, max_terms))):
        d = draw(st.integers(low, N - 1))
        acc = acc + TensorSeries.monomial(draw(keys(s.rank, d)), N, draw(coefficients))
    return GoldmanElement.from_series(s, cyclic_project(acc), TruncationContext(N, s.alphabet))
