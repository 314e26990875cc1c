import pytest
from hypothesis import given, strategies as st

from totaljohnson.words import Alphabet, CyclicWord, GroupHom, Word, WordSyntaxError, cyclic_canonical, reduce

from strategies import letters

A = Alphabet(["a", "b", "c"])
raw_words = st.lists(letters(3), max_size=8)


def test_parse_accepts_both_inverse_spellings():
    assert A.parse("a b' c^-1") == Word((1, -2, -3))
    assert A.parse("a^1") == Word((1,))


@pytest.mark.parametrize("text", ["", "1", "()", "a a'", "b c c' b'"])
def test_identity_spellings(text):
    assert A.parse(text) == Word.identity()


def test_unknown_generator():
    with pytest.raises(WordSyntaxError):
        A.parse("a z")


def test_zero_is_not_a_letter():
    with pytest.raises(ValueError):
        reduce([1, 0])


@given(raw_words)
def test_format_parse_roundtrip(w):
    r = reduce(w)
    assert A.parse(A.format(r)) == r


@given(raw_words)
def test_reduce_is_idempotent_and_reduced(w):
    r = reduce(w)
    assert reduce(r.letters) == r
    assert all(x != -y for x, y in zip(r.letters, r.letters[1:]))


@given(raw_words, raw_words)
def test_inverse_cancels(u, v):
    u, v = reduce(u), reduce(v)
    assert (u * v) * v.inverse() == u
    assert reduce(u.letters + u.inverse().letters) == Word.identity()


@given(raw_words, st.integers(0, 8))
def test_cyclic_canonical_is_conjugation_invariant(w, k):
    w = reduce(w)
    g = reduce(A.parse("a b'").letters)
    conj = reduce(g.letters + w.letters + g.inverse().letters)
    assert cyclic_canonical(conj) == cyclic_canonical(w)
    n = len(w.letters)
    if n:
        rot = w.letters[k % n :] + w.letters[: k % n]
        assert cyclic_canonical(rot) == cyclic_canonical(w)


def test_interning_gives_identical_objects():
    assert Word((1, 2)) is reduce([1, 2, 3, -3])
    assert CyclicWord((1, 2)) is cyclic_canonical([2, 1])


def test_cyclic_power_and_inverse():
    c = A.parse_cyclic("|a b|")
    assert c.power(2) == A.parse_cyclic("a b a b")
    assert c.power(-1) == A.parse_cyclic("b' a'")
    assert c.power(0) == CyclicWord(())


def test_hom_compose_and_identity():
    f = GroupHom.from_strings(A, A, {"a": "a b", "b": "b", "c": "c a'"})
    g = GroupHom.from_strings(A, A, ["b", "a", "c"])
    fg = f.compose(g)
    assert fg(A.parse("a")) == f(g(A.parse("a"))) == A.parse("b")
    assert GroupHom.identity(A).is_identity()
    assert not f.is_identity()
    assert GroupHom.from_strings(A, A, f.to_strings()) == f


def test_hom_rejects_bad_images():
    with pytest.raises(ValueError):
        GroupHom.from_strings(A, A, {"a": "a"})
    with pytest.raises(ValueError):
        GroupHom(A, Alphabet(["a"]), [Word((1,)), Word((2,)), Word((1,))])


def test_hom_maps_conjugacy_classes():
    f = GroupHom.from_strings(A, A, {"a": "b a b'", "b": "b", "c": "c"})
    assert f(A.parse_cyclic("a")) == A.parse_cyclic("a")
