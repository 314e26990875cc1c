"""Free-group words, cyclic words and homomorphisms between free groups.

Letters are nonzero integers: ``+(i+1)`` is generator ``i`` and ``-(i+1)`` its
inverse.  :class:`Word` and :class:`CyclicWord` are immutable and hash-consed,
so equal values are usually the same object and hashing is cheap.
"""

from __future__ import annotations

import re
import threading
import weakref
from typing import Iterable, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "CyclicWord",
    "GroupHom",
    "WordSyntaxError",
    "reduce",
    "cyclic_canonical",
    "apply_hom",
    "letter_key",
]


class WordSyntaxError(ValueError):
    """Raised when a word string cannot be parsed."""


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Alphabet:
    """Generator labels of a free group of finite rank."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"generator labels must be distinct: {names}")
        for n in names:
            if not _NAME_RE.match(n):
                raise ValueError(f"invalid generator label {n!r}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    @classmethod
    def standard(cls, size: int) -> "Alphabet":
        if size <= 26:
            return cls([chr(ord("a") + i) for i in range(size)])
        return cls([f"x{i}" for i in range(size)])

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordSyntaxError(f"unknown generator {name!r}") from None

    def letter_name(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name + "'"

    def parse(self, text: str) -> "Word":
        """Parse ``a b a' b^-1`` style text into a reduced word."""
        letters = []
        text = text.strip()
        if text in ("", "1", "()"):
            return Word.identity()
        for tok in text.split():
            inverse = False
            if tok.endswith("^-1"):
                tok, inverse = tok[:-3], True
            elif tok.endswith("'"):
                tok, inverse = tok[:-1], True
            elif tok.endswith("^1"):
                tok = tok[:-2]
            i = self.index(tok)
            letters.append(-(i + 1) if inverse else i + 1)
        return reduce(letters)

    def parse_cyclic(self, text: str) -> "CyclicWord":
        text = text.strip()
        if text.startswith("|") and text.endswith("|") and len(text) >= 2:
            text = text[1:-1]
        return cyclic_canonical(self.parse(text))

    def format(self, w: "Word | CyclicWord | Iterable[int]") -> str:
        letters = w.letters if isinstance(w, (Word, CyclicWord)) else tuple(w)
        if not letters:
            return "1"
        return " ".join(self.letter_name(l) for l in letters)

    def format_cyclic(self, c: "CyclicWord") -> str:
        return "|" + self.format(c) + "|"

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)!r})"


def letter_key(letter: int) -> int:
    """Total order on signed letters: a < a' < b < b' < ..."""
    return 2 * (abs(letter) - 1) + (letter < 0)


class _Interned:
    """Hash-consing base: one live instance per letter tuple."""

    __slots__ = ("letters", "_hash", "__weakref__")
    _table: "weakref.WeakValueDictionary"
    _lock: threading.Lock

    def __new__(cls, letters: tuple):
        with cls._lock:
            obj = cls._table.get(letters)
            if obj is None:
                obj = object.__new__(cls)
                obj.letters = letters
                obj._hash = hash((cls.__name__, letters))
                cls._table[letters] = obj
            return obj

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is type(self) and other.letters == self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __reduce__(self):
        return (type(self)._rebuild, (self.letters,))

    @classmethod
    def _rebuild(cls, letters):
        return cls(tuple(letters))


class Word(_Interned):
    """A freely reduced word.  Construct with :func:`reduce` or ``Word.of``."""

    __slots__ = ()
    _table = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    @classmethod
    def of(cls, letters: Iterable[int]) -> "Word":
        return reduce(letters)

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)))

    def __lt__(self, other: "Word") -> bool:
        return _sort_key(self.letters) < _sort_key(other.letters)

    def __repr__(self):
        return f"Word({list(self.letters)})"


class CyclicWord(_Interned):
    """A conjugacy class, stored as its least cyclically reduced rotation."""

    __slots__ = ()
    _table = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    def word(self) -> Word:
        return Word(self.letters)

    def inverse(self) -> "CyclicWord":
        return cyclic_canonical(self.word().inverse())

    def power(self, k: int) -> "CyclicWord":
        if k < 0:
            return self.inverse().power(-k)
        return cyclic_canonical(Word(self.letters * k)) if k else CyclicWord(())

    def __lt__(self, other: "CyclicWord") -> bool:
        return _sort_key(self.letters) < _sort_key(other.letters)

    def __repr__(self):
        return f"CyclicWord({list(self.letters)})"


def _sort_key(letters: tuple) -> tuple:
    return (len(letters), tuple(letter_key(l) for l in letters))


def reduce(w: "Word | Iterable[int]") -> Word:
    """Freely reduce a letter sequence."""
    if isinstance(w, Word):
        return w
    out: list[int] = []
    for l in w:
        if l == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return Word(tuple(out))


def _least_rotation(letters: tuple) -> tuple:
    n = len(letters)
    if n <= 1:
        return letters
    keys = [letter_key(l) for l in letters]
    # Booth's algorithm for the lexicographically least rotation.
    s = keys + keys
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        i = f[j - k - 1]
        while i != -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return letters[k:] + letters[:k]


def cyclic_canonical(w: "Word | Iterable[int]") -> CyclicWord:
    """Conjugacy class of a word: cyclically reduce, then rotate to the least form."""
    letters = reduce(w).letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    return CyclicWord(_least_rotation(letters[lo:hi]))


class GroupHom:
    """Homomorphism of free groups given by the images of the generators."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: Alphabet, target: Alphabet, images: Sequence[Word]):
        images = tuple(reduce(w) for w in images)
        if len(images) != source.size:
            raise ValueError(
                f"expected {source.size} generator images, got {len(images)}"
            )
        for w in images:
            for l in w.letters:
                if abs(l) > target.size:
                    raise ValueError("image word uses a letter outside the target alphabet")
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "GroupHom":
        return cls(alphabet, alphabet, [Word((i + 1,)) for i in range(alphabet.size)])

    @classmethod
    def from_strings(cls, source: Alphabet, target: Alphabet, images) -> "GroupHom":
        """``images`` is a list in generator order or a name -> word-string map."""
        if isinstance(images, dict):
            missing = set(source.names) - set(images)
            if missing:
                raise ValueError(f"missing images for {sorted(missing)}")
            images = [images[n] for n in source.names]
        return cls(source, target, [target.parse(s) for s in images])

    def __call__(self, w):
        return apply_hom(self, w)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """Return ``self ∘ first``."""
        if first.target != self.source:
            raise ValueError("alphabet mismatch in composition")
        return GroupHom(first.source, self.target, [apply_hom(self, w) for w in first.images])

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            w.letters == (i + 1,) for i, w in enumerate(self.images)
        )

    def to_strings(self) -> dict:
        return {n: self.target.format(w) for n, w in zip(self.source.names, self.images)}

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        return f"GroupHom({self.to_strings()!r})"


def apply_hom(f: GroupHom, w):
    """Image of a word (or of a cyclic word, as a conjugacy class) under ``f``."""
    cyclic = isinstance(w, CyclicWord)
    letters = w.letters if isinstance(w, (Word, CyclicWord)) else tuple(w)
    out: list[int] = []
    for l in letters:
        if abs(l) > f.source.size:
            raise ValueError("alphabet mismatch: letter outside the source alphabet")
        img = f.images[abs(l) - 1].letters
        if l < 0:
            img = tuple(-x for x in reversed(img))
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return cyclic_canonical(out) if cyclic else Word(tuple(out))
