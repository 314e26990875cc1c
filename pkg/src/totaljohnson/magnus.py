"""Truncated Magnus expansions and noncommutative power series.

Generator ``i`` expands as ``1 + X_i``.  A :class:`TensorSeries` stores the
monomials ``X_{k_1} ... X_{k_r}`` (``r < N``) as index tuples with exact
rational coefficients.  :class:`CyclicTensorSeries` stores the same data modulo
rotation of monomials; it is the normal form used to compare elements of the
Goldman Lie algebra modulo ``F^N``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple

from .words import Alphabet, CyclicWord, Word, cyclic_canonical, reduce

__all__ = [
    "TOP",
    "TruncationContext",
    "TensorSeries",
    "CyclicTensorSeries",
    "magnus",
    "filtration_degree",
    "log_series",
    "exp_series",
    "cyclic_project",
    "canonical_key",
    "L_element",
    "L_coefficients",
]

#: Degree of a series with no surviving terms; compares greater than any int.
TOP = math.inf

Key = Tuple[int, ...]


@dataclass(frozen=True)
class TruncationContext:
    """All computations are carried out modulo ``F^N``."""

    N: int
    alphabet: Alphabet

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")

    def with_N(self, N: int) -> "TruncationContext":
        return TruncationContext(N, self.alphabet)


@lru_cache(maxsize=None)
def canonical_key(key: Key) -> Key:
    """Least rotation of an index tuple."""
    if len(key) <= 1:
        return key
    return min(key[i:] + key[:i] for i in range(len(key)))


def _clean(terms: Mapping[Key, Fraction], N: int) -> Dict[Key, Fraction]:
    return {k: Fraction(c) for k, c in terms.items() if c and len(k) < N}


class _SeriesBase:
    __slots__ = ("terms", "N")

    def __init__(self, terms: Mapping[Key, Fraction] | None = None, N: int = 1):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.N = N
        self.terms = _clean(terms or {}, N)

    @classmethod
    def _raw(cls, terms: Dict[Key, Fraction], N: int):
        obj = object.__new__(cls)
        obj.N = N
        obj.terms = terms
        return obj

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def _combine(self, other, sign: int):
        self._check(other)
        N = min(self.N, other.N)
        out = {k: c for k, c in self.terms.items() if len(k) < N}
        for k, c in other.terms.items():
            if len(k) < N:
                v = out.get(k, 0) + sign * c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return type(self)._raw(out, N)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)._raw({k: -c for k, c in self.terms.items()}, self.N)

    def scale(self, s) -> "_SeriesBase":
        s = Fraction(s)
        if not s:
            return type(self)._raw({}, self.N)
        return type(self)._raw({k: s * c for k, c in self.terms.items()}, self.N)

    def __rmul__(self, s):
        return self.scale(s)

    def truncate(self, N: int):
        N = min(N, self.N)
        return type(self)._raw({k: c for k, c in self.terms.items() if len(k) < N}, N)

    def homogeneous(self, d: int):
        """Degree-``d`` part, keeping the truncation level."""
        return type(self)._raw({k: c for k, c in self.terms.items() if len(k) == d}, self.N)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def degree(self):
        return filtration_degree(self)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        N = min(self.N, other.N)
        return self.truncate(N).terms == other.truncate(N).terms

    __hash__ = None

    def items(self):
        return sorted(self.terms.items(), key=lambda kc: (len(kc[0]), kc[0]))

    def format(self, alphabet: Alphabet | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.items():
            if alphabet is not None:
                mono = "".join(alphabet.names[i].upper() for i in k) if k else "1"
                if any(len(n) > 1 for n in alphabet.names):
                    mono = "*".join(alphabet.names[i].upper() for i in k) or "1"
            else:
                mono = "".join(f"X{i}" for i in k) or "1"
            parts.append(f"{'+' if c > 0 else '-'}{abs(c)} * {mono}")
        return " ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({self.format()}, N={self.N})"


class TensorSeries(_SeriesBase):
    """Truncated noncommutative power series in ``X_0, X_1, ...``."""

    __slots__ = ()

    @classmethod
    def one(cls, N: int) -> "TensorSeries":
        return cls._raw({(): Fraction(1)}, N)

    @classmethod
    def zero(cls, N: int) -> "TensorSeries":
        return cls._raw({}, N)

    @classmethod
    def monomial(cls, key: Key, N: int, coeff=1) -> "TensorSeries":
        return cls({tuple(key): Fraction(coeff)}, N)

    def __mul__(self, other):
        if not isinstance(other, TensorSeries):
            return self.scale(other)
        N = min(self.N, other.N)
        return TensorSeries._raw(_mul_terms(self.terms, other.terms, N), N)

    def __pow__(self, k: int) -> "TensorSeries":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = TensorSeries.one(self.N)
        for _ in range(k):
            out = out * self
        return out


def _mul_terms(a: Mapping[Key, Fraction], b: Mapping[Key, Fraction], N: int) -> Dict[Key, Fraction]:
    out: Dict[Key, Fraction] = defaultdict(Fraction)
    for k1, c1 in a.items():
        room = N - len(k1)
        if room <= 0:
            continue
        for k2, c2 in b.items():
            if len(k2) < room:
                out[k1 + k2] += c1 * c2
    return {k: c for k, c in out.items() if c}


class CyclicTensorSeries(_SeriesBase):
    """Truncated series modulo rotation of monomials (keys are least rotations)."""

    __slots__ = ()

    def __init__(self, terms: Mapping[Key, Fraction] | None = None, N: int = 1):
        acc: Dict[Key, Fraction] = defaultdict(Fraction)
        for k, c in (terms or {}).items():
            acc[canonical_key(tuple(k))] += Fraction(c)
        super().__init__(acc, N)

    @classmethod
    def zero(cls, N: int) -> "CyclicTensorSeries":
        return cls._raw({}, N)


def filtration_degree(e: _SeriesBase):
    """Least degree carrying a nonzero coefficient, or ``TOP``."""
    if not e.terms:
        return TOP
    return min(len(k) for k in e.terms)


@lru_cache(maxsize=200_000)
def _magnus_cached(letters: tuple, N: int) -> Dict[Key, Fraction]:
    terms: Dict[Key, Fraction] = {(): Fraction(1)}
    for l in letters:
        i = abs(l) - 1
        out: Dict[Key, Fraction] = defaultdict(Fraction)
        for k, c in terms.items():
            out[k] += c
            room = N - 1 - len(k)
            if l > 0:
                if room >= 1:
                    out[k + (i,)] += c
            else:
                sign = -1
                for j in range(1, room + 1):
                    out[k + (i,) * j] += sign * c
                    sign = -sign
        terms = {k: c for k, c in out.items() if c}
    return terms


def magnus(w, ctx_or_N) -> TensorSeries:
    """Magnus expansion of a word, truncated below degree ``N``."""
    N = ctx_or_N.N if isinstance(ctx_or_N, TruncationContext) else int(ctx_or_N)
    letters = w.letters if isinstance(w, (Word, CyclicWord)) else reduce(w).letters
    return TensorSeries._raw(dict(_magnus_cached(letters, N)), N)


def log_series(e: TensorSeries) -> TensorSeries:
    """``log(e)`` for a series with constant term 1."""
    if e.constant() != 1:
        raise ValueError("log_series needs constant term 1")
    x = e - TensorSeries.one(e.N)
    out = TensorSeries.zero(e.N)
    power = TensorSeries.one(e.N)
    for k in range(1, e.N):
        power = power * x
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def exp_series(e: TensorSeries) -> TensorSeries:
    """``exp(e)`` for a series with constant term 0."""
    if e.constant() != 0:
        raise ValueError("exp_series needs constant term 0")
    out = TensorSeries.one(e.N)
    power = TensorSeries.one(e.N)
    for k in range(1, e.N):
        power = (power * e).scale(Fraction(1, k))
        if power.is_zero():
            break
        out = out + power
    return out


def cyclic_project(e: TensorSeries) -> CyclicTensorSeries:
    """Sum coefficients over rotation classes of monomials."""
    if isinstance(e, CyclicTensorSeries):
        return e
    return CyclicTensorSeries(e.terms, e.N)


def L_coefficients(m, N: int) -> Dict[int, Fraction]:
    """Coefficients ``a_j`` with ``1/2 (log g)^2 = sum_j a_j g^j`` modulo ``F^N``.

    ``m`` is the filtration degree of ``g - 1``.  Only powers ``(g-1)^n`` with
    ``n*m < N`` contribute; each is expanded binomially into powers of ``g``.
    """
    if m == TOP or m * 2 >= N:
        return {}
    out: Dict[int, Fraction] = defaultdict(Fraction)
    n = 2
    while n * m < N:
        a_n = Fraction(0)
        for k in range(1, n):
            a_n += Fraction((-1) ** n, k * (n - k))
        a_n /= 2
        for j in range(n + 1):
            out[j] += a_n * math.comb(n, j) * (-1) ** (n - j)
        n += 1
    return {j: c for j, c in out.items() if c}


def L_element(c: CyclicWord, ctx: TruncationContext, surface=None):
    """The twist generator ``1/2 |(log g)^2|`` for ``|g| = c``, modulo ``F^N``."""
    from .goldman import GoldmanElement

    if not isinstance(c, CyclicWord):
        c = cyclic_canonical(c)
    if not c.letters:
        return GoldmanElement(surface, {}, ctx)
    m = filtration_degree(magnus(c.word(), ctx) - TensorSeries.one(ctx.N))
    terms: Dict[CyclicWord, Fraction] = {}
    for j, a in L_coefficients(m, ctx.N).items():
        w = c.power(j)
        terms[w] = terms.get(w, Fraction(0)) + a
    return GoldmanElement(surface, terms, ctx, known=ctx.N)
