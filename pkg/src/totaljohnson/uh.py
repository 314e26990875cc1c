"""The algebra ``U_h``: tensors of loop classes modulo ``x⊗y - y⊗x = h[x, y]``.

Tensor factors are cyclic Magnus keys ``|(x_{k_1} - 1)...(x_{k_r} - 1)|``, the
basis in which :class:`~totaljohnson.goldman.GoldmanElement` stores its normal
form.  A term ``h^i * f_1⊗...⊗f_j`` has filtration ``2i + |f_1| + ... + |f_j|``
and is dropped once that reaches ``N``.  Terms are kept in normal order: the
factors are sorted by ``(length, key)``, which the defining relation always
achieves.

Negative powers of ``h`` represent the extension ``sum_s h^{-s} F^{3s}`` used by
:func:`exp_h` and :func:`log_h`; the same filtration formula applies there.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .goldman import DegreeError, GoldmanElement, _pushed_key, bch, key_bracket, push_forward
from .magnus import TOP, CyclicTensorSeries, TensorSeries, TruncationContext, cyclic_project, magnus
from .surface import FatSurface, StdEmbedding
from .words import GroupHom, Word

__all__ = [
    "UhElement",
    "psi",
    "project",
    "uh_mul",
    "uh_bracket",
    "uh_bracket_leibniz",
    "uh_scalar",
    "exp_h",
    "log_h",
    "push_factorwise",
    "kappa_exp_check",
    "DegreeSequence",
    "delta_sequence",
    "delta",
    "product_degree_bound",
    "power_product",
    "SkeinBlocks",
    "skein_blocks",
    "l_corrections",
]

Key = Tuple[int, ...]
Factors = Tuple[Key, ...]
TermKey = Tuple[int, Factors]


def _order(k: Key):
    return (len(k), k)


def _filtration(t: TermKey) -> int:
    return 2 * t[0] + sum(len(f) for f in t[1])


class UhElement:
    """Finite combination of normal-ordered terms ``h^i * f_1⊗...⊗f_j`` modulo ``F^N``."""

    __slots__ = ("surface", "N", "terms")

    def __init__(self, surface: FatSurface, terms: Mapping[TermKey, Fraction], N: int):
        self.surface = surface
        self.N = N
        self.terms: Dict[TermKey, Fraction] = {}
        for (i0, fs), c in terms.items():
            fs = tuple(tuple(f) for f in fs)
            if list(fs) != sorted(fs, key=_order):
                raise ValueError("terms must be normal ordered; build products with uh_mul")
            if c and 2 * i0 + sum(len(f) for f in fs) < N:
                self.terms[(i0, fs)] = self.terms.get((i0, fs), 0) + Fraction(c)
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def _raw(cls, surface, terms, N) -> "UhElement":
        obj = object.__new__(cls)
        obj.surface = surface
        obj.N = N
        obj.terms = terms
        return obj

    @classmethod
    def one(cls, surface: FatSurface, N: int) -> "UhElement":
        return cls._raw(surface, {(0, ()): Fraction(1)}, N)

    @classmethod
    def zero(cls, surface: FatSurface, N: int) -> "UhElement":
        return cls._raw(surface, {}, N)

    def _check(self, other: "UhElement"):
        if not isinstance(other, UhElement):
            raise TypeError("expected a UhElement")
        if other.surface != self.surface:
            raise ValueError("surface mismatch")

    def _combine(self, other, sign):
        self._check(other)
        N = min(self.N, other.N)
        out = defaultdict(Fraction)
        for t, c in self.terms.items():
            if _filtration(t) < N:
                out[t] += c
        for t, c in other.terms.items():
            if _filtration(t) < N:
                out[t] += sign * c
        return UhElement._raw(self.surface, {t: c for t, c in out.items() if c}, N)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "UhElement":
        s = Fraction(s)
        return UhElement._raw(self.surface, {t: s * c for t, c in self.terms.items()} if s else {}, self.N)

    def h_shift(self, k: int) -> "UhElement":
        """Multiply by ``h^k``; the truncation level moves with it."""
        return UhElement._raw(self.surface, {(i + k, fs): c for (i, fs), c in self.terms.items()}, self.N + 2 * k)

    def truncate(self, N: int) -> "UhElement":
        N = min(N, self.N)
        return UhElement._raw(self.surface, {t: c for t, c in self.terms.items() if _filtration(t) < N}, N)

    def degree(self):
        if not self.terms:
            return TOP
        return min(_filtration(t) for t in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, UhElement):
            return NotImplemented
        N = min(self.N, other.N)
        return self.surface == other.surface and self.truncate(N).terms == other.truncate(N).terms

    __hash__ = None

    def format(self) -> str:
        if not self.terms:
            return "0"
        names = self.surface.alphabet.names
        parts = []
        for (i0, fs), c in sorted(self.terms.items(), key=lambda kv: (_filtration(kv[0]), kv[0][0], kv[0][1])):
            pieces = []
            if i0:
                pieces.append("h" if i0 == 1 else f"h^{i0}")
            if fs:
                pieces.append("⊗".join(_fmt_factor(f, names) for f in fs))
            body = " * ".join(pieces) if pieces else "1"
            parts.append(f"{'+' if c > 0 else '-'}{abs(c)} * {body}")
        return " ".join(parts)

    __str__ = format

    def __repr__(self):
        return f"UhElement({self.format()}, N={self.N})"


def _fmt_factor(f: Key, names) -> str:
    if not f:
        return "|1|"
    return "|" + "".join(f"({names[i]}-1)" for i in f) + "|"


# normal ordering --------------------------------------------------------------

_CACHES: Dict[FatSurface, Dict] = {}


def _normal(s: FatSurface, seq: Factors, room: int) -> Dict[TermKey, Fraction]:
    """Rewrite ``seq`` into normal order; ``room`` bounds the filtration kept."""
    cache = _CACHES.setdefault(s, {})
    hit = cache.get((seq, room))
    if hit is not None:
        return hit
    out: Dict[TermKey, Fraction] = defaultdict(Fraction)
    if sum(len(f) for f in seq) >= room:
        cache[(seq, room)] = {}
        return {}
    for i in range(len(seq) - 1):
        if _order(seq[i]) > _order(seq[i + 1]):
            break
    else:
        cache[(seq, room)] = {(0, seq): Fraction(1)}
        return cache[(seq, room)]
    y, x = seq[i], seq[i + 1]
    for t, c in _normal(s, seq[:i] + (x, y) + seq[i + 2 :], room).items():
        out[t] += c
    # y⊗x = x⊗y + h[y, x]
    rest = sum(len(f) for f in seq) - len(x) - len(y)
    kN = room - 2 - rest
    if kN > 0:
        for k, v in key_bracket(s, y, x, kN).items():
            for (dh, fs), c in _normal(s, seq[:i] + (k,) + seq[i + 2 :], room - 2).items():
                out[(dh + 1, fs)] += v * c
    res = {t: c for t, c in out.items() if c}
    cache[(seq, room)] = res
    return res


def _collect(s, pieces, N) -> UhElement:
    out: Dict[TermKey, Fraction] = defaultdict(Fraction)
    for i0, seq, c in pieces:
        for (dh, fs), v in _normal(s, seq, N - 2 * i0).items():
            out[(i0 + dh, fs)] += c * v
    return UhElement._raw(s, {t: c for t, c in out.items() if c}, N)


def uh_mul(x: UhElement, y: UhElement, N: Optional[int] = None) -> UhElement:
    """Product in ``U_h``, normal ordered, modulo ``F^N`` (default: the smaller level)."""
    x._check(y)
    if N is None:
        N = min(x.N, y.N)
    pieces = []
    for (i1, f1), c1 in x.terms.items():
        for (i2, f2), c2 in y.terms.items():
            if _filtration((i1 + i2, f1 + f2)) < N:
                pieces.append((i1 + i2, f1 + f2, c1 * c2))
    return _collect(x.surface, pieces, N)


def uh_scalar(s: FatSurface, c, N: int) -> UhElement:
    return UhElement._raw(s, {(0, ()): Fraction(c)} if c else {}, N)


def _divide_by_h(z: UhElement, allow_negative: bool) -> UhElement:
    out = {}
    for (i0, fs), c in z.terms.items():
        if i0 < 1 and not allow_negative:
            raise ArithmeticError("element is not divisible by h")
        out[(i0 - 1, fs)] = c
    return UhElement._raw(z.surface, out, z.N - 2)


def uh_bracket(x: UhElement, y: UhElement) -> UhElement:
    """``(1/h)(x y - y x)``; known two levels below the inputs."""
    N = min(x.N, y.N)
    comm = uh_mul(x, y, N) - uh_mul(y, x, N)
    extended = any(i0 < 0 for (i0, _) in list(x.terms) + list(y.terms))
    return _divide_by_h(comm, extended)


def uh_bracket_leibniz(x: UhElement, y: UhElement) -> UhElement:
    """The same bracket expanded term by term with the Leibniz rule."""
    x._check(y)
    s = x.surface
    N = min(x.N, y.N) - 2
    pieces = []
    for (i1, xs), c1 in x.terms.items():
        for (i2, ys), c2 in y.terms.items():
            i0 = i1 + i2
            total = sum(len(f) for f in xs) + sum(len(f) for f in ys)
            for a, xa in enumerate(xs):
                for b, yb in enumerate(ys):
                    kN = N - 2 * i0 - (total - len(xa) - len(yb))
                    if kN <= 0:
                        continue
                    for k, v in key_bracket(s, xa, yb, kN).items():
                        seq = xs[:a] + ys[:b] + (k,) + ys[b + 1 :] + xs[a + 1 :]
                        pieces.append((i0, seq, c1 * c2 * v))
    return _collect(s, pieces, N)


# Psi maps -----------------------------------------------------------------------


def psi(x: GoldmanElement, N: Optional[int] = None) -> UhElement:
    """Natural injection of loop combinations as single-factor tensors."""
    N = x.ctx.N if N is None else N
    series = x.series_at(min(N, x.known_to()))
    return UhElement._raw(x.surface, {(0, (k,)): c for k, c in series.terms.items() if len(k) < N}, N)


def project(u: UhElement, ctx: Optional[TruncationContext] = None) -> GoldmanElement:
    """Natural surjection: keep the single-factor, ``h``-free part."""
    N = u.N if ctx is None else ctx.N
    if ctx is None:
        ctx = TruncationContext(N, u.surface.alphabet)
    terms = {fs[0]: c for (i0, fs), c in u.terms.items() if i0 == 0 and len(fs) == 1 and len(fs[0]) < N}
    return GoldmanElement.from_series(u.surface, CyclicTensorSeries._raw(terms, N), ctx)


# the 1/h extension -----------------------------------------------------------------


def exp_h(x: UhElement) -> UhElement:
    """``sum_i x^i / (i! h^i)`` for ``x`` in ``F^3`` without ``h``-powers.

    ``x`` known modulo ``F^M`` determines the result modulo ``F^{M-2}``.
    """
    if any(i0 != 0 for (i0, _) in x.terms):
        raise DegreeError("exp_h needs an h-free argument")
    if x.degree() < 3:
        raise DegreeError("exp_h needs x in F^3")
    N = x.N - 2
    s = x.surface
    total = UhElement.one(s, N)
    power = UhElement.one(s, N + 2)
    i = 1
    while i < N:
        power = uh_mul(power, x, N + 2 * i)
        if power.is_zero():
            break
        total = total + power.h_shift(-i).scale(Fraction(1, math.factorial(i))).truncate(N)
        i += 1
    return total


def log_h(e: UhElement) -> UhElement:
    """``h log(e)`` for ``e = 1 + u`` with ``u`` in positive extension filtration."""
    s = e.surface
    one = UhElement.one(s, e.N)
    u = e - one
    if u.degree() < 1:
        raise DegreeError("log_h needs e - 1 of positive filtration")
    total = UhElement.zero(s, e.N)
    power = one
    k = 1
    while True:
        power = uh_mul(power, u, e.N)
        if power.is_zero():
            break
        total = total + power.scale(Fraction((-1) ** (k + 1), k))
        k += 1
    return total.h_shift(1)


def push_factorwise(f: GroupHom, u: UhElement, target: FatSurface) -> UhElement:
    """Apply ``f`` to every tensor factor, then restore normal order on ``target``."""
    pieces = []
    for (i0, fs), c in u.terms.items():
        expansions = [((), Fraction(1))]
        total = sum(len(k) for k in fs)
        for k in fs:
            # room left for this factor once h^i0 and the other factors are counted
            room = u.N - 2 * i0 - (total - len(k))
            if room <= 0:
                expansions = []
                break
            img = _pushed_key(f, k, room, True)
            expansions = [(pre + (kk,), pc * v) for pre, pc in expansions for kk, v in img.items()]
        for seq, v in expansions:
            pieces.append((i0, seq, c * v))
    return _collect(target, pieces, u.N)


def kappa_exp_check(x: GoldmanElement, y: GoldmanElement, emb: StdEmbedding) -> bool:
    """Group-induced form of ``exp(Psi(y)/h) = kappa(exp(Psi(x)/h))`` for ``y = v(x)``.

    Three facts are checked modulo the extension level ``N - 2``:
    ``kappa(bch(-iota1 y, x))`` vanishes; ``kappa`` carries
    ``exp_h(Psi(iota1 y))`` factor by factor onto ``exp_h(Psi(y))``; and
    ``exp_h(Psi(x))`` splits as ``exp_h(Psi(iota1 y)) * exp_h(Psi(r))`` with
    ``r = bch(-iota1 y, x)``.
    """
    N = x.ctx.N
    st, tl = emb.sigma_st, emb.sigma_tilde
    if x.is_zero():
        return y.is_zero()
    iy = push_forward(emb.iota1, y, tl, x.ctx)
    r = bch(iy.scale(-1), x)
    if not push_forward(emb.kappa, r, st, TruncationContext(N, st.alphabet)).is_zero():
        return False
    e_iy = exp_h(psi(iy, N))
    e_y = exp_h(psi(y, N))
    if push_factorwise(emb.kappa, e_iy, st) != e_y:
        return False
    rhs = e_iy if r.is_zero() else uh_mul(e_iy, exp_h(psi(r, N)))
    return exp_h(psi(x, N)) == rhs


# degree sequences -----------------------------------------------------------------


@dataclass(frozen=True)
class DegreeSequence:
    """Non-increasing sequence ``b_0, b_1, ...``; the last stored value repeats forever.

    ``TOP`` (``math.inf``) is allowed as a value.
    """

    values: Tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("a degree sequence needs at least one value")
        for a, b in zip(self.values, self.values[1:]):
            if b > a:
                raise ValueError("degree sequences must be non-increasing")
        for v in self.values:
            if v != TOP and (v < 0 or int(v) != v):
                raise ValueError("values must be non-negative integers or TOP")

    def __call__(self, n: int):
        if n < 0:
            raise IndexError("negative index")
        return self.values[min(n, len(self.values) - 1)]

    def prefix(self, length: int) -> Tuple:
        return tuple(self(n) for n in range(length))


def delta_sequence(b1: DegreeSequence, b2: DegreeSequence) -> DegreeSequence:
    """``n -> min{b1(i) + b2(j) : i + j + 2 = n}``, ``TOP`` for ``n < 2``."""
    length = len(b1.values) + len(b2.values) + 1
    vals = []
    for n in range(length):
        if n < 2:
            vals.append(TOP)
            continue
        vals.append(min(b1(i) + b2(n - 2 - i) for i in range(n - 1)))
    return DegreeSequence(tuple(vals))


def delta(*bs: DegreeSequence) -> DegreeSequence:
    """Fold :func:`delta_sequence` over two or more sequences."""
    if len(bs) < 2:
        raise ValueError("delta needs at least two sequences")
    acc = bs[0]
    for b in bs[1:]:
        acc = delta_sequence(acc, b)
    return acc


def product_degree_bound(ms: Sequence[int], m: int) -> int:
    """Lower bound ``2 sum(m_i) + m (sum(m_i) - (2k - 2))`` on product filtration.

    ``m`` is the shift with ``gamma - 1`` in ``I^{m+2}``, so a class of
    degree ``d`` uses ``m = d - 2``.
    """
    k, total = len(ms), sum(ms)
    return 2 * total + m * (total - (2 * k - 2))


def power_product(s: FatSurface, gamma: Word, ms: Sequence[int], N: int) -> UhElement:
    """``Psi(|(gamma - 1)^{m_1}|) * ... * Psi(|(gamma - 1)^{m_k}|)`` in ``U_h``."""
    ctx = TruncationContext(N, s.alphabet)
    g1 = magnus(gamma, N) - TensorSeries.one(N)
    acc = UhElement.one(s, N)
    for mi in ms:
        z = GoldmanElement.from_series(s, cyclic_project(g1 ** mi), ctx)
        acc = uh_mul(acc, psi(z, N))
    return acc


# corrections for boundary knots ---------------------------------------------------------


@dataclass
class SkeinBlocks:
    """Supplied value of ``e'(M^2) - M^2`` for a non-flat embedding ``e'``.

    ``M = Psi(|gamma - 2 + gamma^{-1}|)``.  The difference is divisible by
    ``h``; ``quotient`` is the loop combination with ``h * Psi(quotient)``
    equal to it.
    """

    quotient: GoldmanElement


def _word_series(s: FatSurface, factors, N: int) -> TensorSeries:
    """Product of Magnus series; each factor is ``(word, minus_one)``."""
    acc = TensorSeries.one(N)
    for w, minus_one in factors:
        m = magnus(w, N)
        acc = acc * (m - TensorSeries.one(N) if minus_one else m)
    return acc


def skein_blocks(s: FatSurface, blocks, ctx: TruncationContext) -> SkeinBlocks:
    """``blocks``: list of ``(coeff, [(sign, [(word, minus_one), ...]), ...])``."""
    total = TensorSeries.zero(ctx.N)
    for coeff, products in blocks:
        for sign, factors in products:
            total = total + _word_series(s, factors, ctx.N).scale(Fraction(coeff) * sign)
    return SkeinBlocks(GoldmanElement.from_series(s, cyclic_project(total), ctx))


def l_corrections(
    gamma: Word,
    source: FatSurface,
    e: GroupHom,
    target: FatSurface,
    ctx: TruncationContext,
    skein: Optional[SkeinBlocks] = None,
):
    """``(L1, L2, L3)`` for the boundary knot of a Seifert surface pushed by ``e``.

    ``e`` acts factor by factor (a flat push-forward), so the powers
    ``L^(i)`` are powers of ``L^(1)`` and both corrections vanish.  With
    ``skein`` the second power is replaced by ``L^(1)^2 + (1/4) h Psi(q)``,
    giving ``L2 = (1/8) e(q)``.  ``L3`` lies in ``F^{2m+4}`` and is returned
    as zero in that case: the supplied data does not determine it.
    """
    from .magnus import L_element

    tctx = TruncationContext(ctx.N, target.alphabet)
    U = ctx.N + 4
    sctx = TruncationContext(U, source.alphabet)
    c = source.parse_cyclic(source.alphabet.format(gamma))
    L_src = L_element(c, sctx, source)
    L1 = push_forward(e, L_src, target, TruncationContext(U, target.alphabet))
    l1 = psi(L1, U)
    sq = uh_mul(l1, l1)
    cube = uh_mul(sq, l1)
    L2_num = sq - sq  # flat: e(L^2) - e(L)^2
    if skein is not None:
        q = push_forward(e, skein.quotient, target, TruncationContext(skein.quotient.ctx.N, target.alphabet))
        L2_num = L2_num + psi(q, U - 2).h_shift(1).scale(Fraction(1, 4))
    L2 = project(_divide_by_h(L2_num.scale(Fraction(1, 2)), False), tctx)
    if skein is None:
        L3_num = cube.scale(2) - uh_mul(sq, l1).scale(3) - uh_mul(l1, sq).scale(3) + cube.scale(4)
        L3_num = L3_num.scale(Fraction(1, 12))
        L3 = project(_divide_by_h(_divide_by_h(L3_num, False), False), tctx)
    else:
        L3 = GoldmanElement.zero(target, tctx)
    return L1.with_N(ctx.N), L2, L3
