"""Homology cylinders presented by a standard embedding and a twist word.

``zeta`` turns a word in bounding twists on the doubled surface into an
element of ``F^3``; ``v_solve`` pulls it back to ``Sigma_st`` by the fixed
point iteration; ``zeta_tilde`` pushes the result into ``Sigma``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .goldman import DegreeError, GoldmanElement, PathElement, bch, exp_sigma, push_forward
from .magnus import TOP, TruncationContext, L_element, filtration_degree
from .surface import FatSurface, StdEmbedding
from .words import CyclicWord

__all__ = [
    "CertificateError",
    "InvariantError",
    "TwistFactor",
    "TwistWord",
    "CylinderPresentation",
    "VIteration",
    "zeta",
    "factor_element",
    "v_iteration",
    "v_solve",
    "zeta_tilde",
    "action",
    "compose",
]


class CertificateError(ValueError):
    """A twist factor fails its homological bounding condition."""


class InvariantError(RuntimeError):
    """A guaranteed property failed during a computation."""


@dataclass(frozen=True)
class TwistFactor:
    """``t_c^exp`` for a single bounding curve, or ``(t_c t_partner^-1)^exp``."""

    curve: CyclicWord
    exp: int
    kind: str = "single"
    partner: Optional[CyclicWord] = None

    def inverse(self) -> "TwistFactor":
        return TwistFactor(self.curve, -self.exp, self.kind, self.partner)


class TwistWord:
    """Product ``f_1 f_2 ... f_k`` of twist factors on one surface."""

    def __init__(self, surface: FatSurface, factors: Sequence[TwistFactor] = ()):
        self.surface = surface
        self.factors: Tuple[TwistFactor, ...] = tuple(factors)
        for f in self.factors:
            self._certify(f)

    def _certify(self, f: TwistFactor):
        if f.exp not in (1, -1):
            raise CertificateError("twist exponents must be +1 or -1")
        h = self.surface.homology(f.curve)
        if f.kind == "single":
            if any(h):
                raise CertificateError(
                    f"curve {self.surface.alphabet.format_cyclic(f.curve)} is not null-homologous"
                )
        elif f.kind == "bp":
            if f.partner is None:
                raise CertificateError("a bounding pair needs a partner curve")
            if h != self.surface.homology(f.partner):
                raise CertificateError("bounding pair curves must be homologous")
        else:
            raise CertificateError(f"unknown factor kind {f.kind!r}")

    @classmethod
    def from_json(cls, surface: FatSurface, items: Sequence[dict]) -> "TwistWord":
        factors = []
        for it in items:
            kind = it.get("kind", "single")
            partner = surface.parse_cyclic(it["partner"]) if "partner" in it else None
            factors.append(TwistFactor(surface.parse_cyclic(it["curve"]), int(it.get("exp", 1)), kind, partner))
        return cls(surface, factors)

    def to_json(self) -> List[dict]:
        out = []
        fmt = self.surface.alphabet.format_cyclic
        for f in self.factors:
            d = {"curve": fmt(f.curve), "exp": f.exp, "kind": f.kind}
            if f.partner is not None:
                d["partner"] = fmt(f.partner)
            out.append(d)
        return out

    @classmethod
    def from_labeled_link(cls, surface: FatSurface, components: Sequence[Tuple[CyclicWord, int]]) -> "TwistWord":
        """Twist word of a labeled boundary link: component ``c`` with label ``l`` gives ``t_c^{-l}``.

        One component is a bounding curve.  Two components must carry
        opposite labels; together they give the bounding pair factor.
        """
        for _, lab in components:
            if lab not in (1, -1):
                raise CertificateError("labels must be +1 or -1")
        if len(components) == 1:
            c, lab = components[0]
            return cls(surface, [TwistFactor(c, -lab)])
        if len(components) == 2:
            (c1, l1), (c2, l2) = components
            if l1 != -l2:
                raise CertificateError("a two-component boundary must carry opposite labels")
            return cls(surface, [TwistFactor(c1, -l1, "bp", c2)])
        raise CertificateError("only one- or two-component boundaries are supported")

    def inverse(self) -> "TwistWord":
        return TwistWord(self.surface, [f.inverse() for f in reversed(self.factors)])

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        if other.surface != self.surface:
            raise ValueError("surface mismatch")
        return TwistWord(self.surface, self.factors + other.factors)

    def __len__(self):
        return len(self.factors)


@dataclass
class CylinderPresentation:
    embedding: StdEmbedding
    twist: TwistWord
    ctx: TruncationContext

    def __post_init__(self):
        if self.twist.surface != self.embedding.sigma_tilde:
            raise ValueError("the twist word must live on the doubled surface")

    @classmethod
    def from_json(cls, data: dict, base: Path | None = None, N: int | None = None) -> "CylinderPresentation":
        emb_data = data["embedding"]
        if isinstance(emb_data, str):
            p = Path(emb_data) if base is None else base / emb_data
            emb = StdEmbedding.load(p)
        else:
            emb = StdEmbedding.from_json(emb_data, base)
        twist = TwistWord.from_json(emb.sigma_tilde, data.get("factors", []))
        N = int(N if N is not None else data.get("N", 6))
        return cls(emb, twist, TruncationContext(N, emb.sigma.alphabet))

    @classmethod
    def load(cls, path, N: int | None = None) -> "CylinderPresentation":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text(encoding="utf-8")), path.parent, N)

    def with_N(self, N: int) -> "CylinderPresentation":
        return CylinderPresentation(self.embedding, self.twist, self.ctx.with_N(N))


def factor_element(surface: FatSurface, f: TwistFactor, ctx: TruncationContext) -> GoldmanElement:
    """``exp * L(c)`` or ``exp * (L(c) - L(partner))``, in normal form."""
    z = L_element(f.curve, ctx, surface)
    if f.kind == "bp":
        z = z - L_element(f.partner, ctx, surface)
    return z.scale(f.exp).normal_form()


def zeta(t: TwistWord, ctx: TruncationContext) -> GoldmanElement:
    """``bch`` of the factor elements, in the order of the word."""
    ctx = TruncationContext(ctx.N, t.surface.alphabet)
    if not t.factors:
        return GoldmanElement.zero(t.surface, ctx)
    elems = [factor_element(t.surface, f, ctx) for f in t.factors]
    for z, f in zip(elems, t.factors):
        if z.degree() < 3:
            raise CertificateError(
                f"twist factor {t.surface.alphabet.format_cyclic(f.curve)} does not give an element of F^3"
            )
    acc = elems[-1]
    for z in reversed(elems[:-1]):
        acc = bch(z, acc)
    return acc


@dataclass
class VIteration:
    """Record of the fixed point iteration."""

    v: GoldmanElement
    increments: List[GoldmanElement] = field(default_factory=list)
    residual: Optional[GoldmanElement] = None


def v_iteration(x: GoldmanElement, emb: StdEmbedding, check: bool = True) -> VIteration:
    """Run ``v_{n+1} = v_n + kappa(bch(-iota1(v_n), x))`` until it is stable modulo ``F^N``."""
    N = x.ctx.N
    st_ctx = TruncationContext(N, emb.sigma_st.alphabet)
    x = x.normal_form()
    if x.degree() < 3:
        raise DegreeError("v_solve needs x in F^3")
    v = push_forward(emb.kappa, x, emb.sigma_st, st_ctx)
    record = VIteration(v)
    n = 1
    while 2 + n < N:
        step = bch(push_forward(emb.iota1, v, emb.sigma_tilde, x.ctx).scale(-1), x)
        delta = push_forward(emb.kappa, step, emb.sigma_st, st_ctx)
        if check and delta.degree() < 2 + n:
            raise InvariantError(f"increment {n} has degree {delta.degree()} < {2 + n}")
        record.increments.append(delta)
        v = v + delta
        n += 1
    step = bch(push_forward(emb.iota1, v, emb.sigma_tilde, x.ctx).scale(-1), x)
    record.residual = push_forward(emb.kappa, step, emb.sigma_st, st_ctx)
    if check and not record.residual.is_zero():
        raise InvariantError("the iteration residual does not vanish modulo F^N")
    record.v = v
    return record


def v_solve(x: GoldmanElement, emb: StdEmbedding) -> GoldmanElement:
    """The unique ``v`` with ``kappa(bch(-iota1(v), x)) = 0`` modulo ``F^N``."""
    if x.is_zero():
        return GoldmanElement.zero(emb.sigma_st, TruncationContext(x.ctx.N, emb.sigma_st.alphabet))
    return v_iteration(x, emb).v


def zeta_tilde(c: CylinderPresentation, N: int | None = None) -> GoldmanElement:
    """Total Johnson image of the presented cylinder, on ``Sigma``."""
    N = c.ctx.N if N is None else N
    emb = c.embedding
    x = zeta(c.twist, TruncationContext(N, emb.sigma_tilde.alphabet))
    v = v_solve(x, emb)
    return push_forward(emb.e_st, v, emb.sigma, TruncationContext(N, emb.sigma.alphabet))


def action(c: CylinderPresentation, p: PathElement) -> PathElement:
    """Induced automorphism of the completed path module, applied to ``p``."""
    g1, g2 = p.basepoints
    need = p.ctx.N + (1 if g1 == g2 else 2)
    z = zeta_tilde(c, need)
    return exp_sigma(z, p)


def compose(c1: CylinderPresentation, c2: CylinderPresentation, N: int | None = None) -> GoldmanElement:
    """``bch`` of the two total Johnson images (the stacked cylinder)."""
    if c1.embedding.sigma != c2.embedding.sigma:
        raise ValueError("cylinders over different surfaces")
    if N is None:
        if c1.ctx.N != c2.ctx.N:
            raise ValueError("truncation mismatch")
        N = c1.ctx.N
    return bch(zeta_tilde(c1, N), zeta_tilde(c2, N))
