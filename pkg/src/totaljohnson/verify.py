"""Fixture verification shared by the command line and the test suite."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .cylinder import CylinderPresentation, TwistWord, action, compose, v_iteration, zeta, zeta_tilde
from .goldman import GoldmanElement, PathElement, bch, bracket, exp_sigma
from .magnus import L_element, TensorSeries, TruncationContext, cyclic_project, filtration_degree, magnus
from .surface import FatSurface, StdEmbedding
from .uh import (
    exp_h,
    l_corrections,
    skein_blocks,
    psi,
    uh_bracket,
    uh_bracket_leibniz,
    uh_mul,
)
from .words import GroupHom, Word

__all__ = ["Report", "find_fixture", "run_fixture", "uh_checks", "boundary_knot_difference"]


@dataclass
class Report:
    name: str
    ok: bool
    details: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"fixture": self.name, "status": "PASS" if self.ok else "FAIL", "details": self.details}


def _search_dirs() -> List[Path]:
    dirs = []
    env = os.environ.get("TOTALJOHNSON_FIXTURES")
    if env:
        dirs.append(Path(env))
    dirs.append(Path.cwd() / "fixtures")
    dirs.append(Path(__file__).resolve().parents[2] / "fixtures")
    return dirs


def find_fixture(name: str) -> Path:
    p = Path(name)
    if p.is_file():
        return p
    for d in _search_dirs():
        for cand in (d / name, d / f"{name}.json", d / "verify" / f"{name}.json"):
            if cand.is_file():
                return cand
    raise FileNotFoundError(f"fixture {name!r} not found")


def _rel(base: Path, ref: str) -> Path:
    return (base / ref).resolve()


# individual checks -----------------------------------------------------------------


def boundary_knot_difference(data: dict, base: Path, N: int):
    """Difference of the two ``zeta_tilde`` values and its expected closed form.

    ``N`` is the filtration degree of ``e(gamma_boundary) - 1``; the comparison
    is made modulo ``F^{2N+3}``.  Returns ``(difference, expected, eps_results)``.
    """
    s = FatSurface.load(_rel(base, data["surface"]))
    A = s.alphabet
    e = GroupHom.from_strings(A, A, data["e"]) if "e" in data else GroupHom.identity(A)
    M = 2 * N + 3
    ctx = TruncationContext(M, A)
    gd = A.parse(data["gamma_boundary"])
    m = filtration_degree(magnus(e(gd), M) - TensorSeries.one(M))
    if m < N:
        raise ValueError(f"e(gamma_boundary) - 1 has degree {m} < N = {N}")
    words = {k: A.parse(v) for k, v in data["words"].items()}

    def factor(tok: str):
        minus_one = tok.endswith("-1")
        name = tok[:-2] if minus_one else tok
        inv = name.endswith("^")
        w = words[name.rstrip("^")]
        return (w.inverse() if inv else w, minus_one)

    blocks = []
    for blk in data["blocks"]:
        prods = [(int(p["sign"]), [factor(t) for t in p["factors"]]) for p in blk["products"]]
        blocks.append((Fraction(blk["h_coeff"]), prods))
    skein = skein_blocks(s, blocks, ctx)
    emb = StdEmbedding.trivial(s)
    d = magnus(e(gd), M) - TensorSeries.one(M)
    b = magnus(e(A.parse(data["gamma_beta"])), M) - TensorSeries.one(M)
    expected = GoldmanElement.from_series(s, cyclic_project(d * b * d * b - d * d * b * b), ctx)
    results = []
    diff = None
    for eps in (1, -1):
        L1, L2, L3 = l_corrections(gd, s, e, s, ctx, skein)
        second = L1.scale(eps) + L2 + L3.scale(eps)
        tw = TwistWord.from_labeled_link(s, [(s.parse_cyclic(A.format(e(gd))), -eps)])
        first = zeta_tilde(CylinderPresentation(emb, tw, ctx))
        diff = (second - first).normal_form()
        results.append((eps, diff == expected))
    return diff, expected, results


def _check_difference(data, base, N) -> Report:
    N = 2 if N is None else N
    diff, expected, results = boundary_knot_difference(data, base, N)
    ok = all(r for _, r in results)
    details = [f"modulo F^{2 * N + 3}", f"difference: {diff.format()}"]
    details += [f"eps={e:+d}: {'match' if r else 'MISMATCH'}" for e, r in results]
    return Report(data.get("name", "boundary-knot-difference"), ok, details)


def _check_boundary_knot(data, base, N) -> Report:
    c = CylinderPresentation.load(_rel(base, data["twist"]), N)
    s = c.embedding.sigma
    gamma = s.parse_cyclic(data["gamma"])
    m = filtration_degree(magnus(gamma.word(), 8) - TensorSeries.one(8))
    M = 2 * m + 2
    ctx = TruncationContext(M, s.alphabet)
    eps = c.twist.factors[0].exp
    z = zeta_tilde(c, M)
    ref = L_element(gamma, ctx, s).scale(eps)
    ok = z == ref
    return Report(data.get("name", "boundary-knot"), ok, [f"degree m = {m}", f"modulo F^{M}", f"zeta_tilde: {z.format()}"])


def _check_dehn(data, base, N) -> Report:
    s = FatSurface.load(_rel(base, data["surface"]))
    N = int(data.get("N", 6)) if N is None else N
    ctx = TruncationContext(N, s.alphabet)
    details, ok = [], True
    for item in data["curves"]:
        c = s.parse_cyclic(item["curve"])
        L = L_element(c, TruncationContext(N + 1, s.alphabet), s)
        for gen, img in item["images"].items():
            p = PathElement.word(s, s.parse(gen), ctx)
            good = exp_sigma(L, p) == PathElement.word(s, s.parse(img), ctx)
            ok &= good
            if not good:
                details.append(f"{item['curve']}: {gen} mismatch")
        details.append(f"{item['curve']}: checked {len(item['images'])} generators")
    return Report(data.get("name", "dehn"), ok, details)


def _check_monoid(data, base, N) -> Report:
    N = int(data.get("N", 6)) if N is None else N
    c1 = CylinderPresentation.load(_rel(base, data["first"]), N)
    c2 = CylinderPresentation.load(_rel(base, data["second"]), N)
    s = c1.embedding.sigma
    ctx = TruncationContext(N, s.alphabet)
    z = compose(c1, c2, N + 1)
    ok = True
    for i in range(s.rank):
        p = PathElement.word(s, Word((i + 1,)), ctx)
        ok &= exp_sigma(z, p) == action(c1, action(c2, p))
    return Report(data.get("name", "monoid"), ok, [f"checked {s.rank} generators modulo F^{N}"])


def _check_v(data, base, N) -> Report:
    N = int(data.get("N", 6)) if N is None else N
    c = CylinderPresentation.load(_rel(base, data["twist"]), N)
    x = zeta(c.twist, TruncationContext(N, c.embedding.sigma_tilde.alphabet))
    rec = v_iteration(x, c.embedding)
    degs = [d.degree() for d in rec.increments]
    ok = all(d >= 3 + i for i, d in enumerate(degs)) and rec.residual.is_zero()
    return Report(data.get("name", "v-iteration"), ok, [f"increment degrees: {degs}"])


_KINDS = {
    "boundary-knot-difference": _check_difference,
    "boundary-knot": _check_boundary_knot,
    "dehn-twists": _check_dehn,
    "monoid": _check_monoid,
    "v-iteration": _check_v,
}


def run_fixture(name: str, N: Optional[int] = None) -> Report:
    path = find_fixture(name)
    data = json.loads(path.read_text(encoding="utf-8"))
    kind = data.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"unknown fixture kind {kind!r}")
    rep = _KINDS[kind](data, path.parent, N)
    rep.name = data.get("name", name)
    return rep


def uh_checks(s: FatSurface, N: int):
    """Small deterministic battery of ``U_h`` identities on a surface."""
    ctx = TruncationContext(N + 2, s.alphabet)
    n = s.rank
    keys = [tuple((i + j) % n for j in range(L)) for i in range(n) for L in (1, 2)]
    gens = [GoldmanElement.from_series(s, cyclic_project(TensorSeries.monomial(k, N + 2)), ctx) for k in keys]
    out = []
    ok = True
    for u in gens[:4]:
        for v in gens[:4]:
            comm = uh_mul(psi(u), psi(v)) - uh_mul(psi(v), psi(u))
            ok &= comm == psi(bracket(u, v)).h_shift(1)
    out.append(("commutator equals h times bracket", ok))
    ok = True
    for u in gens[:3]:
        for v in gens[:3]:
            U, V = psi(u), psi(v)
            ok &= uh_bracket(U, V) == uh_bracket_leibniz(U, V)
    out.append(("Leibniz expansion equals commutator form", ok))
    if n >= 2:
        x = GoldmanElement.from_series(s, cyclic_project(TensorSeries.monomial((0, 1, 1), N + 2)), ctx)
        y = GoldmanElement.from_series(s, cyclic_project(TensorSeries.monomial((1, 0, 0), N + 2)), ctx)
        out.append(("exp_h(bch(x, y)) = exp_h(x) exp_h(y)", exp_h(psi(bch(x, y))) == uh_mul(exp_h(psi(x)), exp_h(psi(y)))))
    return out
