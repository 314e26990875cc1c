"""One-vertex fatgraph surfaces and standard embeddings.

A surface of rank ``n`` is a single vertex with ``n`` loops.  Its ``2n``
half-edges are listed counterclockwise; half-edge ``+x`` is where loop ``x``
leaves the vertex and ``-x`` is where it comes back.  Position ``t`` holds one
half-edge and *gap* ``t`` is the boundary segment between positions ``t`` and
``t+1``.  Based paths start and end at gaps.

Points on the vertex circle are encoded as integers so that intersection signs
reduce to comparisons: half-edge position ``t`` owns the two slots ``4t+1``
and ``4t+2`` (one per layer) and gap ``t`` sits at ``4t+3``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .words import Alphabet, CyclicWord, GroupHom, Word, apply_hom, cyclic_canonical, reduce

__all__ = [
    "SurfaceError",
    "FatSurface",
    "StdEmbedding",
    "standard_surface",
    "remove_disks",
    "double",
    "boundary_words",
    "crossing_sign",
]


class SurfaceError(ValueError):
    """Malformed fatgraph data or an invalid construction request."""


def crossing_sign(P: int, Q: int, R: int, S: int, size: int) -> int:
    """Sign of the crossing of chords ``P->Q`` and ``R->S`` on a circle.

    Returns 0 when the chords do not cross, +1 when the endpoints occur in
    the counterclockwise order (P, R, Q, S) and -1 for (P, S, Q, R).
    """
    span = (Q - P) % size
    r = (R - P) % size
    s = (S - P) % size
    r_in = 0 < r < span
    s_in = 0 < s < span
    if r_in == s_in:
        return 0
    return 1 if r_in else -1


class FatSurface:
    """Compact oriented surface with boundary, as a one-vertex ribbon graph."""

    def __init__(self, alphabet: Alphabet, order: Sequence[int]):
        order = tuple(int(h) for h in order)
        n = alphabet.size
        if sorted(order) != sorted([i + 1 for i in range(n)] + [-(i + 1) for i in range(n)]):
            raise SurfaceError("every half-edge must appear exactly once in the cyclic order")
        self.alphabet = alphabet
        self.order = order
        self.pos: Dict[int, int] = {h: t for t, h in enumerate(order)}

    # construction helpers -------------------------------------------------

    @classmethod
    def from_order(cls, order: Sequence[str], names: Sequence[str] | None = None) -> "FatSurface":
        """Build from half-edge labels such as ``["a", "b", "a'", "b'"]``."""
        labels = []
        for tok in order:
            tok = tok.strip()
            inv = tok.endswith("'") or tok.endswith("^-1")
            base = tok[:-1] if tok.endswith("'") else tok[:-3] if tok.endswith("^-1") else tok
            labels.append((base, inv))
        if names is None:
            names = []
            for base, _ in labels:
                if base not in names:
                    names.append(base)
        alphabet = Alphabet(names)
        return cls(alphabet, [-(alphabet.index(b) + 1) if inv else alphabet.index(b) + 1 for b, inv in labels])

    @classmethod
    def from_json(cls, data: dict) -> "FatSurface":
        if "order" not in data:
            raise SurfaceError("surface description needs an 'order' list")
        s = cls.from_order(data["order"], data.get("names"))
        if "rank" in data and int(data["rank"]) != s.rank:
            raise SurfaceError(f"rank {data['rank']} does not match the order (rank {s.rank})")
        return s

    @classmethod
    def load(cls, path) -> "FatSurface":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "rank": self.rank,
            "names": list(self.alphabet.names),
            "order": [self.alphabet.letter_name(h) for h in self.order],
        }

    # basic data ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.alphabet.size

    @property
    def size(self) -> int:
        """Number of integer slots on the vertex circle."""
        return 8 * max(self.rank, 1)

    def __eq__(self, other):
        return isinstance(other, FatSurface) and self.alphabet == other.alphabet and self.order == other.order

    def __hash__(self):
        return hash((self.alphabet, self.order))

    def __repr__(self):
        return f"FatSurface({[self.alphabet.letter_name(h) for h in self.order]})"

    # geometry of the vertex ------------------------------------------------

    def point(self, half_edge: int, layer: int) -> int:
        """Slot of a strand through ``half_edge``.

        Layer 0 lies below layer 1.  Along ``+x`` the band is entered in
        counterclockwise order of increasing height, along ``-x`` in the
        opposite order, which keeps parallel strands parallel.
        """
        sub = layer if half_edge > 0 else 1 - layer
        return 4 * self.pos[half_edge] + 1 + sub

    def gap_point(self, gap: int) -> int:
        return 4 * gap + 3

    def gap_after(self, half_edge: int) -> int:
        return self.pos[half_edge]

    # faces -----------------------------------------------------------------

    @cached_property
    def _faces(self) -> Tuple[Tuple[CyclicWord, Tuple[int, ...]], ...]:
        n2 = len(self.order)
        if n2 == 0:
            return ((CyclicWord(()), ()),)
        seen = [False] * n2
        faces = []
        for start in range(n2):
            if seen[start]:
                continue
            letters, gaps = [], []
            g = start
            while not seen[g]:
                seen[g] = True
                gaps.append(g)
                h = self.order[(g + 1) % n2]
                letters.append(h)
                g = self.pos[-h]
            faces.append((letters, tuple(gaps)))
        out = []
        for letters, gaps in faces:
            out.append((cyclic_canonical(letters), gaps))
        return tuple(out)

    def boundary_words(self) -> List[CyclicWord]:
        return [f[0] for f in self._faces]

    def boundary_face_words(self) -> List[Word]:
        """Boundary words read from the first gap of each face (unrotated)."""
        n2 = len(self.order)
        out = []
        for _, gaps in self._faces:
            out.append(Word(tuple(self.order[(g + 1) % n2] for g in gaps)) if n2 else Word(()))
        return out

    def face_of_gap(self, gap: int) -> int:
        for i, (_, gaps) in enumerate(self._faces):
            if gap in gaps:
                return i
        raise SurfaceError(f"no gap {gap}")

    @property
    def boundary_count(self) -> int:
        return len(self._faces)

    @property
    def euler_characteristic(self) -> int:
        return 1 - self.rank

    @property
    def genus(self) -> int:
        twice = 2 - self.euler_characteristic - self.boundary_count
        if twice % 2 or twice < 0:
            raise SurfaceError("inconsistent fatgraph: non-integral genus")
        return twice // 2

    @property
    def default_basepoint(self) -> int:
        return max(len(self.order) - 1, 0)

    # homology --------------------------------------------------------------

    def homology(self, w) -> Tuple[int, ...]:
        """Abelianized class of a word in the basis of generators."""
        letters = w.letters if isinstance(w, (Word, CyclicWord)) else tuple(w)
        v = [0] * self.rank
        for l in letters:
            v[abs(l) - 1] += 1 if l > 0 else -1
        return tuple(v)

    def intersection_matrix(self) -> List[List[int]]:
        """Algebraic intersection numbers of the generator loops."""
        n = self.rank
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            x = i + 1
            P, Q = self.point(-x, 0), self.point(x, 0)
            for j in range(n):
                y = j + 1
                R, S = self.point(-y, 1), self.point(y, 1)
                M[i][j] = crossing_sign(P, Q, R, S, self.size) if i != j else 0
        return M

    def parse(self, text: str) -> Word:
        return self.alphabet.parse(text)

    def parse_cyclic(self, text: str) -> CyclicWord:
        return self.alphabet.parse_cyclic(text)

    def is_monogon_generator(self, i: int) -> bool:
        x = i + 1
        return self.order[(self.pos[x] + 1) % len(self.order)] == -x


def boundary_words(s: FatSurface) -> List[CyclicWord]:
    return s.boundary_words()


def standard_surface(genus: int, boundaries: int = 1) -> FatSurface:
    """``Sigma_{g,b}`` with symplectic pairs ``(a_i, b_i)`` and ``b-1`` extra loops."""
    if genus < 0 or boundaries < 1:
        raise SurfaceError("need genus >= 0 and at least one boundary component")
    if genus == 1:
        pairs = [("a", "b")]
    else:
        pairs = [(f"a{i}", f"b{i}") for i in range(1, genus + 1)]
    order = []
    for a, b in pairs:
        order += [a, b, a + "'", b + "'"]
    for j in range(1, boundaries):
        order += [f"z{j}", f"z{j}'"]
    return FatSurface.from_order(order)


def _fresh(base: str, taken: set) -> str:
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}{k}"
    taken.add(name)
    return name


def remove_disks(s: FatSurface, count: int) -> Tuple[FatSurface, GroupHom]:
    """Remove ``count`` disks from ``s``.

    Each disk becomes a loop ``d`` whose two half-edges are adjacent, so its
    boundary is the monogon ``|d'|``.  The returned map fills the disks back in.
    """
    if count < 1:
        raise SurfaceError("need at least one disk")
    taken = set(s.alphabet.names)
    new = [_fresh("d" if count == 1 else f"d{j + 1}", taken) for j in range(count)]
    alphabet = Alphabet(list(s.alphabet.names) + new)
    order = list(s.order)
    for j in range(count):
        x = s.rank + j + 1
        order += [x, -x]
    st = FatSurface(alphabet, order)
    images = [Word((i + 1,)) for i in range(s.rank)] + [Word(())] * count
    return st, GroupHom(alphabet, s.alphabet, images)


def double(s_st: FatSurface, glue: Sequence) -> Tuple[FatSurface, GroupHom, GroupHom, GroupHom]:
    """Double ``s_st`` along the monogon boundary circles of the ``glue`` generators.

    Returns ``(sigma_tilde, iota0, iota1, kappa)``.  The top copy keeps the
    generator names; bottom generators get the suffix ``_b``.  Each glued
    circle past the first contributes a loop ``t_<name>`` through the tube.
    """
    glue_idx = []
    for g in glue:
        i = s_st.alphabet.index(g) if isinstance(g, str) else int(g)
        if not 0 <= i < s_st.rank or not s_st.is_monogon_generator(i):
            raise SurfaceError("invalid circle selection: glued circles must be monogon disk loops")
        glue_idx.append(i)
    if not glue_idx or len(set(glue_idx)) != len(glue_idx):
        raise SurfaceError("invalid circle selection")
    names = list(s_st.alphabet.names)
    n = s_st.rank
    taken = set(names)
    bottom = [i for i in range(n) if i not in glue_idx]
    b_names = [_fresh(names[i] + "_b", taken) for i in bottom]
    t_names = [_fresh("t_" + names[i], taken) for i in glue_idx[1:]]
    alphabet = Alphabet(names + b_names + t_names)
    T = {i: i + 1 for i in range(n)}
    B = {i: n + k + 1 for k, i in enumerate(bottom)}
    S = {i: n + len(bottom) + k + 1 for k, i in enumerate(glue_idx[1:])}
    glue_pos = {i: k for k, i in enumerate(glue_idx)}

    top_seq: list = []
    for h in s_st.order:
        top_seq.append(("L", T[abs(h) - 1] * (1 if h > 0 else -1)))
        if h > 0 and (h - 1) in glue_pos:
            top_seq.append(("E", glue_pos[h - 1]))
    bot_seq: list = []
    for h in reversed(s_st.order):
        i = abs(h) - 1
        if i in glue_pos:
            if h < 0:
                bot_seq.append(("F", glue_pos[i]))
            continue
        bot_seq.append(("L", B[i] * (1 if h > 0 else -1)))
    i_top = top_seq.index(("E", 0))
    i_bot = bot_seq.index(("F", 0))
    rotated = bot_seq[i_bot + 1:] + bot_seq[:i_bot]
    merged = top_seq[:i_top] + rotated + top_seq[i_top + 1:]
    order = []
    for kind, v in merged:
        if kind == "L":
            order.append(v)
        else:
            letter = S[glue_idx[v]]
            order.append(letter if kind == "E" else -letter)
    tilde = FatSurface(alphabet, order)

    iota1 = GroupHom(s_st.alphabet, alphabet, [Word((T[i],)) for i in range(n)])
    img0 = []
    for i in range(n):
        if i in B:
            img0.append(Word((B[i],)))
        elif i == glue_idx[0]:
            img0.append(Word((T[i],)))
        else:
            img0.append(Word((-S[i], T[i], S[i])))
    iota0 = GroupHom(s_st.alphabet, alphabet, img0)
    kimg = [Word(())] * alphabet.size
    for i in range(n):
        kimg[T[i] - 1] = Word((i + 1,))
    for i in bottom:
        kimg[B[i] - 1] = Word((i + 1,))
    kappa = GroupHom(alphabet, s_st.alphabet, kimg)
    return tilde, iota0, iota1, kappa


@dataclass
class StdEmbedding:
    """The data ``Sigma``, ``Sigma_st``, ``Sigma~_st`` and the maps between their groups."""

    sigma: FatSurface
    sigma_st: FatSurface
    sigma_tilde: FatSurface
    iota0: GroupHom
    iota1: GroupHom
    kappa: GroupHom
    e_st: GroupHom
    glue: Tuple[int, ...] = ()
    degenerate: bool = False
    section: Optional[GroupHom] = field(default=None, repr=False)

    def __post_init__(self):
        self.validate()

    @classmethod
    def standard(cls, sigma: FatSurface, disks: int = 1) -> "StdEmbedding":
        st, e = remove_disks(sigma, disks)
        glue = tuple(range(sigma.rank, sigma.rank + disks))
        tilde, i0, i1, k = double(st, glue)
        section = GroupHom(sigma.alphabet, st.alphabet, [Word((i + 1,)) for i in range(sigma.rank)])
        return cls(sigma, st, tilde, i0, i1, k, e, glue, False, section)

    @classmethod
    def trivial(cls, sigma: FatSurface) -> "StdEmbedding":
        """Degenerate case: every surface is ``sigma`` and every map is the identity."""
        ident = GroupHom.identity(sigma.alphabet)
        return cls(sigma, sigma, sigma, ident, ident, ident, ident, (), True, ident)

    def validate(self):
        for name, f, src, tgt in (
            ("iota0", self.iota0, self.sigma_st, self.sigma_tilde),
            ("iota1", self.iota1, self.sigma_st, self.sigma_tilde),
            ("kappa", self.kappa, self.sigma_tilde, self.sigma_st),
            ("e_st", self.e_st, self.sigma_st, self.sigma),
        ):
            if f.source != src.alphabet or f.target != tgt.alphabet:
                raise SurfaceError(f"{name} has the wrong source or target alphabet")
        ident = GroupHom.identity(self.sigma_st.alphabet)
        if self.kappa.compose(self.iota1) != ident or self.kappa.compose(self.iota0) != ident:
            raise SurfaceError("kappa must be a left inverse of iota0 and iota1")
        if not self.degenerate and self.sigma_tilde.euler_characteristic != 2 * self.sigma_st.euler_characteristic:
            raise SurfaceError("Euler characteristic of the double must be twice that of Sigma_st")
        if self.section is not None:
            if self.e_st.compose(self.section) != GroupHom.identity(self.sigma.alphabet):
                raise SurfaceError("e_st is not surjective: the section does not split it")
        else:
            hit = {w.letters[0] for w in self.e_st.images if len(w.letters) == 1}
            if not all((i + 1) in hit or -(i + 1) in hit for i in range(self.sigma.rank)):
                raise SurfaceError("cannot certify that e_st is surjective; supply a section")

    # JSON ------------------------------------------------------------------

    @classmethod
    def from_json(cls, data: dict, base: Path | None = None) -> "StdEmbedding":
        def surf(key):
            v = data[key]
            if isinstance(v, str):
                p = Path(v) if base is None else base / v
                return FatSurface.load(p)
            return FatSurface.from_json(v)

        kind = data.get("kind", "standard")
        if kind == "standard":
            return cls.standard(surf("surface"), int(data.get("disks", 1)))
        if kind == "trivial":
            return cls.trivial(surf("surface"))
        if kind == "explicit":
            sg, st, tl = surf("sigma"), surf("sigma_st"), surf("sigma_tilde")
            maps = {
                "iota0": (st, tl),
                "iota1": (st, tl),
                "kappa": (tl, st),
                "e_st": (st, sg),
            }
            homs = {k: GroupHom.from_strings(a.alphabet, b.alphabet, data[k]) for k, (a, b) in maps.items()}
            section = None
            if "section" in data:
                section = GroupHom.from_strings(sg.alphabet, st.alphabet, data["section"])
            glue = tuple(st.alphabet.index(g) for g in data.get("glue", []))
            return cls(sg, st, tl, homs["iota0"], homs["iota1"], homs["kappa"], homs["e_st"],
                       glue, bool(data.get("degenerate", False)), section)
        raise SurfaceError(f"unknown embedding kind {kind!r}")

    @classmethod
    def load(cls, path) -> "StdEmbedding":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text(encoding="utf-8")), path.parent)

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "kind": "explicit",
            "sigma": self.sigma.to_json(),
            "sigma_st": self.sigma_st.to_json(),
            "sigma_tilde": self.sigma_tilde.to_json(),
            "iota0": self.iota0.to_strings(),
            "iota1": self.iota1.to_strings(),
            "kappa": self.kappa.to_strings(),
            "e_st": self.e_st.to_strings(),
            "glue": [self.sigma_st.alphabet.names[i] for i in self.glue],
            "degenerate": self.degenerate,
        }
        if self.section is not None:
            out["section"] = self.section.to_strings()
        return out
