"""Independent brute-force oracles used by the tests.

Nothing here calls the package's intersection or action code.  Curves are
drawn directly on the one-vertex ribbon graph: every band carries parallel
strands, and all crossings happen as chords inside the vertex disk.  A
drawing is a choice of strand order in each band; trying every choice finds
a drawing without self-crossings when one exists.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

GAP = 10**6  # slot index placing a gap after every strand at its position


def _circle(pos: Dict[int, int], half_edge: int, slot: int) -> Tuple[int, int]:
    return (pos[half_edge], slot)


def _gap(g: int) -> Tuple[int, int]:
    return (g, GAP)


def _between(a, x, b) -> bool:
    """True when ``x`` lies strictly inside the counterclockwise arc from ``a`` to ``b``."""
    if a < b:
        return a < x < b
    return x > a or x < b


def chord_sign(first: Tuple, second: Tuple) -> int:
    """Crossing sign of directed chords: +1 for ccw order (p, r, q, s), -1 for (p, s, q, r)."""
    p, q = first
    r, s = second
    r_in = _between(p, r, q)
    s_in = _between(p, s, q)
    if r_in == s_in:
        return 0
    return 1 if r_in else -1


class Drawing:
    """Strand layout of one loop (layer below) and optional paths (layer above)."""

    def __init__(self, order: Sequence[int], loop: Sequence[int], ranks: Dict[Tuple[int, int], int], counts: Dict[int, int]):
        self.order = tuple(order)
        self.pos = {h: t for t, h in enumerate(order)}
        self.loop = tuple(loop)
        self.ranks = ranks  # (occurrence index) -> rank within its band
        self.counts = counts

    def _slot(self, half_edge: int, rank: int, total: int) -> int:
        return rank if half_edge > 0 else total - 1 - rank

    def loop_chords(self, total: Optional[Dict[int, int]] = None):
        """Chords ``(in, out, rotation)``; rotation is the loop read from the chord on."""
        total = total or self.counts
        n = len(self.loop)
        out = []
        for i in range(n):
            l_in, l_out = self.loop[i], self.loop[(i + 1) % n]
            ri, ro = self.ranks[(i, abs(l_in))], self.ranks[((i + 1) % n, abs(l_out))]
            P = _circle(self.pos, -l_in, self._slot(-l_in, ri, total[abs(l_in)]))
            Q = _circle(self.pos, l_out, self._slot(l_out, ro, total[abs(l_out)]))
            rot = self.loop[i + 1 :] + self.loop[: i + 1]
            out.append((P, Q, rot))
        return out

    def self_crossings(self) -> int:
        ch = self.loop_chords()
        return sum(1 for a, b in itertools.combinations(ch, 2) if chord_sign(a[:2], b[:2]))


def find_simple_drawing(order: Sequence[int], loop: Sequence[int]) -> Optional[Drawing]:
    """Search all strand orders for a drawing of ``loop`` without self-crossings."""
    bands: Dict[int, List[int]] = {}
    for i, l in enumerate(loop):
        bands.setdefault(abs(l), []).append(i)
    keys = sorted(bands)
    counts = {x: len(bands[x]) for x in keys}
    for choice in itertools.product(*(itertools.permutations(range(len(bands[x]))) for x in keys)):
        ranks = {}
        for x, perm in zip(keys, choice):
            for occ, r in zip(bands[x], perm):
                ranks[(occ, x)] = r
        d = Drawing(order, loop, ranks, counts)
        if d.self_crossings() == 0:
            return d
    return None


def disjoint_drawing(order: Sequence[int], loops: Sequence[Sequence[int]]) -> bool:
    """True when the loops admit a drawing with no crossings at all."""
    joined: List[int] = []
    owner: List[Tuple[int, int]] = []
    for ci, loop in enumerate(loops):
        for j, l in enumerate(loop):
            joined.append(l)
            owner.append((ci, j))
    bands: Dict[int, List[int]] = {}
    for i, l in enumerate(joined):
        bands.setdefault(abs(l), []).append(i)
    keys = sorted(bands)
    counts = {x: len(bands[x]) for x in keys}
    pos = {h: t for t, h in enumerate(order)}
    starts = []
    acc = 0
    for loop in loops:
        starts.append(acc)
        acc += len(loop)
    for choice in itertools.product(*(itertools.permutations(range(len(bands[x]))) for x in keys)):
        ranks = {}
        for x, perm in zip(keys, choice):
            for occ, r in zip(bands[x], perm):
                ranks[occ] = r
        chords = []
        for ci, loop in enumerate(loops):
            n = len(loop)
            for i in range(n):
                gi, go = starts[ci] + i, starts[ci] + (i + 1) % n
                l_in, l_out = loop[i], loop[(i + 1) % n]
                c = counts[abs(l_in)]
                si = ranks[gi] if -l_in > 0 else c - 1 - ranks[gi]
                c2 = counts[abs(l_out)]
                so = ranks[go] if l_out > 0 else c2 - 1 - ranks[go]
                chords.append(((pos[-l_in], si), (pos[l_out], so)))
        if all(chord_sign(a, b) == 0 for a, b in itertools.combinations(chords, 2)):
            return True
    return False


def _ccw_distance(start, pt, positions: int):
    d = (pt[0] - start[0]) % positions
    if d == 0 and pt[1] < start[1]:
        d = positions
    return (d, pt[1])


def _reduce(letters):
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def _inverse(letters):
    return tuple(-l for l in reversed(letters))


def twist_generator(order: Sequence[int], drawing: Drawing, gen: int, gap: int, exponent: int = 1) -> Tuple[int, ...]:
    """Image of the generator loop ``gen`` (based at ``gap``) under ``t_c^exponent``.

    The path runs above every strand of ``c``.  At each crossing the loop ``c``,
    read from the crossing point, is inserted with the crossing sign (loop
    chord first) times ``exponent``.
    """
    pos = drawing.pos
    x = gen
    total = dict(drawing.counts)
    total[x] = total.get(x, 0) + 1
    rank = total[x] - 1
    dep = (pos[x], rank)  # +x end, above the loop strands
    arr = (pos[-x], total[x] - 1 - rank)
    path_chords = [(_gap(gap), dep), (arr, _gap(gap))]
    loop = drawing.loop_chords(total)
    pieces: List[Tuple[int, ...]] = []
    for k, (R, S) in enumerate(path_chords):
        hits = []
        for P, Q, rot in loop:
            e = chord_sign((P, Q), (R, S))
            if e:
                inner = P if _between(R, P, S) else Q
                hits.append((_ccw_distance(R, inner, len(order)), e, rot))
        hits.sort(key=lambda h: h[0])
        for _, e, rot in hits:
            pieces.append(rot if e * exponent > 0 else _inverse(rot))
        if k == 0:
            pieces.append((x,))
    return _reduce(tuple(l for p in pieces for l in p))


def twist_automorphism(order: Sequence[int], loop: Sequence[int], gap: int, exponent: int = 1) -> List[Tuple[int, ...]]:
    """Images of all generators; raises when ``loop`` has no simple drawing."""
    d = find_simple_drawing(order, loop)
    if d is None:
        raise ValueError("no simple drawing found for the curve")
    n = len(order) // 2
    return [twist_generator(order, d, i + 1, gap, exponent) for i in range(n)]


def apply_images(images: Sequence[Tuple[int, ...]], word: Sequence[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for l in word:
        img = images[abs(l) - 1]
        out.extend(img if l > 0 else _inverse(img))
    return _reduce(out)


def compose(outer: Sequence[Tuple[int, ...]], inner: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Generator images of ``outer ∘ inner``."""
    return [apply_images(outer, w) for w in inner]


def intersection_numbers(order: Sequence[int], gap: int) -> List[List[int]]:
    """``M[p][l]``: signed crossings of the loop ``x_p`` (below) with the based path ``x_l`` (above)."""
    pos = {h: t for t, h in enumerate(order)}
    n = len(order) // 2
    M = [[0] * n for _ in range(n)]
    for p in range(1, n + 1):
        for l in range(1, n + 1):
            if p == l:
                total_p = 2
                loop = ((pos[-p], total_p - 1 - 0), (pos[p], 0))
                dep, arr = (pos[l], 1), (pos[-l], 0)
            else:
                loop = ((pos[-p], 0), (pos[p], 0))
                dep, arr = (pos[l], 0), (pos[-l], 0)
            for ch in ((_gap(gap), dep), (arr, _gap(gap))):
                M[p - 1][l - 1] += chord_sign(loop, ch)
    return M


def degree_two_part(word: Sequence[int]) -> Dict[Tuple[int, int], Fraction]:
    """Degree-2 coefficients of the Magnus expansion ``x -> 1 + X``."""
    # Track degree <= 2 terms only.
    terms: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for l in word:
        i = abs(l) - 1
        factor = {(): Fraction(1), (i,): Fraction(1)} if l > 0 else {(): Fraction(1), (i,): Fraction(-1), (i, i): Fraction(1)}
        new: Dict[Tuple[int, ...], Fraction] = {}
        for k1, c1 in terms.items():
            for k2, c2 in factor.items():
                k = k1 + k2
                if len(k) <= 2:
                    new[k] = new.get(k, 0) + c1 * c2
        terms = {k: c for k, c in new.items() if c}
    return {k: c for k, c in terms.items() if len(k) == 2}


def _solve(M: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def tau1_oracle(order: Sequence[int], images: Sequence[Tuple[int, ...]], gap: int) -> Dict[Tuple[int, int, int], Fraction]:
    """Cyclic tensor ``T`` with ``D_l[q, r] = sum_p M[p][l] T[p, q, r]``.

    ``D_l`` is the degree-2 Magnus part of ``phi(x_l) x_l^{-1}``, which is the
    class of that element in the second lower-central quotient.
    """
    n = len(order) // 2
    M = intersection_numbers(order, gap)
    D = []
    for l in range(n):
        w = _reduce(tuple(images[l]) + (-(l + 1),))
        D.append(degree_two_part(w))
    Mt = [[Fraction(M[p][l]) for p in range(n)] for l in range(n)]  # rows l, columns p
    T: Dict[Tuple[int, int, int], Fraction] = {}
    for q in range(n):
        for r in range(n):
            rhs = [D[l].get((q, r), Fraction(0)) for l in range(n)]
            sol = _solve(Mt, rhs)
            for p, v in enumerate(sol):
                if v:
                    T[(p, q, r)] = v
    return T
