"""Johnson filtration degree and graded Johnson maps read off from ``zeta_tilde``."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .goldman import DegreeError, GoldmanElement
from .magnus import TOP

__all__ = ["HomologyTensor", "cyclic_symmetrize", "lambda_map", "tau", "filtration_degree_of_cylinder"]

Index = Tuple[int, ...]


class HomologyTensor:
    """Element of ``H^{⊗k}`` with ``H`` spanned by the generators ``e_i``."""

    __slots__ = ("degree", "coefficients", "names")

    def __init__(self, degree: int, coefficients: Dict[Index, Fraction], names: Optional[Sequence[str]] = None):
        self.degree = degree
        self.coefficients = {k: Fraction(v) for k, v in coefficients.items() if v}
        for k in self.coefficients:
            if len(k) != degree:
                raise ValueError("index length does not match the tensor degree")
        self.names = tuple(names) if names is not None else None

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_cyclic(self) -> bool:
        """True when the tensor is invariant under rotating its indices."""
        for k, v in self.coefficients.items():
            if self.coefficients.get(k[1:] + k[:1], 0) != v:
                return False
        return True

    def __add__(self, other: "HomologyTensor") -> "HomologyTensor":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        acc = defaultdict(Fraction, self.coefficients)
        for k, v in other.coefficients.items():
            acc[k] += v
        return HomologyTensor(self.degree, acc, self.names or other.names)

    def __eq__(self, other):
        if not isinstance(other, HomologyTensor):
            return NotImplemented
        return self.degree == other.degree and self.coefficients == other.coefficients

    __hash__ = None

    def format(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for k in sorted(self.coefficients):
            v = self.coefficients[k]
            names = [self.names[i] if self.names else str(i) for i in k]
            parts.append(f"{'+' if v > 0 else '-'}{abs(v)} * " + "⊗".join(f"e_{n}" for n in names))
        return " ".join(parts)

    __str__ = format

    def __repr__(self):
        return f"HomologyTensor({self.format()})"


def cyclic_symmetrize(key: Index) -> Dict[Index, int]:
    """``c_k``: sum of all ``k`` rotations, counted with repetition."""
    out: Dict[Index, int] = defaultdict(int)
    for i in range(len(key)):
        out[key[i:] + key[:i]] += 1
    return dict(out)


def lambda_map(z: GoldmanElement, k: int) -> HomologyTensor:
    """Send each degree-``k`` cyclic key ``|prod(x_i - 1)|`` to ``c_k(⊗ e_i)``."""
    acc: Dict[Index, Fraction] = defaultdict(Fraction)
    for key, c in z.series.homogeneous(k).terms.items():
        for t, m in cyclic_symmetrize(key).items():
            acc[t] += c * m
    names = z.surface.alphabet.names if z.surface is not None else None
    return HomologyTensor(k, acc, names)


def tau(n: int, z: GoldmanElement) -> HomologyTensor:
    """``tau_n``: the degree ``n + 2`` part of ``z`` as a cyclic tensor."""
    if n < 1:
        raise ValueError("n must be positive")
    if z.ctx.N <= n + 2:
        raise DegreeError(f"tau_{n} needs z modulo F^{n + 3} at least")
    if z.degree() < n + 2:
        raise DegreeError(f"tau_{n} needs z in F^{n + 2} (degree {z.degree()})")
    return lambda_map(z, n + 2)


def filtration_degree_of_cylinder(c, z: GoldmanElement | None = None) -> int:
    """Largest certified ``n`` with ``(action - id)`` landing in ``F^{n+1}``.

    The answer is ``deg zeta_tilde - 2``, capped at ``N - 2`` which is the
    deepest level the truncation can certify.
    """
    from .cylinder import zeta_tilde

    if z is None:
        z = zeta_tilde(c)
    N = z.ctx.N
    d = z.degree()
    if d == TOP:
        return N - 2
    return int(min(d - 2, N - 2))
