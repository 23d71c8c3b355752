"""Finitely generated abelian groups in invariant-factor form.

Groups are stored as ``Z^r + Z_{d1} + ... + Z_{dk}`` with ``d1 | d2 | ... | dk``
and every ``di >= 2``; that form is unique per isomorphism class, so equality
is plain field comparison.  All integer work uses Python ints (no overflow).

>>> AbGroup.parse("Z_2 + Z_3")
AbGroup('Z_6')
>>> from_presentation([[2, 0], [0, 3]], 2)
AbGroup('Z_6')
>>> ext1(AbGroup.parse("Z_2"), AbGroup.parse("Z"))
AbGroup('Z_2')
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Sequence


class ExtensionBoundError(ValueError):
    """Raised when extension candidates are too many to enumerate."""


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Smith normal form with transforms.

    Returns ``(U, D, V)`` as lists of lists with ``U @ A @ V == D``, ``U`` and
    ``V`` unimodular and ``D`` diagonal with nonnegative entries forming a
    divisibility chain (zeros last).
    """
    A = [[int(v) for v in row] for row in a]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        if f:
            A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):  # col dst += f * col src
        if f:
            for M in (A, V):
                for row in M:
                    row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                add_row(t, i, -q)
                dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                q = A[t][j] // p
                add_col(t, j, -q)
                dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def _diag(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True, order=True)
class AbGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = self.torsion
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant-factor chain; use AbGroup.from_cyclic")

    @classmethod
    def from_cyclic(cls, free_rank: int = 0, orders: Sequence[int] = ()) -> "AbGroup":
        """Canonical group ``Z^free_rank + sum of Z_n`` for arbitrary cyclic orders.

        An order of 0 counts as a free summand, an order of 1 is dropped.
        """
        orders = [abs(int(o)) for o in orders]
        free_rank += sum(1 for o in orders if o == 0)
        orders = [o for o in orders if o > 1]
        if not orders:
            return cls(free_rank, ())
        k = len(orders)
        D = _diag(smith_normal_form([[orders[i] if i == j else 0 for j in range(k)] for i in range(k)])[1])
        return cls(free_rank, tuple(d for d in D if d > 1))

    @classmethod
    def trivial(cls) -> "AbGroup":
        return cls()

    @classmethod
    def cyclic(cls, n: int) -> "AbGroup":
        return cls.from_cyclic(0, [n])

    @classmethod
    def free(cls, r: int = 1) -> "AbGroup":
        return cls(r, ())

    @classmethod
    def parse(cls, text: str) -> "AbGroup":
        """Parse literals such as ``"0"``, ``"Z"``, ``"Z^2"``, ``"Z_12"``, ``"Z + Z_2"``."""
        s = text.strip().replace("⊕", "+").replace("ℤ", "Z")
        s = s.translate(str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789"))
        if not s:
            raise ValueError("empty group literal")
        free, orders = 0, []
        for tok in (t.strip() for t in s.split("+")):
            m = re.fullmatch(r"Z(?:\^(\d+))?", tok)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z_?\{?(\d+)\}?(?:\^(\d+))?", tok)
            if m:
                orders += [int(m.group(1))] * int(m.group(2) or 1)
                continue
            if tok in ("0", "1", "trivial"):
                continue
            raise ValueError(f"cannot parse group literal {text!r} (bad token {tok!r})")
        return cls.from_cyclic(free, orders)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AbGroup({str(self)!r})"

    def __add__(self, other: "AbGroup") -> "AbGroup":
        if not isinstance(other, AbGroup):
            return NotImplemented
        return AbGroup.from_cyclic(self.free_rank + other.free_rank, self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        return math.prod(self.torsion) if self.is_finite else math.inf

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    def generators(self) -> list[int]:
        """Orders of the standard generators (0 for a free generator)."""
        return [0] * self.free_rank + list(self.torsion)

    def mod(self, n: int) -> "AbGroup":
        """The quotient ``A / nA``."""
        n = abs(int(n))
        if n == 0:
            return self
        return AbGroup.from_cyclic(0, [n] * self.free_rank + [math.gcd(n, d) for d in self.torsion])

    def torsion_part(self, n: int) -> "AbGroup":
        """The ``n``-torsion subgroup ``A[n] = Hom(Z_n, A)``."""
        return AbGroup.from_cyclic(0, [math.gcd(n, d) for d in self.torsion])


def from_presentation(relations: Sequence[Sequence[int]], generators: int | None = None) -> AbGroup:
    """Cokernel ``Z^g / (row span of relations)``."""
    rows = [list(r) for r in relations]
    if generators is None:
        if not rows:
            raise ValueError("number of generators is required when there are no relations")
        generators = len(rows[0])
    if any(len(r) != generators for r in rows):
        raise ValueError("every relation must have one entry per generator")
    if not rows:
        return AbGroup.free(generators)
    diag = _diag(smith_normal_form(rows)[1])
    nonzero = [d for d in diag if d != 0]
    return AbGroup.from_cyclic(generators - len(nonzero), nonzero)


def hom_is_zero(a: AbGroup, b: AbGroup) -> bool:
    """Whether every homomorphism ``a -> b`` is zero."""
    if a.is_trivial or b.is_trivial:
        return True
    if a.free_rank:
        return False
    return all(math.gcd(da, db) == 1 for da in a.torsion for db in b.torsion)


def ext1(c: AbGroup, a: AbGroup) -> AbGroup:
    """``Ext^1(c, a)`` for finitely generated abelian groups."""
    out = AbGroup()
    for n in c.torsion:
        out = out + a.mod(n)
    return out


def extension_candidates(a: AbGroup, c: AbGroup, *, max_free_rank: int = 2,
                         max_factor: int = 64, max_classes: int = 4096) -> list[AbGroup]:
    """Isomorphism types of middle terms ``g`` in ``0 -> a -> g -> c -> 0``.

    Every extension class in ``Ext^1(c, a)`` is realized explicitly by a
    presentation, so the list is exact.  ``a + c`` comes first; the rest are
    sorted.
    """
    for grp in (a, c):
        if grp.free_rank > max_free_rank or any(d > max_factor for d in grp.torsion):
            raise ExtensionBoundError(
                f"candidates not enumerable; reporting symbolic extension of {c} by {a}")
    n_classes = ext1(c, a).order
    if n_classes > max_classes:
        raise ExtensionBoundError(
            f"candidates not enumerable; reporting symbolic extension of {c} by {a} "
            f"({n_classes} extension classes)")
    a_orders = a.generators()
    c_orders = c.generators()
    p, q = len(a_orders), len(c_orders)

    base_rel = []
    for j, d in enumerate(a_orders):
        if d:
            base_rel.append([d if k == j else 0 for k in range(p)] + [0] * q)

    tors_idx = [i for i, n in enumerate(c_orders) if n]
    choice_ranges = []
    for i in tors_idx:
        n = c_orders[i]
        choice_ranges.append([range(n if d == 0 else math.gcd(n, d)) for d in a_orders])

    found = {a + c}
    ordered = [a + c]
    per_gen = [list(itertools.product(*rs)) for rs in choice_ranges]
    for alphas in itertools.product(*per_gen):
        rel = list(base_rel)
        for i, alpha in zip(tors_idx, alphas):
            rel.append([-v for v in alpha] + [c_orders[i] if k == i else 0 for k in range(q)])
        g = from_presentation(rel, p + q)
        if g not in found:
            found.add(g)
            ordered.append(g)
    return [ordered[0]] + sorted(ordered[1:])
