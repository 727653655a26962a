"""Betti tables and necessary conditions for Betti-deficient differential modules.

The criteria here are one-directional: an empty answer rules deficiency
out, a nonempty one only says where it could possibly occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .complexes import Complex
from .errors import NotMinimal

__all__ = [
    "BettiTable",
    "betti_table",
    "SlopePair",
    "slope_pairs",
    "ci_deficiency_degrees",
    "pure_deficiency_degrees",
]


class BettiTable:
    """beta_{i,k}: column i, displayed in row k - i."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[tuple[int, int], int] | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict = {}
        for key, v in items:
            i, k = (int(x) for x in key)
            v = int(v)
            if v < 0 or i < 0:
                raise ValueError("Betti numbers and column indices must be nonnegative")
            if v:
                clean[(i, k)] = clean.get((i, k), 0) + v
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_degrees(cls, columns: Sequence[Sequence[int]]) -> "BettiTable":
        """From generator degrees of F_0, F_1, ..."""
        acc: dict = {}
        for i, degs in enumerate(columns):
            for k in degs:
                acc[(i, k)] = acc.get((i, k), 0) + 1
        return cls(acc)

    def __getitem__(self, ik: tuple[int, int]) -> int:
        return self.entries.get(tuple(ik), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"BettiTable({self.entries})"

    def nonzero(self) -> list[tuple[int, int]]:
        return list(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def columns(self) -> range:
        if not self.entries:
            return range(0)
        return range(max(i for i, _ in self.entries) + 1)

    def rows(self) -> range:
        if not self.entries:
            return range(0)
        r = [k - i for i, k in self.entries]
        return range(min(r), max(r) + 1)

    def __str__(self) -> str:
        cols = self.columns()
        if not cols:
            return "(zero table)"
        width = max(len(str(v)) for v in self.entries.values()) + 1
        head = "      " + "".join(f"{i:>{width}}" for i in cols)
        lines = [head]
        for r in self.rows():
            cells = "".join(f"{(self[(i, i + r)] or '.'):>{width}}" for i in cols)
            lines.append(f"{r:>4}: {cells}")
        lines.append("total:" + "".join(f"{sum(v for (i, _), v in self.entries.items() if i == c):>{width}}"
                                        for c in cols))
        return "\n".join(lines)


def betti_table(C: Complex) -> BettiTable:
    """Read beta_{i,k} off the twists of a minimal complex."""
    if not C.is_minimal():
        raise NotMinimal("a differential has a nonzero constant entry")
    return BettiTable.from_degrees([F.degrees for F in C.modules])


@dataclass(frozen=True)
class SlopePair:
    upper: tuple[int, int]  # (i, k)
    lower: tuple[int, int]  # (i - j, l)
    j: int
    slope: Fraction  # 1 - a + a/j


def slope_pairs(t: BettiTable, a: int) -> list[SlopePair]:
    """Pairs of nonzero entries j >= 2 columns apart where a unit of degree a could sit."""
    out = []
    nz = t.nonzero()
    for i, k in nz:
        for i2, l in nz:
            j = i - i2
            if j >= 2 and l - k == (1 - j) * a:
                out.append(SlopePair((i, k), (i2, l), j, Fraction(1 - a) + Fraction(a, j)))
    out.sort(key=lambda p: (p.upper, p.lower))
    return out


def ci_deficiency_degrees(degrees: Sequence[int]) -> set[int]:
    """Degrees a allowed by the subset criterion for a complete intersection."""
    d = list(degrees)
    ell = len(d)
    sums = {s: [sum(d[r] for r in J) for J in combinations(range(ell), s)] for s in range(ell + 1)}
    out: set = set()
    for j in range(2, ell + 1):
        for s in range(0, ell - j + 1):
            for x in set(sums[s]):
                for y in set(sums[s + j]):
                    diff = x - y
                    if diff % (1 - j) == 0:
                        out.add(diff // (1 - j))
    return out


def pure_deficiency_degrees(seq: Sequence[int]) -> set[int]:
    """Degrees a allowed for a pure resolution with degree sequence d_0 < ... < d_l."""
    d = [int(x) for x in seq]
    if any(b <= a for a, b in zip(d, d[1:])):
        raise ValueError("degree sequence must be strictly increasing")
    out: set = set()
    for i in range(len(d)):
        for j in range(2, i + 1):
            num = d[i - j] - d[i]
            if num % (1 - j) == 0:
                out.add(num // (1 - j))
    assert 0 not in out
    return out
