"""Graded differential modules, free flags, homology and minimization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import Complex, EndElement, check_complex, left_mult
from .errors import (
    AnchorNotAComplex,
    FactorizationError,
    FlagViolation,
    HomogeneityViolation,
    ParityMissing,
    ShapeMismatch,
    SquareNonzero,
)
from .exactfield import rank
from .polyring import GradedFreeModule, HomMap, Poly, compose, slice_matrix

__all__ = [
    "DifferentialModule",
    "CurvedModule",
    "BettiRecord",
    "MatrixFactorization",
    "fold",
    "validate_flag",
    "flag_blocks",
    "homology_hilbert",
    "default_window",
    "anchor_h0_hilbert",
    "minimize",
    "curvature",
    "matrix_factorization",
    "curved_from_left_mult",
    "block_matrix_module",
]


def _levels_of(rank_: int, flag_levels) -> list[int] | None:
    if flag_levels is None:
        return None
    lev = [-1] * rank_
    for i, gens in enumerate(flag_levels):
        for g in gens:
            if not 0 <= g < rank_ or lev[g] != -1:
                raise FlagViolation(f"generator {g} is listed twice or out of range")
            lev[g] = i
    if -1 in lev:
        raise FlagViolation(f"generator {lev.index(-1)} has no flag level")
    return lev


class DifferentialModule:
    """A graded free module D with a square-zero endomorphism of degree a.

    ``flag_levels`` optionally partitions generator indices into levels
    0..l; the differential must then strictly lower the level.
    """

    def __init__(self, module: GradedFreeModule, degree: int, d: HomMap,
                 flag_levels: Sequence[Sequence[int]] | None = None, check: bool = True):
        if d.source != module or d.target != module:
            raise ShapeMismatch("the differential must be an endomorphism of the module")
        if d.degree != degree:
            if not d.is_zero():
                raise HomogeneityViolation(f"differential has degree {d.degree}, expected {degree}")
            d = HomMap.zero(module, module, degree)
        self.module = module
        self.degree = int(degree)
        self.d = d
        self.flag_levels = None if flag_levels is None else tuple(tuple(int(g) for g in L) for L in flag_levels)
        self._level = _levels_of(module.rank, self.flag_levels)
        if check:
            d.check_homogeneous()
            self._check_square()
            self._check_flag()

    def _check_square(self) -> None:
        sq = compose(self.d, self.d)
        if not sq.is_zero():
            raise SquareNonzero("d^2 is not zero")

    def _check_flag(self) -> None:
        lev = self._level
        if lev is None:
            return
        for r, row in enumerate(self.d.entries):
            for c, e in enumerate(row):
                if e.terms and lev[r] >= lev[c]:
                    raise FlagViolation(
                        f"entry ({r},{c}) maps level {lev[c]} into level {lev[r]}"
                    )

    @property
    def ring(self):
        return self.module.ring

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def matrix(self):
        return self.d.entries

    @property
    def levels(self) -> list[int] | None:
        return None if self._level is None else list(self._level)

    @property
    def flag_length(self) -> int | None:
        return None if self.flag_levels is None else len(self.flag_levels) - 1

    def block(self, target_level: int, source_level: int) -> list[list[Poly]]:
        if self.flag_levels is None:
            raise FlagViolation("module carries no flag data")
        rows = self.flag_levels[target_level]
        cols = self.flag_levels[source_level]
        return [[self.d.entries[r][c] for c in cols] for r in rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DifferentialModule)
            and type(other) is type(self)
            and self.module == other.module
            and self.degree == other.degree
            and self.d.entries == other.d.entries
            and self.flag_levels == other.flag_levels
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(rank={self.rank}, degree={self.degree}, levels={self.flag_levels})"

    def with_matrix(self, entries) -> "DifferentialModule":
        return DifferentialModule(self.module, self.degree,
                                  HomMap(self.module, self.module, self.degree, entries), self.flag_levels)


class CurvedModule(DifferentialModule):
    """Like a differential module, except d^2 = f * id."""

    def __init__(self, module: GradedFreeModule, degree: int, d: HomMap, curvature_poly: Poly,
                 flag_levels=None, check: bool = True):
        self.curvature = curvature_poly
        super().__init__(module, degree, d, flag_levels, check)

    def _check_square(self) -> None:
        f = curvature(self.d)
        if f is None or f != self.curvature:
            raise SquareNonzero(f"d^2 is not {self.curvature} * id")

    def _check_flag(self) -> None:
        # levels of a curved module only record parity
        return None

    def __eq__(self, other) -> bool:
        return super().__eq__(other) and self.curvature == other.curvature


@dataclass(frozen=True)
class BettiRecord:
    counts: tuple  # sorted (degree, count) pairs

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "BettiRecord":
        tally: dict = {}
        for g in degrees:
            tally[g] = tally.get(g, 0) + 1
        return cls(tuple(sorted(tally.items())))

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict:
        return dict(self.counts)


# ---------------------------------------------------------------------------


def block_matrix_module(levels_degrees: Sequence[Sequence[int]], blocks: dict, ring):
    """Assemble generator degrees, level partition and the full entry matrix.

    ``blocks[(t, s)]`` is the entry matrix from level s to level t.
    """
    degrees, levels, offset = [], [], []
    for degs in levels_degrees:
        offset.append(len(degrees))
        levels.append(list(range(len(degrees), len(degrees) + len(degs))))
        degrees.extend(degs)
    n = len(degrees)
    zero = ring.zero()
    M = [[zero] * n for _ in range(n)]
    for (t, s), ent in blocks.items():
        for r, row in enumerate(ent):
            for c, e in enumerate(row):
                M[offset[t] + r][offset[s] + c] = e
    return GradedFreeModule(ring, degrees), levels, M


def fold(C: Complex, a: int) -> DifferentialModule:
    """The degree-a fold: generators of F_i move to degree g - i*a."""
    blocks = {(i - 1, i): C.maps[i - 1].entries for i in range(1, C.length + 1)}
    module, levels, M = block_matrix_module(
        [[g - i * a for g in C.module(i).degrees] for i in range(C.length + 1)], blocks, C.ring
    )
    return DifferentialModule(module, a, HomMap(module, module, a, M, check=False), levels, check=False)


def flag_blocks(D: DifferentialModule) -> dict:
    """Blocks of d by level drop j: {j: {i: entries from level i to level i-j}}."""
    if D.flag_levels is None:
        raise FlagViolation("module carries no flag data")
    L = len(D.flag_levels) - 1
    out: dict = {}
    for i in range(L + 1):
        for t in range(i):
            out.setdefault(i - t, {})[i] = D.block(t, i)
    return out


def validate_flag(D: DifferentialModule) -> Complex:
    """Check the flag shape of D and return its anchor complex."""
    if D.flag_levels is None:
        raise FlagViolation("module carries no flag data")
    D._check_flag()
    a = D.degree
    ring = D.ring
    modules = [
        GradedFreeModule(ring, [D.module.degrees[g] + i * a for g in gens])
        for i, gens in enumerate(D.flag_levels)
    ]
    L = len(modules) - 1
    maps = []
    for i in range(1, L + 1):
        try:
            maps.append(HomMap(modules[i], modules[i - 1], 0, D.block(i - 1, i)))
        except HomogeneityViolation as exc:
            raise FlagViolation(f"level {i} -> {i - 1} block: {exc}") from None
    # each higher block must have internal degree a(1 - j)
    for j, by_src in flag_blocks(D).items():
        for i, ent in by_src.items():
            try:
                HomMap(modules[i], modules[i - j], a * (1 - j), ent)
            except HomogeneityViolation as exc:
                raise FlagViolation(f"block from level {i} to {i - j}: {exc}") from None
    cx = Complex(ring, modules, maps)
    rep = check_complex(cx)
    if not rep.ok:
        raise AnchorNotAComplex(rep.message)
    return cx


def default_window(D: DifferentialModule) -> tuple[int, int]:
    """[min generator degree, max generator degree + slack]."""
    degs = D.module.degrees
    if not degs:
        return (0, 0)
    gap = max((e.degree for row in D.d.entries for e in row if e.terms), default=0)
    slack = D.ring.nvars * max(gap, 1) + abs(D.degree) + 2
    return (min(degs), max(degs) + slack)


def homology_hilbert(D: DifferentialModule, window: tuple[int, int] | None = None) -> dict:
    """{j: dim H(D)_j} with H(D)_j = ker(d on D_j) / d(D_{j-a})."""
    if window is None:
        window = default_window(D)
    j0, j1 = window
    a = D.degree
    ranks: dict = {}

    def rk(j):
        if j not in ranks:
            ranks[j] = rank(slice_matrix(D.d, j))
        return ranks[j]

    out = {}
    for j in range(j0, j1 + 1):
        dim = D.module.hilbert(j)
        h = dim - rk(j) - rk(j - a)
        assert h >= 0, "negative homology dimension"
        out[j] = h
    return out


def anchor_h0_hilbert(C: Complex, window: tuple[int, int]) -> dict:
    """Hilbert function of coker(F_1 -> F_0) on a window."""
    out = {}
    for j in range(window[0], window[1] + 1):
        dim = C.module(0).hilbert(j)
        if C.length >= 1:
            dim -= rank(slice_matrix(C.maps[0], j))
        out[j] = dim
    return out


def _is_unit(e: Poly) -> bool:
    return bool(e.terms) and len(e.terms) == 1 and e.is_constant()


def minimize(D: DifferentialModule) -> tuple[DifferentialModule, BettiRecord]:
    """Strip unit entries until d is zero modulo the variables.

    The first off-diagonal unit in row-major order is used each round.
    Flag data is dropped whenever a strip happens, since the reduced
    differential need not respect levels.
    """
    ring = D.ring
    fld = ring.field
    degs = list(D.module.degrees)
    M = [list(row) for row in D.d.entries]
    stripped = False
    while True:
        hit = None
        for r, row in enumerate(M):
            for c, e in enumerate(row):
                if r != c and _is_unit(e):
                    hit = (r, c)
                    break
            if hit:
                break
        if hit is None:
            break
        r, c = hit
        uinv = fld.inv(M[r][c].constant_term())
        keep = [k for k in range(len(degs)) if k not in (r, c)]
        rowr = M[r]
        newM = []
        for m in keep:
            dmc = M[m][c]
            if dmc.terms:
                fac = dmc.scale(uinv)
                newM.append([M[m][k] - fac * rowr[k] for k in keep])
            else:
                newM.append([M[m][k] for k in keep])
        M = newM
        degs = [degs[k] for k in keep]
        stripped = True
    if not stripped:
        return D, BettiRecord.from_degrees(degs)
    module = GradedFreeModule(ring, degs)
    out = DifferentialModule(module, D.degree, HomMap(module, module, D.degree, M, check=False), None,
                             check=False)
    if not compose(out.d, out.d).is_zero():
        raise SquareNonzero("minimization broke d^2 = 0 (input was not a differential module)")
    return out, BettiRecord.from_degrees(degs)


def curvature(candidate) -> Poly | None:
    """f with candidate^2 = f * id, or None when the square is not scalar."""
    d = candidate.d if isinstance(candidate, DifferentialModule) else candidate
    n = d.source.rank
    if d.target.rank != n:
        raise ShapeMismatch("curvature needs a square matrix")
    sq = compose(d, d)
    ring = d.ring
    if n == 0:
        return ring.zero()
    f = sq.entries[0][0]
    for r in range(n):
        for c in range(n):
            e = sq.entries[r][c]
            if r == c:
                if e != f:
                    return None
            elif e.terms:
                return None
    return f


@dataclass(frozen=True)
class MatrixFactorization:
    A: tuple  # odd -> even
    B: tuple  # even -> odd
    f: Poly
    even: tuple
    odd: tuple


def _matmul(P, Q, ring):
    n, k = len(P), len(Q)
    m = len(Q[0]) if Q else 0
    return [[sum((P[i][t] * Q[t][j] for t in range(k)), ring.zero()) for j in range(m)] for i in range(n)]


def matrix_factorization(D: DifferentialModule) -> MatrixFactorization:
    """Split a curved flag into odd->even and even->odd blocks with AB = BA = f id."""
    if D.flag_levels is None:
        raise ParityMissing("flag levels are needed to split by parity")
    f = D.curvature if isinstance(D, CurvedModule) else curvature(D)
    if f is None:
        raise FactorizationError("square of the differential is not scalar")
    ring = D.ring
    even = tuple(g for i, L in enumerate(D.flag_levels) if i % 2 == 0 for g in L)
    odd = tuple(g for i, L in enumerate(D.flag_levels) if i % 2 == 1 for g in L)
    M = D.d.entries
    for group in (even, odd):
        for r in group:
            for c in group:
                if M[r][c].terms:
                    raise FactorizationError(f"entry ({r},{c}) preserves parity")
    A = [[M[r][c] for c in odd] for r in even]
    B = [[M[r][c] for c in even] for r in odd]
    AB = _matmul(A, B, ring)
    BA = _matmul(B, A, ring)
    zero = ring.zero()
    for P, size in ((AB, len(even)), (BA, len(odd))):
        for r in range(size):
            for c in range(size):
                want = f if r == c else zero
                if P[r][c] != want:
                    raise FactorizationError(f"product entry ({r},{c}) is {P[r][c]}, expected {want}")
    return MatrixFactorization(tuple(map(tuple, A)), tuple(map(tuple, B)), f, even, odd)


def curved_from_left_mult(C: Complex, e_index: int = 1) -> CurvedModule:
    """The module sum F_i with d = differential + (-1)^i * left multiplication on level i.

    For the pfaffian resolution this is the block matrix whose square is
    Pf_1 * id; left multiplication has internal degree 2, which forces a = 1.
    """
    ell = left_mult(e_index, C)
    lm = ell.internal
    if lm % 2:
        raise ValueError("left multiplication of odd internal degree cannot be folded")
    a = lm // 2
    blocks = {}
    for i in range(1, C.length + 1):
        blocks[(i - 1, i)] = C.maps[i - 1].entries
    for i, comp in ell.comps.items():
        s = -1 if i % 2 else 1
        blocks[(i + 1, i)] = comp.entries if s == 1 else (-comp).entries
    module, levels, M = block_matrix_module(
        [[g - i * a for g in C.module(i).degrees] for i in range(C.length + 1)], blocks, C.ring
    )
    d = HomMap(module, module, a, M)
    f = curvature(d)
    if f is None:
        raise SquareNonzero("square is not a scalar multiple of the identity")
    return CurvedModule(module, a, d, f, levels, check=False)
