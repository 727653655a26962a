from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flagforge.betti import (
    BettiTable,
    betti_table,
    ci_deficiency_degrees,
    pure_deficiency_degrees,
    slope_pairs,
)
from flagforge.complexes import Complex, koszul
from flagforge.errors import NotMinimal
from flagforge.polyring import GradedFreeModule, HomMap, PolyRing


def test_koszul_table():
    R = PolyRing(["x", "y", "z"])
    t = betti_table(koszul(R, ["x", "y^2", "z"]))
    assert t[(0, 0)] == 1 and t[(1, 1)] == 2 and t[(1, 2)] == 1
    assert t[(3, 4)] == 1 and t[(2, 2)] == 1 and t[(2, 3)] == 2
    assert t.total == 8
    assert t[(5, 5)] == 0
    assert "total" in str(t)


def test_not_minimal():
    R = PolyRing(["x"])
    F = GradedFreeModule(R, [0])
    with pytest.raises(NotMinimal):
        betti_table(Complex(R, [F, F], [HomMap(F, F, 0, [["1"]])]))


def test_spec_degree_sets():
    assert ci_deficiency_degrees((1, 1)) == {2}
    assert ci_deficiency_degrees((2, 2, 3)) == {4, 5}


def test_slope_values():
    t = BettiTable.from_degrees([[0], [1, 1], [2]])
    pairs = slope_pairs(t, 2)
    assert [(p.upper, p.lower, p.j, p.slope) for p in pairs] == [((2, 2), (0, 0), 2, Fraction(0))]
    assert slope_pairs(t, 1) == []


@given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.integers(-3, 12))
def test_ci_degrees_match_slope_pairs(degs, a):
    names = [f"x{k}" for k in range(len(degs))]
    R = PolyRing(names)
    t = betti_table(koszul(R, [f"{v}^{d}" for v, d in zip(names, degs)]))
    assert bool(slope_pairs(t, a)) == (a in ci_deficiency_degrees(degs))


@given(st.lists(st.integers(0, 60), min_size=1, max_size=9, unique=True))
def test_pure_degrees_positive(seq):
    out = pure_deficiency_degrees(sorted(seq))
    assert 0 not in out
    assert all(a > 0 for a in out)


def test_pure_rejects_non_increasing():
    with pytest.raises(ValueError):
        pure_deficiency_degrees([0, 2, 2])


def test_pure_example():
    # degree sequence (0, 2, 3, 5): pairs two or more apart
    assert pure_deficiency_degrees([0, 2, 3, 5]) == {3}
