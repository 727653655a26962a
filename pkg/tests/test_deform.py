import random

import pytest

from flagforge.complexes import EndElement, apply_end_differential, end_slice, is_chain_map, koszul
from flagforge.deform import (
    LiftState,
    Obstructed,
    assemble,
    dim_bounds,
    enumerate_flags,
    find_lift_iso,
    homotopic_lift_iso,
    lift,
    lift_space,
    obstruction,
    rescale,
    state_from_flag,
)
from flagforge.diffmod import default_window, fold, homology_hilbert
from flagforge.errors import BudgetExceeded, HomotopyInvalid, InvariantViolation
from flagforge.gallery import intro_states
from flagforge.polyring import PolyRing, compose

S = PolyRing(["x", "y"])
T = PolyRing(["x", "y", "z"])


def test_state_invariants():
    K = koszul(S, ["x", "y"])
    s = LiftState.initial(K, 2)
    assert s.stage == 1 and s.is_fold()
    bad = EndElement.single_block(K, 2, 2, [["x^2"]])  # wrong internal degree
    with pytest.raises(InvariantViolation):
        s.extend(bad)


def test_canonical_lift_of_koszul_is_fold():
    K = koszul(T, ["x", "y", "z"])
    s = LiftState.initial(K, 1)
    while s.stage < K.length:
        s = lift(s)
        assert not isinstance(s, Obstructed)
    assert s.is_fold()
    D = assemble(s)
    assert D == fold(K, 1)


def test_lift_with_coordinates_and_roundtrip():
    K = koszul(T, ["x", "y", "z"])
    s = LiftState.initial(K, 0)
    ls = lift_space(s)
    assert ls.cocycle_dim > 0 and ls.particular.is_zero()
    rng = random.Random(3)
    coords = [rng.randint(-2, 2) for _ in range(ls.cocycle_dim)]
    s2 = lift(s, coords)
    s3 = lift(s2)
    assert not isinstance(s3, Obstructed)
    D = assemble(s3)
    assert compose(D.d, D.d).is_zero()
    back = state_from_flag(D)
    assert back == s3
    win = default_window(D)
    assert homology_hilbert(D, win) == homology_hilbert(fold(K, 0), win)


def test_lift_rejects_bad_explicit_choice():
    K = koszul(T, ["x", "y", "z"])
    s = LiftState.initial(K, 0)
    wrong = EndElement.single_block(K, 2, 2, [["x^2", "0", "0"]], d=0)
    with pytest.raises(InvariantViolation):
        lift(s, wrong)


def test_obstruction_is_chain_map_at_stage_two():
    K = koszul(T, ["x", "y", "z"])
    s = LiftState.initial(K, 0)
    ls = lift_space(s)
    rng = random.Random(11)
    for _ in range(10):
        v = [0] * len(ls._cocycle_vecs[0])
        for z in ls._cocycle_vecs:
            c = rng.randint(-1, 1)
            v = [a + c * b for a, b in zip(v, z)]
        s2 = s.extend(end_slice(K, 2, 0).element(v))
        om = obstruction(s2)
        assert om.degree == 4 and om.internal == 0
        assert is_chain_map(om)


def test_lift_space_dimensions_koszul_xy():
    K = koszul(S, ["x", "y"])
    ls = lift_space(LiftState.initial(K, 2))
    assert ls.quotient_dim == 1
    ls0 = lift_space(LiftState.initial(K, 0))
    assert ls0.quotient_dim == 0


def test_conjugation_certificate():
    K, s0, sA = intro_states("x1*x2")
    cert = find_lift_iso(sA, s0)
    assert cert is not None and cert.verified
    _, _, sB = intro_states("x3^2")
    assert find_lift_iso(sB, s0) is None
    with pytest.raises(HomotopyInvalid):
        homotopic_lift_iso(sB, s0, None)


def test_rescale_preserves_square_zero_and_homology():
    K = koszul(T, ["x", "y", "z"])
    s = lift(lift(LiftState.initial(K, 0), [1] + [0] * (lift_space(LiftState.initial(K, 0)).cocycle_dim - 1)))
    D = assemble(s)
    for lam in (2, -1, 5):
        E = rescale(D, lam)
        assert compose(E.d, E.d).is_zero()
        assert homology_hilbert(E, (0, 4)) == homology_hilbert(D, (0, 4))
        assert assemble(s.rescaled(lam)) == E
    with pytest.raises(ValueError):
        rescale(D, 0)


def test_enumeration_counts():
    K = koszul(S, ["x", "y"])
    # stage-wise classes: one per scalar multiple of the unit strip
    r = enumerate_flags(K, 2, 3)
    assert len(r) == 3
    assert sum(c.multiplicity for c in r.classes) == 3 ** r.log[0]["cocycle_dim"]
    assert len(enumerate_flags(K, 1, 2)) == 1


def test_enumeration_modes_agree():
    K = koszul(S, ["x", "y"])
    a = enumerate_flags(K, 2, 2, mode="exhaustive")
    b = enumerate_flags(K, 2, 2, mode="quotient")
    assert len(a) == len(b)
    assert sorted(c.multiplicity for c in a.classes) == sorted(c.multiplicity for c in b.classes)


def test_budget_and_env_override(monkeypatch):
    K = koszul(T, ["x", "y", "z"])
    with pytest.raises(BudgetExceeded):
        enumerate_flags(K, 0, 2, budget=1, mode="exhaustive")
    monkeypatch.setenv("FLAGFORGE_BUDGET", "1")
    with pytest.raises(BudgetExceeded):
        enumerate_flags(K, 0, 2, budget=10**9, mode="exhaustive")


def test_dim_bounds_structure():
    K = koszul(T, ["x", "y", "z"])
    b = dim_bounds(K, 2)
    assert (b.lower, b.upper) == (3, 3)
    assert [t[0] for t in b.upper_terms] == [2, 3]
    assert b.correction_terms == ()
