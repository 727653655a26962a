import random

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from flagforge.complexes import end_cohomology_dim, koszul
from flagforge.errors import NoWitnessDegree, NotArtinian, SupportUnbounded
from flagforge.polyring import PolyRing, compose
from flagforge.rigidity import (
    CompleteIntersection,
    ExtElement,
    ci_ext_dim,
    is_a_rigid,
    nonrigidity_witness,
    rigid_thresholds,
    rigidity_window,
    socle_degree,
    wedge,
)

degree_lists = st.lists(st.integers(1, 5), min_size=2, max_size=5)


@given(degree_lists)
def test_hilbert_function_vs_series(degs):
    ci = CompleteIntersection(degs, n=len(degs))
    t = sympy.symbols("t")
    num = sympy.prod([1 - t**d for d in degs])
    top = socle_degree(ci) + 2
    series = sympy.series(num / (1 - t) ** len(degs), t, 0, top + 1).removeO()
    poly = sympy.Poly(series, t)
    for m in range(top + 1):
        assert ci.hilbert(m) == poly.coeff_monomial(t**m)
    assert ci.hilbert(socle_degree(ci)) == 1
    assert ci.hilbert(socle_degree(ci) + 1) == 0


def test_ext_dims_small_examples():
    ci = CompleteIntersection([1, 1], n=2)
    assert [ci_ext_dim(ci, i, -i) for i in range(3)] == [1, 2, 1]
    assert ci_ext_dim(ci, 3, -3) == 0
    ci2 = CompleteIntersection([2, 2], n=2)
    # Ext^2 = (S/I)(2+2) has dims of S/I shifted by 4
    assert [ci_ext_dim(ci2, 2, j) for j in range(-5, 0)] == [0, 1, 2, 1, 0]


@given(st.lists(st.integers(1, 3), min_size=2, max_size=3), st.data())
def test_ext_dims_agree_with_endomorphisms(degs, data):
    names = [f"x{k}" for k in range(1, len(degs) + 1)]
    R = PolyRing(names)
    gens = [f"{v}^{d}" for v, d in zip(names, degs)]
    ci = CompleteIntersection(ring=R, gens=gens)
    K = koszul(R, gens)
    i = data.draw(st.integers(0, len(degs)))
    j = data.draw(st.integers(-sum(degs) - 1, 2))
    assert ci_ext_dim(ci, i, j) == end_cohomology_dim(K, i, j)


@given(degree_lists)
def test_window_is_exact(degs):
    degs = sorted(degs)
    assume(degs[-1] > 1)
    ci = CompleteIntersection(degs, n=len(degs))
    w = rigidity_window(ci)
    for a in range(w.lo - 3, w.hi + 4):
        assert is_a_rigid(ci, a).rigid == (a not in w)


def test_linear_case_and_errors():
    assert rigidity_window(CompleteIntersection([1, 1, 1, 1], n=4)) == rigidity_window(
        CompleteIntersection([1, 1], n=2))
    with pytest.raises(NotArtinian):
        rigidity_window(CompleteIntersection([2, 2], n=3))
    with pytest.raises(NotArtinian):
        socle_degree(CompleteIntersection([2], n=2))


def test_thresholds():
    t = rigid_thresholds(CompleteIntersection([2, 2, 5, 7, 9], n=5))
    assert (t.lower, t.upper) == (-17, 17) and not t.always_rigid
    R = PolyRing(["x", "y"])
    tk = rigid_thresholds(koszul(R, ["x", "y"]))
    assert (tk.lower, tk.upper) == (1, 3)
    assert rigid_thresholds(CompleteIntersection([3], n=1)).always_rigid
    with pytest.raises(SupportUnbounded):
        rigid_thresholds(koszul(PolyRing(["x", "y", "z"]), ["x", "y"]))


def test_witness_rejects_out_of_range():
    R = PolyRing(["x1", "x2", "x3"])
    ci = CompleteIntersection(ring=R, gens=["x1^2", "x2^2", "x3^3"])
    with pytest.raises(NoWitnessDegree):
        nonrigidity_witness(ci, 6)
    with pytest.raises(NoWitnessDegree):
        nonrigidity_witness(ci, -1)


def test_witness_structure():
    R = PolyRing(["x1", "x2"])
    ci = CompleteIntersection(ring=R, gens=["x1^2", "x2^2"])
    w = nonrigidity_witness(ci, 2)
    assert w.pair == (1, 2) and str(w.monomial) == "x1*x2"
    assert w.class_degree == -2
    assert compose(w.module.d, w.module.d).is_zero()
    assert not w.state.is_fold()


# exterior algebra ---------------------------------------------------------

R4 = PolyRing(["x1", "x2", "x3", "x4"])
D4 = (2, 2, 2, 2)


@st.composite
def ext_elements(draw, k=None):
    out = ExtElement(R4, D4, {})
    sizes = [k] if k is not None else range(5)
    for size in sizes:
        for J in [tuple(sorted(draw(st.sets(st.integers(1, 4), min_size=size, max_size=size))))]:
            c = draw(st.integers(-2, 2))
            v = draw(st.sampled_from(["1", "x1", "x2*x3"]))
            out = out + ExtElement(R4, D4, {J: R4(v).scale(c)})
    return out


@given(ext_elements(), ext_elements(), ext_elements())
def test_wedge_associative_and_bilinear(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_wedge_graded_commutative(p, q, data):
    a = data.draw(ext_elements(p))
    b = data.draw(ext_elements(q))
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (p * q))


def test_basis_sign_and_square():
    e = ExtElement.basis(R4, D4, 2, 1)
    assert e == -ExtElement.basis(R4, D4, 1, 2)
    assert (e * e).is_zero()
    assert ExtElement.basis(R4, D4, 1, 1).is_zero()
    assert str(ExtElement.basis(R4, D4, 3, coeff="x1")) == "(x1)*e3"
