from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stark_units.algebra import Frac, MultiPoly, PolyRing, ThetaPoly, get_field, parse_poly
from stark_units.carlitz import carlitz_action
from stark_units.norms import (
    NormValue,
    digit_sum,
    dot_action,
    gauss_norm,
    h_expand,
    h_poly,
    linear_monomial,
    sup_norm,
)


def theta_coeff(q, codes):
    f = get_field(q)
    return Frac(f.raw_poly(list(codes)), f.P1)


def rand_F(data, q, nx=2, max_exp=None, max_terms=3):
    ring = PolyRing(q, 0, nx)
    max_exp = max_exp or q + 1
    terms = {}
    for _ in range(data.draw(st.integers(1, max_terms))):
        e = tuple(data.draw(st.integers(0, max_exp)) for _ in range(nx))
        c = theta_coeff(q, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3)))
        if not c.is_zero():
            terms[e] = c
    return MultiPoly(ring, terms)


def test_h_examples():
    for q in (2, 3, 4):
        ring = PolyRing(q, 0, 1)
        assert h_poly(0, ring=ring) == ring.one()
        assert h_poly(1, ring=ring) == ring.var("X1")
        assert h_poly(q, ring=ring) == parse_poly(f"th*X1 + X1^{q}", ring=ring)
        assert h_poly(q + 1, ring=ring) == parse_poly(f"X1*(th*X1 + X1^{q})", ring=ring)


def test_h_expand_example():
    for q in (2, 3, 5):
        ring = PolyRing(q, 0, 1)
        exp = h_expand(ring.var("X1", q))
        one = Frac.one(ring.field)
        assert exp.terms == {(q,): one, (1,): -theta_coeff(q, [0, 1])}


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_h_expand_roundtrip(q, data):
    F = rand_F(data, q)
    assert h_expand(F).to_multipoly() == F


def test_norm_examples():
    q = 3
    ring = PolyRing(q, 0, 1)
    assert str(sup_norm(ring.var("X1", 2))) == "q^(2/2) = 3"
    assert sup_norm(parse_poly("th*X1 + X1^3", ring=ring)) == NormValue(q, Fraction(1, 2))
    assert sup_norm(ring.zero()).is_zero
    tr = PolyRing(q, 1, 0)
    assert gauss_norm(parse_poly("t1 - th", ring=tr)) == NormValue(q, Fraction(1))
    assert gauss_norm(parse_poly("1/th*t1^2", ring=tr)) == NormValue(q, Fraction(-1))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_monomial_norms(q):
    ring = PolyRing(q, 0, 3)
    for a in range(7):
        for b in range(7 - a):
            for c in range(7 - a - b):
                F = MultiPoly(ring, {(a, b, c): Frac.one(ring.field)})
                assert sup_norm(F) == NormValue(q, Fraction(a + b + c, q - 1))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_h_norms(q):
    for N in range(q**3 + 1):
        assert sup_norm(h_poly(N, q)) == NormValue(q, Fraction(digit_sum(N, q), q - 1))


@pytest.mark.parametrize("q", [2, 3])
def test_t_acts_by_q_shift_on_H(q):
    ring = PolyRing(q, 1, 1)
    t = ring.var("t1")
    for N in range(1, q**3):
        assert dot_action(t, h_poly(N, ring=ring)) == h_poly(q * N, ring=ring)


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_action_is_isometric(q, data):
    f = get_field(q)
    F = rand_F(data, q)
    a = ThetaPoly.from_codes(f, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3)))
    if a.is_zero():
        a = ThetaPoly.const(f, 1)
    assert sup_norm(carlitz_action(a, F)) == sup_norm(F)


def rand_t(data, q, nt=2):
    ring = PolyRing(q, nt, 0)
    terms = {}
    for _ in range(data.draw(st.integers(1, 3))):
        e = tuple(data.draw(st.integers(0, 2)) for _ in range(nt))
        c = theta_coeff(q, data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3)))
        den = data.draw(st.sampled_from([[1], [0, 1], [1, 1]]))
        c = c * Frac(get_field(q).P1, get_field(q).raw_poly(den))
        if not c.is_zero():
            terms[e] = c
    return MultiPoly(ring, terms)


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_gauss_norm_multiplicative(q, data):
    f, g = rand_t(data, q), rand_t(data, q)
    assert gauss_norm(f * g) == gauss_norm(f) * gauss_norm(g)


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_dot_action_norm(q, data):
    # F divisible by X1 X2: no H_0 component in a variable that t_j moves
    f = rand_t(data, q)
    F = rand_F(data, q, max_exp=q) * linear_monomial(2, q)
    assert sup_norm(dot_action(f, F)) == gauss_norm(f) * sup_norm(F)


def test_dot_action_norm_needs_no_H0_component():
    # t1 - 1 kills constants: the product formula fails on F = 1
    ring = PolyRing(3, 1, 1)
    f = parse_poly("t1 - 1", ring=ring)
    assert dot_action(f, ring.one()).is_zero()
    assert not gauss_norm(f).is_zero


def test_dot_action_examples():
    q = 3
    ring = PolyRing(q, 1, 1, True, True)
    assert dot_action(ring.var("t1"), ring.var("X1")) == parse_poly("th*X1 + X1^3", ring=ring)
    XZ = parse_poly("X1*Z", ring=ring)
    assert dot_action(parse_poly("t1*z", ring=ring), XZ) == parse_poly("(th*X1 + X1^3)*Z^3", ring=ring)
    r2 = PolyRing(q, 2, 2)
    X12 = linear_monomial(2, q).embed(r2)
    for n in range(4):
        got = dot_action(r2.var("t1", n), X12)
        assert got == h_poly(q**n, ring=r2) * r2.var("X2")
