import pytest
from hypothesis import given, strategies as st

import naive
from stark_units.algebra import Frac, MultiPoly, PolyRing, ThetaPoly, ZSeries, get_field, monic_enum, parse_poly
from stark_units.algebra.laurent import Laurent
from stark_units.carlitz import (
    D,
    TwistOperatorSpec,
    b_poly,
    carlitz_action,
    carlitz_poly,
    ell,
    exp_tau_approx,
    exp_z,
    laurent_scalar_exp,
    laurent_scalar_log,
    log_z,
    psi,
    twist,
)
from stark_units.lseries import L_value_approx


def theta_codes(t: ThetaPoly):
    return naive.trim(t.codes())


@pytest.mark.parametrize("q,i", [(q, i) for q in (2, 3, 5) for i in range(4 if q < 5 else 3)])
def test_D_and_l_against_enumeration(q, i):
    f = get_field(q)
    assert theta_codes(D(f, i)) == naive.D(q, i)
    # (-1)^i l_i is the lcm of the monic polynomials of degree i
    sign = (-1) ** i % q
    li = naive.trim(tuple(c * sign % q for c in ell(f, i).codes()))
    assert li == naive.lcm_monics(q, i)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_D_l_degrees(q):
    f = get_field(q)
    for i in range(7):
        assert D(f, i).degree == i * q**i
        assert ell(f, i).degree == sum(q**j for j in range(1, i + 1))


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("d", range(0, 4))
def test_carlitz_poly_against_composition(q, d):
    f = get_field(q)
    for a in monic_enum(f, d)[:9]:
        mine = carlitz_poly(a)
        ref = naive.carlitz(naive.trim(a.codes()), q)
        got = {q ** e[0]: naive.trim(f.raw_codes(c.num)) for e, c in mine.terms.items()}
        assert got == ref


def test_carlitz_examples():
    for q in (2, 3, 4):
        f = get_field(q)
        th = ThetaPoly.theta(f)
        ring = PolyRing(q, 0, 1)
        X = ring.var("X1")
        assert carlitz_action(th, X) == parse_poly(f"th*X1 + X1^{q}", ring=ring)
        want = parse_poly(f"th^2*X1 + (th^{q} + th)*X1^{q} + X1^{q * q}", ring=ring)
        assert carlitz_action(th * th, X) == want
    f3 = get_field(3)
    a = ThetaPoly.from_codes(f3, [1, 0, 0, 1])
    assert psi(0, a) == a
    assert psi(2, ThetaPoly.theta(f3)).is_zero()
    for d in range(4):
        for m in monic_enum(f3, d):
            assert psi(d, m) == ThetaPoly.const(f3, 1)


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_action_is_multiplicative(q, data):
    f = get_field(q)
    ring = PolyRing(q, 0, 2)
    codes = st.lists(st.integers(0, q - 1), min_size=1, max_size=3)
    a = ThetaPoly.from_codes(f, data.draw(codes))
    b = ThetaPoly.from_codes(f, data.draw(codes))
    e = data.draw(st.tuples(st.integers(0, 2), st.integers(0, 1)))
    F = MultiPoly(ring, {e: Frac.one(f)}) + ring.var("X2")
    assert carlitz_action(a * b, F) == carlitz_action(a, carlitz_action(b, F))


def test_b_poly():
    ring = PolyRing(3, 1, 0)
    assert b_poly(0, 1, ring) == ring.one()
    assert b_poly(2, 1, ring) == parse_poly("(t1 - th)*(t1 - th^3)", ring=ring)


def test_twist_examples():
    ring = PolyRing(3, 1, 0)
    tau = TwistOperatorSpec("tau", 1)
    assert twist(tau, ring.var("t1")) == parse_poly("(t1 - th)*t1", ring=ring)
    assert twist(tau, parse_poly("th*t1", ring=ring)) == parse_poly("th^3*(t1 - th)*t1", ring=ring)


@given(st.data())
def test_twist_product_rule(data):
    ring = PolyRing(2, 2, 0)
    f = get_field(2)

    def rand_poly():
        terms = {}
        for _ in range(data.draw(st.integers(1, 3))):
            e = data.draw(st.tuples(st.integers(0, 2), st.integers(0, 2)))
            c = ThetaPoly.from_codes(f, data.draw(st.lists(st.integers(0, 1), min_size=1, max_size=3)))
            if not c.is_zero():
                terms[e] = Frac.from_poly(c)
        return MultiPoly(ring, terms)

    g, h = rand_poly(), rand_poly()
    d = data.draw(st.integers(0, 3))
    tau = TwistOperatorSpec("tau", 2, d)
    phi = TwistOperatorSpec("phi", 2, d)
    assert twist(tau, g * h) == twist(tau, g) * twist(phi, h)


def test_exp_log_examples():
    ring = PolyRing(3, 1, 0, True)
    f = get_field(3)
    one = ZSeries.from_poly(ring.one(), 4)
    got = log_z(one, 1)
    for k in range(4):
        want = b_poly(k, 1, ring).scale(Frac(f.P1, ell(f, k).raw))
        assert got.coeff(k) == want
    zero = ZSeries.zero(ring, 5)
    assert exp_z(zero, 1).is_zero()
    g = ZSeries.from_poly(parse_poly("1 + z*t1", ring=ring), 6)
    assert exp_z(log_z(g, 1), 1) == g


@pytest.mark.parametrize("q", [2, 3])
@given(st.data())
def test_exp_log_inverse(q, data):
    ring = PolyRing(q, 2, 0, True)
    terms = {}
    for _ in range(data.draw(st.integers(1, 4))):
        e = data.draw(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 3)))
        terms[e] = Frac.from_int(ring.field, data.draw(st.integers(1, q - 1)))
    g = ZSeries.from_poly(MultiPoly(ring, terms), 5)
    assert log_z(exp_z(g, 2), 2) == g
    assert exp_z(log_z(g, 2), 2) == g


def test_exp_tau_sigma1():
    # sigma_1 = 1 for q > 2, so exp_C(L(1,1)) = 1
    approx = L_value_approx(1, 1, 12, -12, 3)
    res = exp_tau_approx(approx, -12, 1)
    exact = {(0,): Frac.one(get_field(3))}
    worst, _ = res.value.error_against(exact)
    assert max(worst if worst is not None else -99, res.certified_ap) <= -10


def test_scalar_exp_log_roundtrip():
    f = get_field(3)
    # v_inf(x) = 2 > q/(q-1)
    x = Laurent.from_frac(f, Frac(f.P1, f.THETA**2 + f.P1), -20)
    back = laurent_scalar_log(laurent_scalar_exp(x, -20), -20)
    diff = back - x
    assert diff.degree() is None or diff.degree() <= -15
