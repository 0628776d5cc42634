import pytest
from hypothesis import given, strategies as st

import naive
from stark_units.algebra import Frac, MultiPoly, PolyRing, ZSeries, get_field, parse_poly
from stark_units.algebra.laurent import ApproxPoly
from stark_units.carlitz import b_poly, ell, exp_tau_approx
from stark_units.errors import PreconditionError
from stark_units.lseries import (
    L_series,
    L_value_approx,
    decomposition_sides,
    default_r,
    eval_z1,
    log_Nz,
    polylog_corollary_X,
    polylog_decompose,
    power_sum,
    scalar_power_sum,
)


def tnames(s):
    return [f"t{i}" for i in range(1, s + 1)]


@pytest.mark.parametrize(
    "q,N,s,d",
    [(2, 1, 1, 2), (2, 1, 2, 3), (2, 2, 2, 2), (2, 0, 3, 2), (2, -1, 2, 2), (3, 1, 2, 2), (3, 2, 1, 2), (3, -2, 1, 2), (5, 1, 2, 1)],
)
def test_L_coefficient_against_brute_force(q, N, s, d):
    L = L_series(N, s, d + 1, q)
    nums, den = naive.L_coefficient(q, N, s, d)
    assert naive.equals_sum(get_field(q), L.coeff(d), tnames(s), nums, den)


def test_L_series_examples():
    L = L_series(1, 1, 2, 2)
    ring = L.ring
    assert L.coeff(1) == parse_poly("(t1 + th)/(th^2 + th)", ring=ring)
    exact = L_series(0, 1, 1, 2)
    assert exact.exact and str(exact.to_poly()) == "1 + z"
    for q in (2, 3):
        L = L_series(1, 1, 5, q)
        f = get_field(q)
        for d in range(5):
            assert L.coeff(d) == b_poly(d, 1, L.ring).scale(Frac(f.P1, ell(f, d).raw))


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_power_sums_against_brute_force(q, s):
    for k in range(4 if q == 2 else 3):
        got = power_sum(k, s, q)
        ref = naive.power_sum(q, k, s)
        assert naive.equals_sum(get_field(q), got, tnames(s), ref, (1,))


def test_power_sum_examples():
    assert power_sum(1, 1, 2) == PolyRing(2, 1, 0).one()
    assert power_sum(2, 1, 2).is_zero()
    for q in (2, 3, 4):
        assert power_sum(0, 2, q) == PolyRing(q, 2, 0).one()


def test_scalar_power_sums():
    f3 = get_field(3)
    assert scalar_power_sum(0, 0, 3) == Frac.one(f3)
    for q in (2, 3):
        f = get_field(q)
        for j in range(3):
            m = q**j - 1
            total = Frac.zero(f)
            for d in range(m // (q - 1) + 3):
                v = scalar_power_sum(d, m, q)
                if d > m // (q - 1):
                    assert v.is_zero()
                total = total + v
            assert total == (Frac.one(f) if j == 0 else Frac.zero(f))


def test_log_Nz_examples():
    ring = PolyRing(3, 1, 0, True)
    f = get_field(3)
    zero = ZSeries.zero(ring, 4)
    assert log_Nz(2, 1, zero).is_zero()
    got = log_Nz(1, 1, ZSeries.from_poly(ring.one(), 4))
    for k in range(4):
        assert got.coeff(k) == b_poly(k, 1, ring).scale(Frac(f.P1, ell(f, k).raw))


@given(st.data())
def test_log_Nz_is_linear(data):
    ring = PolyRing(2, 1, 0, True)

    def rand():
        terms = {}
        for _ in range(data.draw(st.integers(0, 3))):
            terms[(data.draw(st.integers(0, 2)), data.draw(st.integers(0, 3)))] = Frac.one(ring.field)
        return ZSeries.from_poly(MultiPoly(ring, terms), 4)

    g, h = rand(), rand()
    N = data.draw(st.integers(-1, 3))
    assert log_Nz(N, 1, g + h) == log_Nz(N, 1, g) + log_Nz(N, 1, h)


def test_polylog_examples():
    # s = q, sigma_q = 1 - z: single h_0 = (t1 - th)(1 - z)
    for q in (2, 3):
        dec = polylog_decompose(1, 1, 1, 6, q)
        assert dec.holds and dec.s == q and len(dec.h) == 1
        want = parse_poly("(t1 - th)*(1 - z)", ring=PolyRing(q, 1, 0, True))
        assert dec.h[0].to_poly() == want
    dec = polylog_decompose(2, 1, 1, 7, 3)
    assert dec.holds and dec.s == 2
    assert dec.h[0].to_poly() == b_poly(1, 1, PolyRing(3, 1, 0, True))
    lhs, rhs = decomposition_sides(dec)
    assert lhs == rhs


def test_polylog_r2_normalizations():
    # the stated l_{r-1}^{q^r-N} normalization fails already at z^0 when
    # r = 2; the termwise factor makes the identity hold
    stated = polylog_decompose(3, 2, 2, 7, 2)
    assert not stated.holds and stated.first_mismatch == 0
    assert polylog_decompose(3, 2, 2, 7, 2, normalization="termwise").holds


def test_polylog_r_equal_one_normalizations_agree():
    a = polylog_decompose(2, 1, 1, 5, 3)
    b = polylog_decompose(2, 1, 1, 5, 3, normalization="termwise")
    assert a.holds and b.holds
    assert decomposition_sides(a) == decomposition_sides(b)


def test_polylog_precondition():
    with pytest.raises(PreconditionError):
        polylog_decompose(5, 1, 1, 3, 2)
    assert default_r(5, 2) == 3 and default_r(1, 3) == 1 and default_r(-2, 2) == 1


@pytest.mark.parametrize("q,N,n,r", [(2, 1, 1, 1), (3, 2, 1, 1)])
def test_polylog_corollary_X(q, N, n, r):
    holds, lhs, rhs = polylog_corollary_X(N, n, r, 4, q)
    assert holds and not lhs.is_zero()


def test_eval_z1_exact():
    L = L_series(0, 1, 1, 2)
    assert eval_z1(L).is_zero()
    L3 = L_series(0, 2, 1, 3)
    v = eval_z1(L3)
    assert v.is_integral() and all(c.is_constant() for c in v.terms.values())


def test_eval_z1_sigma_small_s():
    # s <= q-1: sigma_s = 1, so exp_C(L(1,s)) = 1
    q = 3
    for s in (1, 2):
        approx = eval_z1(L_series(1, s, 8, q), -8)
        res = exp_tau_approx(approx, -8, s)
        worst, _ = res.value.error_against({(0,) * s: Frac.one(get_field(q))})
        assert max(worst if worst is not None else -99, res.certified_ap) <= -8


def test_L_value_approx_agrees_with_exact_sum():
    q, s, deg = 3, 2, 3
    exact = L_series(1, s, deg + 1, q)
    approx = L_value_approx(1, s, deg, -30, q)
    ring = exact.ring
    total = ring.zero()
    for d in range(deg + 1):
        total = total + exact.coeff(d)
    worst, ap = approx.error_against(dict(total.terms))
    assert worst is None or worst <= ap
