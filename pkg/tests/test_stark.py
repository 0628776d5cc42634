import pytest

from stark_units.algebra import PolyRing, parse_poly
from stark_units.cache import PolyCache
from stark_units.errors import InvalidInput
from stark_units.logalg import special_poly
from stark_units.stark import (
    compare_routes,
    degree_bound,
    divisibility_expected,
    dot_consistency,
    log_matches_L,
    orbit_properties,
    sigma,
    sigma_properties_check,
    sigma_ring,
    sigma_via_exp,
    sigma_via_extraction,
    stark_unit,
)


def test_small_examples():
    for q in (2, 3, 4, 5):
        for s in range(1, q):
            assert sigma(s, q) == sigma_ring(q, s).one()
        assert sigma(q, q) == parse_poly("1 - z", ring=sigma_ring(q, q))


@pytest.mark.parametrize("q,s", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5)])
def test_three_routes_agree(q, s):
    exp = sigma_via_exp(s, q).sigma
    assert sigma_via_extraction(s, q).sigma == exp
    assert stark_unit(s, q, route="orbit").sigma == exp


def test_extraction_from_given_S():
    q = 3
    S = parse_poly("X1*X2*X3*Z - X1*X2*X3*Z^3", ring=PolyRing(q, 0, 3, False, True))
    assert sigma_via_extraction(3, q, S=S).sigma == parse_poly("1 - z", ring=sigma_ring(q, 3))


@pytest.mark.parametrize("q,s", [(2, 3), (3, 4), (3, 5)])
def test_dot_action_recovers_special_poly(q, s):
    assert dot_consistency(s, q)


@pytest.mark.parametrize("q,s", [(2, 2), (2, 3), (3, 4)])
def test_log_of_sigma_is_L(q, s):
    assert log_matches_L(s, q, prec=degree_bound(s, q) + 3)


def test_sigma_q_plus_one_value():
    # sigma_{q+1} = 1 - (t1 + ... + t_{q+1} - th) z, read off S_{q+1}
    for q in (3, 4, 5):
        ring = sigma_ring(q, q + 1)
        tsum = " + ".join(f"t{i}" for i in range(1, q + 2))
        assert sigma(q + 1, q) == parse_poly(f"1 - ({tsum} - th)*z", ring=ring)


def test_divisibility_examples():
    assert sigma(2, 2) == parse_poly("1 - z", ring=sigma_ring(2, 2))
    assert divisibility_expected(2, 2)
    assert not divisibility_expected(4, 3)
    rep = orbit_properties(4, 3)
    assert rep.ok and not rep.divisible
    assert not divisibility_expected(1, 5)
    assert not orbit_properties(1, 5).divisible


@pytest.mark.parametrize("q", [2, 3])
def test_orbit_divisibility_matches_evaluation(q):
    # (z-1) | sigma_s computed from the orbit table and from the t-form
    for s in range(1, 2 * q + 1):
        rep = orbit_properties(s, q)
        at_one = stark_unit(s, q, route="exp").at_z1()
        assert rep.divisible == at_one.is_zero()
        assert rep.z_degree == stark_unit(s, q, route="exp").z_degree()


def test_properties_report():
    reps = sigma_properties_check(5, 3, log_s_max=4)
    assert all(r.ok for r in reps)
    assert [r.log_check for r in reps] == [True] * 4 + [None]


def test_compare_routes_and_errors():
    assert compare_routes(3, 2).sigma == sigma(3, 2)
    with pytest.raises(InvalidInput):
        stark_unit(0, 2)
    with pytest.raises(InvalidInput):
        stark_unit(2, 2, route="guess")


def test_sigma_cache(tmp_path):
    cache = PolyCache(tmp_path)
    first = sigma(4, 3, cache=cache)
    assert cache.path("sigma", 3, 4).exists()
    assert cache.load("sigma", sigma_ring(3, 4), 4) == first
    assert special_poly(4, 3) is not None
