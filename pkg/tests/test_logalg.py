import random

import pytest

import naive
from stark_units.algebra import Frac, MultiPoly, PolyRing, get_field, parse_poly
from stark_units.cache import PolyCache
from stark_units.errors import InvalidInput
from stark_units.logalg import (
    L_k,
    Z_k,
    log_algebraic,
    negative_L_via_derivative,
    product_corollary_holds,
    search,
    special_orbits,
    special_poly,
)
from stark_units.norms import linear_monomial
from stark_units.orbits import L_orbits, OrbitEngine, expand_X


def X_ring(q, n, with_Z=False):
    return PolyRing(q, 0, n, False, with_Z)


@pytest.mark.parametrize("q,k,e", [(2, 1, (1,)), (2, 2, (3,)), (2, 2, (1, 1)), (3, 1, (2,)), (3, 2, (1, 1)), (3, 1, (4, 1))])
def test_L_k_against_brute_force(q, k, e):
    ring = X_ring(q, len(e))
    F = MultiPoly(ring, {e: Frac.one(ring.field)})
    nums, den = naive.L_k_of_monomial(q, k, e)
    names = [f"X{i}" for i in range(1, len(e) + 1)]
    assert naive.equals_sum(ring.field, L_k(F, k), names, nums, den)


def test_L_k_examples():
    ring = X_ring(2, 1)
    X = ring.var("X1")
    assert L_k(X, 0) == X
    assert L_k(X, 1) == parse_poly("X1^2/(th^2 + th)", ring=ring)
    assert L_k(X, -3).is_zero()
    assert Z_k(X, 0) == X
    assert Z_k(X, 1).is_zero()
    with pytest.raises(InvalidInput):
        L_k(PolyRing(2, 1, 1).var("t1"), 1)


def test_Z_k_vanishes_for_X1234_q3():
    F = linear_monomial(4, 3)
    assert Z_k(F, 2).is_zero()


@pytest.mark.parametrize("q", [2, 3])
def test_orbits_match_full_expansion(q):
    s = 3
    ring = X_ring(q, s)
    F = linear_monomial(s, q)
    f = get_field(q)
    for d in range(3):
        assert expand_X(L_orbits(f, s, d), ring) == L_k(F, d)


@pytest.mark.parametrize("q,s", [(2, 3), (3, 4)])
def test_special_poly_matches_generic_route(q, s):
    generic = log_algebraic(linear_monomial(s, q)).LF
    assert special_poly(s, q) == generic


def test_special_examples():
    r2 = X_ring(2, 2, True)
    assert special_poly(2, 2) == parse_poly("X1*X2*Z + X1*X2*Z^2", ring=r2)
    for q in (3, 5):
        for s in range(1, q):
            xs = "*".join(f"X{i}" for i in range(1, s + 1))
            assert special_poly(s, q) == parse_poly(f"{xs}*Z", ring=X_ring(q, s, True))


RNG = random.Random(11)


def random_integral(q, nx, deg, theta_deg, terms=3):
    f = get_field(q)
    ring = X_ring(q, nx)
    out = {}
    for _ in range(terms):
        e = tuple(RNG.randint(0, deg) for _ in range(nx))
        c = Frac(f.raw_poly([RNG.randrange(q) for _ in range(theta_deg + 1)]), f.P1)
        if not c.is_zero():
            out[e] = c
    return MultiPoly(ring, out or {(1,) * nx: Frac.one(f)})


@pytest.mark.parametrize("q", [2, 3])
def test_log_algebraic_congruence_mod_Zq(q):
    # L(F, Z) = F Z mod Z^q
    for _ in range(6):
        F = random_integral(q, 2, 2, 1)
        res = log_algebraic(F)
        LF = res.LF
        zs = LF.ring.var_index("Z")
        low = MultiPoly(LF.ring, {e: c for e, c in LF.terms.items() if e[zs] < q})
        assert low == F.embed(LF.ring) * LF.ring.var("Z")
        assert all(z.is_integral() for z in res.Zk)


def test_log_algebraic_rejects_nonintegral():
    ring = X_ring(2, 1)
    with pytest.raises(InvalidInput):
        log_algebraic(parse_poly("X1/th", ring=ring))


def test_product_corollary_and_search():
    ring = X_ring(2, 1)
    assert product_corollary_holds(ring.var("X1"))
    hits = list(search(2, 1, 2, 0))
    assert ring.var("X1") in hits


@pytest.mark.parametrize("q,N,s", [(2, 0, 1), (2, 1, 1), (3, 0, 1), (3, 0, 2), (3, 1, 1)])
def test_derivative_identity(q, N, s):
    assert not negative_L_via_derivative(N, s, q).is_zero()


def test_orbit_engine_guard_vanishes():
    eng = OrbitEngine(get_field(3), 4)
    assert not eng.Z(2) and eng.Z(1)


def test_special_cache_roundtrip(tmp_path):
    cache = PolyCache(tmp_path)
    first = special_poly(3, 3, cache=cache)
    path = cache.path("S", 3, 3)
    assert path.exists()
    assert special_poly(3, 3, cache=cache) == first
    # a header from another format version is ignored
    text = path.read_text().replace('"format_version": 1', '"format_version": 0')
    path.write_text(text)
    assert cache.load("S", first.ring, 3) is None
    assert special_orbits(3, 3).poly == first


def test_orbit_chunking_is_invisible(monkeypatch):
    import stark_units.orbits as orbits

    f = get_field(2)
    whole = L_orbits(f, 5, 4)
    monkeypatch.setattr(orbits, "CHUNK", 7)
    assert L_orbits(f, 5, 4) == whole
