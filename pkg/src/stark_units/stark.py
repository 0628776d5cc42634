"""Stark units sigma_s(t, z) in A[t_1..t_s, z].

Three ways in:

* ``sigma_via_exp``: sigma_s = exp_z(L(1,s,z)) on the t-side, with one
  guard coefficient past the degree bound that must vanish;
* ``sigma_via_extraction``: read sigma_s off S_s through the dot action,
  writing S_s in the basis prod H_{q^n_i}(X_i) Z^{q^k};
* ``sigma_via_orbits``: the symmetric orbit data of S_s, where the
  coefficient of prod X_l^{q^k_l} Z^{q^m} is also the coefficient of
  prod b_{k_l}(t_l) z^m in sigma_s (b_k(t).X = X^{q^k}).

Large (q, s) are only handled in orbit form (see :func:`orbit_properties`).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field as dc_field

from .algebra.field import get_field
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac
from .algebra.zseries import ZSeries
from .cache import PolyCache
from .carlitz import exp_z, log_z
from .errors import DegreeViolation, IntegralityViolation, InvalidInput, MismatchError, NonLinearInput
from .logalg import special_orbits, special_poly
from .lseries import L_series
from .norms import dot_action, h_expand
from .orbits import OrbitEngine, newton_to_t

ROUTES = ("exp", "extract", "orbit")


@dataclass
class StarkUnit:
    q: int
    s: int
    sigma: MultiPoly
    route: str

    def z_degree(self) -> int:
        return self.sigma.degree("z") if not self.sigma.is_zero() else -1

    def at_z1(self) -> MultiPoly:
        """sigma_s(t, 1)."""
        return self.sigma.evaluate_var("z", 1)

    def __str__(self):
        return str(self.sigma)


def sigma_ring(q: int, s: int, modulus=None) -> PolyRing:
    return PolyRing(q, s, 0, True, False, modulus)


def degree_bound(s: int, q: int) -> int:
    """floor((s-1)/(q-1))."""
    return (s - 1) // (q - 1)


def divisibility_expected(s: int, q: int) -> bool:
    """(z-1) | sigma_s exactly when s > 1 and s = 1 mod q-1."""
    return s > 1 and (s - 1) % (q - 1) == 0


def _check_s(s: int) -> None:
    if not isinstance(s, int) or s < 1:
        raise InvalidInput("s must be an integer >= 1")


def sigma_via_exp(s: int, q: int, modulus=None) -> StarkUnit:
    _check_s(s)
    bound = degree_bound(s, q)
    prec = bound + 2
    L = L_series(1, s, prec, q, modulus).to_zseries()
    E = exp_z(L, s)
    for m in range(bound + 1, prec):
        if not E.coeff(m).is_zero():
            raise DegreeViolation(f"sigma_{s} has a nonzero z^{m} coefficient (bound {bound})")
    poly = ZSeries(E.ring, E.coeffs[: bound + 1], None, "z").to_poly()
    poly = poly.embed(sigma_ring(q, s, modulus))
    if not poly.is_integral():
        raise IntegralityViolation(f"sigma_{s} has a non-polynomial coefficient")
    return StarkUnit(q, s, poly, "exp")


def _log_q(n: int, q: int) -> int:
    k = 0
    while n > 1:
        if n % q:
            return -1
        n //= q
        k += 1
    return k if n == 1 else -1


def sigma_via_extraction(s: int, q: int, modulus=None, S: MultiPoly | None = None) -> StarkUnit:
    """Invert the dot action on S_s (or on a given S in A[X_1..X_s, Z])."""
    _check_s(s)
    if S is None:
        S = special_poly(s, q, modulus)
    exp = h_expand(S)
    ring = sigma_ring(q, s, modulus)
    xr = S.ring
    zslot = xr.index.get("Z")
    terms = {}
    for e, c in exp.terms.items():
        out = [0] * ring.nvars
        for i in range(1, s + 1):
            n = _log_q(e[xr.X(i)], q)
            if n < 0:
                raise NonLinearInput(f"S_{s} is not F_q-linear in X{i}")
            out[ring.t(i)] = n
        k = _log_q(e[zslot], q) if zslot is not None else 0
        if k < 0:
            raise NonLinearInput(f"S_{s} has a Z-exponent that is not a power of q")
        out[ring.var_index("z")] = k
        terms[tuple(out)] = c
    poly = MultiPoly(ring, terms)
    if not poly.is_integral():
        raise IntegralityViolation(f"sigma_{s} has a non-polynomial coefficient")
    return StarkUnit(q, s, poly, "extract")


def sigma_via_orbits(s: int, q: int, modulus=None) -> StarkUnit:
    _check_s(s)
    res = special_orbits(q, s, modulus)
    ring = sigma_ring(q, s, modulus)
    poly = ring.zero()
    for m, orb in enumerate(res.orbits):
        poly = poly + newton_to_t(orb, ring, m)
    return StarkUnit(q, s, poly, "orbit")


_SIGMA: dict = {}
_SIGMA_LOCK = threading.Lock()


def sigma(s: int, q: int, modulus=None, route: str = "orbit", cache: PolyCache | None = None) -> MultiPoly:
    """sigma_s as a MultiPoly in t_1..t_s, z (memoized; optional disk cache)."""
    return stark_unit(s, q, modulus, route, cache).sigma


def stark_unit(s: int, q: int, modulus=None, route: str = "orbit", cache: PolyCache | None = None) -> StarkUnit:
    if route not in ROUTES:
        raise InvalidInput(f"unknown route {route!r}; pick one of {', '.join(ROUTES)}")
    field = get_field(q, modulus)
    key = (q, field.spec.modulus, s, route)
    ring = sigma_ring(q, s, modulus)
    with _SIGMA_LOCK:
        unit = _SIGMA.get(key)
    if unit is None and cache is not None:
        poly = cache.load("sigma", ring, s)
        if poly is not None:
            return StarkUnit(q, s, poly, route)
    if unit is None:
        fn = {"exp": sigma_via_exp, "extract": sigma_via_extraction, "orbit": sigma_via_orbits}[route]
        unit = fn(s, q, modulus)
        with _SIGMA_LOCK:
            _SIGMA[key] = unit
    if cache is not None and not cache.path("sigma", q, s).exists():
        cache.store("sigma", ring, s, unit.sigma)
    return unit


def compare_routes(s: int, q: int, modulus=None, routes=("exp", "extract")) -> StarkUnit:
    """Run the given routes and require identical results."""
    units = [stark_unit(s, q, modulus, r) for r in routes]
    for u in units[1:]:
        if u.sigma != units[0].sigma:
            raise MismatchError(f"sigma_{s}: routes {units[0].route} and {u.route} disagree")
    return units[0]


# -- properties ---------------------------------------------------------------


@dataclass
class SigmaReport:
    q: int
    s: int
    z_degree: int
    bound: int
    degree_ok: bool
    divisible: bool
    divisible_expected: bool
    log_check: bool | None  # None when skipped
    seconds: float
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.degree_ok and self.divisible == self.divisible_expected and self.log_check is not False


def orbit_properties(s: int, q: int, modulus=None, deadline: float | None = None) -> SigmaReport:
    """Degree bound and (z-1)-divisibility of sigma_s in orbit form.

    Z_m(X_1..X_s) for m = 0..bound+1 gives the coefficients of sigma_s in
    the basis prod b_{k_l}(t_l) z^m (the z^{bound+1} term is the guard).
    Both properties are coefficientwise in that basis: the degree bound
    says Z_m = 0 for m > bound, and (z-1) | sigma_s says the sum over m of
    every orbit coefficient vanishes, which is also sigma_s(t,1) = 0.
    """
    t0 = time.monotonic()
    field = get_field(q, modulus)
    bound = degree_bound(s, q)
    eng = OrbitEngine(field, s, deadline)
    Zs = [eng.Z(m) for m in range(bound + 2)]
    deg = max((m for m, z in enumerate(Zs) if z), default=-1)
    total: dict = {}
    for z in Zs:
        for k, v in z.items():
            total[k] = total[k] + v if k in total else v
    divisible = all(v.is_zero() for v in total.values())
    integral = all(v.is_integral() for z in Zs for v in z.values())
    rep = SigmaReport(q, s, deg, bound, deg <= bound, divisible, divisibility_expected(s, q), None,
                      time.monotonic() - t0)
    if not integral:
        rep.notes.append("non-integral orbit coefficient")
        rep.degree_ok = False
    return rep


def sigma_properties_check(s_max: int, q: int, modulus=None, log_prec: int | None = None,
                           log_s_max: int | None = None, deadline: float | None = None) -> list[SigmaReport]:
    """For 1 <= s <= s_max: degree bound, divisibility, and (for s <= log_s_max)
    log_z(sigma_s) = L(1,s,z) through z^{log_prec-1}."""
    if s_max < 1:
        raise InvalidInput("s_max must be >= 1")
    out = []
    for s in range(1, s_max + 1):
        rep = orbit_properties(s, q, modulus, deadline)
        if log_s_max is not None and s <= log_s_max:
            t0 = time.monotonic()
            rep.log_check = log_matches_L(s, q, modulus, log_prec)
            rep.seconds += time.monotonic() - t0
        out.append(rep)
    return out


def log_matches_L(s: int, q: int, modulus=None, prec: int | None = None) -> bool:
    """log_z(sigma_s) = L(1,s,z) through z^{prec-1} (default prec: bound + 2)."""
    if prec is None:
        prec = degree_bound(s, q) + 2
    sig = sigma(s, q, modulus)
    lhs = log_z(ZSeries.from_poly(sig, prec, "z"), s)
    rhs = L_series(1, s, prec, q, modulus).to_zseries()
    return all(lhs.coeff(k) == rhs.coeff(k) for k in range(prec))


def dot_consistency(s: int, q: int, modulus=None) -> bool:
    """sigma_s . (X_1...X_s Z) = S_s."""
    ring = PolyRing(q, 0, s, False, True, modulus)
    XZ = MultiPoly(ring, {tuple([1] * (s + 1)): Frac.one(ring.field)})
    return dot_action(sigma(s, q, modulus), XZ) == special_poly(s, q, modulus)
