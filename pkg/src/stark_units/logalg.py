"""Log-algebraicity: L_k(F), Z_k(F), the polynomial L(F, Z) and the S_s.

L_k(F) = sum_{a in A+,k} (a*F)/a and Z_k(F) = sum_j L_{k-j}(F)^{q^j} / D_j.
For F with coefficients in A every Z_k(F) has coefficients in A and
Z_k(F) = 0 once q^k exceeds ||F||; the polynomial sum_k Z_k(F) Z^{q^k}
is what this module computes and checks.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field as dc_field
from itertools import product

from .algebra.field import GF, get_field
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac, frob_raw, monic_enum_raw
from .cache import PolyCache
from .carlitz import carlitz_coeffs, tables
from .errors import InvalidInput, IntegralityViolation, MismatchError, NonzeroTail
from .norms import dot_action, sup_norm
from .orbits import OrbitEngine, expand_X

# -- L_k on single monomials ------------------------------------------------


def _raw_powers(field: GF, cs: list, max_e: int) -> list[dict]:
    """[C_a(X)^k as {exponent: raw}] for k = 0..max_e."""
    base = {field.q**k: c for k, c in enumerate(cs) if not c.is_zero()}
    out = [{0: field.P1}]
    for _ in range(max_e):
        prev = out[-1]
        nxt: dict = {}
        for e1, c1 in prev.items():
            for e2, c2 in base.items():
                e = e1 + e2
                v = c1 * c2
                nxt[e] = nxt[e] + v if e in nxt else v
        out.append({e: c for e, c in nxt.items() if not c.is_zero()})
    return out


_MONO_CACHE: dict = {}
_MONO_LOCK = threading.Lock()


def _L_monomial(field: GF, k: int, e: tuple[int, ...]) -> dict:
    """L_k(X^e) as {exponent tuple: Frac} (exponents over the X-slots of e)."""
    key = (id(field), k, e)
    with _MONO_LOCK:
        got = _MONO_CACHE.get(key)
    if got is not None:
        return got
    lk = tables(field).l(k)
    max_e = max(e, default=0)
    acc: dict = {}
    for raw, _codes in monic_enum_raw(field, k):
        omega = lk.exact_division(raw)
        pw = _raw_powers(field, carlitz_coeffs(field, raw), max_e)
        partial = {(): omega}
        for ei in e:
            nxt = {}
            for pe, pc in partial.items():
                for xe, xc in pw[ei].items():
                    nxt[pe + (xe,)] = pc * xc
            partial = nxt
        for pe, pc in partial.items():
            acc[pe] = acc[pe] + pc if pe in acc else pc
    out = {pe: Frac(v, lk) for pe, v in acc.items() if not v.is_zero()}
    with _MONO_LOCK:
        _MONO_CACHE[key] = out
    return out


def _check_X_only(F: MultiPoly) -> list[int]:
    ring = F.ring
    for n in F.variables_used():
        if not n.startswith("X"):
            raise InvalidInput(f"L_k and Z_k act on K[X]; found {n}")
    return [ring.X(i) for i in range(1, ring.nx + 1)]


def L_k(F: MultiPoly, k: int) -> MultiPoly:
    """sum over monic a of degree k of (a*F)/a; zero for k < 0."""
    ring = F.ring
    if k < 0 or F.is_zero():
        return ring.zero()
    xs = _check_X_only(F)
    field = ring.field
    out: dict = {}
    for e, c in F.terms.items():
        ex = tuple(e[i] for i in xs)
        for pe, v in _L_monomial(field, k, ex).items():
            full = [0] * ring.nvars
            for i, x in zip(xs, pe):
                full[i] = x
            full = tuple(full)
            w = v * c
            out[full] = out[full] + w if full in out else w
    return MultiPoly(ring, {e: c for e, c in out.items() if not c.is_zero()})


class _LCache:
    def __init__(self, F: MultiPoly):
        self.F = F
        self.memo: dict[int, MultiPoly] = {}

    def L(self, k: int) -> MultiPoly:
        if k not in self.memo:
            self.memo[k] = L_k(self.F, k)
        return self.memo[k]

    def Z(self, k: int) -> MultiPoly:
        ring = self.F.ring
        if k < 0:
            return ring.zero()
        field = ring.field
        T = tables(field)
        acc = ring.zero()
        for j in range(k + 1):
            term = self.L(k - j)
            if term.is_zero():
                continue
            if j:
                term = term.qpower(j).scale(Frac(field.P1, T.D(j), True))
            acc = acc + term
        return acc


def Z_k(F: MultiPoly, k: int) -> MultiPoly:
    """sum_{j=0..k} L_{k-j}(F)^{q^j} / D_j; zero for k < 0."""
    return _LCache(F).Z(k)


# -- the log-algebraic polynomial -------------------------------------------


@dataclass
class LogAlgResult:
    F: MultiPoly
    k0: int
    Zk: list
    LF: MultiPoly
    integral: bool
    checks: dict = dc_field(default_factory=dict)


def _with_Z(ring: PolyRing) -> PolyRing:
    return ring.with_vars(has_Z=True)


def assemble(Zk: list[MultiPoly], ring: PolyRing) -> MultiPoly:
    """sum_k Z_k Z^{q^k} in ``ring`` (which must contain Z)."""
    q = ring.q
    zslot = ring.var_index("Z")
    terms: dict = {}
    for k, Zpoly in enumerate(Zk):
        for e, c in Zpoly.embed(ring).terms.items():
            ne = e[:zslot] + (q**k,) + e[zslot + 1 :]
            terms[ne] = c
    return MultiPoly(ring, terms)


def termination_index(F: MultiPoly) -> int:
    """Smallest k0 >= 0 with ||F|| <= q^k0."""
    n = sup_norm(F)
    if n.is_zero:
        return 0
    return max(0, math.ceil(n.exponent))


def log_algebraic(F: MultiPoly) -> LogAlgResult:
    """Compute Z_0(F)..Z_{k0}(F), check integrality and that Z_{k0+1}(F) = 0."""
    _check_X_only(F)
    if not F.is_integral():
        raise InvalidInput("log_algebraic needs coefficients in A")
    k0 = termination_index(F)
    cache = _LCache(F)
    Zk = [cache.Z(k) for k in range(k0 + 1)]
    tail = cache.Z(k0 + 1)
    bad = [k for k, z in enumerate(Zk) if not z.is_integral()]
    if bad:
        raise IntegralityViolation(f"Z_{bad[0]}(F) has a non-polynomial coefficient")
    if not tail.is_zero():
        raise NonzeroTail(f"Z_{k0 + 1}(F) = {tail} is not zero")
    while len(Zk) > 1 and Zk[-1].is_zero():
        Zk.pop()
    LF = assemble(Zk, _with_Z(F.ring))
    checks = {"integral": True, f"Z_{k0 + 1} = 0": True}
    return LogAlgResult(F, k0, Zk, LF, True, checks)


# -- special polynomials S_s ------------------------------------------------


@dataclass
class SpecialResult:
    """S_s together with its orbit data (Z_m per multiset of q-exponents)."""

    q: int
    s: int
    k0: int
    orbits: list  # orbits[m] = {kappa: Frac}
    poly: MultiPoly


_SPECIAL: dict = {}
_SPECIAL_LOCK = threading.Lock()


def special_ring(q: int, s: int, modulus=None) -> PolyRing:
    return PolyRing(q, 0, s, False, True, modulus)


def special_orbits(q: int, s: int, modulus=None, deadline: float | None = None) -> SpecialResult:
    """S_s = L(X_1...X_s, Z) via the orbit engine, with the same checks as
    :func:`log_algebraic` (k0 = ceil(s/(q-1)), integrality, Z_{k0+1} = 0)."""
    if s < 1:
        raise InvalidInput("s must be >= 1")
    field = get_field(q, modulus)
    key = (q, field.spec.modulus, s)
    with _SPECIAL_LOCK:
        got = _SPECIAL.get(key)
    if got is not None:
        return got
    k0 = -(-s // (q - 1))
    eng = OrbitEngine(field, s, deadline)
    orbits = [eng.Z(m) for m in range(k0 + 1)]
    for m, orb in enumerate(orbits):
        if any(not c.is_integral() for c in orb.values()):
            raise IntegralityViolation(f"Z_{m}(X_1...X_{s}) has a non-polynomial coefficient")
    if eng.Z(k0 + 1):
        raise NonzeroTail(f"Z_{k0 + 1}(X_1...X_{s}) is not zero")
    while len(orbits) > 1 and not orbits[-1]:
        orbits.pop()
    ring = special_ring(q, s, modulus)
    poly = ring.zero()
    for m, orb in enumerate(orbits):
        poly = poly + expand_X(orb, ring, q**m)
    res = SpecialResult(q, s, k0, orbits, poly)
    with _SPECIAL_LOCK:
        _SPECIAL[key] = res
    return res


def special_poly(s: int, q: int, modulus=None, cache: PolyCache | None = None) -> MultiPoly:
    """The polynomial S_s(X_1..X_s, Z) in A[X, Z]."""
    ring = special_ring(q, s, modulus)
    if cache is not None:
        got = cache.load("S", ring, s)
        if got is not None:
            return got
    poly = special_orbits(q, s, modulus).poly
    if cache is not None:
        cache.store("S", ring, s, poly)
    return poly


# -- identities ---------------------------------------------------------------


def negative_L_via_derivative(N: int, s: int, q: int, modulus=None) -> MultiPoly:
    """Check L(-N,s,z).(X_1...X_s Z) = d/dX_{s+1}...d/dX_{s+N+1} S_{s+N+1}.

    z acts on Z by Z -> Z^q, so the left side is
    sum_k Z^{q^k} sum_{a in A+,k} (a*(X_1...X_s)) a^N.  Returns the common
    value; raises MismatchError when the sides differ.
    """
    from .lseries import L_series

    if N < 0 or s < 1:
        raise InvalidInput("need N >= 0 and s >= 1")
    S = special_poly(s + N + 1, q, modulus)
    rhs = S
    for j in range(s + 1, s + N + 2):
        rhs = rhs.partial_derivative(f"X{j}")
    small = PolyRing(q, 0, s, False, True, modulus)
    rhs = rhs.restrict(small)
    Lneg = L_series(-N, s, 1, q=q, modulus=modulus)
    lhs = dot_action(Lneg.to_poly(), MultiPoly(small, {tuple([1] * s + [1]): Frac.one(small.field)}))
    if lhs != rhs:
        raise MismatchError(f"derivative identity fails for N={N}, s={s}, q={q}")
    return lhs


def product_corollary_holds(G: MultiPoly) -> bool:
    """L(G, Z) = G Z, for G a product of Carlitz images as in the corollary."""
    res = log_algebraic(G)
    return res.LF == G.embed(res.LF.ring) * res.LF.ring.var("Z")


def search(q: int, nx: int = 1, max_degree: int = 2, theta_degree: int = 0, limit: int | None = None):
    """Enumerate F in A[X_1..X_nx] with bounded degrees and L(F, Z) = F Z.

    Coefficients run over polynomials in theta of degree <= theta_degree;
    monomials over total degree 1..max_degree.  Yields each hit; exploring
    the open classification question, not answering it.
    """
    field = get_field(q)
    ring = PolyRing(q, 0, nx)
    monos = [e for e in product(range(max_degree + 1), repeat=nx) if 1 <= sum(e) <= max_degree]
    coeff_codes = list(product(range(q), repeat=theta_degree + 1))
    found = 0
    for choice in product(range(len(coeff_codes)), repeat=len(monos)):
        terms = {}
        for e, ci in zip(monos, choice):
            raw = field.raw_poly(list(coeff_codes[ci]))
            if not raw.is_zero():
                terms[e] = Frac(raw, field.P1, True)
        if not terms:
            continue
        F = MultiPoly(ring, terms)
        res = log_algebraic(F)
        if len(res.Zk) == 1:
            yield F
            found += 1
            if limit is not None and found >= limit:
                return
