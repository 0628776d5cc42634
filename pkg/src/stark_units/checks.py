"""Self-check battery, one q at a time (used by ``stark-units selfcheck``).

Each check returns :class:`CheckResult` rows; nothing here raises on a
failed identity, failures are data.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from dataclasses import dataclass

from .algebra.field import get_field
from .algebra.grammar import parse_poly
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac, monic_enum
from .carlitz import carlitz_action, exp_tau_approx
from .errors import StarkUnitsError
from .logalg import log_algebraic, negative_L_via_derivative, special_poly
from .lseries import L_value_approx, polylog_decompose, power_sum, scalar_power_sum
from .norms import NormValue, digit_sum, dot_action, gauss_norm, h_poly, sup_norm
from .stark import orbit_properties, sigma_ring, stark_unit


@dataclass
class CheckResult:
    criterion: int
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"[{tag}] {self.criterion}: {self.name}{tail} [{self.seconds:.1f}s]"


def _timed(criterion: int, name: str, fn) -> CheckResult:
    t0 = time.monotonic()
    try:
        ok, detail = fn()
    except StarkUnitsError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(criterion, name, ok, detail, time.monotonic() - t0)


def _prod_str(names) -> str:
    return "*".join(names)


def expected_sigma_q_plus_1(q: int) -> MultiPoly:
    """1 - (t_1 - theta)...(t_{q+1} - theta) z, as written."""
    ring = sigma_ring(q, q + 1)
    prod = ring.one()
    for i in range(1, q + 2):
        prod = prod * parse_poly(f"t{i} - th", ring=ring)
    return ring.one() - prod * ring.var("z")


def closed_forms(q: int) -> list[CheckResult]:
    out = []
    for s in range(1, q):
        out.append(_timed(1, f"q={q} sigma_{s} = 1", lambda s=s: _eq(stark_unit(s, q).sigma, "1", q, s)))
    out.append(_timed(1, f"q={q} sigma_{q} = 1 - z", lambda: _eq(stark_unit(q, q).sigma, "1 - z", q, q)))
    if q >= 3:
        def f():
            got = stark_unit(q + 1, q).sigma
            return got == expected_sigma_q_plus_1(q), f"computed {got}"
        out.append(_timed(1, f"q={q} sigma_{q + 1} = 1 - (t1-th)...(t{q + 1}-th) z", f))
    return out


def _eq(got: MultiPoly, text: str, q: int, s: int):
    want = parse_poly(text, ring=sigma_ring(q, s))
    return got == want, "" if got == want else f"computed {got}"


def special_polys(q: int) -> list[CheckResult]:
    out = []

    def ring(s):
        return PolyRing(q, 0, s, False, True)

    for s in range(1, q):
        xs = _prod_str(f"X{i}" for i in range(1, s + 1))
        out.append(_timed(2, f"q={q} S_{s} = {xs}*Z", lambda s=s, xs=xs: _peq(special_poly(s, q), f"{xs}*Z", ring(s))))
    xs = _prod_str(f"X{i}" for i in range(1, q + 1))
    out.append(_timed(2, f"q={q} S_{q}", lambda: _peq(special_poly(q, q), f"{xs}*Z - {xs}*Z^{q}", ring(q))))
    if q >= 3:
        xs1 = _prod_str(f"X{i}" for i in range(1, q + 2))
        sm = " + ".join(f"X{i}^{q - 1}" for i in range(1, q + 2))
        text = f"{xs1}*Z - {xs1}*({sm})*Z^{q}"
        out.append(_timed(2, f"q={q} S_{q + 1}", lambda: _peq(special_poly(q + 1, q), text, ring(q + 1))))
    return out


def _peq(got: MultiPoly, text: str, ring: PolyRing):
    want = parse_poly(text, ring=ring)
    return got == want, "" if got == want else f"computed {got}"


def random_F(q: int, rng: random.Random, max_deg: int, theta_deg: int = 2, nx: int = 2, max_terms: int = 4) -> MultiPoly:
    field = get_field(q)
    ring = PolyRing(q, 0, nx)
    monos = [(i, j) for i in range(max_deg + 1) for j in range(max_deg + 1 - i)]
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = rng.choice(monos)
            codes = [rng.randrange(q) for _ in range(theta_deg + 1)]
            raw = field.raw_poly(codes)
            if not raw.is_zero():
                terms[e] = Frac(raw, field.P1, True)
        if terms:
            return MultiPoly(ring, terms)


def log_algebraicity(q: int, count: int = 50, seed: int = 20240617) -> list[CheckResult]:
    rng = random.Random(seed + q)

    def run():
        worst = None
        for _ in range(count):
            F = random_F(q, rng, q + 2)
            try:
                res = log_algebraic(F)
            except StarkUnitsError as exc:
                return False, f"F = {F}: {type(exc).__name__}"
            if not all(z.is_integral() for z in res.Zk):
                return False, f"F = {F}"
            worst = max(worst or 0, res.k0)
        return True, f"{count} polynomials, largest k0 = {worst}"

    return [_timed(3, f"q={q} Z_k(F) integral and Z_(k0+1)(F) = 0", run)]


def route_equality(q: int, s_max: int | None = None) -> list[CheckResult]:
    s_max = 2 * q if s_max is None else s_max
    out = []
    for s in range(1, s_max + 1):
        def f(s=s):
            a = stark_unit(s, q, route="exp").sigma
            b = stark_unit(s, q, route="extract").sigma
            return a == b, f"{len(a)} terms"
        out.append(_timed(4, f"q={q} s={s} exp route = extraction route", f))
    return out


POLYLOG_CASES = [(2, 1, 1, 1), (2, 3, 2, 2), (3, 2, 1, 1), (3, 5, 2, 2)]


def polylog(q: int, prec: int = 9) -> list[CheckResult]:
    out = []
    for qq, N, n, r in POLYLOG_CASES:
        if qq != q:
            continue
        def f(N=N, n=n, r=r):
            dec = polylog_decompose(N, n, r, prec, q)
            if dec.holds:
                return True, f"s={dec.s}"
            alt = polylog_decompose(N, n, r, prec, q, normalization="termwise")
            return False, f"first mismatch at z^{dec.first_mismatch}; termwise factor holds: {alt.holds}"
        out.append(_timed(5, f"polylog (q,N,n,r)=({q},{N},{n},{r}) through z^{prec - 1}", f))
    return out


def power_sums(q: int) -> list[CheckResult]:
    out = []

    def tsums():
        for s in range(1, 2 * q + 2):
            nv = s - 1
            lo = -(-s // (q - 1))
            for k in range(lo, lo + 3):
                if not power_sum(k, nv, q).is_zero():
                    return False, f"s={s}, k={k}"
        return True, ""

    out.append(_timed(6, f"q={q} sum_(A+,k) a(t_1)...a(t_(s-1)) = 0 for k >= s/(q-1)", tsums))

    def ssums():
        for j in range(3):
            m = q**j - 1
            cut = m // (q - 1)
            total = Frac.zero(get_field(q))
            for d in range(cut + 3):
                v = scalar_power_sum(d, m, q)
                if d > cut and not v.is_zero():
                    return False, f"j={j}, d={d}"
                total = total + v
            want = 1 if j == 0 else 0
            if total != Frac.from_int(get_field(q), want):
                return False, f"j={j}: total {total}"
        return True, ""

    out.append(_timed(6, f"q={q} scalar sums of a^(q^j-1)", ssums))
    return out


DERIVATIVE_CASES = [(2, 0, 1), (2, 1, 1), (3, 0, 1), (3, 0, 2), (3, 1, 1)]


def derivative(q: int) -> list[CheckResult]:
    out = []
    for qq, N, s in DERIVATIVE_CASES:
        if qq == q:
            out.append(_timed(7, f"q={q} N={N} s={s} derivative identity",
                              lambda N=N, s=s: (negative_L_via_derivative(N, s, q) is not None, "")))
    return out


def sigma_properties(q: int, s_max: int = 10, budget: float | None = None) -> list[CheckResult]:
    out = []
    deadline = time.monotonic() + budget if budget else None
    for s in range(1, s_max + 1):
        def f(s=s):
            rep = orbit_properties(s, q, deadline=deadline)
            detail = f"deg_z = {rep.z_degree} (bound {rep.bound}), (z-1)|sigma: {rep.divisible}"
            return rep.ok, detail
        out.append(_timed(8, f"q={q} s={s} degree bound and (z-1)-divisibility", f))
    return out


def norm_suite(q: int) -> list[CheckResult]:
    out = []
    ring = PolyRing(q, 0, 3)

    def monomials():
        for e in ((a, b, c) for a in range(7) for b in range(7) for c in range(7) if a + b + c <= 6):
            F = MultiPoly(ring, {e: Frac.one(ring.field)})
            if sup_norm(F) != NormValue(q, _frac(sum(e), q - 1)):
                return False, f"X^{e}"
        return True, ""

    out.append(_timed(9, f"q={q} ||X^i|| = q^(|i|/(q-1))", monomials))

    def hnorms():
        for N in range(q**3 + 1):
            if sup_norm(h_poly(N, q)) != NormValue(q, _frac(digit_sum(N, q), q - 1)):
                return False, f"N={N}"
        return True, ""

    out.append(_timed(9, f"q={q} ||H_N|| = q^(l_q(N)/(q-1))", hnorms))

    def t_on_h():
        r1 = PolyRing(q, 1, 1)
        t = r1.var("t1")
        for N in range(1, q**2 + 1):
            H = h_poly(N, ring=r1)
            if dot_action(t, H) != h_poly(q * N, ring=r1):
                return False, f"N={N}"
        return True, ""

    out.append(_timed(9, f"q={q} t.H_N = H_qN", t_on_h))

    def action_norms():
        rng = random.Random(7 + q)
        field = get_field(q)
        for _ in range(10):
            F = random_F(q, rng, 3, 1, nx=2, max_terms=3)
            for a in monic_enum(field, rng.randint(0, 2)):
                if sup_norm(carlitz_action(a, F)) != sup_norm(F):
                    return False, f"a={a}, F={F}"
            ft = random_tpoly(q, rng)
            Fl = random_linear(q, rng)
            if sup_norm(dot_action(ft, Fl)) != gauss_norm(ft) * sup_norm(Fl):
                return False, f"f={ft}, F={Fl}"
        return True, ""

    out.append(_timed(9, f"q={q} ||a*F|| = ||F|| and ||f.F|| = ||f|| ||F||", action_norms))
    return out


def _frac(a: int, b: int) -> Fraction:
    return Fraction(a, b)


def random_tpoly(q: int, rng: random.Random, nt: int = 2) -> MultiPoly:
    field = get_field(q)
    ring = PolyRing(q, nt, 0)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = tuple(rng.randrange(3) for _ in range(nt))
        raw = field.raw_poly([rng.randrange(q) for _ in range(2)])
        if not raw.is_zero():
            terms[e] = Frac(raw, field.P1, True)
    return MultiPoly(ring, terms or {(0,) * nt: Frac.one(field)})


def random_linear(q: int, rng: random.Random, nx: int = 2) -> MultiPoly:
    """A random F_q-multilinear polynomial in X_1..X_nx."""
    field = get_field(q)
    ring = PolyRing(q, 0, nx)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = tuple(q ** rng.randrange(3) for _ in range(nx))
        raw = field.raw_poly([rng.randrange(q) for _ in range(2)])
        if not raw.is_zero():
            terms[e] = Frac(raw, field.P1, True)
    return MultiPoly(ring, terms or {(1,) * nx: Frac.one(field)})


def analytic_bridge(q: int, svals=None, degree: int = 12, target: int = -10) -> list[CheckResult]:
    svals = svals or ((3, 4, 5) if q == 3 else (q, q + 1))
    out = []
    for s in svals:
        def f(s=s):
            approx = L_value_approx(1, s, degree, target - 2, q)
            res = exp_tau_approx(approx, target - 2, s)
            exact = stark_unit(s, q).sigma.evaluate_var("z", 1)
            ring = exact.ring
            exact_terms = {tuple(e[ring.t(i)] for i in range(1, s + 1)): c for e, c in exact.terms.items()}
            worst, _ = res.value.error_against(exact_terms)
            err = res.certified_ap if worst is None else max(worst, res.certified_ap)
            return err <= target, f"error <= q^{err}"
        out.append(_timed(10, f"q={q} s={s} exp_C(L(1,s)) = sigma_s(t,1) within q^{target}", f))
    return out


def run_all(q: int, budget: float | None = None, quick: bool = False) -> list[CheckResult]:
    rows: list[CheckResult] = []
    rows += closed_forms(q)
    rows += special_polys(q)
    rows += log_algebraicity(q, 10 if quick else 50)
    rows += route_equality(q, q + 1 if quick else None)
    rows += polylog(q, 5 if quick else 9)
    rows += power_sums(q)
    rows += derivative(q)
    rows += sigma_properties(q, 6 if quick else 10, budget)
    rows += norm_suite(q)
    rows += analytic_bridge(q)
    return rows

