"""Truncated L-series L(N,s,z), power sums, z = 1 values and polylogarithms.

L(N,s,z) = sum_d z^d sum_{a in A+,d} a(t_1)...a(t_s) / a^N.

Coefficients are computed through "types": the coefficient of t^mu in the
z^d term is sum_a prod_n a_n^{c_n} / a^N, where c_n counts the entries of mu
equal to n.  Since a_n lies in F_q, only c_n reduced to {0, 1..q-1} matters,
so all monomials sharing a type share one sum.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement, product

from .algebra.field import GF, get_field
from .algebra.laurent import ApproxPoly, Laurent
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac, monic_enum_raw
from .algebra.zseries import ZSeries
from .algebra.multipoly import common_denominator
from .carlitz import (
    TwistOperatorSpec,
    _combine,
    _raw_mul_univariate,
    _twisted_sum,
    negate_parts,
    parts_vanish,
    tables,
    twist,
    twisted_parts,
)
from .errors import InvalidInput, MismatchError, NonzeroTail, PreconditionError
from .orbits import distinct_permutations


def _reduce_count(c: int, q: int) -> int:
    return 0 if c == 0 else ((c - 1) % (q - 1)) + 1


def mu_type(mu: tuple[int, ...], d: int, q: int) -> tuple[int, ...]:
    """Reduced occurrence counts of 0..d-1 in mu (entries equal to d are free)."""
    counts = [0] * d
    for x in mu:
        if x < d:
            counts[x] += 1
    return tuple(_reduce_count(c, q) for c in counts)


def _type_value_code(field: GF, logs: list, typ: tuple[int, ...]) -> int:
    """prod_n a_n^{typ_n} as a field code; ``logs[n]`` is log a_n or None for 0."""
    acc = 0
    for n, t in enumerate(typ):
        if t:
            lg = logs[n]
            if lg is None:
                return 0
            acc += t * lg
    return field.exp_code(acc % (field.q - 1))


_COEFF_CACHE: dict = {}
_COEFF_LOCK = threading.Lock()


def _type_sums(field: GF, N: int, d: int, types: set) -> dict:
    """{type: sum_a prod a_n^type_n / a^N} for monic a of degree d."""
    T = tables(field)
    ld = T.l(d)
    acc = {t: {} for t in types}
    for raw, codes in monic_enum_raw(field, d):
        if N > 0:
            w = ld.exact_division(raw) ** N
        elif N == 0:
            w = field.P1
        else:
            w = raw ** (-N)
        logs = [field.log_code(c) if c else None for c in codes[:d]]
        for t in types:
            c = _type_value_code(field, logs, t)
            if c:
                bucket = acc[t]
                bucket[c] = bucket[c] + w if c in bucket else w
    den = ld**N if N > 0 else field.P1
    out = {}
    for t, bucket in acc.items():
        v = field.P0
        for c, poly in bucket.items():
            v = v + poly * field.to_flint(c)
        out[t] = Frac(v, den) if not v.is_zero() else Frac.zero(field)
    return out


def L_coefficient(N: int, s: int, d: int, ring: PolyRing) -> MultiPoly:
    """sum_{a in A+,d} a(t_1)...a(t_s) / a^N as a MultiPoly in ``ring``."""
    field = ring.field
    q = field.q
    if d < 0:
        return ring.zero()
    key = (id(field), N, s, d)
    with _COEFF_LOCK:
        got = _COEFF_CACHE.get(key)
    if got is None:
        if s == 0:
            ms = [()]
        else:
            ms = list(combinations_with_replacement(range(d + 1), s))
        types = {mu_type(mu, d, q) for mu in ms}
        sums = _type_sums(field, N, d, types)
        got = {}
        for mu in ms:
            v = sums[mu_type(mu, d, q)]
            if not v.is_zero():
                got[mu] = v
        with _COEFF_LOCK:
            _COEFF_CACHE[key] = got
    terms = {}
    base = [0] * ring.nvars
    for mu, v in got.items():
        for perm in distinct_permutations(mu):
            e = list(base)
            for i, x in enumerate(perm):
                e[ring.t(i + 1)] = x
            terms[tuple(e)] = v
    return MultiPoly(ring, terms)


@dataclass
class LSeriesTrunc:
    N: int
    s: int
    prec: int
    coeffs: list
    ring: PolyRing
    exact: bool = False

    def to_zseries(self) -> ZSeries:
        return ZSeries(self.ring, self.coeffs, None if self.exact else self.prec, "z")

    def to_poly(self) -> MultiPoly:
        if not self.exact:
            raise InvalidInput("only exact (N <= 0) series convert to a polynomial")
        return self.to_zseries().to_poly()

    def coeff(self, d: int) -> MultiPoly:
        if d >= self.prec and not self.exact:
            raise InvalidInput(f"z^{d} beyond precision {self.prec}")
        return self.coeffs[d] if d < len(self.coeffs) else self.ring.zero()

    def __str__(self):
        return str(self.to_zseries())


def t_ring(q: int, s: int, modulus=None) -> PolyRing:
    return PolyRing(q, s, 0, False, False, modulus)


def negative_support_bound(N: int, s: int, q: int) -> int:
    """z-order that covers the whole support of L(N,s,z) for N <= 0."""
    return -(-(s + abs(N) * (q - 1)) // (q - 1)) + 1


def L_series(N: int, s: int, prec: int, q: int, modulus=None) -> LSeriesTrunc:
    """L(N,s,z) through z^{prec-1}; for N <= 0 the full (finite) series.

    For N <= 0 the precision is extended to the support bound and two extra
    coefficients are computed and required to vanish.
    """
    if s < 0 or prec < 1:
        raise InvalidInput("need s >= 0 and prec >= 1")
    ring = t_ring(q, s, modulus)
    if N > 0:
        coeffs = [L_coefficient(N, s, d, ring) for d in range(prec)]
        return LSeriesTrunc(N, s, prec, coeffs, ring, False)
    bound = max(prec, negative_support_bound(N, s, q))
    coeffs = [L_coefficient(N, s, d, ring) for d in range(bound)]
    for d in (bound, bound + 1):
        if not L_coefficient(N, s, d, ring).is_zero():
            raise NonzeroTail(f"L({N},{s},z) has a nonzero z^{d} coefficient")
    return LSeriesTrunc(N, s, bound, coeffs, ring, True)


def power_sum(k: int, s: int, q: int, modulus=None) -> MultiPoly:
    """sum_{a in A+,k} a(t_1)...a(t_s); s = 0 gives the count of monics (mod p)."""
    if k < 0:
        raise InvalidInput("k must be >= 0")
    return L_coefficient(0, s, k, t_ring(q, s, modulus))


def scalar_power_sum(d: int, m: int, q: int, modulus=None) -> Frac:
    """sum_{a in A+,d} a^m, exactly."""
    if d < 0 or m < 0:
        raise InvalidInput("need d >= 0 and m >= 0")
    field = get_field(q, modulus)
    acc = field.P0
    for raw, _ in monic_enum_raw(field, d):
        acc = acc + raw**m
    return Frac(acc, field.P1, True)


# -- polylogarithms ---------------------------------------------------------------


def _log_weight(field: GF, N: int):
    T = tables(field)

    def w(k):
        lk = T.l(k)
        return (field.P1, lk**N) if N >= 0 else (lk ** (-N), field.P1)

    return w


def _termwise_weight(field: GF, N: int, r: int):
    """(l_{k+r-1}/l_{r-1})^{q^r-N} / l_k^{q^r}: the per-term factor for which
    the decomposition holds for every r (it reduces to 1/l_k^N at r = 1)."""
    T = tables(field)
    e = field.q**r - N

    def w(k):
        return (T.l(k + r - 1) ** e, T.l(r - 1) ** e * T.l(k) ** (N + e))

    return w


def log_Nz(N: int, n: int, h: ZSeries) -> ZSeries:
    """sum_k z^k b_k(t_1)...b_k(t_n) phi^k(h) / l_k^N, truncated at h's precision."""
    if h.prec is None:
        raise InvalidInput("log_{N,z} needs a finite precision")
    if n < 1:
        raise InvalidInput("n must be >= 1")
    return _twisted_sum(h, n, _log_weight(h.ring.field, N))


@dataclass
class PolylogDecomposition:
    q: int
    N: int
    n: int
    r: int
    s: int
    m: int
    d: int
    g: dict
    h: list
    verified_prec: int
    lhs: ZSeries | None = None
    rhs: ZSeries | None = None
    holds: bool = False
    first_mismatch: int | None = None
    notes: dict = dc_field(default_factory=dict)


def default_r(N: int, q: int) -> int:
    """Least r >= 1 with q^r >= max(N, 1)."""
    r = 1
    while q**r < max(N, 1):
        r += 1
    return r


def group_sigma(sigma: MultiPoly, n: int, s: int) -> tuple[dict, int, int]:
    """g[(i, j)] = sum of the coefficients of z^i t_{n+1}^.. t_s^.. with total
    t_{n+1..s}-degree j, as polynomials in t_1..t_n.  Returns (g, m, d)."""
    ring = sigma.ring
    small = PolyRing(ring.q, n, 0, False, False, ring.modulus)
    zslot = ring.index.get("z")
    g: dict = {}
    m = d = 0
    for e, c in sigma.terms.items():
        i = e[zslot] if zslot is not None else 0
        j = sum(e[ring.t(k)] for k in range(n + 1, s + 1))
        key = (i, j)
        mono = tuple(e[ring.t(k)] for k in range(1, n + 1))
        bucket = g.setdefault(key, {})
        bucket[mono] = bucket[mono] + c if mono in bucket else c
        m, d = max(m, i), max(d, j)
    out = {}
    for key, bucket in g.items():
        p = MultiPoly(small, {k: v for k, v in bucket.items() if not v.is_zero()})
        if not p.is_zero():
            out[key] = p
    return out, m, d


def build_h(g: dict, n: int, r: int, d: int, prec: int, ring: PolyRing) -> list[ZSeries]:
    """h_j = sum_i z^i tau^r(g_{i,j}) (tau acting on t_1..t_n)."""
    hs = []
    for j in range(d + 1):
        coeffs: list = []
        for (i, jj), gp in g.items():
            if jj != j:
                continue
            while len(coeffs) <= i:
                coeffs.append(ring.zero())
            coeffs[i] = coeffs[i] + twist(TwistOperatorSpec("tau", n, r), gp).embed(ring)
        hs.append(ZSeries(ring, coeffs, prec, "z"))
    return hs


def polylog_decompose(
    N: int,
    n: int,
    r: int,
    verify_prec: int = 8,
    q: int = 2,
    modulus=None,
    normalization: str = "stated",
    raise_on_mismatch: bool = False,
) -> PolylogDecomposition:
    """Write L(N,n,z) through polylogarithms of polynomials built from sigma_s.

    ``normalization="stated"`` checks

        L(N,n,z) l_{r-1}^{q^r-N} b_r(t_1)...b_r(t_n) = sum_j theta^j log_{N,z}(h_j);

    ``normalization="termwise"`` checks the variant in which the z^k term
    of log_{N,z} carries (l_{k+r-1}/l_{r-1})^{q^r-N} / l_k^{q^r} and the
    left side has no l-factor.  The two agree when r = 1.  Both sides are
    compared exactly, z^0 through z^{verify_prec-1}.
    """
    from .stark import sigma

    if n < 1 or r < 1:
        raise InvalidInput("need n >= 1 and r >= 1")
    if verify_prec < 1:
        raise InvalidInput("verify_prec must be >= 1")
    if q**r < N:
        raise PreconditionError(f"q^r = {q**r} < N = {N}")
    s = q**r - N + n
    if normalization not in ("stated", "termwise"):
        raise InvalidInput(f"unknown normalization {normalization!r}")
    field = get_field(q, modulus)
    T = tables(field)
    sig = sigma(s, q, modulus)
    g, m, d = group_sigma(sig, n, s)
    ring = t_ring(q, n, modulus)
    hs = build_h(g, n, r, d, verify_prec, ring)
    e = q**r - N
    L = L_series(N, n, verify_prec, q, modulus)
    br = T.b_coeffs(r)
    lfac = T.l(r - 1) ** e if normalization == "stated" else field.P1
    weight = _log_weight(field, N) if normalization == "stated" else _termwise_weight(field, N, r)
    rhs_parts: list = [[] for _ in range(verify_prec)]
    for j, h in enumerate(hs):
        thj = field.THETA**j
        for k, contrib in enumerate(twisted_parts(h, n, weight)):
            for den, nums in contrib:
                rhs_parts[k].append((den, {ex: v * thj for ex, v in nums.items()}))
    first = None
    lhs_parts = []
    for k in range(verify_prec):
        c = L.coeff(k)
        lp = []
        if not c.is_zero():
            den, nums = common_denominator(c.terms)
            for i in range(1, n + 1):
                nums = _raw_mul_univariate(nums, ring.t(i), br)
            if not lfac.is_one():
                nums = {ex: v * lfac for ex, v in nums.items()}
            lp = [(den, nums)]
        lhs_parts.append(lp)
        if first is None and not parts_vanish(lp + negate_parts(rhs_parts[k])):
            first = k
    res = PolylogDecomposition(q, N, n, r, s, m, d, g, hs, verify_prec, None, None, first is None, first)
    res.notes["normalization"] = normalization
    res.notes["parts"] = (lhs_parts, rhs_parts)
    res.notes["ring"] = ring
    if first is not None and raise_on_mismatch:
        raise MismatchError(f"polylog identity fails at z^{first} (q={q}, N={N}, n={n}, r={r})")
    return res


def decomposition_sides(dec: PolylogDecomposition) -> tuple[ZSeries, ZSeries]:
    """Both sides as normalized series (normalization can be slow for large N)."""
    lhs_parts, rhs_parts = dec.notes["parts"]
    ring = dec.notes["ring"]
    lhs = ZSeries(ring, [_combine(ring, p) for p in lhs_parts], dec.verified_prec, "z")
    rhs = ZSeries(ring, [_combine(ring, p) for p in rhs_parts], dec.verified_prec, "z")
    return lhs, rhs


def polylog_corollary_X(N: int, n: int, r: int, verify_prec: int, q: int, modulus=None, normalization: str = "stated"):
    """The decomposition transported to K[X][Z] by the dot action.

    With G_{i,j} = g_{i,j}.(X_1...X_n) and H_j = sum_i Z^{q^i} G_{i,j}^{q^r}
    (tau acts on F_q-linear polynomials as the q-th power map), checks

        L(N,n,z).(X_1^{q^r}...X_n^{q^r} Z) l_{r-1}^{q^r-N}
            = sum_j theta^j sum_k H_j^{q^k} / l_k^N

    through Z^{q^{verify_prec-1}}.  Returns (holds, lhs, rhs).
    """
    from .norms import dot_action

    dec = polylog_decompose(N, n, r, verify_prec, q, modulus, normalization)
    field = get_field(q, modulus)
    T = tables(field)
    xring = PolyRing(q, 0, n, False, True, modulus)
    one = Frac.one(field)
    X1n = MultiPoly(xring, {tuple([1] * n + [0]): one})
    H = []
    for j in range(dec.d + 1):
        acc = xring.zero()
        for (i, jj), gp in dec.g.items():
            if jj == j:
                acc = acc + dot_action(gp, X1n).qpower(r) * xring.var("Z", q**i)
        H.append(acc)
    e = q**r - N
    L = L_series(N, n, verify_prec, q, modulus)
    Xq = MultiPoly(xring, {tuple([q**r] * n + [0]): one})
    lhs = xring.zero()
    for k in range(verify_prec):
        c = L.coeff(k)
        if not c.is_zero():
            lhs = lhs + dot_action(c, Xq) * xring.var("Z", q**k)
    th = Frac(field.THETA, field.P1, True)
    rhs = xring.zero()
    for j, Hj in enumerate(H):
        for k in range(verify_prec):
            part = Hj.qpower(k)
            if normalization == "stated":
                w = Frac(field.P1, T.l(k) ** N) if N >= 0 else Frac(T.l(k) ** (-N), field.P1)
            else:
                w = Frac(T.l(k + r - 1) ** e, (T.l(r - 1) ** e) * T.l(k) ** (N + e))
            rhs = rhs + part.scale(w * th**j)
    if normalization == "stated":
        lhs = lhs.scale(Frac(T.l(r - 1) ** e, field.P1))
    zslot = xring.var_index("Z")
    cut = q**verify_prec
    lhs = MultiPoly(xring, {ex: c for ex, c in lhs.terms.items() if ex[zslot] < cut})
    rhs = MultiPoly(xring, {ex: c for ex, c in rhs.terms.items() if ex[zslot] < cut})
    return lhs == rhs, lhs, rhs


# -- values at z = 1 ---------------------------------------------------------


def eval_z1(series: LSeriesTrunc, target_prec: int | None = None):
    """L(N,s) = L(N,s,1).

    N <= 0: the exact polynomial sum.  N >= 1: an ApproxPoly in t whose
    Gauss-norm error is at most q^{ap}, ap = max(target_prec, -N*prec)
    (the omitted tail d >= prec has norm <= q^{-N prec}).  Uses the
    coefficients already in ``series``.
    """
    if series.exact:
        acc = series.ring.zero()
        for c in series.coeffs:
            acc = acc + c
        return acc
    if target_prec is None:
        target_prec = -series.N * series.prec
    field = series.ring.field
    ap = max(target_prec, -series.N * series.prec)
    acc: dict = {}
    for c in series.coeffs:
        for e, v in c.terms.items():
            x = Laurent.from_frac(field, v, ap)
            acc[e] = acc[e] + x if e in acc else x
    terms = {e: x for e, x in acc.items()}
    return ApproxPoly(field, series.ring.nvars, terms)


def L_value_approx(N: int, s: int, degree: int, ap: int, q: int, modulus=None) -> ApproxPoly:
    """sum_{d <= degree} of the z^d coefficients of L(N,s,z), to precision q^ap.

    Large d are handled without enumerating A+,d: modulo q^ap, 1/a^N only
    depends on the coefficients a_n with n > ap + (N+1)d, and summing a low
    coefficient x over F_q against x^c gives -1 when c > 0 and (q-1) | c,
    else 0.  The omitted tail contributes at most q^{-N(degree+1)}.
    """
    if N < 1:
        raise InvalidInput("L_value_approx needs N >= 1")
    field = get_field(q, modulus)
    ring = t_ring(q, s, modulus)
    eff_ap = max(ap, -N * (degree + 1))
    acc: dict = {}
    for d in range(degree + 1):
        for e, x in _L_coefficient_laurent(field, N, s, d, eff_ap, ring).items():
            acc[e] = acc[e] + x if e in acc else x
    return ApproxPoly(field, ring.nvars, acc)


def _L_coefficient_laurent(field: GF, N: int, s: int, d: int, ap: int, ring: PolyRing) -> dict:
    q = field.q
    cut = ap + (N + 1) * d  # positions n <= cut are "low"
    low = [n for n in range(d) if n <= cut]
    high = [n for n in range(d) if n > cut]
    out: dict = {}
    if len(low) * (q - 1) > s:
        return out  # every low position needs >= q-1 entries of mu
    th = field.THETA
    # enumerate the high coefficients; 1/a^N depends on nothing else
    inv = []
    for hc in product(range(q), repeat=len(high)):
        a = th**d
        for n, c in zip(high, hc):
            if c:
                a = a + th**n * field.to_flint(c)
        x = Laurent.from_frac(field, Frac(field.P1, a**N), ap)
        inv.append((hc, [field.log_code(c) if c else None for c in hc], x))
    sign = Frac.from_int(field, (-1) ** len(low))
    for mu in combinations_with_replacement(range(d + 1), s):
        typ = mu_type(mu, d, q)
        if any(typ[n] != q - 1 for n in low):
            continue
        htyp = tuple(typ[n] for n in high)
        val = None
        for _hc, logs, x in inv:
            c = _type_value_code(field, logs, htyp)
            if c:
                term = x.mul_exact(Frac.from_code(field, c))
                val = term if val is None else val + term
        if val is None or val.is_zero():
            continue
        val = val.mul_exact(sign)
        for perm in distinct_permutations(mu):
            e = [0] * ring.nvars
            for i, v in enumerate(perm):
                e[ring.t(i + 1)] = v
            out[tuple(e)] = val
    return out
