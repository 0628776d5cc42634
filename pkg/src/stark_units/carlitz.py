"""The Carlitz module and the twisted operators built on it.

Conventions: C_theta(X) = theta X + X^q, C_a(X) = sum_k psi_k(a) X^{q^k};
D_i = (theta^{q^i} - theta) D_{i-1}^q, l_i = (theta - theta^{q^i}) l_{i-1};
b_d(t) = prod_{k<d} (t - theta^{q^k}).  phi raises coefficients to the
q-th power, tau = (t_1 - theta)...(t_s - theta) phi, and
tau_z^d = z^d b_d(t_1)...b_d(t_s) phi^d.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .algebra.field import GF, get_field
from .algebra.laurent import ApproxPoly, Laurent
from .algebra.multipoly import MultiPoly, PolyRing, common_denominator
from .algebra.theta import Frac, ThetaPoly, frob_raw
from .algebra.zseries import ZSeries
from .errors import InvalidInput, NonLinearInput, PrecisionLoss


class CarlitzTables:
    """Lazily extended tables of D_i, l_i, psi_k(theta^n) and b_d(t).

    One instance per field (see :func:`tables`).  Extension happens under a
    lock, so concurrent readers always see complete prefixes.
    """

    def __init__(self, field: GF):
        self.field = field
        self._lock = threading.Lock()
        self._D = [field.P1]
        self._l = [field.P1]
        # _psi[n][k] = psi_k(theta^n); row n has length n + 1
        self._psi = [[field.P1]]
        self._b = [[field.P1]]

    def _theta_qi(self, i: int):
        return self.field.THETA ** (self.field.q**i)

    def D(self, i: int):
        with self._lock:
            while len(self._D) <= i:
                j = len(self._D)
                self._D.append((self._theta_qi(j) - self.field.THETA) * frob_raw(self._D[-1], self.field.q))
        return self._D[i]

    def l(self, i: int):
        with self._lock:
            while len(self._l) <= i:
                j = len(self._l)
                self._l.append((self.field.THETA - self._theta_qi(j)) * self._l[-1])
        return self._l[i]

    def psi_row(self, n: int) -> list:
        """[psi_0(theta^n), ..., psi_n(theta^n)]."""
        q = self.field.q
        th = self.field.THETA
        with self._lock:
            while len(self._psi) <= n:
                prev = self._psi[-1]
                row = []
                for k in range(len(prev) + 1):
                    v = th * prev[k] if k < len(prev) else self.field.P0
                    if k >= 1:
                        v = v + frob_raw(prev[k - 1], q)
                    row.append(v)
                self._psi.append(row)
        return self._psi[n]

    def b_coeffs(self, d: int) -> list:
        """Coefficients of b_d(t) in t, lowest first (raw elements of A)."""
        with self._lock:
            while len(self._b) <= d:
                k = len(self._b) - 1
                root = self._theta_qi(k)
                prev = self._b[-1]
                nxt = [self.field.P0] * (len(prev) + 1)
                for i, c in enumerate(prev):
                    nxt[i + 1] = nxt[i + 1] + c
                    nxt[i] = nxt[i] - root * c
                self._b.append(nxt)
        return self._b[d]


_TABLES: dict[int, CarlitzTables] = {}
_TABLES_LOCK = threading.Lock()


def tables(field: GF) -> CarlitzTables:
    with _TABLES_LOCK:
        t = _TABLES.get(id(field))
        if t is None:
            t = _TABLES[id(field)] = CarlitzTables(field)
        return t


def D(field: GF, i: int) -> ThetaPoly:
    return ThetaPoly(field, tables(field).D(i))


def ell(field: GF, i: int) -> ThetaPoly:
    return ThetaPoly(field, tables(field).l(i))


# -- Carlitz polynomials ------------------------------------------------------


def carlitz_coeffs(field: GF, a_raw) -> list:
    """[psi_0(a), ..., psi_{deg a}(a)] as raw polynomials."""
    if a_raw.is_zero():
        return []
    codes = field.raw_codes(a_raw)
    T = tables(field)
    d = len(codes) - 1
    out = [field.P0] * (d + 1)
    for n, c in enumerate(codes):
        if not c:
            continue
        fc = field.to_flint(c)
        for k, v in enumerate(T.psi_row(n)):
            out[k] = out[k] + v * fc
    return out


def psi(k: int, a: ThetaPoly) -> ThetaPoly:
    """Coefficient of X^{q^k} in C_a(X)."""
    cs = carlitz_coeffs(a.field, a.raw)
    return ThetaPoly(a.field, cs[k] if k < len(cs) else a.field.P0)


@dataclass(frozen=True)
class QLinearPoly:
    """sum c_n X_1^{q^{n_1}} ... X_s^{q^{n_s}}, stored as {(n_1..n_s): Frac}."""

    q: int
    nvars: int
    terms: dict
    modulus: tuple | None = None

    def to_multipoly(self, ring: PolyRing | None = None) -> MultiPoly:
        ring = ring or PolyRing(self.q, 0, self.nvars, modulus=self.modulus)
        out = {}
        for ns, c in self.terms.items():
            e = [0] * ring.nvars
            for i, n in enumerate(ns):
                e[ring.X(i + 1)] = self.q**n
            out[tuple(e)] = c
        return MultiPoly(ring, out)

    @classmethod
    def from_multipoly(cls, F: MultiPoly) -> "QLinearPoly":
        ring = F.ring
        q = ring.q
        out = {}
        xs = [ring.X(i) for i in range(1, ring.nx + 1)]
        for e, c in F.terms.items():
            if any(e[i] for i in range(ring.nvars) if i not in xs):
                raise NonLinearInput("non-X variable in an F_q-linear polynomial")
            ns = []
            for i in xs:
                n = _log_q(e[i], q)
                if n is None:
                    raise NonLinearInput(f"exponent {e[i]} is not a power of {q}")
                ns.append(n)
            out[tuple(ns)] = c
        return cls(q, ring.nx, out, ring.modulus)

    def __eq__(self, other):
        return isinstance(other, QLinearPoly) and (self.q, self.nvars, self.terms) == (
            other.q,
            other.nvars,
            other.terms,
        )

    __hash__ = None


def _log_q(e: int, q: int) -> int | None:
    n = 0
    while e > 1 and e % q == 0:
        e //= q
        n += 1
    return n if e == 1 else None


def carlitz_poly(a: ThetaPoly) -> QLinearPoly:
    f = a.field
    cs = carlitz_coeffs(f, a.raw)
    terms = {(k,): Frac(c, f.P1, True) for k, c in enumerate(cs) if not c.is_zero()}
    return QLinearPoly(f.q, 1, terms, f.spec.modulus if f.e > 1 else None)


def _univariate_powers(field: GF, cs: list, max_e: int) -> dict[int, dict[int, Frac]]:
    """{k: C_a(X)^k as {exponent: Frac}} for 0 <= k <= max_e."""
    p, q = field.p, field.q
    base = {q**k: Frac(c, field.P1, True) for k, c in enumerate(cs) if not c.is_zero()}
    out: dict[int, dict[int, Frac]] = {0: {0: Frac.one(field)}}
    if max_e == 0:
        return out
    # Frobenius powers C_a^(p^i) are cheap; general powers by base-p digits.
    frob = [base]
    while p ** len(frob) <= max_e:
        prev = frob[-1]
        frob.append({e * p: c.frobenius(p) if p == q else _pow_frac(c, p) for e, c in prev.items()})
    for k in range(1, max_e + 1):
        acc = {0: Frac.one(field)}
        rest, i = k, 0
        while rest:
            dgt = rest % p
            for _ in range(dgt):
                acc = _umul(acc, frob[i])
            rest //= p
            i += 1
        out[k] = acc
    return out


def _pow_frac(c: Frac, n: int) -> Frac:
    return c**n


def _umul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = c1 * c2
            out[e] = out[e] + v if e in out else v
    return {e: c for e, c in out.items() if not c.is_zero()}


def carlitz_action(a: ThetaPoly, F, z_aware: bool = False):
    """a * F: substitute C_a(X_i) for every X_i (and Z^{q^deg a} for Z).

    ``F`` is a MultiPoly; a ZSeries in Z is also accepted when z_aware.
    """
    if isinstance(F, ZSeries):
        if not z_aware or F.var != "Z":
            raise InvalidInput("series input requires z_aware=True and variable Z")
        return ZSeries.from_poly(carlitz_action(a, F.to_poly(), True), None, "Z")
    ring = F.ring
    if a.is_zero():
        return ring.const(F.constant_term())
    cs = carlitz_coeffs(F.field, a.raw)
    maps = {ring.X(i): cs for i in range(1, ring.nx + 1)}
    zmul = F.field.q ** a.degree if z_aware else 1
    return substitute_linear(F, maps, zmul)


def substitute_linear(F: MultiPoly, maps: dict, zmul: int = 1) -> MultiPoly:
    """Substitute X_slot -> sum_k cs[k] X_slot^{q^k} for each slot in ``maps``
    and Z -> Z^zmul.  ``cs`` are raw elements of A."""
    field = F.field
    ring = F.ring
    pw = {}
    for i, cs in maps.items():
        max_e = max((e[i] for e in F.terms), default=0)
        pw[i] = _univariate_powers(field, cs, max_e)
    zslot = ring.index.get("Z") if zmul != 1 else None
    out: dict = {}
    for e, c in F.terms.items():
        partial = {e: c}
        for i in maps:
            k = e[i]
            if k == 0:
                continue
            nxt: dict = {}
            for pe, pc in partial.items():
                for xe, xc in pw[i][k].items():
                    ne = pe[:i] + (xe,) + pe[i + 1 :]
                    v = pc * xc
                    nxt[ne] = nxt[ne] + v if ne in nxt else v
            partial = nxt
        for pe, pc in partial.items():
            if zslot is not None and pe[zslot]:
                pe = pe[:zslot] + (pe[zslot] * zmul,) + pe[zslot + 1 :]
            out[pe] = out[pe] + pc if pe in out else pc
    return MultiPoly(ring, {e: c for e, c in out.items() if not c.is_zero()})


# -- b_d and the twists ------------------------------------------------------


def b_poly(d: int, i: int, ring: PolyRing) -> MultiPoly:
    """b_d(t_i) as a MultiPoly."""
    if d < 0:
        raise InvalidInput("b_d needs d >= 0")
    slot = ring.t(i)
    f = ring.field
    out = {}
    for k, c in enumerate(tables(f).b_coeffs(d)):
        if not c.is_zero():
            e = [0] * ring.nvars
            e[slot] = k
            out[tuple(e)] = Frac(c, f.P1, True)
    return MultiPoly(ring, out)


@dataclass(frozen=True)
class TwistOperatorSpec:
    kind: str  # "tau", "phi" or "tau_z"
    s: int
    power: int = 1

    def __post_init__(self):
        if self.kind not in ("tau", "phi", "tau_z"):
            raise InvalidInput(f"unknown twist kind {self.kind!r}")
        if self.power < 0:
            raise InvalidInput("twist power must be >= 0")


def _check_t_only(p: MultiPoly, s: int) -> None:
    if p.ring.nx and any(e[p.ring.X(i)] for e in p.terms for i in range(1, p.ring.nx + 1)):
        raise InvalidInput("twist operators act on polynomials in t only")
    if p.ring.nt < s:
        raise InvalidInput(f"polynomial ring has {p.ring.nt} t-variables, operator needs {s}")


def _tau_poly(p: MultiPoly, s: int, d: int) -> MultiPoly:
    out = p.frobenius(d)
    if d == 0 or out.is_zero():
        return out
    f = p.field
    bc = [Frac(c, f.P1, True) for c in tables(f).b_coeffs(d)]
    for i in range(1, s + 1):
        out = out.mul_univariate(f"t{i}", bc)
    return out


def twist(spec: TwistOperatorSpec, f):
    """Apply phi^d, tau^d or tau_z^d to a MultiPoly or ZSeries in t."""
    d = spec.power
    if isinstance(f, ZSeries):
        for c in f.coeffs:
            _check_t_only(c, spec.s)
        if spec.kind == "phi":
            return f.map_coeffs(lambda c: c.frobenius(d))
        out = f.map_coeffs(lambda c: _tau_poly(c, spec.s, d))
        return out.shift(d) if spec.kind == "tau_z" else out
    _check_t_only(f, spec.s)
    if spec.kind == "phi":
        return f.frobenius(d)
    if spec.kind == "tau":
        return _tau_poly(f, spec.s, d)
    raise InvalidInput("tau_z needs a ZSeries argument")


def twisted_parts(f: ZSeries, s: int, weight) -> list[list]:
    """Unnormalized pieces of sum_j w_j tau_z^j(f), per z-degree.

    ``weight(j)`` returns raw (num, den) with w_j = num/den.  Entry m is a
    list of (den, {exponent: raw numerator}) whose sum is the z^m
    coefficient.
    """
    if f.prec is None:
        raise InvalidInput("twisted sums need a finite precision")
    for c in f.coeffs:
        _check_t_only(c, s)
    ring = f.ring
    field = ring.field
    q = field.q
    T = tables(field)
    parts = [common_denominator(c.terms) if c.terms else None for c in f.coeffs]
    slots = [ring.t(i) for i in range(1, s + 1)]
    out = []
    for m in range(f.prec):
        contrib = []
        for j in range(m + 1):
            d = m - j
            if d >= len(parts) or parts[d] is None:
                continue
            den, nums = parts[d]
            qj = q**j
            if j:
                nums = {e: frob_raw(n, qj) for e, n in nums.items()}
                bc = T.b_coeffs(j)
                for i in slots:
                    nums = _raw_mul_univariate(nums, i, bc)
                den = frob_raw(den, qj)
            wn, wd = weight(j)
            if not wn.is_one():
                nums = {e: n * wn for e, n in nums.items()}
            contrib.append((den * wd, nums))
        out.append(contrib)
    return out


def _twisted_sum(f: ZSeries, s: int, weight) -> ZSeries:
    """sum_j w_j tau_z^j(f), truncated at the precision of f; each output
    coefficient is accumulated over one common denominator and normalized
    once at the end."""
    parts = twisted_parts(f, s, weight)
    return ZSeries(f.ring, [_combine(f.ring, c) for c in parts], f.prec, f.var)


def _raw_mul_univariate(nums: dict, i: int, coeffs: list) -> dict:
    out: dict = {}
    for e, n in nums.items():
        for k, u in enumerate(coeffs):
            if u.is_zero():
                continue
            ne = e[:i] + (e[i] + k,) + e[i + 1 :]
            p = n * u
            cur = out.get(ne)
            out[ne] = p if cur is None else cur + p
    return out


def _common(contrib: list) -> tuple:
    """(lcm of denominators, {e: summed numerator over it})."""
    big = contrib[0][0]
    for den, _ in contrib[1:]:
        if den != big:
            big = big * den.exact_division(big.gcd(den))
    acc: dict = {}
    for den, nums in contrib:
        mult = big.exact_division(den) if den != big else None
        for e, n in nums.items():
            v = n * mult if mult is not None else n
            cur = acc.get(e)
            acc[e] = v if cur is None else cur + v
    return big, acc


def _combine(ring: PolyRing, contrib: list) -> MultiPoly:
    """sum of {e: num}/den over the list, as a normalized MultiPoly."""
    if not contrib:
        return ring.zero()
    big, acc = _common(contrib)
    terms = {}
    for e, n in acc.items():
        if n.is_zero():
            continue
        qt, r = divmod(n, big)
        if r.is_zero():
            terms[e] = Frac(qt, qt**0, True)
        else:
            terms[e] = Frac(n, big)
    return MultiPoly(ring, terms)


def parts_vanish(contrib: list) -> bool:
    """Whether the pieces sum to zero (no normalization needed)."""
    if not contrib:
        return True
    _, acc = _common(contrib)
    return all(n.is_zero() for n in acc.values())


def negate_parts(contrib: list) -> list:
    return [(den, {e: -n for e, n in nums.items()}) for den, nums in contrib]


def exp_z(f: ZSeries, s: int) -> ZSeries:
    """sum_j tau_z^j(f) / D_j, truncated at the precision of f."""
    field = f.ring.field
    T = tables(field)
    return _twisted_sum(f, s, lambda j: (field.P1, T.D(j)))


def log_z(f: ZSeries, s: int) -> ZSeries:
    """sum_j tau_z^j(f) / l_j, truncated at the precision of f."""
    field = f.ring.field
    T = tables(field)
    return _twisted_sum(f, s, lambda j: (field.P1, T.l(j)))


# -- exp_C on approximate Tate-algebra elements -----------------------------------


@dataclass
class ExpApproxResult:
    value: ApproxPoly
    certified_ap: int  # |error|_gauss <= q^certified_ap
    jmax: int


def _tau_norm_exponent(s: int, q: int, j: int, g: Fraction) -> Fraction:
    """log_q of the bound ||tau^j f|| / |D_j| given ||f|| <= q^g."""
    return Fraction(s * (q**j - 1), q - 1) + q**j * (g - j)


def exp_tau_approx(f: ApproxPoly, target_ap: int, s: int | None = None, max_terms: int = 40) -> ExpApproxResult:
    """exp_C = sum_j tau^j / D_j applied to an approximate element of T_s.

    The sum is capped at the first j past the convergence threshold whose
    bound (and all later ones) lies at or below q^target_ap; the returned
    certified precision accounts for both the discarded tail and the
    input's own truncation error.
    """
    field = f.field
    q = field.q
    s = f.nvars if s is None else s
    g_known = f.gauss_bound()
    in_ap = f.precision()
    g = Fraction(max(g_known if g_known is not None else in_ap, in_ap))
    threshold = Fraction(s, q - 1) + g
    jmax = None
    for j in range(max_terms):
        if j > threshold and _tau_norm_exponent(s, q, j + 1, g) <= target_ap:
            jmax = j
            break
    if jmax is None:
        raise PrecisionLoss(f"exp_C does not reach q^{target_ap} within {max_terms} terms (|f| = q^{g})")
    T = tables(field)
    acc = None
    err = Fraction(_tau_norm_exponent(s, q, jmax + 1, g))
    for j in range(jmax + 1):
        qj = q**j
        term = f.map(lambda c: c.frobenius(qj))
        if j:
            bc = T.b_coeffs(j)
            for i in range(s):
                term = term.mul_univariate(i, bc)
        den = T.D(j)
        term = term.map(lambda c: c.mul_exact(Frac(field.P1, den, True)))
        err = max(err, _tau_norm_exponent(s, q, j, Fraction(in_ap)))
        acc = term if acc is None else acc + term
    cert = max(int(err.__floor__()), acc.precision())
    return ExpApproxResult(acc, cert, jmax)


def laurent_scalar_exp(x: Laurent, target_ap: int) -> Laurent:
    """exp_C on a scalar of K_inf (s = 0)."""
    poly = ApproxPoly(x.field, 0, {(): x})
    res = exp_tau_approx(poly, target_ap, 0)
    return res.value.terms.get((), Laurent.zero(x.field, res.certified_ap))


def laurent_scalar_log(x: Laurent, target_ap: int, max_terms: int = 40) -> Laurent:
    """log_C = sum_j tau^j / l_j on a scalar with |x| < q^{q/(q-1)}."""
    field = x.field
    q = field.q
    g = x.bound()
    if Fraction(g) >= Fraction(q, q - 1):
        raise PrecisionLoss("log_C needs |x| < q^(q/(q-1))")
    T = tables(field)
    acc = Laurent.zero(field, target_ap)
    for j in range(max_terms):
        # |x^{q^j} / l_j| = q^{g q^j - deg l_j}
        deg_l = (q ** (j + 1) - q) // (q - 1)
        if g * q**j - deg_l <= target_ap and j > 0:
            return acc
        term = x.frobenius(q**j).mul_exact(Frac(field.P1, T.l(j)))
        acc = acc + term
    raise PrecisionLoss("log_C did not converge to the requested precision")


def default_field(q: int) -> GF:
    return get_field(q)
