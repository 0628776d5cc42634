"""Norms on K[X] and K[t], the H_N basis, and the t-action on K[X][Z].

H_N(X) = prod_i C_{theta^i}(X)^{N_i} over the base-q digits N_i of N.
These products are monic in X and orthogonal for the sup norm, with
||H_N|| = q^{l_q(N)/(q-1)}, so the norm of any F in K[X] is read off its
expansion in the H-basis.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .algebra.field import GF
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac
from .algebra.zseries import ZSeries
from .carlitz import _umul, substitute_linear, tables
from .errors import InvalidInput


def digit_sum(n: int, q: int) -> int:
    """l_q(n): the sum of the base-q digits of n >= 0."""
    if n < 0:
        raise InvalidInput("digit sum of a negative integer")
    total = 0
    while n:
        n, r = divmod(n, q)
        total += r
    return total


@total_ordering
@dataclass(frozen=True)
class NormValue:
    """q^exponent, or 0 when ``exponent`` is None."""

    q: int
    exponent: Fraction | None

    @classmethod
    def zero(cls, q: int) -> "NormValue":
        return cls(q, None)

    @classmethod
    def power(cls, q: int, r) -> "NormValue":
        return cls(q, Fraction(r))

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: "NormValue") -> "NormValue":
        if self.is_zero or other.is_zero:
            return NormValue.zero(self.q)
        return NormValue(self.q, self.exponent + other.exponent)

    def __truediv__(self, other: "NormValue") -> "NormValue":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero norm")
        if self.is_zero:
            return self
        return NormValue(self.q, self.exponent - other.exponent)

    def __lt__(self, other: "NormValue") -> bool:
        if other.is_zero:
            return False
        if self.is_zero:
            return True
        return self.exponent < other.exponent

    def __str__(self):
        if self.is_zero:
            return "0"
        r = self.exponent * (self.q - 1)
        head = f"q^({r}/{self.q - 1})" if r.denominator == 1 else f"q^({self.exponent})"
        if self.exponent.denominator == 1:
            n = int(self.exponent)
            return f"{head} = {self.q**n}" if n >= 0 else f"{head} = 1/{self.q**-n}"
        return head


def _max_norm(q: int, vals) -> NormValue:
    best = NormValue.zero(q)
    for v in vals:
        if v > best:
            best = v
    return best


# -- the H basis -----------------------------------------------------------


class _HTables:
    """Per-field memo of H_N(X) and of the inverse expansions X^e = sum c H_N."""

    def __init__(self, field: GF):
        self.field = field
        self.h: dict[int, dict[int, Frac]] = {}
        self.inv: dict[int, dict[int, Frac]] = {}
        self.lock = threading.RLock()

    def h_of(self, N: int) -> dict[int, Frac]:
        with self.lock:
            got = self.h.get(N)
            if got is not None:
                return got
            f = self.field
            T = tables(f)
            acc = {0: Frac.one(f)}
            n, i = N, 0
            while n:
                n, dgt = divmod(n, f.q)
                if dgt:
                    cth = {f.q**k: Frac(c, f.P1, True) for k, c in enumerate(T.psi_row(i)) if not c.is_zero()}
                    for _ in range(dgt):
                        acc = _umul(acc, cth)
                i += 1
            self.h[N] = acc
            return acc

    def inverse_of(self, e: int) -> dict[int, Frac]:
        with self.lock:
            got = self.inv.get(e)
            if got is not None:
                return got
            # H_e = X^e + lower terms, so X^e = H_e - sum_{N<e} h_e[N] X^N
            out = {e: Frac.one(self.field)}
            for N, c in self.h_of(e).items():
                if N == e:
                    continue
                for M, d in self.inverse_of(N).items():
                    v = out.get(M)
                    w = -(c * d)
                    out[M] = w if v is None else v + w
            out = {k: v for k, v in out.items() if not v.is_zero()}
            self.inv[e] = out
            return out


_H: dict[int, _HTables] = {}
_H_LOCK = threading.Lock()


def _htables(field: GF) -> _HTables:
    with _H_LOCK:
        t = _H.get(id(field))
        if t is None:
            t = _H[id(field)] = _HTables(field)
        return t


def h_poly(N: int, q: int | None = None, ring: PolyRing | None = None, var: int = 1) -> MultiPoly:
    """H_N(X_var) as a MultiPoly (default ring: one X-variable over F_q)."""
    if N < 0:
        raise InvalidInput("H_N needs N >= 0")
    if ring is None:
        if q is None:
            raise InvalidInput("h_poly needs q or a ring")
        ring = PolyRing(q, 0, max(1, var))
    slot = ring.X(var)
    out = {}
    for k, c in _htables(ring.field).h_of(N).items():
        e = [0] * ring.nvars
        e[slot] = k
        out[tuple(e)] = c
    return MultiPoly(ring, out)


@dataclass
class HBasisExpansion:
    """F = sum terms[e] * prod_i H_{e[X_i]}(X_i) * (other variables)^e.

    Keys are full exponent tuples of ``ring``; at X-slots they hold the
    H-index N_i, everywhere else the ordinary exponent.
    """

    ring: PolyRing
    terms: dict

    def to_multipoly(self) -> MultiPoly:
        ring = self.ring
        H = _htables(ring.field)
        xs = [ring.X(i) for i in range(1, ring.nx + 1)]
        acc = ring.zero()
        for e, c in self.terms.items():
            partial = {e: c}
            for i in xs:
                if e[i] == 0:
                    continue
                nxt: dict = {}
                for pe, pc in partial.items():
                    for k, hc in H.h_of(e[i]).items():
                        ne = pe[:i] + (k,) + pe[i + 1 :]
                        v = pc * hc
                        nxt[ne] = nxt[ne] + v if ne in nxt else v
                partial = nxt
            acc = acc + MultiPoly(ring, {k: v for k, v in partial.items() if not v.is_zero()})
        return acc

    def coeff(self, exps: dict[str, int]) -> Frac:
        e = [0] * self.ring.nvars
        for n, k in exps.items():
            e[self.ring.var_index(n)] = k
        return self.terms.get(tuple(e), Frac.zero(self.ring.field))


def h_expand(F: MultiPoly) -> HBasisExpansion:
    """Coordinates of F in the basis prod H_{N_i}(X_i).

    The basis is a tensor product, so the triangular inversion is applied
    one X-variable at a time; each step rewrites X_i^e through the
    memoized univariate table X^e = H_e - (lower H terms).
    """
    ring = F.ring
    H = _htables(ring.field)
    cur = dict(F.terms)
    for i in (ring.X(j) for j in range(1, ring.nx + 1)):
        nxt: dict = {}
        for e, c in cur.items():
            k = e[i]
            if k == 0:
                nxt[e] = nxt[e] + c if e in nxt else c
                continue
            for N, d in H.inverse_of(k).items():
                ne = e[:i] + (N,) + e[i + 1 :]
                v = c * d
                nxt[ne] = nxt[ne] + v if ne in nxt else v
        cur = {e: c for e, c in nxt.items() if not c.is_zero()}
    return HBasisExpansion(ring, cur)


# -- norms ------------------------------------------------------------------


def abs_value(c: Frac, q: int) -> NormValue:
    if c.is_zero():
        return NormValue.zero(q)
    return NormValue(q, Fraction(c.abs_exponent()))


def sup_norm(F: MultiPoly) -> NormValue:
    """||F|| = max |f_N| q^{(l_q(N_1)+...+l_q(N_s))/(q-1)} over the H-expansion."""
    ring = F.ring
    q = ring.q
    if ring.nt or ring.has_z or ring.has_Z:
        used = F.variables_used()
        if any(not n.startswith("X") for n in used):
            raise InvalidInput("sup_norm is defined on K[X] only")
    xs = [ring.X(j) for j in range(1, ring.nx + 1)]
    vals = []
    for e, c in h_expand(F).terms.items():
        w = sum(digit_sum(e[i], q) for i in xs)
        vals.append(NormValue(q, Fraction(c.abs_exponent()) + Fraction(w, q - 1)))
    return _max_norm(q, vals)


def gauss_norm(f) -> NormValue:
    """max |coefficient|_inf over all monomials (MultiPoly or ZSeries)."""
    if isinstance(f, ZSeries):
        q = f.ring.q
        return _max_norm(q, (gauss_norm(c) for c in f.coeffs))
    q = f.ring.q
    return _max_norm(q, (abs_value(c, q) for c in f.terms.values()))


def monomial_norm(exps, q: int) -> NormValue:
    """||X^i|| = q^{|i|/(q-1)}."""
    return NormValue(q, Fraction(sum(exps), q - 1))


# -- the module action of K[t][z] on K[X][[Z]] -------------------------------


def dot_action(f, F):
    """f.F with t_j acting by X_j -> C_theta(X_j) and z by Z -> Z^q.

    ``f``: MultiPoly in t (and z) or a ZSeries in z.  ``F``: MultiPoly in
    X (and Z).  A ZSeries ``F`` in Z is accepted when exact.
    """
    if isinstance(f, ZSeries):
        if f.prec is not None:
            raise InvalidInput("dot_action needs an exact series in z")
        f = f.to_poly()
    as_series = isinstance(F, ZSeries)
    if as_series:
        if F.var != "Z" or F.prec is not None:
            raise InvalidInput("dot_action needs an exact series in Z")
        F = F.to_poly()
    fr, Fr = f.ring, F.ring
    if fr.nx:
        if any(n.startswith("X") for n in f.variables_used()):
            raise InvalidInput("the acting polynomial must be in t and z only")
    if fr.nt > Fr.nx and any(f.degree(f"t{j}") > 0 for j in range(Fr.nx + 1, fr.nt + 1)):
        raise InvalidInput("t_j acts on X_j, but X_j is missing")
    zslot = fr.index.get("z")
    if zslot is not None and any(e[zslot] for e in f.terms) and not Fr.has_Z:
        raise InvalidInput("z acts on Z, but the target has no Z")
    field = Fr.field
    T = tables(field)
    acc = Fr.zero()
    for e, c in f.terms.items():
        maps = {}
        for j in range(1, fr.nt + 1):
            n = e[fr.t(j)]
            if n:
                maps[Fr.X(j)] = T.psi_row(n)
        zmul = field.q ** e[zslot] if zslot is not None else 1
        acc = acc + substitute_linear(F, maps, zmul).scale(c)
    return ZSeries.from_poly(acc, None, "Z") if as_series else acc


def linear_monomial(s: int, q: int, with_Z: bool = False, modulus=None) -> MultiPoly:
    """X_1...X_s (times Z when requested)."""
    ring = PolyRing(q, 0, s, False, with_Z, modulus)
    e = tuple([1] * s + ([1] if with_Z else []))
    return MultiPoly(ring, {e: Frac.one(ring.field)})
