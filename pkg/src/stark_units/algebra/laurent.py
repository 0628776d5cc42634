"""Approximate elements of K_inf = F_q((1/theta)) with explicit precision.

A :class:`Laurent` value carries every coefficient of theta^k for
k > ``ap`` exactly; the unknown remainder has absolute value at most
q^ap.  Used only where genuinely infinite sums appear (evaluation at
z = 1 and the operator exp_C on Tate-algebra elements); every other part
of the package is exact.
"""

from __future__ import annotations

from typing import Iterable

from .field import GF
from .theta import Frac


class Laurent:
    """c(theta) * theta^(ap+1) + O(q^ap)."""

    __slots__ = ("field", "c", "ap")

    def __init__(self, field: GF, c, ap: int):
        self.field = field
        self.c = c
        self.ap = ap

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: GF, ap: int) -> "Laurent":
        return cls(field, field.P0, ap)

    @classmethod
    def from_frac(cls, field: GF, x: Frac, ap: int) -> "Laurent":
        """Expansion of an exact element of K, truncated at q^ap."""
        n = -(ap + 1)
        th = field.THETA
        if n >= 0:
            c = (x.num * th**n) // x.den
        else:
            c = x.num // (x.den * th ** (-n))
        return cls(field, c, ap)

    @classmethod
    def theta_power(cls, field: GF, k: int, ap: int) -> "Laurent":
        """theta^k to precision q^ap."""
        if k <= ap:
            return cls.zero(field, ap)
        return cls(field, field.THETA ** (k - ap - 1), ap)

    # -- queries ----------------------------------------------------------------

    def degree(self) -> int | None:
        """log_q of the known part's absolute value (None if zero)."""
        d = self.c.degree()
        return None if d < 0 else d + self.ap + 1

    def bound(self) -> int:
        """An integer b with |x| <= q^b certified."""
        d = self.degree()
        return self.ap if d is None else max(d, self.ap)

    def is_zero(self) -> bool:
        """True when zero within precision."""
        return self.c.is_zero()

    def coefficients(self) -> dict[int, int]:
        """{exponent: code} of the known nonzero coefficients."""
        codes = self.field.raw_codes(self.c)
        return {k + self.ap + 1: v for k, v in enumerate(codes) if v}

    # -- arithmetic ---------------------------------------------------------

    def _reprec(self, ap: int) -> "Laurent":
        """Coarsen to a larger ap (drop now-unknown low terms)."""
        if ap <= self.ap:
            return self
        shift = ap - self.ap
        th = self.field.THETA
        return Laurent(self.field, self.c // th**shift, ap)

    def __add__(self, other: "Laurent") -> "Laurent":
        ap = max(self.ap, other.ap)
        a, b = self._reprec(ap), other._reprec(ap)
        return Laurent(self.field, a.c + b.c, ap)

    def __neg__(self):
        return Laurent(self.field, -self.c, self.ap)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        b1, b2 = self.bound(), other.bound()
        ap = max(b1 + other.ap, b2 + self.ap)
        c = self.c * other.c
        # c * theta^(self.ap + other.ap + 2), recut at ap
        low = self.ap + other.ap + 2
        return _from_shifted(self.field, c, low, ap)

    def mul_exact(self, x: Frac) -> "Laurent":
        """Multiply by an exact element of K."""
        if x.is_zero():
            return Laurent.zero(self.field, self.ap)
        dn, dd = x.num.degree(), x.den.degree()
        ap = self.ap + dn - dd
        th = self.field.THETA
        # value = c * num / den * theta^(self.ap+1); keep exponents > ap
        lead = self.ap + 1
        # want floor((c*num/den) * theta^(lead - ap - 1)) as a polynomial
        shift = lead - ap - 1
        num = self.c * x.num
        if shift >= 0:
            c = (num * th**shift) // x.den
        else:
            c = num // (x.den * th ** (-shift))
        return Laurent(self.field, c, ap)

    def mul_poly(self, raw) -> "Laurent":
        return self.mul_exact(Frac(raw, self.field.P1, True))

    def frobenius(self, qk: int) -> "Laurent":
        """x^qk for qk a power of q."""
        c = self.c.inflate(qk) if self.c.degree() > 0 else self.c
        low = (self.ap + 1) * qk
        return _from_shifted(self.field, c, low, self.ap * qk)

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        ap = max(self.ap, other.ap)
        return (self._reprec(ap).c - other._reprec(ap).c).is_zero()

    def __repr__(self):
        return f"Laurent({self.coefficients()}, ap={self.ap})"


def _from_shifted(field: GF, c, low: int, ap: int) -> Laurent:
    """Laurent for c*theta^low, keeping exponents > ap."""
    th = field.THETA
    start = ap + 1
    if low >= start:
        return Laurent(field, c * th ** (low - start), ap)
    return Laurent(field, c // th ** (start - low), ap)


class ApproxPoly:
    """Polynomial in t1..ts with Laurent coefficients (an element of T_s)."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: GF, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = terms

    @classmethod
    def from_exact(cls, poly, ap: int) -> "ApproxPoly":
        """From a MultiPoly in t-variables only."""
        f = poly.field
        return cls(f, poly.ring.nvars, {e: Laurent.from_frac(f, c, ap) for e, c in poly.terms.items()})

    def precision(self) -> int:
        return max((c.ap for c in self.terms.values()), default=-(10**9))

    def gauss_bound(self) -> int | None:
        """log_q of a certified upper bound for the Gauss norm (None: zero)."""
        vals = [c.degree() for c in self.terms.values() if not c.is_zero()]
        return max(vals) if vals else None

    def __add__(self, other: "ApproxPoly") -> "ApproxPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return ApproxPoly(self.field, self.nvars, out)

    def __sub__(self, other: "ApproxPoly") -> "ApproxPoly":
        return self + other.map(lambda c: -c)

    def map(self, fn) -> "ApproxPoly":
        return ApproxPoly(self.field, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def mul_univariate(self, i: int, coeffs: list) -> "ApproxPoly":
        """Multiply by u(t_i) with exact raw polynomial coefficients."""
        out: dict = {}
        for e, c in self.terms.items():
            for k, u in enumerate(coeffs):
                if u.is_zero():
                    continue
                ne = e[:i] + (e[i] + k,) + e[i + 1 :]
                v = c.mul_poly(u)
                out[ne] = out[ne] + v if ne in out else v
        return ApproxPoly(self.field, self.nvars, out)

    def error_against(self, exact_terms: dict) -> tuple[int | None, int]:
        """(log_q Gauss norm of the difference on known digits, precision).

        ``exact_terms`` maps exponent tuples to Frac.  The first entry is
        None when the difference vanishes on all known digits.
        """
        keys = set(self.terms) | set(exact_terms)
        worst = None
        ap = self.precision()
        for e in keys:
            mine = self.terms.get(e)
            ap_e = mine.ap if mine is not None else ap
            ref = Laurent.from_frac(self.field, exact_terms[e], ap_e) if e in exact_terms else Laurent.zero(self.field, ap_e)
            diff = (mine - ref) if mine is not None else -ref
            d = diff.degree()
            if d is not None and (worst is None or d > worst):
                worst = d
        return worst, ap


def sum_laurent(field: GF, items: Iterable[Laurent], ap: int) -> Laurent:
    acc = Laurent.zero(field, ap)
    for x in items:
        acc = acc + x
    return acc
