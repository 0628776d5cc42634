"""A = F_q[theta] and K = F_q(theta).

:class:`ThetaPoly` wraps a flint ``fq_default_poly``.  :class:`Frac` keeps
the raw flint numerator/denominator directly, because fractions sit in
every hot loop of the package; its denominator is monic and coprime to
the numerator, so structural equality is field equality.
"""

from __future__ import annotations

import itertools
from functools import total_ordering
from typing import Iterator

from ..errors import DivisionByZero
from .field import GF, FieldElem, format_elem


@total_ordering
class _NegInfDegree:
    """Degree of the zero polynomial.  Orders below every int; no arithmetic."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("deg(0)")

    def __repr__(self):
        return "NEG_INF"

    def __reduce__(self):
        return (_NegInfDegree, ())


NEG_INF = _NegInfDegree()


def _deg(raw) -> int:
    return raw.degree()


class ThetaPoly:
    """An element of A = F_q[theta]."""

    __slots__ = ("field", "raw")

    def __init__(self, field: GF, raw):
        self.field = field
        self.raw = raw

    @classmethod
    def from_codes(cls, field: GF, codes) -> "ThetaPoly":
        return cls(field, field.raw_poly(list(codes)))

    @classmethod
    def from_elems(cls, field: GF, elems) -> "ThetaPoly":
        return cls.from_codes(field, [field.elem(c).code for c in elems])

    @classmethod
    def theta(cls, field: GF) -> "ThetaPoly":
        return cls(field, field.THETA)

    @classmethod
    def const(cls, field: GF, c) -> "ThetaPoly":
        return cls.from_codes(field, [field.elem(c).code])

    @property
    def degree(self):
        d = self.raw.degree()
        return NEG_INF if d < 0 else d

    @property
    def coeffs(self) -> tuple[FieldElem, ...]:
        return tuple(FieldElem(self.field, c) for c in self.field.raw_codes(self.raw))

    def codes(self) -> list[int]:
        return self.field.raw_codes(self.raw)

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_monic(self) -> bool:
        return not self.raw.is_zero() and self.raw.leading_coefficient().is_one()

    def _wrap(self, raw) -> "ThetaPoly":
        return ThetaPoly(self.field, raw)

    def _raw_of(self, other):
        if isinstance(other, ThetaPoly):
            return other.raw
        if isinstance(other, int):
            return self.field.pctx([other % self.field.p])
        if isinstance(other, FieldElem):
            return self.field.raw_poly([other.code])
        return None

    def __add__(self, other):
        o = self._raw_of(other)
        return NotImplemented if o is None else self._wrap(self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._raw_of(other)
        return NotImplemented if o is None else self._wrap(self.raw - o)

    def __rsub__(self, other):
        o = self._raw_of(other)
        return NotImplemented if o is None else self._wrap(o - self.raw)

    def __neg__(self):
        return self._wrap(-self.raw)

    def __mul__(self, other):
        o = self._raw_of(other)
        return NotImplemented if o is None else self._wrap(self.raw * o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return self._wrap(self.raw**n)

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        qq, rr = divmod(self.raw, other.raw)
        return self._wrap(qq), self._wrap(rr)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other: "ThetaPoly") -> "ThetaPoly":
        return self._wrap(self.raw.gcd(other.raw))

    def frobenius(self, k: int = 1) -> "ThetaPoly":
        """a(theta)^(q^k); coefficients in F_q are fixed."""
        return self._wrap(frob_raw(self.raw, self.field.q**k))

    def __call__(self, x):
        return self._wrap(self.raw.compose(x.raw))

    def __eq__(self, other):
        if isinstance(other, ThetaPoly):
            return self.field is other.field and self.raw == other.raw
        o = self._raw_of(other)
        return NotImplemented if o is None else self.raw == o

    def __hash__(self):
        return hash(tuple(self.codes()))

    def __str__(self):
        return format_theta(self.field, self.raw)

    def __repr__(self):
        return f"ThetaPoly({self})"


def frob_raw(raw, qk: int):
    """Raise a raw polynomial to the power qk (a power of q)."""
    if raw.degree() <= 0:
        return raw
    return raw.inflate(qk)


def monic_enum(field: GF, d: int) -> list[ThetaPoly]:
    """All monic polynomials of degree d, lexicographic in (a_{d-1}, ..., a_0)."""
    return [ThetaPoly(field, raw) for raw, _ in monic_enum_raw(field, d)]


def monic_enum_raw(field: GF, d: int, part: tuple[int, int] | None = None) -> Iterator[tuple]:
    """Yield (raw poly, coefficient codes low->high) for monic degree-d polys.

    ``part=(i, n)`` restricts to the i-th of n interleaved chunks; the union
    over i = 0..n-1 is the whole set, in any order.
    """
    if d < 0:
        return
    q = field.q
    for idx, top_first in enumerate(itertools.product(range(q), repeat=d)):
        if part is not None and idx % part[1] != part[0]:
            continue
        codes = list(reversed(top_first)) + [1]
        yield field.raw_poly(codes), codes


def format_theta(field: GF, raw) -> str:
    codes = field.raw_codes(raw)
    if not any(codes):
        return "0"
    parts: list[tuple[str, str]] = []
    for i in range(len(codes) - 1, -1, -1):
        c = codes[i]
        if c == 0:
            continue
        sign, mag = _split_sign(field, c)
        mono = "" if i == 0 else ("th" if i == 1 else f"th^{i}")
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _split_sign(field: GF, code: int) -> tuple[str, str]:
    """Symmetric representative for prime fields; g^k otherwise."""
    if field.e == 1:
        p = field.p
        if p > 2 and code > p // 2:
            return "-", str(p - code)
        return "+", str(code)
    return "+", format_elem(field, code)


class Frac:
    """An element of K = F_q(theta): num/den with den monic, gcd 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, _normalized: bool = False):
        if not _normalized:
            if den.is_zero():
                raise DivisionByZero("zero denominator")
            if num.is_zero():
                den = den.one() if hasattr(den, "one") else den**0
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num.exact_division(g)
                    den = den.exact_division(g)
                lc = den.leading_coefficient()
                if not lc.is_one():
                    inv = lc.inverse()
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: GF) -> "Frac":
        return cls(field.P0, field.P1, True)

    @classmethod
    def one(cls, field: GF) -> "Frac":
        return cls(field.P1, field.P1, True)

    @classmethod
    def from_poly(cls, p) -> "Frac":
        if isinstance(p, ThetaPoly):
            return cls(p.raw, p.field.P1, True)
        return cls(p, p**0, True)

    @classmethod
    def from_int(cls, field: GF, n: int) -> "Frac":
        return cls(field.pctx([n % field.p]), field.P1, True)

    @classmethod
    def from_code(cls, field: GF, code: int) -> "Frac":
        return cls(field.raw_poly([code]), field.P1, True)

    @classmethod
    def of(cls, field: GF, x) -> "Frac":
        if isinstance(x, Frac):
            return x
        if isinstance(x, ThetaPoly):
            return cls.from_poly(x)
        if isinstance(x, FieldElem):
            return cls.from_code(field, x.code)
        if isinstance(x, int):
            return cls.from_int(field, x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Frac")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_integral(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    def numerator(self, field: GF) -> ThetaPoly:
        return ThetaPoly(field, self.num)

    def denominator(self, field: GF) -> ThetaPoly:
        return ThetaPoly(field, self.den)

    def abs_exponent(self) -> int:
        """log_q |x|_inf = deg num - deg den (undefined for zero)."""
        if self.num.is_zero():
            raise ValueError("|0| has no exponent")
        return self.num.degree() - self.den.degree()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Frac") -> "Frac":
        a, b, c, d = self.num, self.den, other.num, other.den
        if c.is_zero():
            return self
        if a.is_zero():
            return other
        if b.is_one() and d.is_one():
            return Frac(a + c, b, True)
        if b == d:
            n = a + c
            if n.is_zero():
                return Frac(n, n**0, True)
            g = n.gcd(b)
            if g.is_one():
                return Frac(n, b, True)
            return Frac(n.exact_division(g), b.exact_division(g), True)
        g = b.gcd(d)
        if g.is_one():
            return Frac(a * d + b * c, b * d, True)
        b1 = b.exact_division(g)
        d1 = d.exact_division(g)
        n = a * d1 + c * b1
        if n.is_zero():
            return Frac(n, n**0, True)
        g2 = n.gcd(g)
        if g2.is_one():
            return Frac(n, b1 * d, True)
        return Frac(n.exact_division(g2), (b1 * d).exact_division(g2), True)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, True)

    def __sub__(self, other: "Frac") -> "Frac":
        return self + (-other)

    def __mul__(self, other: "Frac") -> "Frac":
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            z = a if a.is_zero() else c
            return Frac(z, z**0, True)
        if b.is_one() and d.is_one():
            return Frac(a * c, b, True)
        if not d.is_one():
            g1 = a.gcd(d)
            if not g1.is_one():
                a = a.exact_division(g1)
                d = d.exact_division(g1)
        if not b.is_one():
            g2 = c.gcd(b)
            if not g2.is_one():
                c = c.exact_division(g2)
                b = b.exact_division(g2)
        return Frac(a * c, b * d, True)

    def mul_poly(self, raw) -> "Frac":
        """Multiply by a raw element of A."""
        if self.den.is_one():
            return Frac(self.num * raw, self.den, True)
        return self * Frac(raw, raw**0, True)

    def scale(self, c) -> "Frac":
        """Multiply by a flint field element or int (an element of F_q)."""
        return Frac(self.num * c, self.den, True) if c else Frac(self.num * 0, self.den**0, True)

    def inverse(self) -> "Frac":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero in K")
        return Frac(self.den, self.num)

    def __truediv__(self, other: "Frac") -> "Frac":
        return self * other.inverse()

    def __pow__(self, n: int) -> "Frac":
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num**n, self.den**n, True)

    def frobenius(self, qk: int) -> "Frac":
        """x^(qk) for qk a power of q."""
        return Frac(frob_raw(self.num, qk), frob_raw(self.den, qk), True)

    def __eq__(self, other):
        if isinstance(other, Frac):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __repr__(self):
        return f"Frac({self.num} / {self.den})"


def format_frac(field: GF, x: Frac) -> str:
    n = format_theta(field, x.num)
    if x.den.is_one():
        return n
    d = format_theta(field, x.den)
    if _is_compound(n):
        n = f"({n})"
    if _is_compound(d) or "*" in d or "^" in d:
        d = f"({d})"
    return f"{n}/{d}"


def _is_compound(s: str) -> bool:
    return " + " in s or " - " in s or s.startswith("-")
