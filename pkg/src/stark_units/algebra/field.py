"""Finite fields F_q, q = p^e.

Elements are coded as integers ``0 <= code < q`` whose base-p digits are the
residue coefficients (lowest degree first) modulo the defining polynomial.
For e = 1 the code is just the residue mod p.  Small-field arithmetic on
:class:`FieldElem` is table driven and pure Python; polynomial arithmetic
over the same field is delegated to flint (see :mod:`.theta`), and the
two are tied together through the code <-> flint element maps on
:class:`GF`.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache

import flint

from ..errors import DivisionByZero, InvalidField

# Primitive moduli (root of the modulus generates F_q^*), lowest degree first.
BUILTIN_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (2, 2, 1),  # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}

_TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise InvalidField."""
    if q < 2:
        raise InvalidField(f"q = {q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e, m = 0, q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1 or not is_prime(p):
                raise InvalidField(f"q = {q} is not a prime power")
            return p, e
    raise InvalidField(f"q = {q} is not a prime power")  # pragma: no cover


# -- tiny dense polynomial helpers over F_p (tuples, lowest degree first) ----


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lc = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def is_irreducible_mod_p(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p == 0:
        return False
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(list(modulus), tuple(low) + (1,), p):
                return False
    return True


def _digits(code: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(code % p)
        code //= p
    return out


def _undigits(digits: list[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def _is_primitive_modulus(modulus: tuple[int, ...], p: int) -> bool:
    e = len(modulus) - 1
    q = p**e
    x, cur, order = [0, 1], [1], 0
    while True:
        cur = _pmod(_pmul(cur, x, p), modulus, p)
        order += 1
        if cur == [1]:
            return order == q - 1
        if order > q:
            return False


def search_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic primitive polynomial of degree e."""
    for low in itertools.product(range(p), repeat=e):
        m = tuple(reversed(low)) + (1,)
        if m[0] and is_irreducible_mod_p(m, p) and _is_primitive_modulus(m, p):
            return m
    raise InvalidField(f"no primitive polynomial of degree {e} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int = 1
    modulus: tuple[int, ...] = (0, 1)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidField(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise InvalidField("extension degree must be >= 1")
        if self.e == 1:
            object.__setattr__(self, "modulus", (0, 1))
            return
        m = tuple(int(c) % self.p for c in self.modulus)
        if len(m) != self.e + 1 or m[-1] != 1:
            raise InvalidField(f"modulus must be monic of degree {self.e}")
        if not is_irreducible_mod_p(m, self.p):
            raise InvalidField(f"modulus {m} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", m)

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def from_q(cls, q: int, modulus: tuple[int, ...] | None = None) -> "FieldSpec":
        p, e = prime_power(q)
        if e == 1:
            return cls(p, 1)
        if modulus is None:
            modulus = BUILTIN_MODULI.get(q) or search_modulus(p, e)
        return cls(p, e, tuple(modulus))


class GF:
    """Runtime finite field: tables, generator, and the flint contexts.

    Instances are interned per FieldSpec (use :func:`get_field`), so
    identity comparison is field equality.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p, self.e, self.q = spec.p, spec.e, spec.q
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self.ctx = flint.fq_default_ctx(p, 1)
        else:
            fm = flint.fmpz_mod_poly_ctx(p)(list(spec.modulus))
            self.ctx = flint.fq_default_ctx(modulus=fm)
        self.pctx = flint.fq_default_poly_ctx(self.ctx)
        self._lock = threading.Lock()
        self.cache: dict = {}  # per-field memo space for higher modules

        self._tables = q <= _TABLE_LIMIT and e > 1
        if self._tables:
            self._add = [[0] * q for _ in range(q)]
            self._mul = [[0] * q for _ in range(q)]
            digs = [_digits(c, p, e) for c in range(q)]
            for a in range(q):
                for b in range(q):
                    self._add[a][b] = _undigits([(x + y) % p for x, y in zip(digs[a], digs[b])], p)
                    prod = _pmod(_pmul(_trim(list(digs[a])), _trim(list(digs[b])), p), spec.modulus, p)
                    self._mul[a][b] = _undigits(prod + [0] * (e - len(prod)), p)
        self.gen_code = self._find_generator()
        self._exp: list[int] = []
        self._log: dict[int, int] = {}
        if q <= _TABLE_LIMIT:
            c = 1
            for k in range(q - 1):
                self._exp.append(c)
                self._log[c] = k
                c = self.mul_codes(c, self.gen_code)
        self._flint_elems = [self._code_to_flint(c) for c in range(q)] if q <= _TABLE_LIMIT else None

        self.P0 = self.pctx([0])
        self.P1 = self.pctx([1])
        self.THETA = self.pctx([0, 1])

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.q}, modulus={self.spec.modulus})"

    def __reduce__(self):
        return (get_field, (self.q, self.spec.modulus if self.e > 1 else None))

    # -- code arithmetic ---------------------------------------------------

    def add_codes(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._tables:
            return self._add[a][b]
        return _undigits([(x + y) % self.p for x, y in zip(_digits(a, self.p, self.e), _digits(b, self.p, self.e))], self.p)

    def neg_code(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return _undigits([(-x) % self.p for x in _digits(a, self.p, self.e)], self.p)

    def mul_codes(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self._tables:
            return self._mul[a][b]
        p, e = self.p, self.e
        prod = _pmod(_pmul(_trim(_digits(a, p, e)), _trim(_digits(b, p, e)), p), self.spec.modulus, p)
        return _undigits(prod + [0] * (e - len(prod)), p)

    def pow_code(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv_code(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul_codes(r, a)
            a = self.mul_codes(a, a)
            n >>= 1
        return r

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in F_q")
        return self.pow_code(a, self.q - 2)

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = [f for f in range(2, q) if (q - 1) % f == 0 and is_prime(f)]
        for c in range(2, q):
            if all(self.pow_code(c, (q - 1) // f) != 1 for f in factors):
                return c
        raise InvalidField("no generator found")  # pragma: no cover

    def log_code(self, a: int) -> int:
        """Discrete log to the base of the generator."""
        if a == 0:
            raise DivisionByZero("log of zero")
        return self._log[a]

    def exp_code(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    # -- flint bridge ----------------------------------------------------------

    def _code_to_flint(self, code: int):
        if self.e == 1:
            return self.ctx(code)
        return self.ctx(_digits(code, self.p, self.e))

    def to_flint(self, code: int):
        if self._flint_elems is not None:
            return self._flint_elems[code]
        return self._code_to_flint(code)

    def from_flint(self, x) -> int:
        digs = [int(d) for d in x.to_list()]
        return _undigits(digs + [0] * (self.e - len(digs)), self.p)

    def raw_poly(self, codes: list[int]):
        """flint polynomial from coefficient codes (lowest degree first)."""
        if self.e == 1:
            return self.pctx(list(codes))
        return self.pctx([self.to_flint(c) for c in codes])

    def raw_codes(self, poly) -> list[int]:
        if self.e == 1:
            return [int(c.to_list()[0]) if not c.is_zero() else 0 for c in poly.coeffs()]
        return [self.from_flint(c) for c in poly.coeffs()]

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, c) for c in range(self.q)]

    def elem(self, value) -> "FieldElem":
        """Coerce an int (read in the prime subfield) to a field element."""
        if isinstance(value, FieldElem):
            return value
        return FieldElem(self, int(value) % self.p)

    def from_code(self, code: int) -> "FieldElem":
        return FieldElem(self, code)

    def gen(self) -> "FieldElem":
        return FieldElem(self, self.gen_code)


@lru_cache(maxsize=None)
def _field_for_spec(spec: FieldSpec) -> GF:
    return GF(spec)


def get_field(q: int, modulus: tuple[int, ...] | None = None) -> GF:
    spec = FieldSpec.from_q(q, None if modulus is None else tuple(modulus))
    return _field_for_spec(spec)


class FieldElem:
    """An element of F_q, immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        if not 0 <= code < field.q:
            raise InvalidField(f"code {code} out of range for {field}")
        self.field = field
        self.code = code

    @property
    def residue(self) -> tuple[int, ...]:
        return tuple(_digits(self.code, self.field.p, self.field.e))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise InvalidField("mixing elements of different fields")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.add_codes(self.code, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_code(self.code))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.add_codes(self.code, self.field.neg_code(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.mul_codes(self.code, o))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv_code(self.code))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FieldElem(self.field, self.field.inv_code(o))

    def __pow__(self, n: int):
        if self.code == 0 and n < 0:
            raise DivisionByZero("negative power of zero")
        if self.code == 0:
            return FieldElem(self.field, 1 if n == 0 else 0)
        return FieldElem(self.field, self.field.pow_code(self.code, n))

    def frobenius(self) -> "FieldElem":
        return self ** self.field.p

    def is_zero(self) -> bool:
        return self.code == 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p and (self.field.e == 1 or self.code < self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __repr__(self):
        return f"FieldElem({format_elem(self.field, self.code)}, q={self.field.q})"


def format_elem(field: GF, code: int) -> str:
    """Canonical text of a field element: integer for prime q, else g^k."""
    if field.e == 1:
        return str(code)
    if code == 0:
        return "0"
    if code == 1:
        return "1"
    k = field.log_code(code)
    return "g" if k == 1 else f"g^{k}"


def field_arith(x: FieldElem, y: FieldElem | None, op: str) -> FieldElem:
    """Dispatch one of add, mul, inv, pow, frobenius.

    For ``pow`` the second argument is an ``int`` exponent.
    """
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** int(y)
    if op == "frobenius":
        return x.frobenius()
    raise ValueError(f"unknown field op {op!r}")
