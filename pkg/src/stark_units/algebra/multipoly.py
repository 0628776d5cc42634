"""Sparse multivariate polynomials over K = F_q(theta).

A :class:`PolyRing` fixes the variables: ``t1..tn`` (the t-family),
``X1..Xm`` (the X-family) and optionally ``z`` and ``Z``.  Exponent tuples
follow that order.  A :class:`MultiPoly` is an immutable mapping from
exponent tuples to nonzero :class:`Frac` coefficients.

Canonical term order (used for printing and iteration): first by the
z/Z exponent, then graded lexicographic with t1 < ... < tn < X1 < ... < Xm,
ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping

from ..errors import InvalidInput, InvalidVariable
from .field import GF, get_field
from .theta import Frac, ThetaPoly, frob_raw


@dataclass(frozen=True)
class PolyRing:
    q: int
    nt: int = 0
    nx: int = 0
    has_z: bool = False
    has_Z: bool = False
    modulus: tuple | None = None

    def __post_init__(self):
        # one spelling per field: None for prime q, the resolved modulus otherwise
        f = get_field(self.q, self.modulus)
        object.__setattr__(self, "modulus", f.spec.modulus if f.e > 1 else None)

    @property
    def field(self) -> GF:
        return get_field(self.q, self.modulus)

    @cached_property
    def names(self) -> tuple[str, ...]:
        out = [f"t{i}" for i in range(1, self.nt + 1)]
        out += [f"X{i}" for i in range(1, self.nx + 1)]
        if self.has_z:
            out.append("z")
        if self.has_Z:
            out.append("Z")
        return tuple(out)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def series_slots(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.names) if n in ("z", "Z"))

    def var_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise InvalidVariable(f"variable {name} not in ring {self.names}") from None

    def t(self, i: int) -> int:
        if not 1 <= i <= self.nt:
            raise InvalidVariable(f"t{i} out of range (s = {self.nt})")
        return i - 1

    def X(self, i: int) -> int:
        if not 1 <= i <= self.nx:
            raise InvalidVariable(f"X{i} out of range (s = {self.nx})")
        return self.nt + i - 1

    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def with_vars(self, nt=None, nx=None, has_z=None, has_Z=None) -> "PolyRing":
        return PolyRing(
            self.q,
            self.nt if nt is None else nt,
            self.nx if nx is None else nx,
            self.has_z if has_z is None else has_z,
            self.has_Z if has_Z is None else has_Z,
            self.modulus,
        )

    def union(self, other: "PolyRing") -> "PolyRing":
        if (self.q, self.modulus) != (other.q, other.modulus):
            raise InvalidInput("rings over different fields")
        return PolyRing(
            self.q,
            max(self.nt, other.nt),
            max(self.nx, other.nx),
            self.has_z or other.has_z,
            self.has_Z or other.has_Z,
            self.modulus,
        )

    def order_key(self, e: tuple[int, ...]):
        ser = tuple(e[i] for i in self.series_slots)
        rest = [x for i, x in enumerate(e) if i not in self.series_slots]
        return (ser, sum(rest), tuple(reversed(rest)))

    # -- constructors -------------------------------------------------------

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {self.zero_exp(): Frac.one(self.field)})

    def const(self, c) -> "MultiPoly":
        c = Frac.of(self.field, c)
        return MultiPoly(self, {} if c.is_zero() else {self.zero_exp(): c})

    def var(self, name: str, power: int = 1) -> "MultiPoly":
        e = [0] * self.nvars
        e[self.var_index(name)] = power
        return MultiPoly(self, {tuple(e): Frac.one(self.field)})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "MultiPoly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.var_index(n)] = k
        c = Frac.of(self.field, coeff)
        return MultiPoly(self, {} if c.is_zero() else {tuple(e): c})


def _embed_map(src: PolyRing, dst: PolyRing) -> list[int]:
    try:
        return [dst.index[n] for n in src.names]
    except KeyError as exc:
        raise InvalidVariable(f"cannot embed {src.names} into {dst.names}") from exc


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Frac."""

    __slots__ = ("ring", "terms", "__weakref__")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    @property
    def field(self) -> GF:
        return self.ring.field

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Frac]]:
        key = self.ring.order_key
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    def is_integral(self) -> bool:
        """All coefficients lie in A."""
        return all(c.den.is_one() for c in self.terms.values())

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exp() in self.terms)

    def constant_term(self) -> Frac:
        return self.terms.get(self.ring.zero_exp(), Frac.zero(self.field))

    def coeff(self, exps: Mapping[str, int] | tuple) -> Frac:
        if not isinstance(exps, tuple):
            e = [0] * self.ring.nvars
            for n, k in exps.items():
                e[self.ring.var_index(n)] = k
            exps = tuple(e)
        return self.terms.get(exps, Frac.zero(self.field))

    def degree(self, name: str) -> int:
        i = self.ring.var_index(name)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables_used(self) -> set[str]:
        names = self.ring.names
        return {names[i] for e in self.terms for i, k in enumerate(e) if k}

    # -- ring changes ----------------------------------------------------

    def embed(self, ring: PolyRing) -> "MultiPoly":
        if ring == self.ring:
            return self
        m = _embed_map(self.ring, ring)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                ne[m[i]] = k
            out[tuple(ne)] = c
        return MultiPoly(ring, out)

    def restrict(self, ring: PolyRing) -> "MultiPoly":
        """Move to a smaller ring; every dropped variable must be absent."""
        out = {}
        keep = [self.ring.index.get(n) for n in ring.names]
        dropped = [i for i, n in enumerate(self.ring.names) if n not in ring.index]
        for e, c in self.terms.items():
            if any(e[i] for i in dropped):
                raise InvalidVariable("polynomial involves a variable outside the target ring")
            out[tuple(0 if j is None else e[j] for j in keep)] = c
        return MultiPoly(ring, out)

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Frac, ThetaPoly)):
            return self.ring.const(other)
        return None

    def _align(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if other.ring == self.ring:
            return self, other
        r = self.ring.union(other.ring)
        return self.embed(r), other.embed(r)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for e, c in b.terms.items():
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return MultiPoly(a.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Frac):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        if not a.terms or not b.terms:
            return MultiPoly(a.ring, {})
        if len(b.terms) == 1 and b.ring.zero_exp() in b.terms:
            return a.scale(b.terms[b.ring.zero_exp()])
        acc: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                cur = acc.get(e)
                acc[e] = p if cur is None else cur + p
        return MultiPoly(a.ring, {e: c for e, c in acc.items() if not c.is_zero()})

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = Frac.of(self.field, c)
        if c.is_zero():
            return MultiPoly(self.ring, {})
        if c.is_one():
            return self
        return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, other):
        c = other if isinstance(other, Frac) else Frac.of(self.field, other)
        return self.scale(c.inverse())

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise InvalidInput("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                try:
                    a, b = self._align(other)
                except InvalidInput:
                    return False
                return a.terms == b.terms
            return self.terms == other.terms
        o = self._coerce(other)
        return NotImplemented if o is None else self == o

    def __hash__(self):
        return hash(frozenset((e, hash(c)) for e, c in self.terms.items()))

    def map_coeffs(self, fn: Callable[[Frac], Frac]) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[e] = v
        return MultiPoly(self.ring, out)

    # -- Frobenius-type operations ----------------------------------------

    def frobenius(self, k: int = 1) -> "MultiPoly":
        """phi^k: raise every coefficient to the power q^k, exponents fixed."""
        if k == 0:
            return self
        qk = self.ring.q**k
        return MultiPoly(self.ring, {e: c.frobenius(qk) for e, c in self.terms.items()})

    def qpower(self, k: int = 1) -> "MultiPoly":
        """The whole polynomial raised to q^k (additive in char p)."""
        if k == 0:
            return self
        qk = self.ring.q**k
        return MultiPoly(
            self.ring, {tuple(x * qk for x in e): c.frobenius(qk) for e, c in self.terms.items()}
        )

    # -- calculus and substitution -------------------------------------------

    def partial_derivative(self, name: str) -> "MultiPoly":
        i = self.ring.var_index(name)
        p = self.ring.field.p
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k % p == 0:
                continue
            ne = list(e)
            ne[i] = k - 1
            out[tuple(ne)] = c.scale(k % p)
        return MultiPoly(self.ring, out)

    def substitute(self, mapping: Mapping[str, "MultiPoly"], ring: PolyRing | None = None) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials.

        Unmapped variables are kept.  The result lives in ``ring`` (default:
        the union of this ring and the rings of the images).
        """
        target = ring or self.ring
        for v in mapping.values():
            target = target.union(v.ring) if ring is None else target
        slots = {self.ring.var_index(n): img.embed(target) for n, img in mapping.items()}
        names = self.ring.names
        pow_cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in pow_cache:
                pow_cache[key] = slots[i] ** k
            return pow_cache[key]

        acc = target.zero()
        buckets: dict[tuple, dict] = {}
        for e, c in self.terms.items():
            kept = {}
            sub_key = []
            for i, k in enumerate(e):
                if i in slots:
                    sub_key.append((i, k))
                elif k:
                    kept[names[i]] = k
            (mono_e,) = target.monomial(kept, 1).terms.keys()
            b = buckets.setdefault(tuple(sub_key), {})
            cur = b.get(mono_e)
            b[mono_e] = c if cur is None else cur + c
        for sub_key, kept_terms in buckets.items():
            factor = target.one()
            for i, k in sub_key:
                if k:
                    factor = factor * power(i, k)
            kept_poly = MultiPoly(target, {e: c for e, c in kept_terms.items() if not c.is_zero()})
            acc = acc + kept_poly * factor
        return acc

    def eval_t_at_theta(self, subset: Iterable[int]) -> "MultiPoly":
        """Replace each t_i (i in subset) by theta; coefficients fold into K."""
        f = self.field
        idx = [self.ring.t(i) for i in subset]
        out: dict = {}
        for e, c in self.terms.items():
            k = sum(e[i] for i in idx)
            ne = list(e)
            for i in idx:
                ne[i] = 0
            ne = tuple(ne)
            v = c.mul_poly(f.THETA**k) if k else c
            cur = out.get(ne)
            out[ne] = v if cur is None else cur + v
        return MultiPoly(self.ring, {e: c for e, c in out.items() if not c.is_zero()})

    def collect(self, name: str) -> dict[int, "MultiPoly"]:
        """Split by powers of one variable: {k: coefficient of name^k}."""
        i = self.ring.var_index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(e[i], {})[ne] = c
        return {k: MultiPoly(self.ring, d) for k, d in sorted(out.items())}

    def evaluate_var(self, name: str, value) -> "MultiPoly":
        """Substitute a scalar (element of K) for one variable."""
        i = self.ring.var_index(name)
        v = Frac.of(self.field, value)
        out: dict = {}
        pw: dict[int, Frac] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k not in pw:
                pw[k] = v**k
            t = c * pw[k]
            if t.is_zero():
                continue
            ne = e[:i] + (0,) + e[i + 1 :]
            cur = out.get(ne)
            out[ne] = t if cur is None else cur + t
        return MultiPoly(self.ring, {e: c for e, c in out.items() if not c.is_zero()})

    def mul_univariate(self, name: str, coeffs: list[Frac]) -> "MultiPoly":
        """Multiply by u(name) = sum coeffs[k] * name^k (cheap, one variable)."""
        i = self.ring.var_index(name)
        if all(u.is_integral() for u in coeffs) and len(self.terms) > 1:
            return self._mul_univariate_common(i, [u.num for u in coeffs])
        out: dict = {}
        for e, c in self.terms.items():
            for k, u in enumerate(coeffs):
                if u.is_zero():
                    continue
                ne = e[:i] + (e[i] + k,) + e[i + 1 :]
                p = c * u
                cur = out.get(ne)
                out[ne] = p if cur is None else cur + p
        return MultiPoly(self.ring, {e: c for e, c in out.items() if not c.is_zero()})

    def _mul_univariate_common(self, i: int, raws: list) -> "MultiPoly":
        # one common denominator, raw products, one normalization per term
        den, nums = common_denominator(self.terms)
        out: dict = {}
        for e, n in nums.items():
            for k, u in enumerate(raws):
                if u.is_zero():
                    continue
                ne = e[:i] + (e[i] + k,) + e[i + 1 :]
                p = n * u
                cur = out.get(ne)
                out[ne] = p if cur is None else cur + p
        return MultiPoly(self.ring, {e: Frac(n, den) for e, n in out.items() if not n.is_zero()})

    def __str__(self):
        from .grammar import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def subst_theta(a: ThetaPoly, i: int, ring: PolyRing) -> MultiPoly:
    """a(t_i): the polynomial a with theta replaced by t_i."""
    slot = ring.t(i)
    out = {}
    f = ring.field
    for k, code in enumerate(a.codes()):
        if code:
            e = [0] * ring.nvars
            e[slot] = k
            out[tuple(e)] = Frac.from_code(f, code)
    return MultiPoly(ring, out)


def common_denominator(terms: Mapping) -> tuple:
    """(D, {e: num * D / den}) with D the lcm of the denominators."""
    den = None
    for c in terms.values():
        if den is None:
            den = c.den
        elif c.den != den:
            g = den.gcd(c.den)
            den = den * c.den.exact_division(g)
    nums = {}
    for e, c in terms.items():
        nums[e] = c.num if c.den == den else c.num * den.exact_division(c.den)
    return den, nums


def coeffs_to_frac(field: GF, raws) -> list[Frac]:
    return [Frac(r, field.P1, True) for r in raws]


def raise_coeffs(raws: list, qk: int) -> list:
    return [frob_raw(r, qk) for r in raws]
