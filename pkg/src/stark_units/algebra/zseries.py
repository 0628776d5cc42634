"""Truncated power series in z (or Z) with MultiPoly coefficients.

``prec`` is the exclusive truncation order: coefficients of z^0..z^{prec-1}
are known.  ``prec=None`` marks an exact polynomial.  Binary operations
truncate to the smaller precision, never widen it.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import InvalidInput
from .multipoly import MultiPoly, PolyRing
from .theta import Frac


def _minprec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class ZSeries:
    __slots__ = ("ring", "coeffs", "prec", "var")

    def __init__(self, ring: PolyRing, coeffs: Sequence[MultiPoly], prec: int | None, var: str = "z"):
        if prec is not None and prec < 1:
            raise InvalidInput("series precision must be >= 1")
        if var not in ("z", "Z"):
            raise InvalidInput("series variable must be z or Z")
        cs = [c.embed(ring) if c.ring != ring else c for c in coeffs]
        if prec is not None:
            cs = cs[:prec]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.ring = ring
        self.coeffs = cs
        self.prec = prec
        self.var = var

    @classmethod
    def zero(cls, ring: PolyRing, prec: int | None, var: str = "z") -> "ZSeries":
        return cls(ring, [], prec, var)

    @classmethod
    def const(cls, p: MultiPoly, prec: int | None, var: str = "z") -> "ZSeries":
        return cls(p.ring, [p], prec, var)

    @classmethod
    def from_poly(cls, p: MultiPoly, prec: int | None = None, var: str = "z") -> "ZSeries":
        """Split a MultiPoly containing ``var`` into series coefficients."""
        inner = p.ring.with_vars(**{("has_z" if var == "z" else "has_Z"): False})
        if var not in p.ring.index:
            return cls(inner, [p.restrict(inner)], prec, var)
        parts = p.collect(var)
        n = max(parts) + 1 if parts else 0
        coeffs = [parts[k].restrict(inner) if k in parts else inner.zero() for k in range(n)]
        return cls(inner, coeffs, prec, var)

    def to_poly(self) -> MultiPoly:
        """Back to a MultiPoly in the ring extended by the series variable."""
        outer = self.ring.with_vars(**{("has_z" if self.var == "z" else "has_Z"): True})
        slot = outer.var_index(self.var)
        terms = {}
        for k, c in enumerate(self.coeffs):
            for e, v in c.embed(outer).terms.items():
                ne = e[:slot] + (k,) + e[slot + 1 :]
                terms[ne] = v
        return MultiPoly(outer, terms)

    def coeff(self, k: int) -> MultiPoly:
        if self.prec is not None and k >= self.prec:
            raise InvalidInput(f"coefficient z^{k} beyond precision {self.prec}")
        return self.coeffs[k] if k < len(self.coeffs) else self.ring.zero()

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.prec is None

    def truncate(self, prec: int) -> "ZSeries":
        return ZSeries(self.ring, self.coeffs, _minprec(self.prec, prec), self.var)

    def _check(self, other: "ZSeries"):
        if self.var != other.var:
            raise InvalidInput("mixing series in z and Z")

    def _align(self, other: "ZSeries"):
        if self.ring == other.ring:
            return self, other
        r = self.ring.union(other.ring)
        return (ZSeries(r, self.coeffs, self.prec, self.var), ZSeries(r, other.coeffs, other.prec, other.var))

    def __add__(self, other: "ZSeries") -> "ZSeries":
        self._check(other)
        a, b = self._align(other)
        n = max(len(a.coeffs), len(b.coeffs))
        cs = [a.coeff_or_zero(k) + b.coeff_or_zero(k) for k in range(n)]
        return ZSeries(a.ring, cs, _minprec(a.prec, b.prec), a.var)

    def coeff_or_zero(self, k: int) -> MultiPoly:
        return self.coeffs[k] if k < len(self.coeffs) else self.ring.zero()

    def __neg__(self):
        return ZSeries(self.ring, [-c for c in self.coeffs], self.prec, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (Frac, int, MultiPoly)):
            return self.scale(other)
        self._check(other)
        a, b = self._align(other)
        prec = _minprec(a.prec, b.prec)
        n = len(a.coeffs) + len(b.coeffs) - 1
        if prec is not None:
            n = min(n, prec)
        cs = []
        for k in range(max(n, 0)):
            acc = a.ring.zero()
            for i in range(max(0, k - len(b.coeffs) + 1), min(k, len(a.coeffs) - 1) + 1):
                acc = acc + a.coeffs[i] * b.coeffs[k - i]
            cs.append(acc)
        return ZSeries(a.ring, cs, prec, a.var)

    __rmul__ = __mul__

    def scale(self, c) -> "ZSeries":
        if isinstance(c, MultiPoly):
            return ZSeries(self.ring.union(c.ring), [x * c for x in self.coeffs], self.prec, self.var)
        return ZSeries(self.ring, [x.scale(c) for x in self.coeffs], self.prec, self.var)

    def shift(self, k: int) -> "ZSeries":
        """Multiply by var^k."""
        prec = None if self.prec is None else self.prec + k
        return ZSeries(self.ring, [self.ring.zero()] * k + list(self.coeffs), prec, self.var)

    def map_coeffs(self, fn) -> "ZSeries":
        return ZSeries(self.ring, [fn(c) for c in self.coeffs], self.prec, self.var)

    def __eq__(self, other):
        """Equality on the common window of known coefficients."""
        if not isinstance(other, ZSeries):
            return NotImplemented
        if self.var != other.var:
            return False
        a, b = self._align(other)
        prec = _minprec(a.prec, b.prec)
        n = max(len(a.coeffs), len(b.coeffs)) if prec is None else prec
        return all(a.coeff_or_zero(k) == b.coeff_or_zero(k) for k in range(n))

    def __hash__(self):  # pragma: no cover - series are not dict keys
        raise TypeError("ZSeries is unhashable")

    def __str__(self):
        body = str(self.to_poly())
        if self.prec is None:
            return body
        return f"{body} + O({self.var}^{self.prec})"

    def __repr__(self):
        return f"ZSeries({self})"
