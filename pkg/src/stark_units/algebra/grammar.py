"""Canonical text and JSON forms for polynomials.

Text grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? INT)?
    atom   := INT | 'th' | 'g' | VAR | '(' expr ')'
    VAR    := t<i> | X<i> | z | Z

``g`` names the fixed generator of F_q^* and is only legal when q is not
prime.  Division is allowed by elements of K only.  Juxtaposition is not
multiplication.  The printer emits exactly this grammar, so printing then
parsing is the identity.
"""

from __future__ import annotations

import json
import re

from ..errors import ParseError
from .field import GF, format_elem
from .multipoly import MultiPoly, PolyRing
from .theta import Frac, _split_sign, format_theta

_TOKEN = re.compile(r"\s*(?:(\d+)|(th)|([tX])(\d+)|([zZg])|(\S))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    toks: list[tuple[str, object]] = []
    pos = 0
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        pos = m.end()
        num, th, fam, idx, letter, other = m.groups()
        if num is not None:
            toks.append(("int", int(num)))
        elif th is not None:
            toks.append(("th", None))
        elif fam is not None:
            if int(idx) < 1:
                raise ParseError(f"variable index must be >= 1: {fam}{idx}")
            toks.append(("var", f"{fam}{int(idx)}"))
        elif letter is not None:
            toks.append(("g", None) if letter == "g" else ("var", letter))
        elif other in "+-*/^()":
            toks.append((other, None))
        else:
            raise ParseError(f"unexpected character {other!r} at {m.start(6)}")
    if text[pos:].strip():
        raise ParseError(f"cannot tokenize {text[pos:]!r}")
    return toks


def infer_ring(text: str, q: int, modulus=None, nt: int = 0, nx: int = 0) -> PolyRing:
    """Smallest ring containing every variable mentioned in ``text``."""
    has_z = has_Z = False
    for kind, val in _tokenize(text):
        if kind != "var":
            continue
        if val == "z":
            has_z = True
        elif val == "Z":
            has_Z = True
        elif val.startswith("t"):
            nt = max(nt, int(val[1:]))
        else:
            nx = max(nx, int(val[1:]))
    return PolyRing(q, nt, nx, has_z, has_Z, modulus)


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.field = ring.field

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of expression")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}")
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise ParseError("empty expression")
        out = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.i}: {self.toks[self.i][0]!r}")
        return out

    def expr(self) -> MultiPoly:
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError("division by a non-constant polynomial")
                c = rhs.constant_term()
                if c.is_zero():
                    raise ParseError("division by zero")
                acc = acc.scale(c.inverse())
        return acc

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            n = self.take("int")[1]
            if neg:
                if not base.is_constant() or base.is_zero():
                    raise ParseError("negative exponent on a non-constant")
                return self.ring.const(base.constant_term().inverse() ** n)
            return base**n
        return base

    def unary(self) -> MultiPoly:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def atom(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "int":
            return self.ring.const(Frac.from_int(self.field, val))
        if kind == "th":
            return self.ring.const(Frac(self.field.THETA, self.field.P1, True))
        if kind == "g":
            if self.field.e == 1:
                raise ParseError("'g' is only defined for non-prime q")
            return self.ring.const(Frac.from_code(self.field, self.field.gen_code))
        if kind == "var":
            if val not in self.ring.index:
                raise ParseError(f"variable {val} not in ring {self.ring.names}")
            return self.ring.var(val)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {kind!r}")


def parse_poly(text: str, q: int | None = None, ring: PolyRing | None = None, modulus=None) -> MultiPoly:
    """Parse canonical text.  Supply ``ring`` or ``q`` (ring then inferred)."""
    if ring is None:
        if q is None:
            raise ParseError("parse_poly needs a ring or q")
        ring = infer_ring(text, q, modulus)
    return _Parser(text, ring).parse()


# -- printing -------------------------------------------------------------


def format_monomial(ring: PolyRing, e: tuple[int, ...]) -> str:
    parts = []
    names = ring.names
    for i, k in enumerate(e):
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts)


def _theta_term_count(field: GF, raw) -> int:
    return sum(1 for c in field.raw_codes(raw) if c)


def _coeff_text(field: GF, c: Frac) -> tuple[str, str, bool]:
    """(sign, magnitude text, is_bare_one) of a coefficient for printing."""
    num, den = c.num, c.den
    single = _theta_term_count(field, num) == 1
    if single:
        text = format_theta(field, num)
        sign = "-" if text.startswith("-") else "+"
        mag = text[1:] if sign == "-" else text
    else:
        sign, mag = "+", f"({format_theta(field, num)})"
    if den.is_one():
        return sign, mag, mag == "1"
    dtext = format_theta(field, den)
    if _theta_term_count(field, den) > 1 or "*" in dtext or "^" in dtext:
        dtext = f"({dtext})"
    return sign, f"{mag}/{dtext}", False


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    field = p.field
    out = []
    for e, c in p.sorted_terms():
        sign, mag, bare_one = _coeff_text(field, c)
        mono = format_monomial(p.ring, e)
        if not mono:
            body = mag
        elif bare_one:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_field_elem(field: GF, code: int) -> str:
    if field.e == 1:
        s, m = _split_sign(field, code)
        return m if s == "+" else f"-{m}"
    return format_elem(field, code)


# -- JSON -------------------------------------------------------------------


def to_json_obj(p: MultiPoly) -> dict:
    f = p.field
    terms = []
    for e, c in p.sorted_terms():
        terms.append(
            {
                "num": f.raw_codes(c.num),
                "den": f.raw_codes(c.den),
                "exps": {p.ring.names[i]: k for i, k in enumerate(e) if k},
            }
        )
    return {
        "q": f.q,
        "e": f.e,
        "modulus": list(f.spec.modulus) if f.e > 1 else None,
        "vars": list(p.ring.names),
        "terms": terms,
    }


def to_json(p: MultiPoly) -> str:
    return json.dumps(to_json_obj(p), sort_keys=True)


def from_json_obj(obj: dict) -> MultiPoly:
    try:
        q = int(obj["q"])
        modulus = tuple(obj["modulus"]) if obj.get("modulus") else None
        names = list(obj["vars"])
        nt = sum(1 for n in names if n.startswith("t"))
        nx = sum(1 for n in names if n.startswith("X"))
        ring = PolyRing(q, nt, nx, "z" in names, "Z" in names, modulus)
        if list(ring.names) != names:
            raise ParseError(f"variables {names} are not in canonical order")
        f = ring.field
        out = {}
        for t in obj["terms"]:
            num = f.raw_poly([int(c) for c in t["num"]])
            den = f.raw_poly([int(c) for c in t["den"]])
            e = [0] * ring.nvars
            for n, k in t["exps"].items():
                e[ring.var_index(n)] = int(k)
            c = Frac(num, den)
            if not c.is_zero():
                out[tuple(e)] = c
        return MultiPoly(ring, out)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed polynomial JSON: {exc}") from exc


def from_json(text: str) -> MultiPoly:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_json_obj(obj)
