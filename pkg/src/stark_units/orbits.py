"""Symmetric-orbit engine for F = X_1...X_s.

a * (X_1...X_s) = prod_l C_a(X_l), so the coefficient of
X_1^{q^{k_1}}...X_s^{q^{k_s}} in L_d(X_1...X_s) is

    sum_{a in A+,d} psi_{k_1}(a)...psi_{k_s}(a) / a,

which only depends on the multiset {k_1..k_s}.  We store one value per
nondecreasing tuple and put every term over the common denominator l_d
(l_d is, up to sign, the lcm of all monic polynomials of degree <= d, so
l_d / a is a polynomial).
"""

from __future__ import annotations

import time
from itertools import combinations_with_replacement

from .algebra.field import GF
from .algebra.multipoly import MultiPoly, PolyRing
from .algebra.theta import Frac, frob_raw, monic_enum_raw
from .carlitz import carlitz_coeffs, tables
from .errors import PrecisionLoss


def multisets(s: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    """Nondecreasing s-tuples with entries in [lo, hi], lexicographic."""
    if hi < lo:
        return []
    return list(combinations_with_replacement(range(lo, hi + 1), s))


def _change_points(ms: list[tuple[int, ...]]) -> list[int]:
    out = []
    prev = None
    for k in ms:
        if prev is None:
            out.append(0)
        else:
            r = 0
            while k[r] == prev[r]:
                r += 1
            out.append(r)
        prev = k
    return out


CHUNK = 8192


def L_orbits(field: GF, s: int, d: int, lo: int = 0, deadline: float | None = None) -> dict:
    """{kappa: L_d coefficient} over multisets kappa with entries in [lo, d].

    Zero values are dropped.  ``deadline`` (a time.monotonic() value)
    aborts with PrecisionLoss when exceeded.  The multisets are swept in
    lexicographic chunks so that only CHUNK dense accumulators (degree
    about deg l_d each) are alive at once.
    """
    if d < 0:
        return {}
    T = tables(field)
    ld = T.l(d)
    ms = multisets(s, lo, d)
    if not ms:
        return {}
    monics = []
    for n, (raw, _codes) in enumerate(monic_enum_raw(field, d)):
        if deadline is not None and n % 64 == 0 and time.monotonic() > deadline:
            raise PrecisionLoss(f"time budget exhausted in L_{d} (s = {s})")
        monics.append((ld.exact_division(raw), carlitz_coeffs(field, raw)))
    out = {}
    pref = [None] * (s + 1)
    for c0 in range(0, len(ms), CHUNK):
        chunk = ms[c0 : c0 + CHUNK]
        starts = _change_points(chunk)
        acc = [field.P0] * len(chunk)
        for n, (quot, psi) in enumerate(monics):
            if deadline is not None and n % 64 == 0 and time.monotonic() > deadline:
                raise PrecisionLoss(f"time budget exhausted in L_{d} (s = {s})")
            pref[0] = quot
            for idx, kappa in enumerate(chunk):
                for r in range(starts[idx], s):
                    pref[r + 1] = pref[r] * psi[kappa[r]]
                acc[idx] = acc[idx] + pref[s]
        for kappa, v in zip(chunk, acc):
            if not v.is_zero():
                out[kappa] = Frac(v, ld)
    return out


class OrbitEngine:
    """L_d and Z_m of X_1...X_s in orbit form, memoized per degree."""

    def __init__(self, field: GF, s: int, deadline: float | None = None):
        self.field = field
        self.s = s
        self.deadline = deadline
        self._L: dict[int, dict] = {}
        self._Z: dict[int, dict] = {}

    def L(self, d: int) -> dict:
        if d not in self._L:
            self._L[d] = L_orbits(self.field, self.s, d, 0, self.deadline)
        return self._L[d]

    def Z(self, m: int) -> dict:
        """Z_m = sum_j L_{m-j}^{q^j} / D_j; the q^j power shifts every index by j."""
        if m in self._Z:
            return self._Z[m]
        f = self.field
        T = tables(f)
        out: dict = {}
        for j in range(m + 1):
            qj = f.q**j
            inv_D = Frac(f.P1, T.D(j), True)
            for kappa, c in self.L(m - j).items():
                key = tuple(k + j for k in kappa)
                v = c.frobenius(qj) * inv_D if j else c
                cur = out.get(key)
                out[key] = v if cur is None else cur + v
        self._Z[m] = {k: v for k, v in out.items() if not v.is_zero()}
        return self._Z[m]


def distinct_permutations(kappa: tuple[int, ...]):
    """Distinct orderings of a sorted tuple."""
    items = sorted(kappa)
    n = len(items)
    if n == 0:
        yield ()
        return
    used = [False] * n
    cur: list[int] = []

    def rec():
        if len(cur) == n:
            yield tuple(cur)
            return
        last = None
        for i in range(n):
            if used[i] or items[i] == last:
                continue
            last = items[i]
            used[i] = True
            cur.append(items[i])
            yield from rec()
            cur.pop()
            used[i] = False

    yield from rec()


def orbit_count(kappa: tuple[int, ...]) -> int:
    """Number of distinct orderings of kappa (multinomial coefficient)."""
    from math import factorial
    from collections import Counter

    out = factorial(len(kappa))
    for c in Counter(kappa).values():
        out //= factorial(c)
    return out


def expand_X(orbits: dict, ring: PolyRing, z_exp: int = 0) -> MultiPoly:
    """sum_kappa c_kappa sum_{orderings} prod_l X_l^{q^{k_l}} * Z^{z_exp}."""
    q = ring.q
    s = ring.nx
    zslot = ring.index.get("Z")
    terms = {}
    base = [0] * ring.nvars
    if z_exp:
        base[zslot] = z_exp
    for kappa, c in orbits.items():
        for perm in distinct_permutations(kappa):
            e = list(base)
            for l in range(s):
                e[ring.X(l + 1)] = q ** perm[l]
            terms[tuple(e)] = c
    return MultiPoly(ring, terms)


def newton_to_t(orbits: dict, ring: PolyRing, z_exp: int = 0) -> MultiPoly:
    """sum_kappa c_kappa sum_{orderings} prod_l b_{k_l}(t_l) * z^{z_exp}.

    Expands per variable with memoized b_k coefficient lists.
    """
    f = ring.field
    T = tables(f)
    s = ring.nt
    zslot = ring.index.get("z")
    out: dict = {}
    bcache: dict[int, list] = {}

    def bco(k):
        if k not in bcache:
            bcache[k] = [(i, Frac(c, f.P1, True)) for i, c in enumerate(T.b_coeffs(k)) if not c.is_zero()]
        return bcache[k]

    for kappa, c in orbits.items():
        for perm in distinct_permutations(kappa):
            partial = {(): c}
            for l in range(s):
                nxt: dict = {}
                for pe, pc in partial.items():
                    for i, bc in bco(perm[l]):
                        ne = pe + (i,)
                        v = pc * bc
                        nxt[ne] = nxt[ne] + v if ne in nxt else v
                partial = nxt
            for pe, pc in partial.items():
                e = list(pe) + [0] * (ring.nvars - s)
                if z_exp:
                    e[zslot] = z_exp
                e = tuple(e)
                out[e] = out[e] + pc if e in out else pc
    return MultiPoly(ring, {e: v for e, v in out.items() if not v.is_zero()})


def frob_orbits(orbits: dict, qk: int) -> dict:
    return {k: Frac(frob_raw(v.num, qk), frob_raw(v.den, qk), True) for k, v in orbits.items()}
