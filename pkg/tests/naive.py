"""Brute-force reference arithmetic for prime q, written without the package.

theta-polynomials are tuples of ints mod p (lowest degree first, no
trailing zeros).  Multivariate polynomials are dicts {exponent tuple:
theta-polynomial}.  Everything is integral; sums over monic a with a in
the denominator are computed as numerators over an explicit common
denominator and compared by cross-multiplication.
"""

from __future__ import annotations

from itertools import product


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a, b, p):
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n))


def pneg(a, p):
    return tuple((-c) % p for c in a)


def psub(a, b, p):
    return padd(a, pneg(b, p), p)


def pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def ppow(a, n, p):
    out = (1,)
    for _ in range(n):
        out = pmul(out, a, p)
    return out


def pdivmod(a, b, p):
    inv = pow(b[-1], p - 2, p)
    a = list(a)
    qt = [0] * max(len(a) - len(b) + 1, 1)
    while len(trim(a)) >= len(b):
        a = list(trim(a))
        k = len(a) - len(b)
        c = a[-1] * inv % p
        qt[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
    return trim(qt), trim(a)


def pgcd(a, b, p):
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def monics(p, d):
    for low in product(range(p), repeat=d):
        yield trim(low + (1,))


THETA = (0, 1)


# -- univariate polynomials in X over F_p[theta]: {exponent: theta-poly} ----


def upoly_compose(f, g, p):
    """f(g(X))."""
    out = {}
    powcache = {0: {0: (1,)}}

    def power(n):
        if n not in powcache:
            prev = power(n - 1)
            nxt = {}
            for e1, c1 in prev.items():
                for e2, c2 in g.items():
                    nxt[e1 + e2] = padd(nxt.get(e1 + e2, ()), pmul(c1, c2, p), p)
            powcache[n] = {e: c for e, c in nxt.items() if c}
        return powcache[n]

    for e, c in f.items():
        for e2, c2 in power(e).items():
            out[e2] = padd(out.get(e2, ()), pmul(c, c2, p), p)
    return {e: c for e, c in out.items() if c}


def carlitz(a, p):
    """C_a(X) by composing C_theta with itself: {exponent: coefficient}."""
    c_theta = {1: THETA, p: (1,)}
    powers = [{1: (1,)}]
    for _ in range(1, len(a)):
        powers.append(upoly_compose(c_theta, powers[-1], p))
    out = {}
    for n, coef in enumerate(a):
        if coef:
            for e, c in powers[n].items():
                out[e] = padd(out.get(e, ()), pmul((coef,), c, p), p)
    return {e: c for e, c in out.items() if c}


# -- multivariate, integral -------------------------------------------------


def madd(f, g, p):
    out = dict(f)
    for e, c in g.items():
        out[e] = padd(out.get(e, ()), c, p)
    return {e: c for e, c in out.items() if c}


def mmul(f, g, p):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = padd(out.get(e, ()), pmul(c1, c2, p), p)
    return {e: c for e, c in out.items() if c}


def mscale(f, c, p):
    return {e: v for e, v in ((e, pmul(v, c, p)) for e, v in f.items()) if v}


def a_of_t(a, i, n):
    """a(t_i) in n variables: {exps: constant}."""
    out = {}
    for k, c in enumerate(a):
        if c:
            e = [0] * n
            e[i] = k
            out[tuple(e)] = (c,)
    return out


def power_sum(p, k, s):
    """sum over monic a of degree k of a(t_1)...a(t_s)."""
    total = {}
    for a in monics(p, k):
        term = {(0,) * s: (1,)}
        for i in range(s):
            term = mmul(term, a_of_t(a, i, s), p)
        total = madd(total, term, p)
    return total


def L_coefficient(p, N, s, d):
    """(numerators, denominator) of sum_{a monic deg d} a(t_1)..a(t_s)/a^N."""
    alist = list(monics(p, d))
    if N <= 0:
        den = (1,)
    else:
        den = (1,)
        for a in alist:
            den = pmul(den, ppow(a, N, p), p)
    total = {}
    for a in alist:
        term = {(0,) * s: (1,)}
        for i in range(s):
            term = mmul(term, a_of_t(a, i, s), p)
        w = ppow(a, -N, p) if N <= 0 else pdivmod(den, ppow(a, N, p), p)[0]
        total = madd(total, mscale(term, w, p), p)
    return total, den


def L_k_of_monomial(p, k, e):
    """(numerators, denominator) of L_k(X^e) = sum_a prod_i C_a(X_i)^{e_i} / a."""
    den = (1,)
    alist = list(monics(p, k))
    for a in alist:
        den = pmul(den, a, p)
    n = len(e)
    total = {}
    for a in alist:
        ca = carlitz(a, p)
        term = {(0,) * n: (1,)}
        for i, ei in enumerate(e):
            lin = {}
            for ex, c in ca.items():
                v = [0] * n
                v[i] = ex
                lin[tuple(v)] = c
            for _ in range(ei):
                term = mmul(term, lin, p)
        total = madd(total, mscale(term, pdivmod(den, a, p)[0], p), p)
    return total, den


def D(p, i):
    out = (1,)
    for a in monics(p, i):
        out = pmul(out, a, p)
    return out


def lcm_monics(p, i):
    out = (1,)
    for a in monics(p, i):
        g = pgcd(out, a, p)
        out = pdivmod(pmul(out, a, p), g, p)[0]
    return out


# -- comparing against package values --------------------------------------


def frac_codes(field, c):
    return tuple(field.raw_codes(c.num)), tuple(field.raw_codes(c.den))


def equals_frac(field, c, num, den):
    """Package Frac c equals num/den (prime field, codes = residues)."""
    p = field.p
    cn, cd = frac_codes(field, c)
    return pmul(trim(cn), den, p) == pmul(num, trim(cd), p)


def equals_sum(field, poly, names, nums, den):
    """A package MultiPoly equals {exps: num}/den over the given variable names."""
    idx = [poly.ring.var_index(n) for n in names]
    mine = {}
    for e, c in poly.terms.items():
        if any(e[i] for i in range(poly.ring.nvars) if i not in idx):
            return False
        mine[tuple(e[i] for i in idx)] = c
    keys = set(mine) | set(nums)
    for k in keys:
        if k not in mine:
            if nums.get(k):
                return False
            continue
        if not equals_frac(field, mine[k], nums.get(k, ()), den):
            return False
    return True
