"""Univariate polynomial arithmetic and factorization over prime fields.

Polynomials over F_p are tuples of ints in [0, p), ascending order, no
trailing zeros.  Factorization is squarefree-only (all inputs here come
from squarefree characteristic polynomials at good primes): distinct
degree splitting followed by Cantor-Zassenhaus equal-degree splitting
with a deterministically seeded generator.
"""

from __future__ import annotations

import random

from .errors import InputError

GFPoly = tuple[int, ...]


def trim(c) -> GFPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def reduce(int_coeffs, p: int) -> GFPoly:
    return trim(c % p for c in int_coeffs)


def deg(f: GFPoly) -> int:
    return len(f) - 1


def one(p: int) -> GFPoly:
    return (1,)


def x(p: int) -> GFPoly:
    return (0, 1)


def add(a: GFPoly, b: GFPoly, p: int) -> GFPoly:
    n = max(len(a), len(b))
    return trim(
        ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
        for i in range(n)
    )


def sub(a: GFPoly, b: GFPoly, p: int) -> GFPoly:
    n = max(len(a), len(b))
    return trim(
        ((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
        for i in range(n)
    )


def mul(a: GFPoly, b: GFPoly, p: int) -> GFPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] = (out[i + j] + c * d) % p
    return trim(out)


def scale(a: GFPoly, c: int, p: int) -> GFPoly:
    return trim((x * c) % p for x in a)


def monic(a: GFPoly, p: int) -> GFPoly:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return scale(a, inv, p)


def divmod_(a: GFPoly, b: GFPoly, p: int) -> tuple[GFPoly, GFPoly]:
    if not b:
        raise ZeroDivisionError("gfpoly division by zero")
    binv = pow(b[-1], -1, p)
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(trim(r)) >= len(b):
        r = list(trim(r))
        k = len(r) - len(b)
        c = (r[-1] * binv) % p
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] = (r[k + i] - c * bc) % p
    return trim(q), trim(r)


def mod(a: GFPoly, b: GFPoly, p: int) -> GFPoly:
    return divmod_(a, b, p)[1]


def gcd(a: GFPoly, b: GFPoly, p: int) -> GFPoly:
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def ext_gcd(a: GFPoly, b: GFPoly, p: int) -> tuple[GFPoly, GFPoly, GFPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = one(p), ()
    t0, t1 = (), one(p)
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return (), s0, t0
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def pow_mod(a: GFPoly, e: int, f: GFPoly, p: int) -> GFPoly:
    result = one(p)
    base = mod(a, f, p)
    while e > 0:
        if e & 1:
            result = mod(mul(result, base, p), f, p)
        base = mod(mul(base, base, p), f, p)
        e >>= 1
    return result


def derivative(a: GFPoly, p: int) -> GFPoly:
    return trim((i * a[i]) % p for i in range(1, len(a)))


def evaluate(a: GFPoly, v: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * v + c) % p
    return acc


def is_irreducible(f: GFPoly, p: int) -> bool:
    """x^(p^i)-gcd test: f irreducible iff x^(p^k) = x mod f and the
    gcd with x^(p^(k/l)) - x is trivial for every prime l | k."""
    k = deg(f)
    if k <= 0:
        return False
    if k == 1:
        return True
    xq = pow_mod(x(p), p ** k, f, p)
    if sub(xq, x(p), p):
        return False
    for ell in _prime_divisors(k):
        g = gcd(sub(pow_mod(x(p), p ** (k // ell), f, p), x(p), p), f, p)
        if deg(g) != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def distinct_degree(f: GFPoly, p: int) -> list[tuple[int, GFPoly]]:
    """Split a monic squarefree f into products of same-degree irreducibles."""
    out = []
    h = x(p)
    rest = f
    d = 0
    while deg(rest) > 0:
        d += 1
        if 2 * d > deg(rest):
            out.append((deg(rest), rest))
            break
        h = pow_mod(h, p, rest, p)
        g = gcd(sub(h, x(p), p), rest, p)
        if deg(g) > 0:
            out.append((d, g))
            rest, r = divmod_(rest, g, p)
            assert not r
            h = mod(h, rest, p)
    return out


def equal_degree_split(f: GFPoly, d: int, p: int, rng: random.Random) -> list[GFPoly]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (p odd)."""
    if deg(f) == d:
        return [monic(f, p)]
    exponent = (p ** d - 1) // 2
    while True:
        h = trim(rng.randrange(p) for _ in range(deg(f)))
        if deg(h) < 1:
            continue
        g = sub(pow_mod(h, exponent, f, p), one(p), p)
        g = gcd(g, f, p)
        if 0 < deg(g) < deg(f):
            q, r = divmod_(f, g, p)
            assert not r
            return equal_degree_split(g, d, p, rng) + equal_degree_split(q, d, p, rng)


def factor_monic(f: GFPoly, p: int) -> list[GFPoly]:
    """Factor a monic squarefree polynomial over F_p, sorted deterministically."""
    f = monic(f, p)
    if deg(f) == 0:
        return []
    if deg(gcd(f, derivative(f, p), p)) != 0:
        raise InputError("factor_monic expects a squarefree polynomial")
    rng = random.Random("gfpoly:" + str((p, f)))
    factors = []
    for d, g in distinct_degree(f, p):
        factors.extend(equal_degree_split(g, d, p, rng))
    return sorted(factors, key=lambda h: (deg(h), h))


def roots(f: GFPoly, p: int) -> list[int]:
    return sorted(r for d, g in [(1, gcd(sub(pow_mod(x(p), p, f, p), x(p), p), f, p))]
                  for r in _linear_roots(g, p) if d)


def _linear_roots(g: GFPoly, p: int) -> list[int]:
    if deg(g) <= 0:
        return []
    return [(-fac[0]) % p for fac in factor_monic(g, p)]
