"""Exact integer/rational polynomial arithmetic for the classical map.

Polynomials are tuples of Python ints in ascending order, with no
trailing zeros (the zero polynomial is the empty tuple).  Everything
here is desk scale: degrees at most 8, tiny coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, isqrt

from .errors import InputError

Poly = tuple[int, ...]


def trim(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(p: Poly) -> int:
    return len(p) - 1  # zero poly -> -1


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pscale(a: Poly, c: int) -> Poly:
    return trim(x * c for x in a)


def peval(a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pdivmod_exact(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Divide by a monic divisor over Z (quotient and remainder)."""
    if not b or b[-1] != 1:
        raise InputError("divisor must be monic")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(trim(r)) >= len(b):
        r = list(trim(r))
        k = len(r) - len(b)
        c = r[-1]
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] -= c * bc
    return trim(q), trim(r)


def derivative(a: Poly) -> Poly:
    return trim(i * a[i] for i in range(1, len(a)))


def gcd_monic_Q(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q, returned with integer coefficients cleared."""
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]

    def ftrim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    fa, fb = ftrim(fa), ftrim(fb)
    while fb:
        # remainder of fa / fb
        r = fa[:]
        while len(ftrim(r)) >= len(fb):
            r = ftrim(r)
            c = r[-1] / fb[-1]
            k = len(r) - len(fb)
            for i, bc in enumerate(fb):
                r[k + i] -= c * bc
        fa, fb = fb, ftrim(r)
    if not fa:
        return ()
    lead = fa[-1]
    fa = [c / lead for c in fa]
    den = 1
    for c in fa:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fa]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return trim(c // g for c in ints)


def is_squarefree(p: Poly) -> bool:
    return deg(gcd_monic_Q(p, derivative(p))) == 0


def sylvester_resultant(a: Poly, b: Poly) -> int:
    """Resultant via fraction-free (Bareiss) elimination of the Sylvester matrix."""
    m, n = deg(a), deg(b)
    if m < 0 or n < 0:
        return 0
    size = m + n
    mat = [[0] * size for _ in range(size)]
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(n):
        mat[i][i : i + m + 1] = ra
    for i in range(m):
        mat[n + i][i : i + n + 1] = rb
    # Bareiss
    sign = 1
    prev = 1
    for k in range(size - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, size):
                if mat[r][k] != 0:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[size - 1][size - 1]


def discriminant(p: Poly) -> int:
    """Discriminant of a monic integer polynomial."""
    n = deg(p)
    res = sylvester_resultant(p, derivative(p))
    return (-1) ** (n * (n - 1) // 2) * res


def char_poly(entries: list[list[int]]) -> Poly:
    """Characteristic polynomial det(tI - A) by Faddeev-LeVerrier (exact)."""
    n = len(entries)
    A = [row[:] for row in entries]

    def matmul(X, Y):
        return [
            [sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]

    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        for i in range(n):
            M[i][i] += c
        M = matmul(A, M)
        tr = sum(M[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs[n - k] = c
    return trim(coeffs)


def reciprocal_monic(p: Poly) -> Poly:
    """t^deg * p(1/t) normalized monic; needs p(0) = +-1."""
    if not p or p[0] not in (1, -1):
        raise InputError("reciprocal normalization needs unit constant term")
    return tuple(c * p[0] for c in reversed(p))


def is_self_reciprocal(p: Poly) -> bool:
    return p and p[0] in (1, -1) and reciprocal_monic(p) == p


def mignotte_bound(p: Poly) -> int:
    """Coefficient bound for any monic factor of a monic integer polynomial."""
    n = deg(p)
    norm2 = isqrt(sum(c * c for c in p)) + 1
    k = n // 2
    return comb(k, k // 2) * (norm2 + abs(p[-1]))


def factor_over_Z(p: Poly) -> list[Poly]:
    """Factor a monic squarefree integer polynomial of degree <= 8.

    Single-prime Zassenhaus: factor modulo one prime exceeding twice the
    Mignotte bound and recombine modular factors by subset search.  With
    p > 2B every true factor appears among centered lifts, so the search
    is exact.  Deterministic output: sorted by (degree, coefficients).
    """
    from . import gfpoly

    if not p or p[-1] != 1:
        raise InputError("factor_over_Z expects a monic polynomial")
    if deg(p) > 8:
        raise InputError("degree > 8 out of desk scope")
    if deg(p) <= 1:
        return [p]
    if not is_squarefree(p):
        raise InputError("factor_over_Z expects a squarefree polynomial")

    bound = 2 * mignotte_bound(p) + 1
    q = max(bound, 3)
    disc = discriminant(p)
    while True:
        q = _next_prime(q)
        if disc % q != 0:
            break

    modular = gfpoly.factor_monic(gfpoly.reduce(p, q), q)
    factors: list[Poly] = []
    remaining = p
    pool = list(modular)
    while deg(remaining) > 0 and pool:
        found = False
        for size in range(1, len(pool) + 1):
            for subset in _subsets(len(pool), size):
                cand = gfpoly.one(q)
                for i in subset:
                    cand = gfpoly.mul(cand, pool[i], q)
                lifted = trim(_center(c, q) for c in cand)
                if deg(lifted) >= deg(remaining):
                    continue
                quo, rem = pdivmod_exact(remaining, lifted)
                if not rem:
                    factors.append(lifted)
                    remaining = quo
                    pool = [g for i, g in enumerate(pool) if i not in subset]
                    found = True
                    break
            if found:
                break
        if not found:
            break
    if deg(remaining) > 0:
        factors.append(remaining)
    prod = (1,)
    for f in factors:
        prod = pmul(prod, f)
    assert prod == p, "factor recombination failed"
    return sorted(factors, key=lambda f: (deg(f), f))


def _center(c: int, q: int) -> int:
    c %= q
    return c - q if c > q // 2 else c


def _subsets(n: int, k: int):
    from itertools import combinations

    return combinations(range(n), k)


def _next_prime(n: int) -> int:
    n += 1
    while True:
        if n > 2 and n % 2 == 0:
            n += 1
            continue
        if all(n % d for d in range(3, isqrt(n) + 1, 2)) and n > 1:
            return n
        n += 1


def reduced_symmetric_poly(p: Poly) -> Poly:
    """Minimal-style polynomial of t + 1/t for a self-reciprocal p.

    For p(t) = sum c_j t^j of even degree 2m with c_j = c_{2m-j},
    p(t)/t^m = c_m + sum_{k>=1} c_{m+k} (t^k + t^-k) and t^k + t^-k is a
    monic integer polynomial r_k(u) in u = t + 1/t (r_0 = 2, r_1 = u,
    r_k = u r_{k-1} - r_{k-2}).
    """
    if not is_self_reciprocal(p) or deg(p) % 2 != 0:
        raise InputError("reduced polynomial needs a self-reciprocal even-degree input")
    m = deg(p) // 2
    rk_minus, rk = (2,), (0, 1)
    out = (p[m],)
    for k in range(1, m + 1):
        out = padd(out, pscale(rk, p[m + k]))
        rk_minus, rk = rk, psub(pmul((0, 1), rk), rk_minus)
    return out
