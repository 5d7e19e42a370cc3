"""Extension fields F_{p^k}, their cyclic groups and characters.

Elements are polynomial residues mod a monic irreducible modulus over
F_p.  Fields are immutable after construction and safe to share.  Desk
scale: q <= ~10^4 for group enumeration, somewhat larger for plain
arithmetic.
"""

from __future__ import annotations

import cmath
import math

from . import gfpoly
from .errors import InputError, NotInSubfield, NotInSubgroup


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are enumerated by the base-p integer value of their
    non-leading coefficients (constant coefficient least significant),
    so results are reproducible across runs and languages.
    """
    if p < 3 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise InputError("p must be an odd prime")
    if k < 1:
        raise InputError("k must be >= 1")
    for m in range(p ** k):
        coeffs = []
        v = m
        for _ in range(k):
            coeffs.append(v % p)
            v //= p
        cand = tuple(coeffs) + (1,)
        if gfpoly.is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist")


class ExtField:
    """F_{p^k} presented as F_p[t]/(modulus)."""

    def __init__(self, p: int, modulus=None, k: int | None = None):
        if modulus is None:
            if k is None:
                k = 1
            modulus = find_irreducible(p, k)
        modulus = gfpoly.reduce(modulus, p)
        if not modulus or modulus[-1] != 1:
            raise InputError("modulus must be monic")
        if not gfpoly.is_irreducible(modulus, p):
            raise InputError("modulus must be irreducible over F_p")
        self.p = p
        self.k = gfpoly.deg(modulus)
        self.modulus = modulus
        self.q = p ** self.k

    def __repr__(self):
        return f"ExtField(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and (self.p, self.modulus) == (other.p, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    # --- constructors ---

    def element(self, coeffs) -> "ExtFieldElement":
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        red = gfpoly.mod(gfpoly.reduce(coeffs, self.p), self.modulus, self.p)
        return ExtFieldElement(self, red + (0,) * (self.k - len(red)))

    def zero(self) -> "ExtFieldElement":
        return self.element(0)

    def one(self) -> "ExtFieldElement":
        return self.element(1)

    def gen(self) -> "ExtFieldElement":
        """The residue class of t (a root of the modulus)."""
        return self.element((0, 1))

    def from_index(self, m: int) -> "ExtFieldElement":
        """Element number m in base-p coefficient order (enumeration order)."""
        coeffs = []
        for _ in range(self.k):
            coeffs.append(m % self.p)
            m //= self.p
        return ExtFieldElement(self, tuple(coeffs))

    def elements(self):
        for m in range(self.q):
            yield self.from_index(m)


class ExtFieldElement:
    """Immutable residue; coeffs is a length-k tuple of ints in [0, p)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExtField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self):
        return f"FF({self.coeffs} mod {self.field.modulus}, p={self.field.p})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtFieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _wrap(self, poly) -> "ExtFieldElement":
        return ExtFieldElement(
            self.field, tuple(poly) + (0,) * (self.field.k - len(poly))
        )

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(gfpoly.add(self.coeffs, other.coeffs, self.field.p))

    def __sub__(self, other):
        other = self._coerce(other)
        return self._wrap(gfpoly.sub(self.coeffs, other.coeffs, self.field.p))

    def __neg__(self):
        return self._wrap(gfpoly.scale(self.coeffs, -1, self.field.p))

    def __mul__(self, other):
        other = self._coerce(other)
        prod = gfpoly.mod(
            gfpoly.mul(gfpoly.trim(self.coeffs), gfpoly.trim(other.coeffs), self.field.p),
            self.field.modulus,
            self.field.p,
        )
        return self._wrap(prod)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    __radd__ = __add__
    __rmul__ = __mul__

    def _coerce(self, other) -> "ExtFieldElement":
        if isinstance(other, int):
            return self.field.element(other)
        if not isinstance(other, ExtFieldElement) or other.field != self.field:
            raise InputError("mixed-field arithmetic")
        return other

    def inverse(self) -> "ExtFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("field inverse of zero")
        g, s, _ = gfpoly.ext_gcd(
            gfpoly.trim(self.coeffs), self.field.modulus, self.field.p
        )
        assert g == (1,)
        return self._wrap(gfpoly.mod(s, self.field.modulus, self.field.p))

    def __pow__(self, e: int) -> "ExtFieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        out = gfpoly.pow_mod(
            gfpoly.trim(self.coeffs), e, self.field.modulus, self.field.p
        )
        return self._wrap(out)

    def as_int(self) -> int:
        """The value of a prime-subfield element."""
        if any(c for c in self.coeffs[1:]):
            raise NotInSubfield(f"{self} is not in the prime subfield")
        return self.coeffs[0]


def frobenius(a: ExtFieldElement, i: int = 1) -> ExtFieldElement:
    """a -> a^(p^i)."""
    return a ** (a.field.p ** (i % a.field.k if a.field.k else 1))


def in_subfield(a: ExtFieldElement, sub_degree: int) -> bool:
    """Whether a lies in F_{p^sub_degree} (requires sub_degree | k)."""
    if a.field.k % sub_degree != 0:
        raise InputError("sub_degree must divide the extension degree")
    return frobenius(a, sub_degree) == a


def trace_to_prime(a: ExtFieldElement, sub_degree: int | None = None) -> int:
    """Tr_{F_{p^j}/F_p}(a) for a in the subfield F_{p^j}; returns an int."""
    j = a.field.k if sub_degree is None else sub_degree
    if sub_degree is not None and not in_subfield(a, sub_degree):
        raise NotInSubfield("trace argument not in the stated subfield")
    acc = a.field.zero()
    b = a
    for _ in range(j):
        acc = acc + b
        b = frobenius(b, 1)
    return acc.as_int()


def relative_norm(a: ExtFieldElement) -> ExtFieldElement:
    """Norm to the index-2 subfield: a * a^q with q = p^(k/2)."""
    if a.field.k % 2 != 0:
        raise InputError("relative norm needs even extension degree")
    out = a * frobenius(a, a.field.k // 2)
    if not in_subfield(out, a.field.k // 2):
        raise NotInSubfield("norm left the subfield")
    return out


def relative_trace(a: ExtFieldElement) -> ExtFieldElement:
    """Trace to the index-2 subfield: a + a^q."""
    if a.field.k % 2 != 0:
        raise InputError("relative trace needs even extension degree")
    out = a + frobenius(a, a.field.k // 2)
    if not in_subfield(out, a.field.k // 2):
        raise NotInSubfield("trace left the subfield")
    return out


def additive_character(a: ExtFieldElement, sub_degree: int | None = None) -> complex:
    """e_q(a) = e_p(Tr_{F_q/F_p}(a)) for a in F_q = F_{p^sub_degree}."""
    t = trace_to_prime(a, sub_degree)
    return cmath.exp(2j * cmath.pi * t / a.field.p)


def multiplicative_order(a: ExtFieldElement, group_order: int) -> int:
    """Order of a in a group of known order (by divisor descent)."""
    if a.is_zero():
        raise InputError("zero has no multiplicative order")
    order = group_order
    for ell in _prime_factors(group_order):
        while order % ell == 0 and (a ** (order // ell)) == a.field.one():
            order //= ell
    return order


def _prime_factors(n: int) -> list[int]:
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


class CyclicGroupView:
    """A cyclic subgroup of F_{p^k}^* with a fixed generator.

    Represents either the full unit group (order q - 1) or the norm-one
    kernel of F_{q^2}/F_q (order q + 1).  A discrete-log table is built
    lazily for small orders; baby-step giant-step is used above 10^4.
    """

    def __init__(self, ambient: ExtField, order: int, generator: ExtFieldElement):
        if (generator ** order) != ambient.one():
            raise InputError("generator order mismatch")
        if multiplicative_order(generator, order) != order:
            raise InputError("claimed generator does not have full order")
        self.ambient = ambient
        self.order = order
        self.generator = generator
        self._table: dict | None = None

    def __repr__(self):
        return f"CyclicGroupView(order={self.order}, ambient={self.ambient!r})"

    def powers(self) -> list[ExtFieldElement]:
        """[g^0, g^1, ..., g^(m-1)] in order."""
        out = [self.ambient.one()]
        for _ in range(self.order - 1):
            out.append(out[-1] * self.generator)
        return out

    def dlog(self, a: ExtFieldElement) -> int:
        if self.order <= 10 ** 4:
            if self._table is None:
                self._table = {g.coeffs: t for t, g in enumerate(self.powers())}
            try:
                return self._table[a.coeffs]
            except KeyError:
                raise NotInSubgroup(f"{a} not in the cyclic group") from None
        return self._bsgs(a)

    def _bsgs(self, a: ExtFieldElement) -> int:
        m = math.isqrt(self.order) + 1
        baby = {}
        cur = self.ambient.one()
        for j in range(m):
            baby.setdefault(cur.coeffs, j)
            cur = cur * self.generator
        giant_step = (self.generator ** m).inverse()
        cur = a
        for i in range(m + 1):
            if cur.coeffs in baby:
                t = (i * m + baby[cur.coeffs]) % self.order
                if (self.generator ** t) == a:
                    return t
            cur = cur * giant_step
        raise NotInSubgroup(f"{a} not in the cyclic group")

    def contains(self, a: ExtFieldElement) -> bool:
        try:
            self.dlog(a)
            return True
        except NotInSubgroup:
            return False

    def quadratic_character_index(self) -> int:
        if self.order % 2 != 0:
            raise InputError("group order must be even")
        return self.order // 2


def unit_group(field: ExtField) -> CyclicGroupView:
    """F_q^* with the lexicographically least generator."""
    m = field.q - 1
    for idx in range(1, field.q):
        a = field.from_index(idx)
        if multiplicative_order(a, m) == m:
            return CyclicGroupView(field, m, a)
    raise AssertionError("unreachable: F_q^* is cyclic")


def norm_one_group(field: ExtField) -> CyclicGroupView:
    """ker(N_{F_{q^2}/F_q}) inside F_{q^2}^*, of order q + 1.

    The generator is gamma^(q-1) for the least generator gamma of the
    full unit group (the norm-one kernel is the image of x -> x^(q-1)).
    """
    if field.k % 2 != 0:
        raise InputError("norm-one group needs an even extension degree")
    q = field.p ** (field.k // 2)
    gamma = unit_group(field).generator
    g = gamma ** (q - 1)
    return CyclicGroupView(field, q + 1, g)


class MultCharacter:
    """chi_j on a cyclic group: chi_j(g^t) = exp(2 pi i j t / m)."""

    def __init__(self, group: CyclicGroupView, index: int):
        self.group = group
        self.index = index % group.order

    def __call__(self, a: ExtFieldElement) -> complex:
        return self.at_power(self.group.dlog(a))

    def at_power(self, t: int) -> complex:
        m = self.group.order
        return cmath.exp(2j * cmath.pi * ((self.index * t) % m) / m)

    def __mul__(self, other: "MultCharacter") -> "MultCharacter":
        if other.group is not self.group:
            raise InputError("characters on different groups")
        return MultCharacter(self.group, self.index + other.index)

    @property
    def is_quadratic(self) -> bool:
        return self.index == self.group.quadratic_character_index()

    @property
    def is_trivial(self) -> bool:
        return self.index == 0
