"""Exact rational/integer analysis of the classical symplectic map.

Row convention: lattice vectors n in Z^{2d} are rows acted on by
n -> n A; the symplectic form is w(m, n) = m1.n2 - m2.n1.  Everything
in this module is exact (ints / Fractions); no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import exactla, intpoly
from .errors import (
    InputError,
    NonSymmetricOrbitPresent,
    NotInvariant,
    NotIsotropic,
    RepeatedEigenvalues,
    ZeroVector,
)


def symplectic_gram(d: int) -> list[list[int]]:
    """Gram matrix J of w(m,n) = m1.n2 - m2.n1: w(m,n) = m J n^t."""
    J = [[0] * (2 * d) for _ in range(2 * d)]
    for i in range(d):
        J[i][d + i] = 1
        J[d + i][i] = -1
    return J


def omega(m, n) -> int:
    """Symplectic product of two integer row vectors."""
    d = len(m) // 2
    return sum(m[i] * n[d + i] - m[d + i] * n[i] for i in range(d))


class IntSymplectic:
    """An integer matrix of Sp(2d, Z) with quantizability parity metadata."""

    def __init__(self, entries):
        entries = [[int(x) for x in row] for row in entries]
        n = len(entries)
        if n % 2 != 0 or any(len(r) != n for r in entries):
            raise InputError("entries must form a square 2d x 2d matrix")
        self.d = n // 2
        self.entries = entries
        J = symplectic_gram(self.d)
        AJ = exactla.matmul_int(entries, J)
        AJAt = exactla.matmul_int(AJ, [list(r) for r in zip(*entries)])
        if AJAt != J:
            raise InputError("matrix is not symplectic for w(m,n) = m1.n2 - m2.n1")
        d = self.d
        E = [row[:d] for row in entries[:d]]
        F = [row[d:] for row in entries[:d]]
        G = [row[:d] for row in entries[d:]]
        H = [row[d:] for row in entries[d:]]
        EFt = exactla.matmul_int(E, [list(r) for r in zip(*F)])
        GHt = exactla.matmul_int(G, [list(r) for r in zip(*H)])
        self.theta_flag = all(
            x % 2 == 0 for M in (EFt, GHt) for row in M for x in row
        )

    @classmethod
    def from_json_dict(cls, data) -> "IntSymplectic":
        try:
            m = cls(data["entries"])
        except KeyError as e:
            raise InputError(f"missing key {e} in matrix JSON") from e
        if "d" in data and int(data["d"]) != m.d:
            raise InputError("declared d does not match entry shape")
        return m

    def char_poly(self) -> intpoly.Poly:
        return char_poly(self)

    def act(self, n):
        """Row action n -> n A."""
        return tuple(exactla.vecmat_int(list(n), self.entries))

    def power_mod(self, k: int, N: int):
        out = exactla.identity_int(2 * self.d)
        base = [[x % N for x in row] for row in self.entries]
        while k:
            if k & 1:
                out = [[v % N for v in row] for row in exactla.matmul_int(out, base)]
            base = [[v % N for v in row] for row in exactla.matmul_int(base, base)]
            k >>= 1
        return out

    def __repr__(self):
        return f"IntSymplectic(d={self.d}, entries={self.entries})"


def char_poly(A: IntSymplectic) -> intpoly.Poly:
    """Characteristic polynomial; raises if eigenvalues are repeated."""
    p = intpoly.char_poly(A.entries)
    if intpoly.deg(intpoly.gcd_monic_Q(p, intpoly.derivative(p))) != 0:
        raise RepeatedEigenvalues("gcd(P, P') is not constant")
    return p


factor_over_Z = intpoly.factor_over_Z


@dataclass
class NumberRingElement:
    """Residue in Z[t]/(P_theta), i.e. an element of Z[lambda_theta]."""

    modulus: intpoly.Poly
    coeffs: tuple[int, ...]

    def __post_init__(self):
        q, r = intpoly.pdivmod_exact(intpoly.trim(self.coeffs), self.modulus)
        k = intpoly.deg(self.modulus)
        self.coeffs = tuple(r) + (0,) * (k - len(r))

    def _check(self, other):
        if self.modulus != other.modulus:
            raise InputError("mixed-ring arithmetic")

    def __add__(self, other):
        self._check(other)
        return NumberRingElement(self.modulus, intpoly.padd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return NumberRingElement(self.modulus, intpoly.psub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return NumberRingElement(self.modulus, intpoly.pscale(self.coeffs, other))
        self._check(other)
        return NumberRingElement(self.modulus, intpoly.pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, NumberRingElement)
            and self.modulus == other.modulus
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.modulus, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def star(self) -> "NumberRingElement":
        """The involution lambda -> 1/lambda = h(lambda), h = (1 - P)/t.

        Valid on symmetric orbits, where P(0) = 1.
        """
        P = self.modulus
        if P[0] != 1:
            raise InputError("star involution needs P(0) = 1")
        h = intpoly.trim(tuple(-c for c in P[1:]))  # (1 - P)/t
        out = ()
        for c in reversed(intpoly.trim(self.coeffs)):
            out = intpoly.padd(
                intpoly.pdivmod_exact(intpoly.pmul(out, h), P)[1], (c,)
            )
        return NumberRingElement(P, out)

    def norm_to_Z(self) -> int:
        """N_{K/Q}: determinant of the multiplication matrix on 1, t, ..."""
        k = intpoly.deg(self.modulus)
        cols = []
        cur = NumberRingElement(self.modulus, self.coeffs)
        tgen = NumberRingElement(self.modulus, (0, 1))
        for _ in range(k):
            cols.append(list(cur.coeffs))
            cur = cur * tgen
        # determinant of k x k integer matrix by Bareiss
        mat = [list(r) for r in zip(*cols)]
        sign, prev = 1, 1
        for c in range(k - 1):
            if mat[c][c] == 0:
                for r in range(c + 1, k):
                    if mat[r][c] != 0:
                        mat[c], mat[r] = mat[r], mat[c]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(c + 1, k):
                for j in range(c + 1, k):
                    mat[i][j] = (mat[i][j] * mat[c][c] - mat[i][c] * mat[c][j]) // prev
                mat[i][c] = 0
            prev = mat[c][c]
        return sign * mat[k - 1][k - 1]


@dataclass
class RationalOrbit:
    """One Galois orbit theta: irreducible factor plus invariant-subspace data."""

    index: int
    factor: intpoly.Poly
    symmetric: bool
    basis: list[list[int]]          # rows spanning E_theta over Q
    partner: int                    # index of theta* (== index when symmetric)
    eigenvector: list[NumberRingElement] = field(default_factory=list)

    @property
    def size(self) -> int:
        return intpoly.deg(self.factor)

    @property
    def d_theta(self) -> int:
        """Half-dimension of the symplectic orbit containing theta."""
        return self.size // 2 if self.symmetric else self.size

    def eigenvector_star(self) -> list[NumberRingElement]:
        return [c.star() for c in self.eigenvector]


def _poly_at_matrix(p: intpoly.Poly, entries):
    n = len(entries)
    acc = exactla.identity_int(n)
    total = [[(p[0] if p else 0) * acc[i][j] for j in range(n)] for i in range(n)]
    for c in p[1:]:
        acc = exactla.matmul_int(acc, entries)
        total = [
            [total[i][j] + c * acc[i][j] for j in range(n)] for i in range(n)
        ]
    return total


def int_det(mat) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign, prev = 1, 1
    for c in range(n - 1):
        if m[c][c] == 0:
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    m[c], m[r] = m[r], m[c]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def _adjugate_row(A: IntSymplectic, factor: intpoly.Poly) -> list[NumberRingElement]:
    """First nonzero row of adj(A - t I) over Z[t]/(factor): a left eigenvector."""
    n = 2 * A.d
    P = factor
    # entries of (A - t I) as ring elements
    M = [
        [
            NumberRingElement(P, (A.entries[i][j],) if i != j else (A.entries[i][j], -1))
            for j in range(n)
        ]
        for i in range(n)
    ]

    def det(rows, cols):
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        total = NumberRingElement(P, (0,))
        for idx, c in enumerate(cols):
            minor = det(rows[1:], cols[:idx] + cols[idx + 1 :])
            term = M[rows[0]][c] * minor
            if idx % 2:
                term = term * (-1)
            total = total + term
        return total

    rows = list(range(n))
    for i in range(n):
        # adj[i][j] = (-1)^{i+j} det(minor_{j,i}) ; row i of adjugate
        row = []
        for j in range(n):
            minor_rows = tuple(r for r in rows if r != j)
            minor_cols = tuple(c for c in rows if c != i)
            m = det(minor_rows, minor_cols)
            if (i + j) % 2:
                m = m * (-1)
            row.append(m)
        if any(not x.is_zero() for x in row):
            return row
    raise RepeatedEigenvalues("adjugate of (A - t I) vanished mod an irreducible factor")


def rational_orbit_decomposition(A: IntSymplectic) -> list[RationalOrbit]:
    """Unique decomposition of Q^{2d} into irreducible left-invariant subspaces."""
    P = char_poly(A)
    factors = intpoly.factor_over_Z(P)
    orbits = []
    for idx, f in enumerate(factors):
        fA = _poly_at_matrix(f, A.entries)
        basis = exactla.left_kernel(fA)
        if len(basis) != intpoly.deg(f):
            raise RepeatedEigenvalues("invariant subspace has unexpected dimension")
        recip = intpoly.reciprocal_monic(f)
        partner = idx if recip == f else factors.index(recip)
        orbits.append(
            RationalOrbit(
                index=idx,
                factor=f,
                symmetric=(recip == f),
                basis=basis,
                partner=partner,
            )
        )
    # exactness checks: direct sum spans, symplectic orthogonality pattern
    stacked = [row for o in orbits for row in o.basis]
    if exactla.rank(stacked) != 2 * A.d:
        raise RepeatedEigenvalues("orbit subspaces do not span Q^{2d}")
    for o1 in orbits:
        for o2 in orbits:
            if o2.index == o1.partner:
                continue
            if any(omega(r1, r2) != 0 for r1 in o1.basis for r2 in o2.basis):
                raise NotInvariant("omega does not vanish between unpaired orbits")
    for group in symplectic_orbit_indices(orbits):
        rows = [r for idx in group for r in orbits[idx].basis]
        gram = [[omega(r1, r2) for r2 in rows] for r1 in rows]
        if int_det(gram) == 0:
            raise NotInvariant("omega degenerate on a symplectic orbit")
    for o in orbits:
        o.eigenvector = _adjugate_row(A, o.factor)
    return orbits


def projection_vanishes(A: IntSymplectic, orbits, n, orbit_index: int) -> bool:
    """Whether the E_theta component of n is zero (exact rational solve)."""
    target = orbits[orbit_index]
    others = [row for o in orbits if o.index != orbit_index for row in o.basis]
    return exactla.in_row_span(others, list(n))


def is_aque(A: IntSymplectic, orbits=None):
    """AQUE criterion: every orbit symmetric.  Returns (flag, witness_basis).

    When false, the witness is a maximal invariant isotropic subspace: the
    sum of one orbit (the lexicographically smaller factor) from each
    nonsymmetric pair.
    """
    if orbits is None:
        orbits = rational_orbit_decomposition(A)
    bad = [o for o in orbits if not o.symmetric]
    if not bad:
        return True, None
    witness = []
    for o in bad:
        partner = orbits[o.partner]
        if (intpoly.deg(o.factor), o.factor) <= (intpoly.deg(partner.factor), partner.factor):
            witness.extend(o.basis)
    return False, witness


def symplectic_orbit_indices(orbits) -> list[tuple[int, ...]]:
    """Galois orbits grouped into symplectic orbits (as index tuples)."""
    seen = set()
    out = []
    for o in orbits:
        if o.index in seen:
            continue
        if o.symmetric:
            out.append((o.index,))
            seen.add(o.index)
        else:
            out.append((o.index, o.partner))
            seen.update((o.index, o.partner))
    return out


def quadratic_form_Q(A: IntSymplectic, n, orbits=None) -> dict[int, NumberRingElement]:
    """Q_theta(n) = w(n, v_theta) w(n, v_theta*) in Z[lambda_theta], per orbit.

    Defined when all orbits are symmetric (AQUE case).  The value depends
    on the eigenvector scaling by a fixed unit; all consumers are
    scaling-covariant.
    """
    if orbits is None:
        orbits = rational_orbit_decomposition(A)
    if any(not o.symmetric for o in orbits):
        raise NonSymmetricOrbitPresent("Q needs all orbits symmetric")
    out = {}
    for o in orbits:
        v = o.eigenvector
        vs = o.eigenvector_star()
        w1 = _omega_ring(n, v, o.factor)
        w2 = _omega_ring(n, vs, o.factor)
        out[o.index] = w1 * w2
    return out


def _omega_ring(n, v, modulus) -> NumberRingElement:
    d = len(n) // 2
    total = NumberRingElement(modulus, (0,))
    for i in range(d):
        total = total + n[i] * v[d + i] - n[d + i] * v[i]
    return total


def omega_with_eigenvector(orbits, orbit_index: int, n) -> NumberRingElement:
    """w(n, v_theta) as a ring element (any orbit, symmetric or not)."""
    o = orbits[orbit_index]
    return _omega_ring(n, o.eigenvector, o.factor)


def d_n_dimension(A: IntSymplectic, n, orbits=None) -> int:
    """Half-dimension of the smallest symplectic invariant subspace containing n."""
    if all(x == 0 for x in n):
        raise ZeroVector("d_n undefined for n = 0")
    if orbits is None:
        orbits = rational_orbit_decomposition(A)
    total = 0
    for group in symplectic_orbit_indices(orbits):
        touched = any(
            not projection_vanishes(A, orbits, n, idx) for idx in group
        )
        if touched:
            total += orbits[group[0]].d_theta
    return total


@dataclass
class ObservableSpec:
    """Finitely supported Fourier data of a trigonometric polynomial."""

    terms: list[tuple[tuple[int, ...], complex]]

    def __post_init__(self):
        merged: dict[tuple[int, ...], complex] = {}
        for n, c in self.terms:
            key = tuple(int(x) for x in n)
            merged[key] = merged.get(key, 0) + complex(c)
        self.terms = sorted(
            ((n, c) for n, c in merged.items() if c != 0), key=lambda t: t[0]
        )

    @classmethod
    def from_json_list(cls, data) -> "ObservableSpec":
        try:
            return cls([(tuple(item["n"]), complex(item.get("re", 0.0), item.get("im", 0.0)))
                        for item in data])
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed observable JSON: {e}") from e

    def coefficient(self, n) -> complex:
        n = tuple(n)
        for m, c in self.terms:
            if m == n:
                return c
        return 0.0

    def is_real(self) -> bool:
        for n, c in self.terms:
            minus = tuple(-x for x in n)
            if abs(self.coefficient(minus) - c.conjugate()) > 1e-12:
                return False
        return True


def d_f(A: IntSymplectic, f: ObservableSpec, orbits=None) -> int:
    supported = [n for n, c in f.terms if any(n)]
    if not supported:
        raise ZeroVector("observable has no nonzero frequency")
    return min(d_n_dimension(A, n, orbits) for n in supported)


def sharp_coefficients(A: IntSymplectic, f: ObservableSpec, orbits=None):
    """Modified Fourier coefficients grouped by exact Q value.

    Returns (sharp, d_nu, d_f_value, V_f) where sharp maps the Q key
    (tuple of per-orbit coefficient tuples) to sum (-1)^{n1.n2} fhat(n),
    and d_nu maps the same key to its half-dimension.  V_f sums |sharp|^2
    over keys with d_nu == d_f (the key nu = 0 for n = 0 is excluded).
    """
    if orbits is None:
        orbits = rational_orbit_decomposition(A)
    if any(not o.symmetric for o in orbits):
        raise NonSymmetricOrbitPresent("sharp coefficients need the AQUE case")
    sharp: dict[tuple, complex] = {}
    dnu: dict[tuple, int] = {}
    d = A.d
    for n, c in f.terms:
        Q = quadratic_form_Q(A, n, orbits)
        key = tuple(Q[o.index].coeffs for o in orbits)
        parity = sum(n[i] * n[d + i] for i in range(d)) % 2
        sharp[key] = sharp.get(key, 0) + (-1) ** parity * c
        if key not in dnu:
            dnu[key] = sum(
                o.d_theta for o in orbits if not Q[o.index].is_zero()
            )
    zero_key = tuple((0,) * len(o.factor[:-1]) for o in orbits)
    nonzero = {k: v for k, v in sharp.items() if k != zero_key and abs(v) > 1e-12}
    if nonzero:
        dfv = min(dnu[k] for k in nonzero)
        Vf = sum(abs(v) ** 2 for k, v in nonzero.items() if dnu[k] == dfv)
    else:
        dfv = None
        Vf = 0.0
    return sharp, dnu, dfv, Vf


def scar_manifold(A: IntSymplectic, e0_basis):
    """Lattice Z0 = E0 cap Z^{2d} (HNF rows) and the shift point x0.

    x0 solves 2 n.x = n1.n2 for every basis vector of Z0; returned as a
    tuple of Fractions in [0, 1).
    """
    e0 = [list(map(int, row)) for row in e0_basis]
    if not e0:
        raise InputError("empty subspace basis")
    for row in e0:
        if not exactla.in_row_span(e0, exactla.vecmat_int(row, A.entries)):
            raise NotInvariant("E0 is not invariant under A")
    for r1 in e0:
        for r2 in e0:
            if omega(r1, r2) != 0:
                raise NotIsotropic("E0 is not isotropic")
    z0 = exactla.saturate_rowspace(e0)
    d = A.d
    rhs = [Fraction(sum(row[i] * row[d + i] for i in range(d)), 2) for row in z0]
    x = exactla.solve(z0, rhs)
    assert x is not None, "independent basis rows always admit a solution"
    x0 = tuple(v % 1 for v in x)
    return z0, x0


def ord_mod(A: IntSymplectic, N: int) -> int:
    """Smallest s >= 1 with A^s = I mod N."""
    if N < 2:
        raise InputError("modulus must be >= 2")
    n = 2 * A.d
    ident = exactla.identity_int(n)
    cur = [[x % N for x in row] for row in A.entries]
    s = 1
    limit = N ** (2 * n) + 1
    while cur != ident:
        cur = [[v % N for v in row] for row in exactla.matmul_int(cur, A.entries)]
        s += 1
        if s > limit:
            raise InputError("A is not invertible of finite order mod N")
    return s
