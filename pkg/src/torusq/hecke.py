"""Hecke theory at prime Planck parameter p (p odd, not dividing disc P_A).

Frobenius-orbit data is computed in per-orbit fields F_p[t]/(factor), so
the chosen eigenvalue lambda is always the class of t.  Centralizer
generators are built as polynomials in A by CRT interpolation across the
factors of P_A mod p, which makes the identification of the Hecke group
with the cyclic group C (norm-one elements or F_q^*) consistent with the
eigenvector used for the quadratic form by construction; the defining
relations are asserted and failures raise loudly.

Hecke operators carry the canonical multiplicative phase: for a
generator g acting on one orbit the averaged intertwiner satisfies
F = c U_p(g) with c = sign * p^{2d - d_orbit}, sign +1 on symmetric and
-1 on nonsymmetric orbits (from the trace of the projector-weighted
character sum).  With this phase U_p(g)^m = I exactly and the eigenvalue
labels are the paper-normalized character indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import gfpoly, intpoly
from .errors import (
    BadPrime,
    EigenvalueClusterAmbiguity,
    EvenPrime,
    InputError,
    InvariantViolation,
    RationalityFailure,
)
from .ffield import (
    CyclicGroupView,
    ExtField,
    ExtFieldElement,
    frobenius,
    in_subfield,
    norm_one_group,
    unit_group,
)
from .quantizer import HilbertTorus, QuantumOperator, averaged_intertwiner
from .rational import IntSymplectic, char_poly, symplectic_gram


@dataclass
class FrobeniusOrbitData:
    """One symplectic Frobenius orbit of A mod p."""

    index: int
    factors: tuple          # one gfpoly for symmetric, (g, g*) for a nonsymmetric pair
    symmetric: bool
    d_orbit: int            # half-dimension of the symplectic orbit
    field: ExtField         # F_p(lambda): degree 2*d_orbit (sym) or d_orbit (nonsym)
    lam: ExtFieldElement
    v: list                 # left eigenvector for lam
    v_star: list            # left eigenvector for lam^{-1}
    kappa: ExtFieldElement  # (2 w(v, v*))^{-1}
    group: CyclicGroupView  # C = norm-one kernel (sym) or F_q^* (nonsym)

    @property
    def q(self) -> int:
        return self.field.p ** self.d_orbit

    def omega_v(self, n) -> ExtFieldElement:
        """w(n, v) for an integer vector n."""
        return _omega_ext(n, self.v, self.field)

    def omega_v_star(self, n) -> ExtFieldElement:
        return _omega_ext(n, self.v_star, self.field)

    def projection_vanishes(self, n) -> bool:
        """Whether n mod p projects to zero on this symplectic orbit."""
        return self.omega_v(n).is_zero() and self.omega_v_star(n).is_zero()


def _omega_ext(n, v, field: ExtField) -> ExtFieldElement:
    d = len(n) // 2
    total = field.zero()
    for i in range(d):
        total = total + v[d + i] * int(n[i]) - v[i] * int(n[d + i])
    return total


def _ext_left_kernel_vector(M, field: ExtField):
    """One kernel vector of {v : v M = 0} for a corank-1 matrix over field."""
    n = len(M)
    # eliminate on the transpose: columns of M^t are rows of M
    mat = [[M[j][i] for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not mat[i][c].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(n):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise RationalityFailure(f"eigenspace has dimension {len(free)}, expected 1")
    fc = free[0]
    vec = [field.zero()] * n
    vec[fc] = field.one()
    for i, pc in enumerate(pivots):
        vec[pc] = -mat[i][fc]
    return vec


def _reciprocal_mod_p(g, p: int):
    """Monic reciprocal t^deg g(1/t) / g(0) over F_p."""
    if g[0] == 0:
        raise BadPrime("factor with zero constant term (A singular mod p)")
    inv = pow(g[0], -1, p)
    return gfpoly.trim((c * inv) % p for c in reversed(g))


def is_good_prime(A: IntSymplectic, p: int) -> bool:
    if p == 2 or p < 2:
        return False
    P = char_poly(A)
    return intpoly.discriminant(P) % p != 0


def frobenius_orbits_mod_p(A: IntSymplectic, p: int) -> list[FrobeniusOrbitData]:
    """Decompose F_p^{2d} into symplectic Frobenius orbits of A."""
    if p == 2:
        raise EvenPrime("prime-level theory needs p odd")
    P = char_poly(A)
    if intpoly.discriminant(P) % p == 0:
        raise BadPrime(f"p={p} divides the discriminant of P_A")
    factors = gfpoly.factor_monic(gfpoly.reduce(P, p), p)
    used = set()
    orbits = []
    for g in factors:
        if g in used:
            continue
        gstar = _reciprocal_mod_p(g, p)
        if gstar == g:
            used.add(g)
            field = ExtField(p, modulus=g)
            d_orbit = gfpoly.deg(g) // 2
            lam = field.gen()
            v = _eigenvector(A, field, lam)
            v_star = [frobenius(x, d_orbit) for x in v]
            group = norm_one_group(field)
            orbits.append(_finish_orbit(len(orbits), (g,), True, d_orbit,
                                         field, lam, v, v_star, group))
        else:
            if gstar not in factors:
                raise InvariantViolation("reciprocal factor missing mod p")
            used.update((g, gstar))
            first = min(g, gstar, key=lambda h: (gfpoly.deg(h), h))
            field = ExtField(p, modulus=first)
            d_orbit = gfpoly.deg(first)
            lam = field.gen()
            v = _eigenvector(A, field, lam)
            v_star = _eigenvector(A, field, lam.inverse())
            group = unit_group(field)
            orbits.append(_finish_orbit(len(orbits), (first, _reciprocal_mod_p(first, p)),
                                        False, d_orbit, field, lam, v, v_star, group))
    total = sum(2 * o.d_orbit for o in orbits)
    if total != 2 * A.d:
        raise InvariantViolation("orbit dimensions do not sum to 2d")
    return orbits


def _eigenvector(A: IntSymplectic, field: ExtField, lam: ExtFieldElement):
    n = 2 * A.d
    M = [
        [field.element(A.entries[i][j]) - (lam if i == j else field.zero())
         for j in range(n)]
        for i in range(n)
    ]
    v = _ext_left_kernel_vector(M, field)
    # defining relation v (A - lam I) = 0
    for j in range(n):
        acc = field.zero()
        for i in range(n):
            acc = acc + v[i] * M[i][j]
        if not acc.is_zero():
            raise RationalityFailure("eigenvector relation failed")
    return v


def _finish_orbit(index, factors, symmetric, d_orbit, field, lam, v, v_star, group):
    two_w = _pairing(v, v_star, field) * 2
    if two_w.is_zero():
        raise RationalityFailure("w(v, v*) = 0: eigenvector pairing degenerate")
    kappa = two_w.inverse()
    if symmetric:
        # norm-one relation of the eigenvalue: lam^(q+1) = 1
        if (lam ** (field.p ** d_orbit + 1)) != field.one():
            raise RationalityFailure("symmetric eigenvalue is not norm-one")
    return FrobeniusOrbitData(index, factors, symmetric, d_orbit, field,
                              lam, v, v_star, kappa, group)


def _pairing(v, w, field: ExtField) -> ExtFieldElement:
    d = len(v) // 2
    total = field.zero()
    for i in range(d):
        total = total + v[i] * w[d + i] - v[d + i] * w[i]
    return total


@dataclass
class HeckeGroup:
    """Per-orbit cyclic generators of the centralizer C_p(A) in Sp(2d, F_p)."""

    p: int
    orbits: list            # FrobeniusOrbitData, aligned with generators
    generators: list        # integer matrices mod p
    orders: list[int]

    @property
    def total_order(self) -> int:
        out = 1
        for m in self.orders:
            out *= m
        return out


def _express_in_power_basis(target: ExtFieldElement, base: ExtFieldElement):
    """Coefficients c_j in F_p with sum c_j base^j = target (basis of powers)."""
    field = target.field
    k = field.k
    cols = []
    cur = field.one()
    for _ in range(k):
        cols.append(list(cur.coeffs))
        cur = cur * base
    p = field.p
    mat = [[cols[j][i] % p for j in range(k)] + [target.coeffs[i] % p] for i in range(k)]
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, k) if mat[i][c] % p != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(k):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    if r != k:
        raise RationalityFailure("power basis is degenerate")
    sol = [0] * k
    for i, c in enumerate(pivots):
        sol[c] = mat[i][k]
    return gfpoly.trim(sol)


def _crt_combine(residues, moduli, p: int):
    """f mod prod(moduli) with f = residues[i] mod moduli[i] (pairwise coprime)."""
    total_mod = gfpoly.one(p)
    for m in moduli:
        total_mod = gfpoly.mul(total_mod, m, p)
    f = ()
    for r, m in zip(residues, moduli):
        others, rem = gfpoly.divmod_(total_mod, m, p)
        assert not rem
        g, s, _ = gfpoly.ext_gcd(others, m, p)
        if g != (1,):
            raise InvariantViolation("CRT moduli not coprime")
        term = gfpoly.mul(r, gfpoly.mul(others, s, p), p)
        f = gfpoly.add(f, term, p)
    return gfpoly.mod(f, total_mod, p)


def _poly_at_matrix_mod(f, entries, p: int):
    n = len(entries)
    A = [[x % p for x in row] for row in entries]
    out = [[0] * n for _ in range(n)]
    for c in reversed(f):
        # out = out * A + c I
        out = [[sum(out[i][k] * A[k][j] for k in range(n)) % p for j in range(n)]
               for i in range(n)]
        for i in range(n):
            out[i][i] = (out[i][i] + c) % p
    return out


def _is_symplectic_mod(M, p: int, d: int) -> bool:
    J = symplectic_gram(d)
    n = 2 * d
    MJ = [[sum(M[i][k] * J[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]
    MJMt = [[sum(MJ[i][k] * M[j][k] for k in range(n)) % p for j in range(n)] for i in range(n)]
    return MJMt == [[x % p for x in row] for row in J]


def _mat_eq_mod(X, Y, p: int) -> bool:
    return all((a - b) % p == 0 for rx, ry in zip(X, Y) for a, b in zip(rx, ry))


def hecke_generators(A: IntSymplectic, p: int, orbits=None) -> HeckeGroup:
    """Cyclic generators of C_p(A), one per symplectic Frobenius orbit.

    The generator for orbit theta acts on E_theta by multiplication by
    the orbit group's generator beta0 (i.e. v g = beta0 v) and as the
    identity on every other orbit.  Built as g = f(A) mod p where f is
    the CRT interpolation of the residues beta0 / beta0^{-1} / 1 across
    the irreducible factors of P_A mod p.
    """
    if orbits is None:
        orbits = frobenius_orbits_mod_p(A, p)
    all_factors = [f for o in orbits for f in o.factors]
    generators = []
    orders = []
    for o in orbits:
        beta0 = o.group.generator
        residues = []
        for f in all_factors:
            if o.symmetric and f == o.factors[0]:
                residues.append(gfpoly.trim(beta0.coeffs))
            elif not o.symmetric and f == o.factors[0]:
                residues.append(gfpoly.trim(beta0.coeffs))
            elif not o.symmetric and f == o.factors[1]:
                # value beta0^{-1} at the root lam^{-1} of the partner factor
                residues.append(_express_in_power_basis(beta0.inverse(), o.lam.inverse()))
            else:
                residues.append(gfpoly.one(p))
        f_poly = _crt_combine(residues, all_factors, p)
        G = _poly_at_matrix_mod(f_poly, A.entries, p)
        _assert_generator(G, A, o, orbits, p)
        generators.append(G)
        orders.append(o.group.order)
    # pairwise commutation (polynomials in A always commute; assert anyway)
    for i, G1 in enumerate(generators):
        for G2 in generators[i + 1:]:
            if not _mat_eq_mod(_matmul_mod(G1, G2, p), _matmul_mod(G2, G1, p), p):
                raise RationalityFailure("generators do not commute")
    return HeckeGroup(p, orbits, generators, orders)


def _matmul_mod(X, Y, p: int):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


def _assert_generator(G, A: IntSymplectic, o: FrobeniusOrbitData, orbits, p: int):
    if not _is_symplectic_mod(G, p, A.d):
        raise RationalityFailure("generator not symplectic mod p")
    if not _mat_eq_mod(_matmul_mod(G, [[x % p for x in r] for r in A.entries], p),
                       _matmul_mod([[x % p for x in r] for r in A.entries], G, p), p):
        raise RationalityFailure("generator does not commute with A")
    # v G = beta0 v over the orbit field
    field = o.field
    n = 2 * A.d
    beta0 = o.group.generator
    for j in range(n):
        acc = field.zero()
        for i in range(n):
            acc = acc + o.v[i] * G[i][j]
        if acc != beta0 * o.v[j]:
            raise RationalityFailure("generator eigenvalue relation failed")
    # identity action on the other orbits
    for other in orbits:
        if other.index == o.index:
            continue
        for j in range(n):
            acc = other.field.zero()
            for i in range(n):
                acc = acc + other.v[i] * G[i][j]
            if acc != other.v[j]:
                raise RationalityFailure("generator acts nontrivially off its orbit")
    # exact order
    m = o.group.order
    if not _mat_eq_mod(_mat_pow_mod(G, m, p), _identity(n), p):
        raise RationalityFailure("generator order too large")
    for ell in _prime_divisors(m):
        if _mat_eq_mod(_mat_pow_mod(G, m // ell, p), _identity(n), p):
            raise RationalityFailure("generator order too small")


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _mat_pow_mod(M, e: int, p: int):
    n = len(M)
    out = _identity(n)
    base = [[x % p for x in row] for row in M]
    while e:
        if e & 1:
            out = _matmul_mod(out, base, p)
        base = _matmul_mod(base, base, p)
        e >>= 1
    return out


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


def hecke_operators(space: HilbertTorus, group: HeckeGroup) -> list[QuantumOperator]:
    """Canonically phased U_p(g) for each orbit generator.

    F(pi, pi^g) = c U_p(g) with c = sign * |c|, sign = +1 (symmetric
    orbit) / -1 (nonsymmetric): the trace of U_p(g) is the character-sum
    -chi2(g) (resp. +chi2(g)) on its orbit factor tensored with
    p^{d_orbit'} identities, and chi2(generator) = -1.
    """
    p, d = space.N, space.d
    if p != group.p:
        raise InputError("space modulus differs from the group's prime")
    out = []
    for o, G, m in zip(group.orbits, group.generators, group.orders):
        F, ker = averaged_intertwiner(space, G)
        expected_ker = p ** (2 * (d - o.d_orbit))
        if ker != expected_ker:
            raise InvariantViolation("unexpected fixed space for a Hecke generator")
        c_abs = float(p) ** d * np.sqrt(float(ker))
        sign = 1.0 if o.symmetric else -1.0
        U = QuantumOperator(space, F / (sign * c_abs))
        U.check_unitary(1e-9)
        # canonical phase: U^m must be exactly the identity
        power = np.linalg.matrix_power(U.mat, m)
        if np.abs(power - np.eye(space.dim)).max() > 1e-8:
            raise InvariantViolation("canonical Hecke phase failed: U^m != I")
        out.append(U)
    return out


def chi2_of(group: HeckeGroup, powers) -> int:
    """chi2(prod g_i^{t_i}) = prod (-1)^{t_i}."""
    if len(powers) != len(group.orders):
        raise InputError("one exponent per orbit generator required")
    return -1 if sum(int(t) for t in powers) % 2 else 1


@dataclass
class HeckeBasis:
    """Joint eigenbasis of the Hecke operators with character labels."""

    p: int
    d: int
    vectors: np.ndarray          # dim x count, orthonormal columns
    labels: list[tuple[int, ...]]  # per-vector character index per orbit
    quad_flags: list[bool]
    orders: list[int]
    symmetric_flags: list[bool]

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    def multiplicity_table(self) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}
        for lab in self.labels:
            out[lab] = out.get(lab, 0) + 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "schema": "torusq.hecke_basis.v1",
            "p": self.p,
            "d": self.d,
            "orders": list(self.orders),
            "symmetric": [bool(s) for s in self.symmetric_flags],
            "vectors": [
                {
                    "labels": {str(i): int(j) for i, j in enumerate(lab)},
                    "quad_flag": bool(q),
                    "eigenvalue_phases": [
                        (int(j) % m) / m for j, m in zip(lab, self.orders)
                    ],
                }
                for lab, q in zip(self.labels, self.quad_flags)
            ],
        }


def expected_multiplicity(labels: tuple[int, ...], orders, symmetric_flags) -> int:
    """Eigenspace dimension table: 0 if a symmetric orbit carries chi2,
    else 2^(number of nonsymmetric orbits carrying chi2)."""
    mult = 1
    for j, m, sym in zip(labels, orders, symmetric_flags):
        if j % m == m // 2:
            if sym:
                return 0
            mult *= 2
    return mult


def hecke_diagonalize(space: HilbertTorus, group: HeckeGroup,
                      operators=None) -> HeckeBasis:
    """Joint eigenbasis via exact spectral projectors of each generator.

    Eigenvalues of the canonically phased U_p(g) are m-th roots of unity,
    so P_j = (1/m) sum_t e(-2 pi i j t / m) U^t is the exact projector.
    Subspaces are refined one generator at a time; ranks must reproduce
    the dimension table (chi2 absent on symmetric orbits, dim 2 on
    nonsymmetric) or diagonalization aborts.
    """
    if operators is None:
        operators = hecke_operators(space, group)
    dim = space.dim
    subspaces = [(np.eye(dim, dtype=np.complex128), ())]
    for U, m in zip(operators, group.orders):
        refined = []
        for basis, labels in subspaces:
            R = basis.conj().T @ U.mat @ basis
            k = R.shape[0]
            powers = np.empty((m, k, k), dtype=np.complex128)
            powers[0] = np.eye(k)
            for t in range(1, m):
                powers[t] = powers[t - 1] @ R
            dft = np.exp(-2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m)
            projectors = (dft @ powers.reshape(m, k * k)).reshape(m, k, k) / m
            total_rank = 0
            for j in range(m):
                P = projectors[j]
                r = int(round(float(P.trace().real)))
                if abs(P.trace().real - r) > 1e-6:
                    raise EigenvalueClusterAmbiguity(
                        f"projector trace {P.trace().real} not near an integer"
                    )
                if r == 0:
                    continue
                total_rank += r
                u, s, _ = np.linalg.svd(P)
                if s[r - 1] < 0.9 or (r < k and s[r] > 1e-6):
                    raise EigenvalueClusterAmbiguity("projector rank unclear")
                refined.append((basis @ u[:, :r], labels + (j,)))
            if total_rank != k:
                raise EigenvalueClusterAmbiguity("projector ranks do not sum")
        subspaces = refined
    subspaces.sort(key=lambda t: t[1])
    cols, labels, quads = [], [], []
    sym_flags = [o.symmetric for o in group.orbits]
    for basis, labs in subspaces:
        expect = expected_multiplicity(labs, group.orders, sym_flags)
        if basis.shape[1] != expect:
            raise InvariantViolation(
                f"eigenspace {labs} has dim {basis.shape[1]}, expected {expect}"
            )
        quad = any(
            (not sym) and j % m == m // 2
            for j, m, sym in zip(labs, group.orders, sym_flags)
        )
        for i in range(basis.shape[1]):
            cols.append(basis[:, i])
            labels.append(labs)
            quads.append(quad)
    vectors = np.stack(cols, axis=1)
    gram = vectors.conj().T @ vectors
    if np.abs(gram - np.eye(vectors.shape[1])).max() > 1e-9:
        raise InvariantViolation("Hecke basis is not orthonormal")
    # every vector is a joint eigenvector to 1e-9
    for U, m, pos in zip(operators, group.orders, range(len(operators))):
        for i, lab in enumerate(labels):
            lam = np.exp(2j * np.pi * lab[pos] / m)
            defect = np.abs(U.mat @ vectors[:, i] - lam * vectors[:, i]).max()
            if defect > 1e-9:
                raise InvariantViolation(f"eigenvector defect {defect:.2e}")
    return HeckeBasis(space.N, space.d, vectors, labels, quads,
                      list(group.orders), sym_flags)


# --- brute-force desk checks -------------------------------------------------

def brute_force_centralizer_order_sl2(A: IntSymplectic, p: int) -> int:
    """|C_p(A)| for d = 1 by enumerating all of SL(2, F_p)."""
    a, b, c, d = (A.entries[0][0] % p, A.entries[0][1] % p,
                  A.entries[1][0] % p, A.entries[1][1] % p)
    count = 0
    for x in range(p):
        for y in range(p):
            for z in range(p):
                for w in range(p):
                    if (x * w - y * z) % p != 1:
                        continue
                    # M A == A M entrywise for M = [[x, y], [z, w]]
                    if ((x * a + y * c - (a * x + b * z)) % p == 0 and
                            (x * b + y * d - (a * y + b * w)) % p == 0 and
                            (z * a + w * c - (c * x + d * z)) % p == 0 and
                            (z * b + w * d - (c * y + d * w)) % p == 0):
                        count += 1
    return count


def brute_force_centralizer_order(A: IntSymplectic, p: int) -> int:
    """|C_p(A)| by filtering the commutant algebra F_p[A] for symplecticity.

    Valid for distinct eigenvalues, where every matrix commuting with A
    mod p is a polynomial in A of degree < 2d.
    """
    n = 2 * A.d
    powers = [_identity(n)]
    Ap = [[x % p for x in row] for row in A.entries]
    for _ in range(n - 1):
        powers.append(_matmul_mod(powers[-1], Ap, p))
    count = 0
    for idx in range(p ** n):
        coeffs = []
        m = idx
        for _ in range(n):
            coeffs.append(m % p)
            m //= p
        M = [[sum(coeffs[t] * powers[t][i][j] for t in range(n)) % p
              for j in range(n)] for i in range(n)]
        if _is_symplectic_mod(M, p, A.d):
            count += 1
    return count
