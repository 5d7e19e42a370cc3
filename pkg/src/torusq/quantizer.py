"""Weyl quantization on the torus: elementary operators and propagators.

The Hilbert space is L^2((Z/NZ)^d), dimension N^d, states stored as
numpy vectors indexed by flattened positions (C order).  Matrix elements
of the paper-normalized inner product agree with the plain numpy inner
product for unit vectors, so vectors are kept euclidean-normalized.

Elementary operators act by
    T~(n) psi(y) = e_{2N}(n1.n2) e_N(n2.y) psi(y + n1),
with the twisted variant T(n) = (-1)^{N n1.n2} T~(n).  All phases are
computed from integer exponents modulo 2N, so identities hold to machine
precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EvenN,
    InputError,
    InvariantViolation,
    NonInvertibleE,
    NonSymmetricF,
    NotSymplecticModN,
)
from .rational import symplectic_gram


class HilbertTorus:
    """State space for Planck parameter N in half-dimension d."""

    def __init__(self, N: int, d: int):
        if N < 2 or d < 1:
            raise InputError("need N >= 2 and d >= 1")
        self.N = N
        self.d = d
        self.dim = N ** d
        # positions[i] = tuple of coordinates of flat index i (C order)
        self.positions = np.stack(
            np.unravel_index(np.arange(self.dim), (N,) * d), axis=1
        ).astype(np.int64)
        self._root2N = np.exp(2j * np.pi * np.arange(2 * N) / (2 * N))

    def flat(self, coords: np.ndarray) -> np.ndarray:
        """Flatten an (..., d) array of coordinates mod N."""
        coords = np.asarray(coords) % self.N
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for j in range(self.d):
            out = out * self.N + coords[..., j]
        return out

    def phase_2N(self, exponents: np.ndarray) -> np.ndarray:
        """exp(2 pi i e / 2N) for integer exponents."""
        return self._root2N[np.asarray(exponents) % (2 * self.N)]

    def __repr__(self):
        return f"HilbertTorus(N={self.N}, d={self.d})"


@dataclass
class QuantumOperator:
    """Dense operator on a HilbertTorus."""

    space: HilbertTorus
    mat: np.ndarray

    def dagger(self) -> "QuantumOperator":
        return QuantumOperator(self.space, self.mat.conj().T)

    def unitary_defect(self) -> float:
        eye = np.eye(self.space.dim)
        return float(np.abs(self.mat @ self.mat.conj().T - eye).max())

    def check_unitary(self, tol: float = 1e-9) -> None:
        defect = self.unitary_defect()
        if defect > tol:
            raise InvariantViolation(f"operator not unitary: defect {defect:.3e}")

    def __matmul__(self, other: "QuantumOperator") -> "QuantumOperator":
        return QuantumOperator(self.space, self.mat @ other.mat)


class GenPerm:
    """Generalized permutation operator: (M psi)(y) = val[y] psi(col[y])."""

    __slots__ = ("space", "col", "val")

    def __init__(self, space: HilbertTorus, col: np.ndarray, val: np.ndarray):
        self.space = space
        self.col = col
        self.val = val

    def dense(self) -> np.ndarray:
        m = np.zeros((self.space.dim, self.space.dim), dtype=np.complex128)
        m[np.arange(self.space.dim), self.col] = self.val
        return m

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.val * vec[self.col]

    def apply_right_of(self, dense: np.ndarray) -> np.ndarray:
        """dense @ M, where M is this genperm."""
        out = np.empty_like(dense)
        out[:, self.col] = dense * self.val
        return out

    def apply_left_of(self, dense: np.ndarray) -> np.ndarray:
        """M @ dense."""
        return self.val[:, None] * dense[self.col, :]

    def compose(self, other: "GenPerm") -> "GenPerm":
        """self @ other as operators: (self other) psi (y) = ..."""
        return GenPerm(
            self.space,
            other.col[self.col],
            self.val * other.val[self.col],
        )

    def trace(self) -> complex:
        fixed = self.col == np.arange(self.space.dim)
        return complex(self.val[fixed].sum())


def elementary_genperm(space: HilbertTorus, n, twisted: bool = True) -> GenPerm:
    n = [int(x) for x in n]
    if len(n) != 2 * space.d:
        raise InputError("frequency vector has wrong length")
    N, d = space.N, space.d
    n1, n2 = n[:d], n[d:]
    c = int(sum(a * b for a, b in zip(n1, n2)))
    const = (1 + N * N) * c if twisted else c
    col = space.flat(space.positions + np.array(n1, dtype=np.int64))
    expo = const + 2 * (space.positions @ np.array(n2, dtype=np.int64))
    return GenPerm(space, col, space.phase_2N(expo))


def elementary_op(space: HilbertTorus, n, twisted: bool = True) -> QuantumOperator:
    """T_N(n) (twisted) or T~_N(n) (untwisted) as a dense operator."""
    return QuantumOperator(space, elementary_genperm(space, n, twisted).dense())


def op_from_observable(space: HilbertTorus, f) -> QuantumOperator:
    """Op_N(f) = sum fhat(n) T~_N(n)."""
    acc = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rows = np.arange(space.dim)
    for n, c in f.terms:
        gp = elementary_genperm(space, n, twisted=False)
        acc[rows, gp.col] += c * gp.val
    return QuantumOperator(space, acc)


def generator_matrix(kind: str, param, d: int):
    """The classical Sp(2d) matrix quantized by propagator_generator."""
    ident = [[int(i == j) for j in range(d)] for i in range(d)]
    zero = [[0] * d for _ in range(d)]
    if kind == "upper":
        F = [[int(x) for x in row] for row in param]
        return [ident[i] + F[i] for i in range(d)] + [zero[i] + ident[i] for i in range(d)]
    if kind == "fourier":
        return [zero[i] + ident[i] for i in range(d)] + [
            [-x for x in ident[i]] + zero[i] for i in range(d)
        ]
    if kind == "gl":
        raise InputError("gl generator matrix needs a modulus; use generator_matrix_mod")
    raise InputError(f"unknown generator kind {kind!r}")


def generator_matrix_mod(kind: str, param, d: int, N: int):
    """Generator matrix for the operator at Planck parameter N.

    For 'gl' the inverse block is computed modulo N (odd N) or 2N (even
    N, where the elementary operators have period 2N), so the returned
    integer matrix intertwines exactly.
    """
    if kind == "gl":
        modulus = N if N % 2 else 2 * N
        E = [[int(x) for x in row] for row in param]
        Einv = _invert_mod(E, modulus)
        top = [[E[j][i] for j in range(d)] + [0] * d for i in range(d)]
        bot = [[0] * d + Einv[i] for i in range(d)]
        return top + bot
    return generator_matrix(kind, param, d)


def _invert_mod(M, N: int):
    d = len(M)
    aug = [[M[i][j] % N for j in range(d)] + [int(i == j) for j in range(d)] for i in range(d)]
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, d) if np.gcd(aug[i][c], N) == 1), None)
        if piv is None:
            raise NonInvertibleE("matrix not invertible mod N")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, N)
        aug[r] = [(x * inv) % N for x in aug[r]]
        for i in range(d):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % N for a, b in zip(aug[i], aug[r])]
        r += 1
    return [row[d:] for row in aug]


def propagator_generator(space: HilbertTorus, kind: str, param=None) -> QuantumOperator:
    """Quantization of one Hua generator (quadratic phase / GL / Fourier)."""
    N, d, dim = space.N, space.d, space.dim
    if kind == "upper":
        F = np.array(param, dtype=np.int64)
        if F.shape != (d, d) or not np.array_equal(F, F.T):
            raise NonSymmetricF("upper generator needs a symmetric integer F")
        quad = np.einsum("id,de,ie->i", space.positions, F, space.positions)
        vals = space.phase_2N((1 + N * N) * quad)
        return QuantumOperator(space, np.diag(vals))
    if kind == "gl":
        E = np.array(param, dtype=np.int64)
        if E.shape != (d, d):
            raise InputError("gl generator needs a d x d matrix")
        _invert_mod([[int(x) for x in row] for row in E], N)  # raises if singular
        cols = space.flat(space.positions @ E.T)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[np.arange(dim), cols] = 1.0
        return QuantumOperator(space, mat)
    if kind == "fourier":
        xy = space.positions @ space.positions.T
        mat = space.phase_2N(2 * xy) / N ** (d / 2)
        return QuantumOperator(space, mat)
    raise InputError(f"unknown generator kind {kind!r}")


def propagator_word(space: HilbertTorus, word) -> QuantumOperator:
    """Product of generator operators for a word [(kind, param), ...]."""
    out = np.eye(space.dim, dtype=np.complex128)
    for kind, param in word:
        out = out @ propagator_generator(space, kind, param).mat
    return QuantumOperator(space, out)


def _check_symplectic_mod(entries, N: int, d: int) -> None:
    J = symplectic_gram(d)
    A = [[int(x) % N for x in row] for row in entries]
    AJ = [[sum(A[i][k] * J[k][j] for k in range(2 * d)) % N for j in range(2 * d)]
          for i in range(2 * d)]
    AJAt = [[sum(AJ[i][k] * A[j][k] for k in range(2 * d)) % N for j in range(2 * d)]
            for i in range(2 * d)]
    if AJAt != [[x % N for x in row] for row in J]:
        raise NotSymplecticModN("matrix is not symplectic mod N")


def averaged_intertwiner(space: HilbertTorus, entries):
    """F(pi, pi^A) = sum_n T(n) T(-nA) over n in (Z/N)^{2d}, plus |ker(A-I)|.

    Only for odd N.  Uses T(n)T(-nA) = e_N(-h w(n, nA)) T(n(I-A)) with
    h = (N^2+1)/2, accumulates weights per residue k = n(I-A), and fills
    the dense matrix with one size-N^d DFT per k1 block.
    """
    N, d, dim = space.N, space.d, space.dim
    if N % 2 == 0:
        raise EvenN("averaging formula needs odd N")
    _check_symplectic_mod(entries, N, d)
    A = np.array([[int(x) for x in row] for row in entries], dtype=np.int64)
    twod = 2 * d
    h = (N * N + 1) // 2

    # all n in [0, N)^{2d}
    grids = np.unravel_index(np.arange(N ** twod), (N,) * twod)
    ns = np.stack(grids, axis=1).astype(np.int64)
    nA = ns @ A
    J = np.array(symplectic_gram(d), dtype=np.int64)
    w_n_nA = np.einsum("ij,ij->i", ns @ J, nA)
    phases = np.exp(-2j * np.pi * ((h * w_n_nA) % N) / N)
    k = (ns - nA) % N
    kflat = np.zeros(len(k), dtype=np.int64)
    for j in range(twod):
        kflat = kflat * N + k[:, j]
    weights = np.zeros(N ** twod, dtype=np.complex128)
    np.add.at(weights, kflat, phases)
    ker_size = int((k == 0).all(axis=1).sum())

    # fill F: for k = (k1, k2), T(k)[y, y+k1] = (-1)^{k1.k2} e_2N(k1.k2) e_N(k2.y)
    W = weights.reshape((N,) * twod)
    F = np.zeros((dim, dim), dtype=np.complex128)
    rows = np.arange(dim)
    k2_positions = space.positions  # reuse enumeration of (Z/N)^d
    for k1_flat in range(dim):
        k1 = k2_positions[k1_flat]
        block = W[tuple(k1)]  # shape (N,)*d indexed by k2
        k1k2 = k2_positions @ k1
        twist = space.phase_2N((N + 1) * k1k2).reshape((N,) * d)
        v = (N ** d) * np.fft.ifftn(block * twist)
        cols = space.flat(space.positions + k1)
        F[rows, cols] += v.reshape(-1)
    return F, ker_size


def propagator_averaging(space: HilbertTorus, entries):
    """U_N(A) by Heisenberg averaging, phase fixed by c(A) positive real.

    Returns (U, c_abs).  Checks |c|^2 = N^{2d} |ker_N(A - I)| and unitarity.
    """
    N, d = space.N, space.d
    F, ker_size = averaged_intertwiner(space, entries)
    c2_expected = float(N) ** (2 * d) * ker_size
    gram = F @ F.conj().T
    c2_measured = float(gram.trace().real) / space.dim
    if abs(c2_measured - c2_expected) > 1e-8 * c2_expected:
        raise InvariantViolation(
            f"|c|^2 = {c2_measured!r} != N^2d |ker| = {c2_expected!r}"
        )
    off = gram - c2_expected * np.eye(space.dim)
    if np.abs(off).max() > 1e-7 * c2_expected:
        raise InvariantViolation("averaged intertwiner is not proportional to unitary")
    U = QuantumOperator(space, F / np.sqrt(c2_expected))
    U.check_unitary(1e-9)
    return U, float(np.sqrt(c2_expected))


def egorov_defect_for(space: HilbertTorus, U: np.ndarray, entries, n) -> float:
    """Frobenius norm of T(n) U - U T(nA) (unitarily equivalent to the
    defect of U^-1 T(n) U - T(nA)).

    nA is kept as an exact integer vector: for even N the twisted
    operators only have period 2N, so reducing mod N would corrupt the
    comparison.
    """
    nA = [int(sum(n[i] * entries[i][j] for i in range(len(n)))) for j in range(len(n))]
    lhs = elementary_genperm(space, n).apply_left_of(U)
    rhs = elementary_genperm(space, nA).apply_right_of(U)
    return float(np.linalg.norm(lhs - rhs))


def verify_egorov(space: HilbertTorus, U, entries, sample: int = 512, seed: int = 0) -> float:
    """Max intertwining deviation over a spanning set of frequencies.

    All n in [0, N)^{2d} when that grid is small, otherwise the standard
    basis vectors plus a seeded random sample.
    """
    mat = U.mat if isinstance(U, QuantumOperator) else U
    N, twod = space.N, 2 * space.d
    total = N ** twod
    if total <= 4096:
        candidates = [
            list(np.unravel_index(i, (N,) * twod)) for i in range(total)
        ]
    else:
        rng = np.random.default_rng(seed)
        candidates = [list(row) for row in np.eye(twod, dtype=int)]
        candidates += [list(rng.integers(0, N, twod)) for _ in range(sample)]
    worst = 0.0
    for n in candidates:
        worst = max(worst, egorov_defect_for(space, mat, entries, n))
    return worst


def normalized_delta(space: HilbertTorus, point=None) -> np.ndarray:
    """The unit-norm position state (N^{d/2} delta in the paper's norm)."""
    vec = np.zeros(space.dim, dtype=np.complex128)
    idx = 0 if point is None else int(space.flat(np.array([point]))[0])
    vec[idx] = 1.0
    return vec


def matrix_element(space: HilbertTorus, op_mat: np.ndarray, psi: np.ndarray, phi=None) -> complex:
    """<Op psi, phi> for euclidean-unit vectors (paper normalization agrees)."""
    if phi is None:
        phi = psi
    return complex(np.vdot(phi, op_mat @ psi))
