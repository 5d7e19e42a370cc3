"""Super-scar eigenfunctions localized on invariant isotropic manifolds.

Construction: for an invariant rational isotropic subspace E0 with
lattice Z0 = E0 cap Z^{2d}, the twisted operators T_p(n), n in Z0, form
an abelian group of order p^k (k = dim E0) for odd p, and the joint
eigenvalue-1 subspace V has dimension p^{d-k}.  V is invariant under
every Hecke operator and under U_p(A), so it carries Hecke
eigenfunctions whose matrix elements are exactly 1 on Z0 and exactly 0
on any m with w(Z0, m) != 0 mod p.

When E0 is Lagrangian (k = d) the space V is one-dimensional, the scar
state is unique, and no operator larger than a vector is ever built, so
the sweep scales to p ~ 100 and beyond.  For k < d the Hecke generators
are restricted to V, which requires dense propagators and is supported
at desk primes only (p^d <= ~4000).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expsums, hecke
from .errors import EmptyJointEigenspace, InputError, PreconditionError
from .exactla import in_row_span, rank
from .quantizer import HilbertTorus, elementary_genperm
from .rational import (
    IntSymplectic,
    ObservableSpec,
    rational_orbit_decomposition,
    scar_manifold,
)


@dataclass
class ScarState:
    p: int
    psi: np.ndarray
    z0: list
    x0: tuple
    e0_basis: list
    matrix: IntSymplectic

    @property
    def space(self) -> HilbertTorus:
        return HilbertTorus(self.p, self.matrix.d)


def _z0_projector_apply(space: HilbertTorus, z0, block: np.ndarray) -> np.ndarray:
    """Apply prod_i (1/p) sum_t T(t n_i) to the columns of block."""
    p = space.N
    out = block.copy()
    for row in z0:
        acc = np.zeros_like(out)
        for t in range(p):
            gp = elementary_genperm(space, [t * x for x in row], twisted=True)
            acc += gp.val[:, None] * out[gp.col, :]
        out = acc / p
    return out


def joint_one_eigenspace_dim(space: HilbertTorus, z0) -> int:
    """Exact dimension of the joint T(n)-eigenvalue-1 space: p^{d-k}."""
    p = space.N
    k = rank([[x % p for x in row] for row in z0]) if z0 else 0
    return p ** (space.d - k)


def build_scar(A: IntSymplectic, e0_basis, p: int, seed: int = 7) -> ScarState:
    """One Hecke-eigenfunction scar for the subspace E0 at prime p."""
    if p < 3 or p % 2 == 0 or any(p % r == 0 for r in range(3, int(p ** 0.5) + 1, 2)):
        raise PreconditionError("scar construction needs an odd prime")
    z0, x0 = scar_manifold(A, e0_basis)
    k = len(z0)
    if rank([[x % p for x in row] for row in z0]) != k:
        raise PreconditionError(f"Z0 degenerates mod p={p}; p too small")
    space = HilbertTorus(p, A.d)
    dim_v = p ** (A.d - k)

    rng = np.random.default_rng(seed)
    want = min(dim_v, 1) + (4 if dim_v > 1 else 0)
    block = rng.standard_normal((space.dim, max(want, 1))) + 1j * rng.standard_normal(
        (space.dim, max(want, 1))
    )
    proj = _z0_projector_apply(space, z0, block)
    norms = np.linalg.norm(proj, axis=0)
    if norms.max() < 1e-9:
        raise EmptyJointEigenspace("projector annihilated the sample block")

    if dim_v == 1:
        psi = proj[:, int(np.argmax(norms))]
        psi = psi / np.linalg.norm(psi)
        # phase convention: largest entry positive real
        idx = int(np.argmax(np.abs(psi)))
        psi = psi * (abs(psi[idx]) / psi[idx])
        return ScarState(p, psi, z0, x0, [list(r) for r in e0_basis], A)

    # k < d: build all of V, restrict the Hecke generators, refine jointly
    if space.dim > 2500:
        raise PreconditionError(
            "non-Lagrangian scar restriction needs p^d <= 2500 (dense propagators)"
        )
    proj_full = _z0_projector_apply(space, z0, np.eye(space.dim, dtype=np.complex128))
    u, s, _ = np.linalg.svd(proj_full)
    r = int((s > 0.5).sum())
    if r != dim_v:
        raise EmptyJointEigenspace(f"joint eigenspace rank {r}, expected {dim_v}")
    basis = u[:, :dim_v]
    grp = hecke.hecke_generators(A, p)
    ops = hecke.hecke_operators(space, grp)
    subspaces = [(basis, ())]
    for U, m in zip(ops, grp.orders):
        refined = []
        for sub, labels in subspaces:
            R = sub.conj().T @ U.mat @ sub
            kdim = R.shape[0]
            powers = np.empty((m, kdim, kdim), dtype=np.complex128)
            powers[0] = np.eye(kdim)
            for t in range(1, m):
                powers[t] = powers[t - 1] @ R
            for j in range(m):
                ph = np.exp(-2j * np.pi * j * np.arange(m) / m)
                P = np.tensordot(ph, powers, axes=(0, 0)) / m
                rj = int(round(float(P.trace().real)))
                if rj == 0:
                    continue
                uu, ss, _ = np.linalg.svd(P)
                refined.append((sub @ uu[:, :rj], labels + (j,)))
        subspaces = refined
    subspaces.sort(key=lambda t: t[1])
    psi = subspaces[0][0][:, 0]
    psi = psi / np.linalg.norm(psi)
    return ScarState(p, psi, z0, x0, [list(r) for r in e0_basis], A)


def starred_subspace(A: IntSymplectic, e0_basis) -> list:
    """Basis of E0* = sum of the partner orbits of those inside E0."""
    orbits = rational_orbit_decomposition(A)
    rows = []
    for o in orbits:
        if o.symmetric:
            continue
        inside = all(in_row_span(e0_basis, r) for r in o.basis)
        if inside:
            rows.extend(orbits[o.partner].basis)
    return rows


def classify_vector(z0, e0_star_basis, n) -> str:
    if all(x == 0 for x in n) or in_row_span(z0, list(n)):
        return "in_Z0"
    if e0_star_basis and in_row_span(e0_star_basis, list(n)):
        return "in_complement"
    return "generic"


def scar_spectrum(state: ScarState, n_list) -> list[dict]:
    """Matrix elements <T_p(n) psi, psi> with classification per vector."""
    space = state.space
    star = starred_subspace(state.matrix, state.e0_basis)
    rows = []
    for n in n_list:
        gp = elementary_genperm(space, n, twisted=True)
        val = complex(np.vdot(state.psi, gp.apply(state.psi)))
        rows.append(
            {
                "p": state.p,
                "n": tuple(int(x) for x in n),
                "class": classify_vector(state.z0, star, n),
                "value": val,
                "scaled": state.p ** 0.25 * abs(val),
            }
        )
    return rows


def x0_integral(z0, x0, n) -> complex:
    """integral over X0 of e_n: (-1)^{n1.n2} if n in Z0 else 0."""
    if all(x == 0 for x in n):
        return 1.0
    if not in_row_span(z0, list(n)):
        return 0.0
    d = len(n) // 2
    parity = sum(int(n[i]) * int(n[d + i]) for i in range(d)) % 2
    return float((-1) ** parity)


def scar_expectation(state: ScarState, f: ObservableSpec) -> complex:
    """<Op_p(f) psi, psi>."""
    space = state.space
    total = 0.0 + 0.0j
    for n, c in f.terms:
        gp = elementary_genperm(space, n, twisted=False)
        total += c * complex(np.vdot(state.psi, gp.apply(state.psi)))
    return total


def scar_measure_convergence(A: IntSymplectic, e0_basis, primes, f: ObservableSpec):
    """Per-prime deviation |<Op_p(f) psi, psi> - int_{X0} f dm|."""
    out = []
    for p in primes:
        state = build_scar(A, e0_basis, p)
        target = sum(
            c * x0_integral(state.z0, state.x0, n) for n, c in f.terms
        )
        value = scar_expectation(state, f)
        out.append((p, abs(value - target)))
    return out
