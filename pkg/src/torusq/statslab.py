"""Experiment harness: variance, moments, distributions, prime classes.

All experiments consume a Hecke basis at a "good" prime.  Good means:
odd, not dividing disc(P_A), and (for observable-dependent runs) not
dividing any of the nonzero integer norms N(Q(n)) or N(Q(n) - Q(m))
over the supported frequency pairs; that divisibility condition is the
exact content of the reduction bound N0(f).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import expsums, hecke, intpoly
from .errors import BadPrime, MultiOrbitPrime, NotAQUE, ZeroVector
from .gfpoly import deg as gf_deg, factor_monic, reduce as gf_reduce
from .quantizer import HilbertTorus, elementary_genperm
from .rational import (
    IntSymplectic,
    ObservableSpec,
    char_poly,
    is_aque,
    quadratic_form_Q,
    rational_orbit_decomposition,
    sharp_coefficients,
)


def hecke_basis_at(A: IntSymplectic, p: int):
    """(orbits, basis) at a good prime."""
    orbits = hecke.frobenius_orbits_mod_p(A, p)
    grp = hecke.hecke_generators(A, p, orbits)
    space = HilbertTorus(p, A.d)
    basis = hecke.hecke_diagonalize(space, grp)
    return orbits, basis


def diagonal_elements(space: HilbertTorus, basis, f: ObservableSpec) -> np.ndarray:
    """<Op_p(f) psi_i, psi_i> for every Hecke basis vector."""
    out = np.zeros(basis.count, dtype=np.complex128)
    for n, c in f.terms:
        gp = elementary_genperm(space, n, twisted=False)
        applied = gp.val[:, None] * basis.vectors[gp.col, :]
        out += c * np.einsum("xi,xi->i", basis.vectors.conj(), applied)
    return out


def _f_norm_abs(x) -> int:
    """|N_{F/Q}(x)| for a star-fixed ring element: N_{K/Q}(x) = N_{F/Q}(x)^2."""
    from math import isqrt

    full = abs(x.norm_to_Z())
    root = isqrt(full)
    assert root * root == full, "norm of a star-fixed element must be a square"
    return root


def excluded_norms(A: IntSymplectic, f: ObservableSpec, orbits=None) -> set[int]:
    """Nonzero integer norms whose prime divisors must be skipped (N0 guard)."""
    if orbits is None:
        orbits = rational_orbit_decomposition(A)
    out = set()
    qs = {}
    for n, _ in f.terms:
        qs[n] = quadratic_form_Q(A, n, orbits)
    keys = list(qs)
    for i, n in enumerate(keys):
        for o in orbits:
            v = _f_norm_abs(qs[n][o.index])
            if v:
                out.add(v)
        for m in keys[i + 1:]:
            for o in orbits:
                v = _f_norm_abs(qs[n][o.index] - qs[m][o.index])
                if v:
                    out.add(v)
    return out


def check_good_prime(A: IntSymplectic, p: int, f: ObservableSpec | None = None,
                     orbits=None) -> None:
    if p == 2 or intpoly.discriminant(char_poly(A)) % p == 0:
        raise BadPrime(f"p={p} is even or divides disc(P_A)")
    if f is not None:
        for norm in excluded_norms(A, f, orbits):
            if norm % p == 0:
                raise BadPrime(f"p={p} divides the norm {norm} (below N0(f))")


def variance(A: IntSymplectic, f: ObservableSpec, p: int, basis_pair=None) -> float:
    """Quantum variance S2 = p^{-d} sum_i |<Op(f) psi_i, psi_i> - fhat(0)|^2."""
    orbits_q = rational_orbit_decomposition(A)
    ok, _ = is_aque(A, orbits_q)
    if not ok:
        raise NotAQUE("variance requires no isotropic invariant subspaces")
    check_good_prime(A, p, f, orbits_q)
    if basis_pair is None:
        basis_pair = hecke_basis_at(A, p)
    _, basis = basis_pair
    space = HilbertTorus(p, A.d)
    elems = diagonal_elements(space, basis, f)
    f0 = f.coefficient((0,) * (2 * A.d))
    return float(np.mean(np.abs(elems - f0) ** 2))


def mixed_moment(A: IntSymplectic, n, m, p: int, basis_pair=None) -> complex:
    """p^{-d} sum_i <T(n) psi_i, psi_i> conj(<T(m) psi_i, psi_i>)."""
    check_good_prime(A, p)
    if basis_pair is None:
        basis_pair = hecke_basis_at(A, p)
    _, basis = basis_pair
    space = HilbertTorus(p, A.d)
    en = expsums.matrix_elements_direct(space, basis, n)
    em = expsums.matrix_elements_direct(space, basis, m)
    return complex(np.mean(en * em.conj()))


def fourth_moment(A: IntSymplectic, n, p: int, basis_pair=None) -> float:
    """p^{-d} sum_i |<T(n) psi_i, psi_i>|^4 on a single-orbit prime."""
    check_good_prime(A, p)
    if basis_pair is None:
        basis_pair = hecke_basis_at(A, p)
    orbits, basis = basis_pair
    if len(orbits) != 1:
        raise MultiOrbitPrime("fourth moment restricted to single-orbit primes")
    if expsums.q_mod_p(orbits[0], n).is_zero():
        raise ZeroVector("fourth moment needs Q(n) != 0")
    space = HilbertTorus(p, A.d)
    elems = expsums.matrix_elements_direct(space, basis, n)
    return float(np.mean(np.abs(elems) ** 4))


def variance_via_sharp(A: IntSymplectic, f: ObservableSpec, p: int,
                       basis_pair=None) -> float:
    """S2 recomputed from sharp coefficients and mixed moments (exact check).

    S2 = sum_{nu, mu != 0} fsharp(nu) conj(fsharp(mu)) S2(n_nu, n_mu)
    for any representatives n_nu; valid for p above the N0(f) guard.
    """
    orbits_q = rational_orbit_decomposition(A)
    sharp, dnu, _, _ = sharp_coefficients(A, f, orbits_q)
    reps = {}
    for n, _ in f.terms:
        if not any(n):
            continue
        key = tuple(quadratic_form_Q(A, n, orbits_q)[o.index].coeffs for o in orbits_q)
        reps.setdefault(key, n)
    if basis_pair is None:
        basis_pair = hecke_basis_at(A, p)
    total = 0.0 + 0.0j
    for key1, n1 in reps.items():
        for key2, n2 in reps.items():
            total += (
                sharp[key1]
                * np.conj(sharp[key2])
                * mixed_moment(A, n1, n2, p, basis_pair)
            )
    return float(total.real)


def normalized_elements(A: IntSymplectic, f: ObservableSpec, p: int,
                        basis_pair=None):
    """Samples W_i = p^{d_f/2}(<Op(f) psi_i, psi_i> - fhat(0)) over the
    density-one set of non-quad-flagged eigenfunctions.

    Returns (samples, d_f, empirical_variance_times_p^{d_f}).
    """
    orbits_q = rational_orbit_decomposition(A)
    ok, _ = is_aque(A, orbits_q)
    if not ok:
        raise NotAQUE("normalized elements require the AQUE case")
    check_good_prime(A, p, f, orbits_q)
    _, dnu, dfv, _ = sharp_coefficients(A, f, orbits_q)
    if dfv is None:
        raise ZeroVector("observable has vanishing sharp coefficients")
    if basis_pair is None:
        basis_pair = hecke_basis_at(A, p)
    _, basis = basis_pair
    space = HilbertTorus(p, A.d)
    elems = diagonal_elements(space, basis, f)
    f0 = f.coefficient((0,) * (2 * A.d))
    keep = ~np.array(basis.quad_flags)
    w = p ** (dfv / 2) * (elems[keep] - f0)
    return w, dfv, float(np.mean(np.abs(w) ** 2))


def classify_prime(A: IntSymplectic, p: int):
    """(k, degree pattern) of the symplectic-orbit decomposition mod p.

    k counts irreducible factors of the reduced polynomial of each
    self-reciprocal rational factor plus (once per pair) the factors of
    one member of each nonsymmetric pair.
    """
    check_good_prime(A, p)
    factors = intpoly.factor_over_Z(char_poly(A))
    degrees = []
    seen = set()
    for g in factors:
        if g in seen:
            continue
        if intpoly.is_self_reciprocal(g):
            seen.add(g)
            reduced = intpoly.reduced_symmetric_poly(g)
            parts = factor_monic(gf_reduce(reduced, p), p)
            degrees.extend(gf_deg(h) for h in parts)
        else:
            recip = intpoly.reciprocal_monic(g)
            seen.update((g, recip))
            parts = factor_monic(gf_reduce(g, p), p)
            degrees.extend(gf_deg(h) for h in parts)
    degrees.sort()
    return len(degrees), tuple(degrees)


def degeneracy_stats(A: IntSymplectic, n_values):
    """Rows (N, ord(A, N), N^d / ord): propagator degeneracy scale."""
    from .rational import ord_mod

    out = []
    for N in n_values:
        s = ord_mod(A, N)
        out.append((N, s, (N ** A.d) / s))
    return out


@dataclass
class ExperimentRun:
    """Reproducible experiment record: config in, scalar tables out."""

    fixture_id: str
    matrix: IntSymplectic
    primes: list[int]
    observable: ObservableSpec | None = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def config_hash(self) -> str:
        payload = {
            "fixture": self.fixture_id,
            "entries": self.matrix.entries,
            "primes": list(self.primes),
            "observable": [
                {"n": list(n), "re": c.real, "im": c.imag}
                for n, c in (self.observable.terms if self.observable else [])
            ],
            "seed": self.seed,
            "tolerances": self.tolerances,
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()
