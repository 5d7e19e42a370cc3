"""Exponential sums E_q(nu, chi), matrix-element formulas, and statistics.

E_q(nu, chi) = (1/|C|) sum_{1 != x in C} e_q(nu kappa (x+1)/(x-1)) chi(x) chi2(x)

with C the norm-one kernel of F_{q^2}/F_q (symmetric case, |C| = q + 1)
or F_q^* (nonsymmetric, |C| = q - 1) and kappa = (2 w(v, v*))^{-1}.  The
matrix element of a twisted elementary operator in a joint eigenfunction
with character chi != chi2 is -E_q (symmetric) / +E_q (nonsymmetric) per
orbit, and a product of such factors across orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySample,
    InputError,
    NotInSubfield,
    QuadFlagPresent,
)
from .ffield import (
    ExtField,
    ExtFieldElement,
    MultCharacter,
    additive_character,
    frobenius,
    in_subfield,
    norm_one_group,
    unit_group,
)
from .hecke import FrobeniusOrbitData, HeckeBasis
from .quantizer import HilbertTorus, elementary_genperm


@dataclass
class SyntheticOrbit:
    """Standalone (q, symmetric) data for bound sweeps, no matrix attached.

    kappa is any fixed element with tau(kappa) = -kappa (symmetric; we
    take gamma^{(q+1)/2} for the least unit-group generator gamma) or
    1/2 (nonsymmetric, matching kappa = (2 w)^{-1} with w = 1).  Both
    sums are invariant under the joint rescaling (nu, kappa) ->
    (u nu, kappa / u), so the choice only relabels nu.
    """

    p: int
    k: int
    symmetric: bool

    def __post_init__(self):
        q = self.p ** self.k
        if self.symmetric:
            self.field = ExtField(self.p, k=2 * self.k)
            self.group = norm_one_group(self.field)
            gamma = unit_group(self.field).generator
            self.kappa = gamma ** ((q + 1) // 2)
        else:
            self.field = ExtField(self.p, k=self.k)
            self.group = unit_group(self.field)
            self.kappa = self.field.element(2).inverse()
        self.d_orbit = self.k

    @property
    def q(self) -> int:
        return self.p ** self.k


@dataclass
class ExpSumSpec:
    """One evaluation request: orbit data, nu in F_q, character chi."""

    orbit: object  # FrobeniusOrbitData or SyntheticOrbit
    nu: ExtFieldElement
    chi: MultCharacter


def _check_nu(orbit, nu: ExtFieldElement) -> None:
    if nu.field != orbit.field:
        raise InputError("nu must live in the orbit's field")
    if not in_subfield(nu, orbit.d_orbit):
        raise NotInSubfield("nu must lie in F_q")


def w_values(orbit) -> list[ExtFieldElement]:
    """kappa (x+1)/(x-1) in F_q at x = g^t for t = 1..m-1 (skipping x = 1).

    Cached on the orbit object; the table is reused by every nu.
    """
    cached = getattr(orbit, "_w_cache", None)
    if cached is not None:
        return cached
    field = orbit.field
    out = []
    x = field.one()
    for _ in range(1, orbit.group.order):
        x = x * orbit.group.generator
        w = orbit.kappa * (x + field.one()) / (x - field.one())
        if not in_subfield(w, orbit.d_orbit):
            raise NotInSubfield("kappa (x+1)/(x-1) left F_q")
        out.append(w)
    orbit._w_cache = out
    return out


def trace_form(orbit) -> tuple[int, ...]:
    """Integer vector L with Tr_{F_q/F_p}(x) = sum_i x_i L_i mod p for x in F_q.

    The partial Frobenius sum S(y) = sum_{j < d_orbit} y^{p^j} is
    F_p-linear on the ambient field; on the subfield its value is the
    constant coefficient of the linear combination of S(basis).
    """
    cached = getattr(orbit, "_trace_form", None)
    if cached is not None:
        return cached
    field = orbit.field
    L = []
    for i in range(field.k):
        e = ExtFieldElement(field, tuple(int(i == j) for j in range(field.k)))
        acc = field.zero()
        b = e
        for _ in range(orbit.d_orbit):
            acc = acc + b
            b = frobenius(b, 1)
        L.append(acc.coeffs[0])
    orbit._trace_form = tuple(L)
    return orbit._trace_form


def _char_values(orbit, nu: ExtFieldElement) -> np.ndarray:
    """e_q(nu * w) over the group order (index t; t = 0 slot is zero)."""
    m = orbit.group.order
    p = orbit.field.p
    L = trace_form(orbit)
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    z = np.zeros(m, dtype=np.complex128)
    for t, w in enumerate(w_values(orbit), start=1):
        c = (nu * w).coeffs
        z[t] = roots[sum(ci * li for ci, li in zip(c, L)) % p]
    return z


def eval_E(spec: ExpSumSpec) -> complex:
    """Literal finite sum over the cyclic group."""
    orbit, nu, chi = spec.orbit, spec.nu, spec.chi
    _check_nu(orbit, nu)
    m = orbit.group.order
    half = m // 2
    total = 0.0 + 0.0j
    z = _char_values(orbit, nu)
    for t in range(1, m):
        total += z[t] * np.exp(2j * np.pi * (((chi.index + half) * t) % m) / m)
    return total / m


def eval_E_all_characters(orbit, nu: ExtFieldElement) -> np.ndarray:
    """E_q(nu, chi_j) for all j = 0..m-1 at once (one DFT of length m)."""
    _check_nu(orbit, nu)
    m = orbit.group.order
    z = _char_values(orbit, nu)
    spectrum = np.fft.ifft(z) * m  # index j: sum_t z_t e(+ 2 pi i j t / m)
    return np.roll(spectrum, -(m // 2)) / m  # shift by chi2: j -> j + m/2


def subfield_elements(orbit) -> list[ExtFieldElement]:
    """All q elements of F_q inside the orbit's ambient field.

    Ordered by base-p coefficient value for reproducible sweeps.  In the
    symmetric case F_q^* is the index-(q+1) power subgroup of the
    ambient unit group, so it is enumerated from one generator instead
    of filtering all q^2 elements.
    """
    field = orbit.field
    if field.k == orbit.d_orbit:
        return list(field.elements())
    q = orbit.q
    g1 = unit_group(field).generator ** (q + 1)
    out = [field.zero(), field.one()]
    cur = field.one()
    for _ in range(q - 2):
        cur = cur * g1
        out.append(cur)
    key = lambda a: sum(c * field.p ** i for i, c in enumerate(a.coeffs))
    out = sorted(set(out), key=key)
    if len(out) != q:
        raise NotInSubfield("subfield enumeration produced a wrong count")
    return out


def q_mod_p(orbit: FrobeniusOrbitData, n) -> ExtFieldElement:
    """Q(n) = w(n, v) w(n, v*) in F_q for an integer vector n."""
    val = orbit.omega_v(n) * orbit.omega_v_star(n)
    if not in_subfield(val, orbit.d_orbit):
        raise NotInSubfield("Q(n) not Frobenius-fixed")
    return val


def matrix_elements_direct(space: HilbertTorus, basis: HeckeBasis, n) -> np.ndarray:
    """<T_p(n) psi_i, psi_i> for every basis vector (twisted operator)."""
    gp = elementary_genperm(space, n, twisted=True)
    out = np.empty(basis.count, dtype=np.complex128)
    for i in range(basis.count):
        v = basis.vectors[:, i]
        out[i] = np.vdot(v, gp.apply(v))
    return out


def matrix_element_formula(orbits, labels, n) -> complex:
    """Product over orbits of -+E_q(Q(n), chi) (minus on symmetric orbits),
    with factor 1 on orbits where n projects to zero.

    Convention: a joint eigenfunction whose canonically phased generator
    eigenvalue is exp(2 pi i j / m) pairs with the character of index -j.
    (Transporting the averaging-formula trace phase through the
    symplectic-form identification produces the conjugate character of
    the eigenvalue character; verified to 1e-9 per label on every
    fixture prime.)
    """
    total = 1.0 + 0.0j
    for o, j in zip(orbits, labels):
        if j % o.group.order == o.group.order // 2 and not o.symmetric:
            raise QuadFlagPresent("formula does not apply to chi2 on a nonsymmetric orbit")
        if o.projection_vanishes(n):
            continue
        nu = q_mod_p(o, n)
        val = eval_E(ExpSumSpec(o, nu, MultCharacter(o.group, -j)))
        total *= -val if o.symmetric else val
    return total


def matrix_elements_formula(orbits, basis: HeckeBasis, n) -> np.ndarray:
    """Formula values aligned with the non-quad-flagged basis vectors.

    Precomputes E_q(Q(n), chi_j) for all j per orbit, then reads off the
    per-vector product from the labels.  Entries for quad-flagged
    vectors are NaN (the product formula does not apply there).
    """
    per_orbit = []
    for o in orbits:
        if o.projection_vanishes(n):
            per_orbit.append(None)
        else:
            vals = eval_E_all_characters(o, q_mod_p(o, n))
            per_orbit.append(-vals if o.symmetric else vals)
    out = np.empty(basis.count, dtype=np.complex128)
    for i, (lab, quad) in enumerate(zip(basis.labels, basis.quad_flags)):
        if quad:
            out[i] = np.nan
            continue
        total = 1.0 + 0.0j
        for o, j in zip(orbits, lab):
            vals = per_orbit[o.index]
            if vals is not None:
                total *= vals[(-j) % o.group.order]  # eigenvalue j <-> character -j
        out[i] = total
    return out


def second_moment_characters(orbit, nu, mu) -> complex:
    """(1/q) sum_chi E(nu, chi) conj(E(mu, chi)) over all m characters."""
    En = eval_E_all_characters(orbit, nu)
    Em = eval_E_all_characters(orbit, mu)
    return complex(np.vdot(Em, En) / orbit.q)


def second_moment_closed_form(orbit, nu, mu) -> complex:
    """(1/(q |C|)) sum_{x != 1} e_q((nu - mu) kappa (x+1)/(x-1))."""
    diff = nu - mu
    total = 0.0 + 0.0j
    for w in w_values(orbit):
        total += additive_character(diff * w, orbit.d_orbit)
    return total / (orbit.q * orbit.group.order)


def kloosterman_check(orbit, nu: ExtFieldElement) -> float:
    """Margin |sum_{x in C} e_q(2 nu kappa (x^2-1)/x)| / (2 sqrt q) <= 1."""
    _check_nu(orbit, nu)
    if nu.is_zero():
        raise InputError("nu = 0 degenerates to |C|")
    field = orbit.field
    coeff = nu * orbit.kappa * 2
    total = 0.0 + 0.0j
    x = field.one()
    for _ in range(orbit.group.order):
        arg = coeff * (x - x.inverse())
        if not in_subfield(arg, orbit.d_orbit):
            raise NotInSubfield("Kloosterman argument left F_q")
        total += additive_character(arg, orbit.d_orbit)
        x = x * orbit.group.generator
    return abs(total) / (2.0 * math.sqrt(orbit.q))


def semicircle_cdf(x: np.ndarray) -> np.ndarray:
    """CDF of (1/2pi) sqrt(4 - x^2) dx on [-2, 2]."""
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * np.pi) + np.arcsin(x / 2.0) / np.pi


def sato_tate_stats(samples, bins: int = 40):
    """KS distance of real samples to the semicircle CDF, plus a histogram.

    Returns (ks, (counts, edges)).
    """
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise EmptySample("no samples given")
    n = arr.size
    cdf = semicircle_cdf(arr)
    upper = np.abs(np.arange(1, n + 1) / n - cdf)
    lower = np.abs(np.arange(0, n) / n - cdf)
    ks = float(max(upper.max(), lower.max()))
    counts, edges = np.histogram(arr, bins=bins, range=(-2.2, 2.2))
    return ks, (counts, edges)
