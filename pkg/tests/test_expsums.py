"""Exponential sums, matrix-element formulas, moments, statistics."""

import numpy as np
import pytest

from torusq import expsums, hecke
from torusq.errors import EmptySample, InputError, NotInSubfield
from torusq.ffield import MultCharacter
from torusq.quantizer import HilbertTorus


def nonzero_subfield(orbit, count=None):
    out = [x for x in expsums.subfield_elements(orbit) if not x.is_zero()]
    return out if count is None else out[:count]


def test_E_at_nu_zero(catmap):
    # character orthogonality minus the x = 1 term: -1/|C|
    for p in (5, 11):
        o = hecke.frobenius_orbits_mod_p(catmap, p)[0]
        m = o.group.order
        for j in (1, 2, m - 1):
            if (j + m // 2) % m == 0:
                continue
            val = expsums.eval_E(expsums.ExpSumSpec(o, o.field.zero(),
                                                    MultCharacter(o.group, j)))
            assert abs(val - (-1.0 / m)) < 1e-12


def test_eval_E_matches_all_characters(catmap):
    o = hecke.frobenius_orbits_mod_p(catmap, 7)[0]
    nu = nonzero_subfield(o)[0]
    vals = expsums.eval_E_all_characters(o, nu)
    for j in range(o.group.order):
        single = expsums.eval_E(expsums.ExpSumSpec(o, nu, MultCharacter(o.group, j)))
        assert abs(single - vals[j]) < 1e-12


def test_E_values_are_real(catmap):
    # conj(E(nu, chi)) = E(nu, chi) via x -> x^{-1}
    for p in (5, 11):
        o = hecke.frobenius_orbits_mod_p(catmap, p)[0]
        for nu in nonzero_subfield(o, 3):
            vals = expsums.eval_E_all_characters(o, nu)
            assert np.abs(vals.imag).max() < 1e-12


def test_q_mod_p_consistency_with_rational_Q(catmap):
    # reduction of the rational Q agrees with the mod-p form up to one
    # fixed unit (eigenvector scaling)
    from torusq.rational import quadratic_form_Q, rational_orbit_decomposition

    orbits_q = rational_orbit_decomposition(catmap)
    for p in (5, 7, 11, 13):
        o = hecke.frobenius_orbits_mod_p(catmap, p)[0]
        ratios = set()
        for n in [(1, 0), (0, 1), (1, 1), (2, 1), (3, -1)]:
            Qn = quadratic_form_Q(catmap, n, orbits_q)[0]
            # reduce Q(n) in Z[lambda] at lambda = o.lam
            reduced = o.field.zero()
            for i, c in enumerate(Qn.coeffs):
                reduced = reduced + o.field.element(c) * o.lam ** i
            mod_val = expsums.q_mod_p(o, n)
            if reduced.is_zero():
                assert mod_val.is_zero()
                continue
            ratios.add((mod_val / reduced).coeffs)
        assert len(ratios) == 1  # one fixed scaling unit


def test_q_mod_p_examples(catmap, block_scar):
    o = hecke.frobenius_orbits_mod_p(catmap, 5)[0]
    assert expsums.q_mod_p(o, (0, 0)).is_zero()
    assert expsums.q_mod_p(o, (2, 1)) == expsums.q_mod_p(o, catmap.act((2, 1)))
    # vanishing projection -> Q component zero (block fixture: n in E0)
    orbits = hecke.frobenius_orbits_mod_p(block_scar, 11)
    n = (1, 0, 0, 0)
    for o in orbits:
        if o.projection_vanishes(n):
            continue
        # n in E_theta only: one pairing zero makes Q zero
        assert expsums.q_mod_p(o, n).is_zero()


def test_matrix_elements_direct_basics(catmap, basis_at):
    p = 7
    _, basis = basis_at(catmap, p)
    sp = HilbertTorus(p, 1)
    ones = expsums.matrix_elements_direct(sp, basis, (0, 0))
    assert np.abs(ones - 1).max() < 1e-12
    # T depends on n mod p (odd p): n = 0 mod p equals the n = 0 case
    same = expsums.matrix_elements_direct(sp, basis, (7, 14))
    assert np.abs(same - 1).max() < 1e-12
    # mean over the basis = trace / p = 0 for n != 0 mod p
    vals = expsums.matrix_elements_direct(sp, basis, (1, 2))
    assert abs(vals.mean()) < 1e-12


def test_formula_matches_direct_per_label(catmap, sp4, basis_at):
    rng = np.random.default_rng(77)
    for A, primes in [(catmap, (5, 7, 11, 13)), (sp4, (7, 11, 13))]:
        for p in primes:
            orbits, basis = basis_at(A, p)
            sp = HilbertTorus(p, A.d)
            keep = ~np.array(basis.quad_flags)
            for _ in range(10):
                n = [int(x) for x in rng.integers(0, p, 2 * A.d)]
                direct = expsums.matrix_elements_direct(sp, basis, n)
                formula = expsums.matrix_elements_formula(orbits, basis, n)
                assert np.abs(direct[keep] - formula[keep]).max() < 1e-8


def test_formula_multiset_matches(catmap, basis_at):
    # the acceptance-style invariant check, label-free
    p = 11
    orbits, basis = basis_at(catmap, p)
    sp = HilbertTorus(p, 1)
    keep = ~np.array(basis.quad_flags)
    n = (1, 3)
    direct = np.sort_complex(np.round(
        expsums.matrix_elements_direct(sp, basis, n)[keep], 9))
    formula = np.sort_complex(np.round(
        expsums.matrix_elements_formula(orbits, basis, n)[keep], 9))
    assert np.abs(direct - formula).max() < 1e-8


def test_quad_vector_bound(catmap, basis_at):
    # |<T(n) psi, psi>| <= 2/sqrt(q) for quad-flagged vectors, Q(n) != 0
    p = 11
    orbits, basis = basis_at(catmap, p)
    sp = HilbertTorus(p, 1)
    quad_idx = [i for i, q in enumerate(basis.quad_flags) if q]
    assert len(quad_idx) == 2
    for n in [(1, 0), (2, 3), (1, 1)]:
        if expsums.q_mod_p(orbits[0], n).is_zero():
            continue
        vals = expsums.matrix_elements_direct(sp, basis, n)
        for i in quad_idx:
            assert abs(vals[i]) <= 2 / np.sqrt(p) + 1e-9


def test_weil_bound_small_sweep():
    for p, k in [(5, 1), (7, 1), (3, 2), (11, 1)]:
        q = p ** k
        for sym in (True, False):
            orb = expsums.SyntheticOrbit(p, k, sym)
            m = orb.group.order
            for nu in nonzero_subfield(orb):
                vals = expsums.eval_E_all_characters(orb, nu)
                for j in range(m):
                    if j == m // 2:
                        continue
                    assert np.sqrt(q) * abs(vals[j]) <= 2 + 10 / np.sqrt(q)


def test_second_moment_identity(catmap):
    # (1/q) sum_chi E(nu,chi) conj(E(mu,chi)) = (|C|-1)/(q|C|) at nu = mu,
    # and equals the collapsed closed form in general
    for p in (5, 13):
        o = hecke.frobenius_orbits_mod_p(catmap, p)[0]
        nus = nonzero_subfield(o, 3)
        m = o.group.order
        diag = expsums.second_moment_characters(o, nus[0], nus[0])
        assert abs(diag - (m - 1) / (p * m)) < 1e-12
        for mu in nus[1:]:
            lhs = expsums.second_moment_characters(o, nus[0], mu)
            rhs = expsums.second_moment_closed_form(o, nus[0], mu)
            assert abs(lhs - rhs) < 1e-12
            assert abs(lhs) <= 2.0 / p ** 1.5  # well below the diagonal


def test_kloosterman_bound_and_symmetry(catmap):
    for p in (5, 7, 13):
        for o in [hecke.frobenius_orbits_mod_p(catmap, p)[0],
                  expsums.SyntheticOrbit(p, 1, True),
                  expsums.SyntheticOrbit(p, 1, False)]:
            sums = {}
            for nu in nonzero_subfield(o):
                assert expsums.kloosterman_check(o, nu) <= 1.0 + 1e-12
    # conjugate symmetry: S(-a) = conj(S(a)) (e_q(-x) = conj e_q(x))
    o = expsums.SyntheticOrbit(7, 1, False)
    from torusq.ffield import additive_character

    def raw_sum(nu):
        total = 0j
        x = o.field.one()
        for _ in range(o.group.order):
            total += additive_character(nu * o.kappa * 2 * (x - x.inverse()),
                                        o.d_orbit)
            x = x * o.group.generator
        return total

    a = o.field.element(3)
    assert abs(raw_sum(-a) - np.conj(raw_sum(a))) < 1e-12


def test_kloosterman_rejects_zero():
    o = expsums.SyntheticOrbit(5, 1, False)
    with pytest.raises(InputError):
        expsums.kloosterman_check(o, o.field.zero())


def test_nu_must_be_in_subfield():
    orb = expsums.SyntheticOrbit(5, 1, True)  # ambient F_25, subfield F_5
    t = orb.field.gen()
    with pytest.raises(NotInSubfield):
        expsums.eval_E_all_characters(orb, t)


def test_sato_tate_selftest():
    # synthetic semicircle samples by inverse-CDF: KS must shrink
    rng = np.random.default_rng(1)
    grid = np.linspace(-2, 2, 20001)
    cdf = expsums.semicircle_cdf(grid)
    small = np.interp(rng.uniform(0, 1, 100), cdf, grid)
    large = np.interp(rng.uniform(0, 1, 10000), cdf, grid)
    ks_small, _ = expsums.sato_tate_stats(small)
    ks_large, hist = expsums.sato_tate_stats(large)
    assert ks_large < ks_small
    assert ks_large < 0.02
    assert hist[0].sum() == 10000
    # degenerate input sanity: constant samples are far from semicircle
    ks_const, _ = expsums.sato_tate_stats(np.zeros(50))
    assert ks_const > 0.4
    with pytest.raises(EmptySample):
        expsums.sato_tate_stats([])


def test_semicircle_cdf_endpoints():
    assert abs(expsums.semicircle_cdf(np.array([-2.0]))[0]) < 1e-12
    assert abs(expsums.semicircle_cdf(np.array([2.0]))[0] - 1) < 1e-12
    assert abs(expsums.semicircle_cdf(np.array([0.0]))[0] - 0.5) < 1e-12
