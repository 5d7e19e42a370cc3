"""Experiment harness: variance, moments, classification, reproducibility."""

import numpy as np
import pytest

from torusq import hecke, statslab
from torusq.errors import BadPrime, MultiOrbitPrime, NotAQUE
from torusq.rational import ObservableSpec, sharp_coefficients


def standard_observable(A):
    n1 = tuple([1] + [0] * (2 * A.d - 1))
    n2 = tuple([0] * (2 * A.d - 1) + [1])
    return ObservableSpec([(n1, 1.0), (n2, 1.0)])


def test_variance_decomposition_exact(catmap, basis_at):
    # S2 computed directly equals the sharp-coefficient/mixed-moment
    # decomposition at fixed p (identity, not asymptotic)
    f = standard_observable(catmap)
    for p in (13, 17):
        bp = basis_at(catmap, p)
        direct = statslab.variance(catmap, f, p, bp)
        via = statslab.variance_via_sharp(catmap, f, p, bp)
        assert abs(direct - via) < 1e-9


def test_variance_converges_to_Vf(catmap, basis_at):
    f = standard_observable(catmap)
    _, _, dfv, Vf = sharp_coefficients(catmap, f)
    assert (dfv, Vf) == (1, 2.0)
    for p in (41, 43, 47):
        S2 = statslab.variance(catmap, f, p, basis_at(catmap, p))
        assert abs(p * S2 - Vf) <= 20 / p


def test_variance_cancelling_observable(catmap, basis_at):
    n = (1, 0)
    f = ObservableSpec([(n, 1.0), (catmap.act(n), -1.0)])
    for p in (13, 17):
        S2 = statslab.variance(catmap, f, p, basis_at(catmap, p))
        assert p * S2 <= 10 / p


def test_variance_guards(block_scar, catmap):
    f = standard_observable(catmap)
    with pytest.raises(NotAQUE):
        statslab.variance(block_scar, standard_observable(block_scar), 11)
    with pytest.raises(BadPrime):
        statslab.variance(catmap, f, 3)  # divides disc = 12
    # N0 guard: p = 3 divides N(Q((1,0))) anyway; engineered example:
    # Q((1,0)) = 1, Q((0,1)) = -3 -> difference norm 4, so p = 2 is the
    # only extra exclusion and stays rejected as even
    with pytest.raises(BadPrime):
        statslab.check_good_prime(catmap, 2, f)


def test_excluded_norms(catmap):
    f = standard_observable(catmap)
    norms = statslab.excluded_norms(catmap, f)
    # |N(1)| = 1, |N(-3)| = 3, |N(1 - (-3))| = 4
    assert norms == {1, 3, 4}


def test_mixed_moment_diagonal_and_invariance(catmap, basis_at):
    p = 17
    bp = basis_at(catmap, p)
    n = (1, 0)
    diag = statslab.mixed_moment(catmap, n, n, p, bp)
    assert diag.imag == pytest.approx(0.0, abs=1e-12)
    assert diag.real >= 0
    assert abs(p * diag - 1) <= 5 / p
    # m = nA gives the same elements: limit 1 as the diagonal case
    mAd = statslab.mixed_moment(catmap, n, catmap.act(n), p, bp)
    assert abs(mAd - diag) < 1e-12
    # distinct Q values: down by one extra power of p
    off = statslab.mixed_moment(catmap, (1, 0), (0, 1), p, bp)
    assert abs(off) * p ** 2 <= 10


def test_fourth_moment(catmap, basis_at):
    for p in (13, 23):
        bp = basis_at(catmap, p)
        m4 = statslab.fourth_moment(catmap, (1, 0), p, bp)
        assert abs(p * p * m4 - 2) <= 10 / np.sqrt(p)


def test_fourth_moment_multi_orbit_rejected(sp4, basis_at):
    with pytest.raises(MultiOrbitPrime):
        statslab.fourth_moment(sp4, (1, 0, 0, 0), 7, basis_at(sp4, 7))


def test_normalized_elements(catmap, basis_at):
    f = standard_observable(catmap)
    p = 41
    w, dfv, var = statslab.normalized_elements(catmap, f, p, basis_at(catmap, p))
    assert dfv == 1
    # density-one subset: at most 2 vectors dropped
    assert len(w) >= p - 2
    assert abs(np.mean(w)) <= 5 / np.sqrt(p)  # mean -> 0 (trace formula)
    assert abs(var - 2.0) < 1.0               # variance -> V(f) = 2


def test_classify_prime_quartic_family(phi10):
    # P_A = Phi_10: reduced polynomial t^2 - t - 1, disc 5: p in P_2 iff
    # 5 is a QR mod p (Euler criterion as the oracle)
    for p in [7, 11, 13, 19, 29, 31, 41]:
        k, pattern = statslab.classify_prime(phi10, p)
        is_square = pow(5, (p - 1) // 2, p) == 1
        assert (k == 2) == is_square
        assert pattern == ((1, 1) if is_square else (2,))


def test_classify_matches_orbit_count(catmap, sp4, phi10, block_scar):
    for A, primes in [(catmap, (5, 7, 11, 13)), (sp4, (7, 11, 13, 17)),
                      (phi10, (7, 11, 13)), (block_scar, (7, 11, 13))]:
        for p in primes:
            k, pattern = statslab.classify_prime(A, p)
            orbits = hecke.frobenius_orbits_mod_p(A, p)
            assert k == len(orbits)
            assert sorted(pattern) == sorted(o.d_orbit for o in orbits)


def test_degeneracy_stats(catmap, order4):
    rows = statslab.degeneracy_stats(order4, [5, 7, 9, 11])
    assert all(s == 4 for _, s, _ in rows)  # A^4 = I
    assert statslab.degeneracy_stats(catmap, [5])[0][1] == 3
    assert statslab.degeneracy_stats(catmap, [25])[0][1] == 15
    from torusq.rational import IntSymplectic

    assert statslab.degeneracy_stats(IntSymplectic([[1, 0], [0, 1]]), [7])[0][1] == 1


def test_parseval_guard(catmap, basis_at):
    # sum_i |<Op psi_i, psi_i>|^2 <= sum_i ||Op psi_i||^2 (Cauchy-Schwarz)
    from torusq.quantizer import HilbertTorus, op_from_observable

    p = 13
    _, basis = basis_at(catmap, p)
    f = standard_observable(catmap)
    op = op_from_observable(HilbertTorus(p, 1), f).mat
    diag = np.einsum("xi,xy,yi->i", basis.vectors.conj(), op, basis.vectors)
    norms = np.linalg.norm(op @ basis.vectors, axis=0) ** 2
    assert (np.abs(diag) ** 2 <= norms + 1e-12).all()


def test_experiment_run_hash_stable(catmap):
    f = standard_observable(catmap)
    r1 = statslab.ExperimentRun("catmap", catmap, [5, 7], f, seed=1)
    r2 = statslab.ExperimentRun("catmap", catmap, [5, 7], f, seed=1)
    assert r1.config_hash() == r2.config_hash()
    r3 = statslab.ExperimentRun("catmap", catmap, [5, 11], f, seed=1)
    assert r1.config_hash() != r3.config_hash()
