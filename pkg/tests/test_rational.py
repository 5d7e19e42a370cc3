"""Rational structure of the classical map."""

from fractions import Fraction

import pytest

from torusq import rational
from torusq.errors import (
    InputError,
    NonSymmetricOrbitPresent,
    NotInvariant,
    NotIsotropic,
    RepeatedEigenvalues,
    ZeroVector,
)
from torusq.rational import IntSymplectic, ObservableSpec


def test_symplectic_validation():
    with pytest.raises(InputError):
        IntSymplectic([[1, 1], [0, 2]])  # det 2
    with pytest.raises(InputError):
        IntSymplectic([[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # odd size


def test_theta_flags(catmap, order4, block_scar, sp4):
    assert catmap.theta_flag        # EF^t = 2, GH^t = 6
    assert not order4.theta_flag    # EF^t = 1 odd
    assert block_scar.theta_flag
    assert sp4.theta_flag


def test_char_poly_rejects_repeated_eigenvalues():
    with pytest.raises(RepeatedEigenvalues):
        rational.char_poly(IntSymplectic([[1, 0], [0, 1]]))
    with pytest.raises(RepeatedEigenvalues):
        rational.char_poly(IntSymplectic([[1, 1], [0, 1]]))


def test_orbit_decomposition_catmap(catmap):
    orbits = rational.rational_orbit_decomposition(catmap)
    assert len(orbits) == 1
    assert orbits[0].symmetric and orbits[0].size == 2


def test_orbit_decomposition_block(block_scar):
    orbits = rational.rational_orbit_decomposition(block_scar)
    assert len(orbits) == 2
    assert all(not o.symmetric for o in orbits)
    assert {orbits[0].partner, orbits[1].partner} == {0, 1}
    # E_theta for t^2 - t - 1 is the (n1, 0) plane
    first = next(o for o in orbits if o.factor == (-1, -1, 1))
    assert first.basis == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_omega_orthogonality_pattern(block_scar, sp4):
    for A in (block_scar, sp4):
        orbits = rational.rational_orbit_decomposition(A)
        for o1 in orbits:
            for o2 in orbits:
                vanish = all(
                    rational.omega(r1, r2) == 0
                    for r1 in o1.basis
                    for r2 in o2.basis
                )
                assert vanish == (o2.index != o1.partner)


def test_is_aque_verdicts(catmap, order4, block_scar, sp4):
    assert rational.is_aque(catmap)[0]
    assert rational.is_aque(order4)[0]   # A^4 = I yet AQUE holds
    assert rational.is_aque(sp4)[0]
    ok, witness = rational.is_aque(block_scar)
    assert not ok
    assert witness == [[1, 0, 0, 0], [0, 1, 0, 0]]
    # witness is invariant and isotropic
    for row in witness:
        assert rational.omega(row, witness[0]) == 0
        from torusq.exactla import in_row_span

        assert in_row_span(witness, block_scar.act(row))


def test_quadratic_form_values_catmap(catmap):
    # with the adjugate eigenvector v = (2 - lambda, -1):
    # Q((1,0)) = 1, Q((0,1)) = (lambda-2)(2-lambda) = -(lambda^2-4lambda+4) = -3
    orbits = rational.rational_orbit_decomposition(catmap)
    Q10 = rational.quadratic_form_Q(catmap, (1, 0), orbits)[0]
    Q01 = rational.quadratic_form_Q(catmap, (0, 1), orbits)[0]
    assert Q10.coeffs == (1, 0)
    assert Q01.coeffs == (-3, 0)


def test_quadratic_form_invariance(catmap, sp4):
    import random

    rng = random.Random(12)
    for A in (catmap, sp4):
        orbits = rational.rational_orbit_decomposition(A)
        for _ in range(10):
            n = tuple(rng.randrange(-5, 6) for _ in range(2 * A.d))
            Qn = rational.quadratic_form_Q(A, n, orbits)
            QnA = rational.quadratic_form_Q(A, A.act(n), orbits)
            assert all(Qn[k] == QnA[k] for k in Qn)


def test_quadratic_form_invariance_under_powers(catmap):
    # Q(n B) = Q(n) for B = A^k (norm-one functions of A)
    orbits = rational.rational_orbit_decomposition(catmap)
    n = (2, -3)
    Qn = rational.quadratic_form_Q(catmap, n, orbits)
    m = n
    for _ in range(4):
        m = catmap.act(m)
        assert rational.quadratic_form_Q(catmap, m, orbits) == Qn


def test_quadratic_form_zero_iff_projection_zero(block_scar, sp4):
    # on the sp4 fixture Q has one component; zero only at n = 0
    orbits = rational.rational_orbit_decomposition(sp4)
    for n in [(1, 0, 0, 0), (0, 1, 2, 3), (5, -1, 0, 2)]:
        Q = rational.quadratic_form_Q(sp4, n, orbits)
        assert not Q[0].is_zero()
    assert rational.quadratic_form_Q(sp4, (0, 0, 0, 0), orbits)[0].is_zero()
    with pytest.raises(NonSymmetricOrbitPresent):
        rational.quadratic_form_Q(block_scar, (1, 0, 0, 0))


def test_star_involution_is_ring_map():
    # on Z[t]/(t^2 - 4t + 1): star(t) = 4 - t and star is multiplicative
    P = (1, -4, 1)
    x = rational.NumberRingElement(P, (0, 1))
    y = rational.NumberRingElement(P, (3, 2))
    assert x.star().coeffs == (4, -1)
    assert (x * y).star() == x.star() * y.star()
    assert (x + y).star() == x.star() + y.star()
    assert x.star().star() == x


def test_ring_norm():
    # N(lambda) = product of roots of t^2-4t+1 = 1; N(lambda - 2) = -3
    P = (1, -4, 1)
    lam = rational.NumberRingElement(P, (0, 1))
    assert lam.norm_to_Z() == 1
    assert (lam - rational.NumberRingElement(P, (2, 0))).norm_to_Z() == -3


def test_d_n_dimension(catmap, block_scar, sp4):
    # single quartic orbit: d_n = 2 for every n != 0
    assert rational.d_n_dimension(sp4, (1, 0, 0, 0)) == 2
    assert rational.d_n_dimension(sp4, (0, 0, 1, 5)) == 2
    # d = 1: d_n = 1
    assert rational.d_n_dimension(catmap, (1, 0)) == 1
    # block example: symplectic closure of (1,0,0,0) includes E_theta*
    assert rational.d_n_dimension(block_scar, (1, 0, 0, 0)) == 2
    with pytest.raises(ZeroVector):
        rational.d_n_dimension(catmap, (0, 0))


def test_sharp_coefficients_single_term(catmap):
    f = ObservableSpec([((1, 0), 1.0)])
    sharp, dnu, dfv, Vf = rational.sharp_coefficients(catmap, f)
    nonzero = {k: v for k, v in sharp.items() if abs(v) > 0}
    assert len(nonzero) == 1
    assert abs(list(nonzero.values())[0]) == 1.0
    assert dfv == 1 and Vf == 1.0


def test_sharp_coefficients_cancellation(catmap):
    # f = e_n - e_{nA} has all sharp coefficients zero
    n = (1, 0)
    f = ObservableSpec([(n, 1.0), (catmap.act(n), -1.0)])
    sharp, _, dfv, Vf = rational.sharp_coefficients(catmap, f)
    assert all(abs(v) < 1e-12 for v in sharp.values())
    assert dfv is None and Vf == 0.0


def test_sharp_coefficients_doubling(catmap):
    # f = e_n + e_{nA}: one key, value 2 (-1)^{n1.n2} fhat
    n = (1, 0)
    nA = catmap.act(n)  # (2, 1): parity of 2*1 even
    f = ObservableSpec([(n, 1.0), (nA, 1.0)])
    sharp, _, dfv, Vf = rational.sharp_coefficients(catmap, f)
    nonzero = [v for v in sharp.values() if abs(v) > 1e-12]
    assert len(nonzero) == 1 and abs(nonzero[0] - 2.0) < 1e-12
    assert Vf == 4.0


def test_scar_manifold_block(block_scar):
    z0, x0 = rational.scar_manifold(block_scar, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert z0 == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert x0 == (0, 0, 0, 0)


def test_scar_manifold_saturates(block_scar):
    z0, _ = rational.scar_manifold(block_scar, [[2, 0, 0, 0], [0, 2, 0, 0]])
    assert z0 == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_scar_manifold_even_products():
    # all basis products n1.n2 even -> x0 = 0
    A = IntSymplectic([[1, 0, 1, 1], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    z0, x0 = rational.scar_manifold(A, [[0, 0, 1, 1]])
    assert z0 == [[0, 0, 1, 1]]
    assert x0 == (0, 0, 0, 0)


def test_scar_manifold_half_shift():
    # unipotent upper generator with F = [[1,1],[1,1]]: n = (1,-1,1,0) is
    # invariant (n1 F = 0) and has odd n1.n2, forcing n . x0 = 1/2 mod 1
    A = IntSymplectic([[1, 0, 1, 1], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    n = [1, -1, 1, 0]
    z0, x0 = rational.scar_manifold(A, [n])
    assert z0 == [n] or z0 == [[-x for x in n]]
    dot = sum(Fraction(a) * b for a, b in zip(x0, z0[0]))
    assert dot % 1 == Fraction(1, 2)


def test_scar_manifold_rejects_bad_subspaces(block_scar):
    # invariant but not isotropic: the whole space
    with pytest.raises(NotIsotropic):
        rational.scar_manifold(
            block_scar,
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        )
    with pytest.raises(NotInvariant):
        rational.scar_manifold(block_scar, [[1, 0, 0, 1]])


def test_ord_mod(catmap, order4):
    assert rational.ord_mod(order4, 5) == 4      # A^4 = I
    assert rational.ord_mod(IntSymplectic([[1, 0], [0, 1]]), 7) == 1
    assert rational.ord_mod(catmap, 5) == 3      # iterate mod 5
    assert rational.ord_mod(catmap, 25) == 15


def test_eigenvector_pairing_cross_check(sp4):
    # projection-vanishing via rational solve agrees with the
    # eigenvector pairing w(n, v_theta*) = 0 on a reducible example
    B = IntSymplectic([[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, -1]])
    orbits = rational.rational_orbit_decomposition(B)
    for o in orbits:
        partner = orbits[o.partner]
        vstar = partner.eigenvector
        for n in [(1, 0, 0, 0), (0, 0, 2, 1), (1, 1, 1, 1)]:
            via_solve = rational.projection_vanishes(B, orbits, n, o.index)
            pairing = rational._omega_ring(n, vstar, partner.factor)
            assert via_solve == pairing.is_zero()
