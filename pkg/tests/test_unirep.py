import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentumlab.errors import CapabilityError, InputError
from momentumlab.liealg import abelian_algebra, su2_algebra
from momentumlab.unirep import (
    UnitaryRep,
    d_pi,
    diagonal_abelian_rep,
    direct_sum,
    fock_ladders,
    generator_norm_bound,
    heisenberg_fock_rep,
    homomorphism_residual,
    kernel_directions,
    oscillator_fock_rep,
    pi_of_exp,
    spectral_sup,
    spectral_top,
    su2_spin_rep,
    zero_rep,
)


class TestConstruction:
    def test_non_skew_rejected(self):
        gens = np.array([np.eye(2, dtype=complex)])
        with pytest.raises(InputError):
            UnitaryRep(abelian_algebra(1), gens)

    def test_bracket_violation_rejected_when_not_truncated(self):
        # su(2) structure constants with commuting generators cannot close
        gens = np.array([1j * np.diag([1.0, -1.0]),
                         1j * np.diag([1.0, 0.0]),
                         1j * np.diag([0.0, 1.0])]).astype(complex)
        with pytest.raises(InputError):
            UnitaryRep(su2_algebra(), gens)

    def test_truncated_flag_reports_instead(self):
        rep = heisenberg_fock_rep(8)
        assert rep.truncated
        assert homomorphism_residual(rep) > 0

    def test_dimension_cap(self):
        with pytest.raises(CapabilityError):
            zero_rep(abelian_algebra(1), 513)

    def test_json_roundtrip(self):
        rep = su2_spin_rep(1)
        back = UnitaryRep.from_dict(rep.to_dict())
        np.testing.assert_allclose(back.generators, rep.generators)
        assert back.label == rep.label


class TestDerivedAction:
    def test_zero_coords_zero_matrix(self):
        rep = su2_spin_rep(0.5)
        np.testing.assert_array_equal(d_pi(rep, np.zeros(3)), np.zeros((2, 2)))

    def test_spin_half_e3_is_pauli_construction(self):
        rep = su2_spin_rep(0.5)
        np.testing.assert_allclose(d_pi(rep, [0.0, 0.0, 1.0]),
                                   -0.5j * np.diag([1.0, -1.0]), atol=1e-15)

    def test_linearity(self):
        rep = su2_spin_rep(1.5)
        rng = np.random.default_rng(0)
        for _ in range(10):
            x, y = rng.normal(size=3), rng.normal(size=3)
            lhs = d_pi(rep, x + y)
            rhs = d_pi(rep, x) + d_pi(rep, y)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            d_pi(su2_spin_rep(1), [1.0, 0.0])


class TestExponential:
    def test_identity_at_zero(self):
        rep = su2_spin_rep(1)
        np.testing.assert_allclose(pi_of_exp(rep, np.zeros(3)).matrix, np.eye(3),
                                   atol=1e-14)

    def test_spin_half_full_turn_is_minus_identity(self):
        rep = su2_spin_rep(0.5)
        U = pi_of_exp(rep, [0.0, 0.0, 2 * np.pi]).matrix
        np.testing.assert_allclose(U, -np.eye(2), atol=1e-12)

    def test_one_parameter_group_law(self):
        rep = su2_spin_rep(2)
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = rng.normal(size=3)
            s, t = rng.normal(size=2)
            lhs = pi_of_exp(rep, s * x).matrix @ pi_of_exp(rep, t * x).matrix
            rhs = pi_of_exp(rep, (s + t) * x).matrix
            assert np.max(np.abs(lhs - rhs)) <= 1e-9

    def test_unitarity(self):
        for rep in [su2_spin_rep(1), oscillator_fock_rep(16)]:
            rng = np.random.default_rng(2)
            for _ in range(5):
                g = pi_of_exp(rep, rng.normal(size=rep.algebra.dim))
                assert g.unitarity_defect() <= 1e-9

    def test_norm_continuity_rate(self):
        # ||exp(t A) - 1|| <= |t| ||A|| for bounded generators
        rep = su2_spin_rep(1.5)
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = rng.normal(size=3)
            t = rng.uniform(-1, 1)
            U = pi_of_exp(rep, t * x).matrix
            lhs = np.linalg.norm(U - np.eye(U.shape[0]), 2)
            rhs = abs(t) * np.linalg.norm(d_pi(rep, x), 2)
            assert lhs <= rhs + 1e-12


class TestHomomorphismResidual:
    def test_commuting_diagonals_exact(self):
        rep = diagonal_abelian_rep([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert homomorphism_residual(rep) == 0.0

    @pytest.mark.parametrize("twoj", range(1, 21))
    def test_spin_j_ladder_construction(self, twoj):
        assert homomorphism_residual(su2_spin_rep(twoj / 2)) <= 1e-10

    def test_truncated_oscillator_residual_at_top_level(self):
        n = 12
        rep = oscillator_fock_rep(n)
        res = homomorphism_residual(rep)
        assert res > 0.1  # [p, q] - i1 fails by n at the top corner
        # the defect of the (p, q) pair is concentrated in the top Fock level
        A_p, A_q = rep.generators[1], rep.generators[2]
        defect = A_p @ A_q - A_q @ A_p - 1j * np.eye(n)
        off_top = defect[:-1, :-1]
        assert np.linalg.norm(off_top, 2) <= 1e-12
        assert abs(defect[-1, -1]) > 1.0


class TestSpectralSup:
    def test_zero_direction(self):
        assert spectral_sup(su2_spin_rep(1), np.zeros(3)) == 0.0

    @pytest.mark.parametrize("twoj", [1, 2, 3, 4, 10, 20])
    def test_spin_j_weight_spectrum(self, twoj):
        j = twoj / 2
        # weight spectrum of i d_pi(e3) is {-j, ..., j}
        assert spectral_sup(su2_spin_rep(j), [0.0, 0.0, 1.0]) == pytest.approx(j, abs=1e-12)

    def test_positive_homogeneity(self):
        rep = su2_spin_rep(2)
        rng = np.random.default_rng(4)
        for _ in range(20):
            x = rng.normal(size=3)
            lam = rng.uniform(1e-3, 1e3)
            assert spectral_sup(rep, lam * x) == pytest.approx(
                lam * spectral_sup(rep, x), rel=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
    def test_lambda_max_subadditive(self, coords):
        rep = su2_spin_rep(1.5)
        x = np.array(coords[:3])
        y = np.array(coords[3:])
        assert spectral_sup(rep, x + y) <= spectral_sup(rep, x) + spectral_sup(rep, y) + 1e-9

    def test_rayleigh_consistency(self):
        rep = su2_spin_rep(2.5)
        rng = np.random.default_rng(5)
        from momentumlab.unirep import hermitian_part
        for _ in range(20):
            x = rng.normal(size=3)
            H = hermitian_part(rep, x)
            top = spectral_sup(rep, x)
            v = rng.normal(size=6) + 1j * rng.normal(size=6)
            v /= np.linalg.norm(v)
            assert np.real(np.vdot(v, H @ v)) <= top + 1e-10
            _, vec = spectral_top(rep, x)
            assert np.real(np.vdot(vec, H @ vec)) == pytest.approx(top, abs=1e-10)


class TestSeminormBound:
    def test_generator_norm_dominates(self):
        rng = np.random.default_rng(6)
        for rep in [su2_spin_rep(1), oscillator_fock_rep(24), heisenberg_fock_rep(16)]:
            C = generator_norm_bound(rep)
            for _ in range(20):
                x = rng.normal(size=rep.algebra.dim)
                assert np.linalg.norm(d_pi(rep, x), 2) <= C * np.max(np.abs(x)) + 1e-12


class TestKernelDirections:
    def test_faithful_rep_has_trivial_kernel(self):
        assert kernel_directions(su2_spin_rep(1)).shape[0] == 0

    def test_degenerate_direction_detected(self):
        # second abelian coordinate acts by zero
        rep = diagonal_abelian_rep([[1.0, 0.0], [2.0, 0.0]])
        K = kernel_directions(rep)
        assert K.shape == (1, 2)
        np.testing.assert_allclose(np.abs(K[0]), [0.0, 1.0], atol=1e-12)

    def test_zero_rep_kernel_is_everything(self):
        assert kernel_directions(zero_rep(abelian_algebra(3), 4)).shape == (3, 3)


class TestDirectSum:
    def test_block_structure_and_spectral_sup(self):
        a = su2_spin_rep(0.5)
        b = su2_spin_rep(1.5)
        s = direct_sum(a, b)
        assert s.hilbert_dim == 6
        rng = np.random.default_rng(7)
        for _ in range(10):
            x = rng.normal(size=3)
            assert spectral_sup(s, x) == pytest.approx(
                max(spectral_sup(a, x), spectral_sup(b, x)), abs=1e-12)


class TestFockLadders:
    def test_commutator_defect_only_at_top(self):
        n = 10
        a, adag, nhat = fock_ladders(n)
        comm = a @ adag - adag @ a
        expected = np.eye(n)
        expected[-1, -1] = -(n - 1)  # truncation artifact
        np.testing.assert_allclose(comm, expected, atol=1e-12)
        np.testing.assert_allclose(adag @ a, nhat, atol=1e-12)
