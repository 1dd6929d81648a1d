import numpy as np
import pytest

from momentumlab.convex import support_function
from momentumlab.errors import InputError, TruncationWarning
from momentumlab.liealg import abelian_algebra, adjoint_of_exp, coadjoint
from momentumlab.momentum import (
    classify_boundedness,
    default_directions,
    equivariance_residual,
    momentum_map,
    momentum_set_estimate,
)
from momentumlab.unirep import (
    diagonal_abelian_rep,
    direct_sum,
    generator_norm_bound,
    heisenberg_fock_rep,
    oscillator_fock_rep,
    spectral_sup,
    su2_spin_rep,
    zero_rep,
)

TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


class TestMomentumMap:
    def test_zero_rep_maps_to_zero(self):
        rep = zero_rep(abelian_algebra(2), 4)
        rng = np.random.default_rng(0)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        np.testing.assert_array_equal(momentum_map(rep, v), np.zeros(2))

    def test_spin_half_highest_weight(self):
        # direct 2x2 computation: <(-i/2)sigma_3 e_1, e_1>/i = -1/2
        rep = su2_spin_rep(0.5)
        np.testing.assert_allclose(momentum_map(rep, [1.0, 0.0]),
                                   [0.0, 0.0, -0.5], atol=1e-15)

    def test_projective_invariance(self):
        rep = su2_spin_rep(1)
        rng = np.random.default_rng(1)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        lam = 3.0 - 4.0j
        assert np.max(np.abs(momentum_map(rep, lam * v) - momentum_map(rep, v))) <= 1e-12

    def test_values_are_real_rayleigh_data(self):
        rep = oscillator_fock_rep(16)
        rng = np.random.default_rng(2)
        v = rng.normal(size=16) + 1j * rng.normal(size=16)
        phi = momentum_map(rep, v)
        assert phi.dtype == float and phi.shape == (4,)

    def test_zero_vector_rejected(self):
        with pytest.raises(InputError):
            momentum_map(su2_spin_rep(1), np.zeros(3))


class TestDefaultDirections:
    def test_contains_signed_basis(self):
        D = default_directions(3, 10)
        np.testing.assert_array_equal(D[:3], np.eye(3))
        np.testing.assert_array_equal(D[3:6], -np.eye(3))

    def test_high_dim_deterministic(self):
        a = default_directions(5, 16, seed=3)
        b = default_directions(5, 16, seed=3)
        np.testing.assert_array_equal(a, b)


class TestMomentumSetEstimate:
    def test_zero_rep(self):
        rep = zero_rep(abelian_algebra(2), 3)
        est = momentum_set_estimate(rep, 8, np.eye(2), seed=0)
        np.testing.assert_allclose(est.inner.points, [[0.0, 0.0]], atol=1e-15)
        np.testing.assert_allclose(est.outer_values, 0.0, atol=1e-15)
        assert abs(est.gap) <= 1e-15

    @pytest.mark.parametrize("j", [0.5, 1, 2.5])
    def test_spin_support_attains_weight(self, j):
        rep = su2_spin_rep(j)
        dirs = default_directions(3, 0)  # just the signed basis
        est = momentum_set_estimate(rep, 16, dirs, seed=1)
        k = 2  # +e3 row
        assert est.outer_values[k] == pytest.approx(j, abs=1e-12)
        assert est.inner_values[k] == pytest.approx(j, abs=1e-10)

    def test_triangle_outer_matches_enumeration_oracle(self):
        rep = diagonal_abelian_rep(TRIANGLE)
        dirs = default_directions(2, 64)
        est = momentum_set_estimate(rep, 32, dirs, seed=2)
        for x, outer in zip(est.directions, est.outer_values):
            oracle = -np.min(TRIANGLE @ x)  # joint eigenbasis enumeration
            assert outer == pytest.approx(oracle, abs=1e-10)

    def test_sandwich_with_injection(self):
        rep = su2_spin_rep(2)
        dirs = default_directions(3, 64)
        est = momentum_set_estimate(rep, 25, dirs, seed=3)
        assert np.all(est.inner_values <= est.outer_values + 1e-10)
        assert np.max(est.outer_values - est.inner_values) <= 1e-10

    def test_without_injection_only_lower_bound(self):
        rep = su2_spin_rep(2)
        dirs = default_directions(3, 16)
        est = momentum_set_estimate(rep, 40, dirs, seed=4,
                                    inject_top_eigenvectors=False)
        assert np.all(est.inner_values <= est.outer_values + 1e-10)

    def test_deterministic_for_fixed_seed(self):
        rep = su2_spin_rep(1.5)
        dirs = default_directions(3, 8)
        a = momentum_set_estimate(rep, 20, dirs, seed=7)
        b = momentum_set_estimate(rep, 20, dirs, seed=7)
        np.testing.assert_array_equal(a.inner.points, b.inner.points)
        np.testing.assert_array_equal(a.outer_values, b.outer_values)

    def test_outer_estimate_is_bounded_set(self):
        # finite dimension: directional suprema are finite on all probes and
        # the inner hull carries no recession rays
        for rep in [su2_spin_rep(1), oscillator_fock_rep(12)]:
            dirs = default_directions(rep.algebra.dim, 8)
            est = momentum_set_estimate(rep, 10, dirs, seed=5)
            assert est.inner.is_bounded
            assert np.all(np.isfinite(est.outer_values))

    def test_csv_schema(self):
        rep = su2_spin_rep(0.5)
        est = momentum_set_estimate(rep, 4, np.eye(3), seed=0)
        lines = est.support_table_csv().strip().split("\n")
        assert lines[0] == "dir_0,dir_1,dir_2,inner,outer,gap"
        assert len(lines) == 4


class TestEquivariance:
    def test_zero_group_element(self):
        rep = su2_spin_rep(1)
        v = np.array([1.0, 2.0, -1.0j], dtype=complex)
        assert equivariance_residual(rep, np.zeros(3), v) <= 1e-14

    @pytest.mark.parametrize("j", [1, 2])
    def test_su2_random_trials(self, j):
        rep = su2_spin_rep(j)
        rng = np.random.default_rng(8)
        n = rep.hilbert_dim
        for _ in range(50):
            y = rng.normal(size=3)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            assert equivariance_residual(rep, y, v) <= 1e-9

    def test_truncated_rep_warns(self):
        rep = oscillator_fock_rep(12)
        rng = np.random.default_rng(9)
        v = np.zeros(12, dtype=complex)
        v[-2:] = rng.normal(size=2) + 1j * rng.normal(size=2)  # mass at the edge
        with pytest.warns(TruncationWarning):
            res = equivariance_residual(rep, 0.3 * np.ones(4), v)
        assert res > 1e-6  # truncation error is visible, reported not asserted


class TestCoadjointInvariance:
    def test_transported_support_values_match(self):
        rep = su2_spin_rep(1)
        dirs = default_directions(3, 16)
        est = momentum_set_estimate(rep, 30, dirs, seed=10)
        rng = np.random.default_rng(11)
        y = rng.normal(size=3)
        ad = adjoint_of_exp(y, rep.algebra)
        moved = np.array([coadjoint(ad, p) for p in est.inner.points])
        from momentumlab.convex import ConvexSetV
        moved_set = ConvexSetV(moved)
        for x in dirs:
            s0 = support_function(est.inner, x).value
            s1 = support_function(moved_set, ad @ x).value
            assert abs(s0 - s1) <= 1e-8


class TestSubrepresentationMonotonicity:
    def test_block_momentum_set_inside_sum(self):
        from momentumlab.convex import membership_reconstruct
        a = su2_spin_rep(0.5)
        s = direct_sum(a, su2_spin_rep(1.5))
        dirs = default_directions(3, 32)
        est_a = momentum_set_estimate(a, 20, dirs, seed=12)
        oracle = lambda x: spectral_sup(s, x)  # noqa: E731
        for p in est_a.inner.points:
            r = membership_reconstruct(p, s_oracle=oracle, directions=dirs)
            assert r.status != "outside"


class TestClassifyBoundedness:
    def test_single_rep_is_bounded_with_constant(self):
        rep = su2_spin_rep(2)
        v = classify_boundedness(rep)
        assert v.kind == "bounded"
        assert v.equicontinuity_constant <= generator_norm_bound(rep) + 1e-12
        # the constant dominates every momentum pairing
        rng = np.random.default_rng(13)
        for _ in range(20):
            x = rng.normal(size=3)
            w = rng.normal(size=5) + 1j * rng.normal(size=5)
            phi = momentum_map(rep, w)
            assert abs(phi @ x) <= v.equicontinuity_constant * np.max(np.abs(x)) + 1e-10

    def test_family_needs_three_levels(self):
        with pytest.raises(InputError):
            classify_boundedness([oscillator_fock_rep(8), oscillator_fock_rep(16)])

    def test_oscillator_family_semibounded(self):
        family = [oscillator_fock_rep(n) for n in (32, 64, 128)]
        v = classify_boundedness(family, seed=0)
        assert v.kind == "semibounded"
        # -h (the number-operator direction) is a bounded probe: row 4 of the
        # default direction stack (+basis rows 0..3, -basis rows 4..7)
        np.testing.assert_array_equal(v.directions[4], [-1.0, 0.0, 0.0, 0.0])
        assert v.bounded_mask[4]
        assert np.all(v.growth_table[4] <= 1e-12)  # sup of -N stays 0
        # +h grows linearly in the cutoff
        assert v.slopes[0] == pytest.approx(1.0, abs=0.05)
        assert not v.bounded_mask[0]
        # center directions are bounded
        assert v.bounded_mask[3] and v.bounded_mask[7]
        assert v.witness is not None and v.certificate.verdict

    def test_heisenberg_family_has_no_interior_domain(self):
        # bounded probes span only the center line, so the domain-cone
        # estimate has empty interior and the family is not semibounded
        family = [heisenberg_fock_rep(n) for n in (32, 64, 128)]
        v = classify_boundedness(family, seed=0)
        assert v.kind == "unbounded-directionwise"
        assert v.bounded_mask[2] and v.bounded_mask[5]  # +-z stay bounded
        # position/momentum suprema grow like sqrt(cutoff)
        for row in (0, 1, 3, 4):
            assert not v.bounded_mask[row]
            assert 0.35 <= v.slopes[row] <= 0.75

    def test_growth_values_match_direct_spectral_sup(self):
        family = [oscillator_fock_rep(n) for n in (16, 32, 64)]
        v = classify_boundedness(family, directions=np.eye(4), seed=1)
        for k, x in enumerate(np.eye(4)):
            for li, rep in enumerate(family):
                assert v.growth_table[k, li] == pytest.approx(spectral_sup(rep, x), abs=1e-12)
