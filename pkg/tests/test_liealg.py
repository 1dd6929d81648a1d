import numpy as np
import pytest
from scipy.linalg import expm

from momentumlab import liealg
from momentumlab.errors import InputError
from momentumlab.liealg import (
    TrigPolynomial,
    abelian_algebra,
    ad_matrix,
    adjoint_of_exp,
    bracket,
    coadjoint,
    group_exp,
    heisenberg_algebra,
    l2_inner_torus,
    l2_norm_torus,
    oscillator_algebra,
    poisson_bracket_torus,
    su2_algebra,
)

ALGEBRAS = [su2_algebra, heisenberg_algebra, oscillator_algebra,
            lambda: abelian_algebra(3)]


def pauli_commutator_oracle(a, b):
    """Expand [sum a_i X_i, sum b_i X_i] for X_i = -i/2 sigma_i in that basis."""
    s = [np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]]),
         np.array([[1, 0], [0, -1]], dtype=complex)]
    X = [-0.5j * m for m in s]
    A = sum(ai * Xi for ai, Xi in zip(a, X))
    B = sum(bi * Xi for bi, Xi in zip(b, X))
    C = A @ B - B @ A
    # expand back: coefficient of X_k is -tr(C sigma_k)/ (i) ... use lstsq
    M = np.array([Xi.ravel() for Xi in X]).T
    coef, *_ = np.linalg.lstsq(M, C.ravel(), rcond=None)
    assert np.max(np.abs(coef.imag)) < 1e-12
    return coef.real


class TestAlgebraValidation:
    @pytest.mark.parametrize("make", ALGEBRAS)
    def test_shipped_algebras_satisfy_jacobi(self, make):
        L = make()  # construction itself asserts Jacobi residual <= 1e-10
        c = L.c
        jac = np.einsum("ijm,mkl->ijkl", c, c)
        total = jac + np.transpose(jac, (1, 2, 0, 3)) + np.transpose(jac, (2, 0, 1, 3))
        assert np.max(np.abs(total)) <= 1e-10

    def test_non_antisymmetric_rejected(self):
        c = np.zeros((2, 2, 2))
        c[0, 1, 0] = 1.0  # missing the opposite sign entry
        with pytest.raises(InputError):
            liealg.LieAlgebraDesc(2, c)

    def test_bad_matrix_basis_rejected(self):
        c = np.zeros((2, 2, 2))
        basis = np.array([np.eye(2), np.diag([1.0, 2.0])], dtype=complex)
        with pytest.raises(InputError):  # [X_0, X_1] = 0 holds, but try a broken pair
            liealg.LieAlgebraDesc(
                2, c, matrix_basis=np.array([
                    np.array([[0, 1], [0, 0]], dtype=complex),
                    np.array([[0, 0], [1, 0]], dtype=complex),
                ]))
        liealg.LieAlgebraDesc(2, c, matrix_basis=basis)  # commuting pair is fine

    def test_json_roundtrip(self):
        L = su2_algebra()
        M = liealg.LieAlgebraDesc.from_dict(L.to_dict())
        np.testing.assert_allclose(L.c, M.c)
        np.testing.assert_allclose(L.matrix_basis, M.matrix_basis)


class TestBracket:
    def test_su2_matches_pauli_oracle(self):
        L = su2_algebra()
        rng = np.random.default_rng(0)
        for _ in range(20):
            a, b = rng.normal(size=3), rng.normal(size=3)
            np.testing.assert_allclose(bracket(a, b, L),
                                       pauli_commutator_oracle(a, b), atol=1e-12)

    def test_su2_basis_bracket(self):
        L = su2_algebra()
        np.testing.assert_allclose(bracket([1, 0, 0], [0, 1, 0], L), [0, 0, 1])

    def test_antisymmetry_on_diagonal(self):
        L = su2_algebra()
        a = np.array([0.3, -1.2, 2.0])
        np.testing.assert_allclose(bracket(a, a, L), np.zeros(3), atol=0)

    def test_abelian_brackets_vanish(self):
        L = abelian_algebra(4)
        rng = np.random.default_rng(1)
        np.testing.assert_array_equal(
            bracket(rng.normal(size=4), rng.normal(size=4), L), np.zeros(4))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            bracket([1.0, 0.0], [0.0, 1.0, 0.0], su2_algebra())


class TestAdjoint:
    def test_identity_at_zero(self):
        for make in ALGEBRAS:
            L = make()
            np.testing.assert_allclose(adjoint_of_exp(np.zeros(L.dim), L),
                                       np.eye(L.dim), atol=1e-14)

    def test_abelian_adjoint_trivial(self):
        L = abelian_algebra(3)
        rng = np.random.default_rng(2)
        np.testing.assert_allclose(adjoint_of_exp(rng.normal(size=3), L),
                                   np.eye(3), atol=1e-14)

    def test_su2_rotation_about_e3(self):
        L = su2_algebra()
        for t in [0.3, 1.1, np.pi / 2]:
            got = adjoint_of_exp(t * np.array([0.0, 0.0, 1.0]), L)
            # closed-form exponential of the 3x3 ad matrix: rotation in (e1,e2)
            expected = np.array([
                [np.cos(t), -np.sin(t), 0.0],
                [np.sin(t), np.cos(t), 0.0],
                [0.0, 0.0, 1.0],
            ])
            np.testing.assert_allclose(got, expected, atol=1e-12)

    @pytest.mark.parametrize("make", [su2_algebra, heisenberg_algebra, oscillator_algebra])
    def test_ad_route_matches_conjugation_route(self, make):
        L = make()
        rng = np.random.default_rng(3)
        for _ in range(10):
            y = rng.normal(size=L.dim)
            A1 = adjoint_of_exp(y, L, method="ad")
            A2 = adjoint_of_exp(y, L, method="conjugation")
            assert np.max(np.abs(A1 - A2)) <= 1e-8

    def test_su2_adjoint_orthogonal(self):
        L = su2_algebra()
        rng = np.random.default_rng(4)
        for _ in range(10):
            A = adjoint_of_exp(rng.normal(size=3), L)
            np.testing.assert_allclose(A.T @ A, np.eye(3), atol=1e-12)

    def test_group_exp_unitary_for_su2(self):
        g = group_exp([0.2, -0.4, 1.0], su2_algebra())
        assert g.unitarity_defect() <= 1e-10


class TestCoadjoint:
    def test_identity_fixes_alpha(self):
        alpha = np.array([1.0, -2.0, 0.5])
        np.testing.assert_array_equal(coadjoint(np.eye(3), alpha), alpha)

    def test_su2_quarter_turn(self):
        L = su2_algebra()
        A = adjoint_of_exp((np.pi / 2) * np.array([0.0, 0.0, 1.0]), L)
        got = coadjoint(A, [1.0, 0.0, 0.0])
        # oracle: inverse-transpose action on the closed-form rotation matrix
        expected = np.linalg.inv(A).T @ np.array([1.0, 0.0, 0.0])
        np.testing.assert_allclose(got, expected, atol=1e-12)
        np.testing.assert_allclose(got, [0.0, 1.0, 0.0], atol=1e-12)

    def test_left_action_law(self):
        L = su2_algebra()
        rng = np.random.default_rng(5)
        for _ in range(10):
            A = adjoint_of_exp(rng.normal(size=3), L)
            B = adjoint_of_exp(rng.normal(size=3), L)
            alpha = rng.normal(size=3)
            lhs = coadjoint(A @ B, alpha)
            rhs = coadjoint(A, coadjoint(B, alpha))
            assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_norm_preserved_for_orthogonal_ad(self):
        L = su2_algebra()
        rng = np.random.default_rng(6)
        for _ in range(10):
            A = adjoint_of_exp(rng.normal(size=3), L)
            alpha = rng.normal(size=3)
            assert np.linalg.norm(coadjoint(A, alpha)) == pytest.approx(
                np.linalg.norm(alpha), rel=1e-12)

    def test_singular_matrix_rejected(self):
        with pytest.raises(InputError):
            coadjoint(np.zeros((2, 2)), [1.0, 0.0])


class TestTrigPolynomial:
    def test_mode_cap(self):
        with pytest.raises(InputError):
            TrigPolynomial({(129, 0): 1.0})

    def test_realness_detection(self):
        assert TrigPolynomial.cos_x(3).is_real
        assert TrigPolynomial.sin_y(2).is_real
        assert not TrigPolynomial({(1, 0): 1.0}).is_real

    def test_eval_matches_cos(self):
        f = TrigPolynomial.cos_x(2)
        for x in [0.0, 0.7, 2.1]:
            assert f.eval(x, 0.3) == pytest.approx(np.cos(2 * x), abs=1e-12)


class TestPoissonBracket:
    def test_cos_nx_with_cos_y(self):
        # {cos(nx), cos y} = n sin(nx) sin(y): symbolic differentiation oracle
        for n in [1, 3, 7]:
            got = poisson_bracket_torus(TrigPolynomial.cos_x(n), TrigPolynomial.cos_y())
            expected = float(n) * (TrigPolynomial.sin_x(n) * TrigPolynomial.sin_y())
            diff = got - expected
            assert all(abs(a) <= 1e-12 for _, a in diff.coeffs)

    def test_constant_is_central(self):
        f = TrigPolynomial.constant(2.5)
        g = TrigPolynomial.cos_x(4) + TrigPolynomial.sin_y(2)
        assert poisson_bracket_torus(f, g).coeffs == ()

    def test_antisymmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            f = _random_real_trig(rng)
            g = _random_real_trig(rng)
            d = poisson_bracket_torus(f, g) + poisson_bracket_torus(g, f)
            assert all(abs(a) <= 1e-12 for _, a in d.coeffs)

    def test_self_bracket_vanishes_exactly(self):
        rng = np.random.default_rng(8)
        f = _random_real_trig(rng)
        assert poisson_bracket_torus(f, f).coeffs == ()

    def test_bracket_of_reals_is_real(self):
        rng = np.random.default_rng(9)
        f, g = _random_real_trig(rng), _random_real_trig(rng)
        assert poisson_bracket_torus(f, g).is_real


class TestL2Inner:
    def test_parseval_cos(self):
        for n in [1, 2, 5]:
            f = TrigPolynomial.cos_x(n)
            assert l2_inner_torus(f, f) == pytest.approx(2 * np.pi ** 2, rel=1e-14)

    def test_disjoint_support_orthogonal(self):
        assert l2_inner_torus(TrigPolynomial.cos_x(2), TrigPolynomial.cos_y(3)) == 0.0

    def test_translation_invariance(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            f, g = _random_real_trig(rng), _random_real_trig(rng)
            s, t = rng.uniform(0, 2 * np.pi, size=2)
            a = l2_inner_torus(f, g)
            b = l2_inner_torus(f.translate(s, t), g.translate(s, t))
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_complex_input_rejected(self):
        with pytest.raises(InputError):
            l2_inner_torus(TrigPolynomial({(1, 0): 1.0}), TrigPolynomial.cos_x(1))


class TestBracketUnboundedness:
    def test_ratio_grows_linearly(self):
        # with g = cos y fixed, || {cos(nx), g} ||_2 / || cos(nx) ||_2 is
        # proportional to n, so no L2-continuity constant can exist
        g = TrigPolynomial.cos_y()
        ratios = []
        for n in range(1, 65):
            f = TrigPolynomial.cos_x(n)
            ratios.append(l2_norm_torus(poisson_bracket_torus(f, g)) / l2_norm_torus(f) / n)
        ratios = np.array(ratios)
        assert np.max(np.abs(ratios - ratios[0])) <= 1e-10
        full = ratios * np.arange(1, 65)
        assert np.all(np.diff(full) > 0)  # unbounded growth


def _random_real_trig(rng, max_mode=6, n_terms=4):
    d = {}
    for _ in range(n_terms):
        m = int(rng.integers(-max_mode, max_mode + 1))
        n = int(rng.integers(-max_mode, max_mode + 1))
        a = complex(rng.normal(), rng.normal())
        d[(m, n)] = d.get((m, n), 0.0) + a
        d[(-m, -n)] = d.get((-m, -n), 0.0) + np.conj(a)
    return TrigPolynomial(d)
