"""Best approximation of functionals and points by the duality routes."""

import numpy as np
import pytest

from bjapprox import (
    Functional,
    LpVector,
    Subspace,
    best_approx_functional,
    check_best_approx_certificate_functional,
    classical_duality_eval,
    codim1_closed_form_2d,
    conjugate_exponent,
    dist_point_subspace_lp,
    lp_norm,
    max_on_sphere_subspace,
    norm_attainment_point,
    nullspace_intersection,
    primal_min_lp,
    verify_remark_inequality,
)
from bjapprox.errors import (
    DegenerateInputError,
    DimensionMismatchError,
    InvalidExponentError,
    InvalidParameterError,
    RankDeficiencyError,
)

PLANE_BASIS = np.array([[1.0, 1.0], [0.0, 2.0], [-1.0, 1.0]])


def _plane_distance(v, p):
    q = p / (p - 1.0)
    return 3.0 ** (-1.0 / q) * abs(v[0] - v[1] + v[2])


class TestMaxOnSphereSubspace:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_full_space_recovers_attainment_point(self, p):
        rng = np.random.default_rng(41)
        exp = conjugate_exponent(p)
        for _ in range(10):
            f = Functional(rng.standard_normal(4), exp)
            w = nullspace_intersection([], 4)
            value, h0 = max_on_sphere_subspace(f, w)
            assert value == pytest.approx(f.norm, rel=1e-10)
            xhat = norm_attainment_point(f)
            assert np.allclose(h0.coords, xhat.coords, atol=1e-9)

    def test_euclidean_case_is_projection_norm(self):
        rng = np.random.default_rng(42)
        exp = conjugate_exponent(2.0)
        for _ in range(15):
            f = Functional(rng.standard_normal(5), exp)
            basis = rng.standard_normal((5, 2))
            value, _ = max_on_sphere_subspace(f, Subspace(5, basis))
            qmat, _ = np.linalg.qr(basis)
            assert value == pytest.approx(
                float(np.linalg.norm(qmat.T @ f.coeffs)), rel=1e-10
            )

    def test_basis_independence(self):
        rng = np.random.default_rng(43)
        exp = conjugate_exponent(2.5)
        f = Functional(rng.standard_normal(5), exp)
        basis = rng.standard_normal((5, 3))
        mixer = np.array(
            [[2.0, 1.0, 0.0], [-1.0, 1.0, 3.0], [0.5, 0.0, 1.0]]
        )
        v1, _ = max_on_sphere_subspace(f, Subspace(5, basis))
        v2, _ = max_on_sphere_subspace(f, Subspace(5, basis @ mixer))
        assert v2 == pytest.approx(v1, rel=1e-9)

    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_maximizer_is_feasible_and_consistent(self, p):
        rng = np.random.default_rng(44)
        exp = conjugate_exponent(p)
        f = Functional(rng.standard_normal(4), exp)
        basis = rng.standard_normal((4, 2))
        value, h0 = max_on_sphere_subspace(f, Subspace(4, basis))
        assert h0.norm == pytest.approx(1.0, rel=1e-10)
        assert f(h0) == pytest.approx(value, rel=1e-12)
        coeff, *_ = np.linalg.lstsq(basis, h0.coords, rcond=None)
        assert np.allclose(basis @ coeff, h0.coords, atol=1e-9)

    def test_zero_subspace_rejected(self):
        exp = conjugate_exponent(2.0)
        f = Functional([1.0, 0.0], exp)
        with pytest.raises(DegenerateInputError):
            max_on_sphere_subspace(f, Subspace(2, np.empty((2, 0))))

    def test_dimension_mismatch_rejected(self):
        exp = conjugate_exponent(2.0)
        with pytest.raises(DimensionMismatchError):
            max_on_sphere_subspace(Functional([1.0], exp), Subspace(2, np.eye(2)))


class TestBestApproxFunctional:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_result_identities(self, p):
        rng = np.random.default_rng(45)
        exp = conjugate_exponent(p)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            k = int(rng.integers(1, n))
            f0 = Functional(rng.standard_normal(n), exp)
            gs = [Functional(rng.standard_normal(n), exp) for _ in range(k)]
            res = best_approx_functional(f0, gs)
            stacked = np.array([g.coeffs for g in gs])
            # The residual functional is f0 minus the expansion.
            recon = f0.coeffs - stacked.T @ res.coefficients
            assert np.allclose(res.residual_functional.coeffs, recon, atol=1e-8)
            # Its norm is the distance and it peaks at the attainment point.
            assert res.residual_functional.norm == pytest.approx(
                res.distance, rel=1e-9
            )
            assert res.attainment_point.norm == pytest.approx(1.0, rel=1e-9)
            assert res.residual_functional(res.attainment_point) == pytest.approx(
                res.distance, rel=1e-9
            )
            # The attainment point lies in every kernel.
            for g in gs:
                assert abs(g(res.attainment_point)) <= 1e-8 * g.norm

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
    def test_distance_matches_primal_oracle(self, p):
        # The dual norm of a coefficient residual is a plain lq norm, so the
        # primal descent oracle provides an independent value.
        rng = np.random.default_rng(46)
        exp = conjugate_exponent(p)
        for _ in range(8):
            n = int(rng.integers(2, 6))
            k = int(rng.integers(1, n))
            f0 = Functional(rng.standard_normal(n), exp)
            gs = [Functional(rng.standard_normal(n), exp) for _ in range(k)]
            res = best_approx_functional(f0, gs)
            ref = primal_min_lp(
                LpVector(f0.coeffs, exp.conjugate),
                Subspace(n, np.array([g.coeffs for g in gs]).T),
            )
            assert res.distance == pytest.approx(ref.value, rel=1e-7, abs=1e-9)

    def test_member_of_span_has_zero_distance(self):
        exp = conjugate_exponent(2.5)
        g1 = Functional([1.0, 0.0, 1.0], exp)
        g2 = Functional([0.0, 1.0, -1.0], exp)
        f0 = Functional(2.0 * g1.coeffs - 0.5 * g2.coeffs, exp)
        res = best_approx_functional(f0, [g1, g2])
        assert res.distance == 0.0
        assert res.coefficients == pytest.approx([2.0, -0.5], abs=1e-10)
        assert res.attainment_point is None

    def test_empty_family_returns_own_norm(self):
        exp = conjugate_exponent(3.0)
        f0 = Functional([1.0, -2.0], exp)
        res = best_approx_functional(f0, [])
        assert res.distance == pytest.approx(f0.norm, rel=1e-12)
        assert res.coefficients.size == 0

    def test_dependent_family_rejected(self):
        exp = conjugate_exponent(2.0)
        g = Functional([1.0, 1.0], exp)
        with pytest.raises(RankDeficiencyError):
            best_approx_functional(Functional([1.0, 0.0], exp), [g, g])

    def test_zero_functional_is_its_own_best_approximation(self):
        exp = conjugate_exponent(2.0)
        res = best_approx_functional(
            Functional([0.0, 0.0], exp), [Functional([1.0, 0.0], exp)]
        )
        assert res.distance == 0.0


class TestDistPointSubspace:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_plane_family_closed_form(self, p):
        rng = np.random.default_rng(47)
        exp = conjugate_exponent(p)
        for _ in range(10):
            v = 2.0 * rng.standard_normal(3)
            res = dist_point_subspace_lp(LpVector(v, exp), Subspace(3, PLANE_BASIS))
            assert res.distance == pytest.approx(
                _plane_distance(v, p), rel=1e-9, abs=1e-12
            )

    @pytest.mark.parametrize("p", [1.5, 2.5, 4.0])
    def test_three_routes_agree(self, p):
        rng = np.random.default_rng(48)
        exp = conjugate_exponent(p)
        for _ in range(6):
            n = int(rng.integers(2, 6))
            k = int(rng.integers(1, n))
            x = LpVector(rng.standard_normal(n), exp)
            y = Subspace(n, rng.standard_normal((n, k)))
            d1 = dist_point_subspace_lp(x, y).distance
            d2 = classical_duality_eval(x, y)
            d3 = primal_min_lp(x, y).value
            assert d2 == pytest.approx(d1, rel=1e-9, abs=1e-12)
            assert d3 == pytest.approx(d1, rel=1e-7, abs=1e-9)

    def test_coefficients_reproduce_distance(self):
        rng = np.random.default_rng(49)
        exp = conjugate_exponent(3.0)
        x = LpVector(rng.standard_normal(4), exp)
        basis = rng.standard_normal((4, 2))
        res = dist_point_subspace_lp(x, Subspace(4, basis))
        assert lp_norm(x.coords - basis @ res.coefficients, 3.0) == pytest.approx(
            res.distance, rel=1e-9
        )

    def test_euclidean_case_matches_projection(self):
        rng = np.random.default_rng(50)
        exp = conjugate_exponent(2.0)
        x = LpVector(rng.standard_normal(5), exp)
        basis = rng.standard_normal((5, 3))
        res = dist_point_subspace_lp(x, Subspace(5, basis))
        qmat, _ = np.linalg.qr(basis)
        want = float(np.linalg.norm(x.coords - qmat @ (qmat.T @ x.coords)))
        assert res.distance == pytest.approx(want, rel=1e-12)

    def test_member_has_zero_distance(self):
        exp = conjugate_exponent(1.5)
        basis = np.array([[1.0], [2.0], [0.0]])
        x = LpVector(basis[:, 0] * -3.0, exp)
        res = dist_point_subspace_lp(x, Subspace(3, basis))
        assert res.distance == 0.0
        assert res.coefficients == pytest.approx([-3.0], abs=1e-12)

    def test_zero_dimensional_subspace(self):
        exp = conjugate_exponent(2.5)
        x = LpVector([1.0, -2.0], exp)
        res = dist_point_subspace_lp(x, Subspace(2, np.empty((2, 0))))
        assert res.distance == pytest.approx(x.norm, rel=1e-12)

    def test_improper_subspace_rejected(self):
        exp = conjugate_exponent(2.0)
        with pytest.raises(InvalidParameterError):
            dist_point_subspace_lp(LpVector([1.0, 2.0], exp), Subspace(2, np.eye(2)))


class TestCodim1ClosedForm:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
    def test_matches_duality_route(self, p):
        rng = np.random.default_rng(51)
        exp = conjugate_exponent(p)
        for _ in range(50):
            a, b, c, d = rng.standard_normal(4)
            want = dist_point_subspace_lp(
                LpVector([a, b], exp), Subspace(2, np.array([[c], [d]]))
            ).distance
            assert codim1_closed_form_2d(a, b, c, d, p) == pytest.approx(
                want, rel=1e-8, abs=1e-12
            )

    def test_zero_span_vector_rejected(self):
        with pytest.raises(DegenerateInputError):
            codim1_closed_form_2d(1.0, 2.0, 0.0, 0.0, 2.0)


class TestRemarkInequality:
    def test_holds_on_random_parameters(self):
        rng = np.random.default_rng(52)
        for _ in range(2000):
            a, b, c, alpha, beta = 3.0 * rng.standard_normal(5)
            p = float(rng.uniform(1.1, 8.0))
            lhs, rhs, holds = verify_remark_inequality(a, b, c, alpha, beta, p)
            assert holds
            assert lhs >= rhs * (1.0 - 1e-12)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_equality_at_the_optimal_coefficients(self, p):
        # The minimizing (alpha, beta) of the lhs is exactly the best
        # approximation of (a,b,c) out of the plane family, and there the
        # two sides meet.
        rng = np.random.default_rng(53)
        exp = conjugate_exponent(p)
        for _ in range(10):
            v = 2.0 * rng.standard_normal(3)
            res = dist_point_subspace_lp(LpVector(v, exp), Subspace(3, PLANE_BASIS))
            alpha, beta = res.coefficients
            lhs, rhs, holds = verify_remark_inequality(
                v[0], v[1], v[2], alpha, beta, p
            )
            assert holds
            assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)

    def test_invalid_exponent_rejected(self):
        with pytest.raises(InvalidExponentError):
            verify_remark_inequality(1.0, 2.0, 3.0, 0.0, 0.0, 1.0)


class TestCertificate:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_accepts_solver_output_and_rejects_perturbations(self, p):
        rng = np.random.default_rng(54)
        exp = conjugate_exponent(p)
        for _ in range(10):
            n = int(rng.integers(3, 6))
            k = int(rng.integers(1, n - 1))
            f0 = Functional(rng.standard_normal(n), exp)
            gs = [Functional(rng.standard_normal(n), exp) for _ in range(k)]
            res = best_approx_functional(f0, gs)
            valid, witness = check_best_approx_certificate_functional(
                f0, gs, res.coefficients
            )
            assert valid
            assert witness is not None
            bad = np.array(res.coefficients, dtype=float)
            bad[0] += 0.1 * max(1.0, abs(bad[0]))
            valid_bad, _ = check_best_approx_certificate_functional(f0, gs, bad)
            assert not valid_bad

    def test_zero_residual_is_trivially_valid(self):
        exp = conjugate_exponent(2.5)
        g = Functional([1.0, 1.0], exp)
        f0 = Functional([3.0, 3.0], exp)
        valid, witness = check_best_approx_certificate_functional(f0, [g], [3.0])
        assert valid
        assert witness is None

    def test_alpha_length_mismatch_rejected(self):
        exp = conjugate_exponent(2.0)
        with pytest.raises(DimensionMismatchError):
            check_best_approx_certificate_functional(
                Functional([1.0, 0.0], exp), [Functional([0.0, 1.0], exp)], [1.0, 2.0]
            )
