"""Core lp-space primitives: exponents, norms, s.i.p., duality, nullspaces."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bjapprox import (
    Exponent,
    Functional,
    LpVector,
    Subspace,
    conjugate_exponent,
    duality_map,
    lp_norm,
    norm_attainment_point,
    nullspace_intersection,
    sip,
    symmetric_eigen,
)
from bjapprox.errors import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    InvalidExponentError,
    PreconditionError,
    RankDeficiencyError,
)

finite_p = st.floats(min_value=1.0001, max_value=64.0, allow_nan=False)


class TestExponent:
    @given(finite_p)
    @settings(deadline=None)
    def test_conjugacy_identity(self, p):
        exp = conjugate_exponent(p)
        assert 1.0 / exp.p + 1.0 / exp.q == pytest.approx(1.0, abs=1e-12)
        assert exp.conjugate.p == exp.q
        assert exp.conjugate.q == exp.p

    def test_two_is_self_conjugate(self):
        exp = conjugate_exponent(2.0)
        assert exp.q == pytest.approx(2.0)

    @pytest.mark.parametrize("bad", [1.0, 0.5, 0.0, -3.0, math.inf, math.nan])
    def test_rejects_exponents_outside_open_range(self, bad):
        with pytest.raises(InvalidExponentError):
            conjugate_exponent(bad)

    def test_rejects_mismatched_pair(self):
        with pytest.raises(InvalidExponentError):
            Exponent(3.0, 3.0)


class TestLpNorm:
    @given(
        st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=8),
        finite_p,
        st.floats(-100.0, 100.0, allow_nan=False),
    )
    @settings(deadline=None, max_examples=200)
    def test_absolute_homogeneity(self, coords, p, factor):
        base = lp_norm(coords, p)
        scaled = lp_norm([factor * c for c in coords], p)
        assert scaled == pytest.approx(abs(factor) * base, rel=1e-10, abs=1e-12)

    @given(
        st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=6),
        st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=6),
        finite_p,
    )
    @settings(deadline=None, max_examples=200)
    def test_triangle_inequality(self, xs, ys, p):
        n = min(len(xs), len(ys))
        x, y = np.array(xs[:n]), np.array(ys[:n])
        assert lp_norm(x + y, p) <= lp_norm(x, p) + lp_norm(y, p) + 1e-9

    def test_survives_huge_components(self):
        # Peak scaling keeps |c|^p out of the overflow range.
        val = lp_norm([1e300, -1e300], 3.0)
        assert val == pytest.approx(1e300 * 2.0 ** (1.0 / 3.0), rel=1e-12)

    def test_zero_vector(self):
        assert lp_norm([0.0, 0.0, 0.0], 1.5) == 0.0

    def test_matches_euclidean_at_two(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(7)
        assert lp_norm(v, 2.0) == pytest.approx(float(np.linalg.norm(v)), rel=1e-14)


class TestSip:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
    def test_axioms_on_random_triples(self, p):
        rng = np.random.default_rng(21)
        exp = conjugate_exponent(p)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            xs, ys, zs = rng.standard_normal((3, n))
            lam = float(rng.standard_normal())
            x, y, z = (LpVector(v, exp) for v in (xs, ys, zs))
            # Additivity and homogeneity in the first slot.
            both = LpVector(xs + zs, exp)
            assert sip(both, y) == pytest.approx(
                sip(x, y) + sip(z, y), rel=1e-10, abs=1e-10
            )
            assert sip(x.scaled(lam), y) == pytest.approx(
                lam * sip(x, y), rel=1e-10, abs=1e-10
            )
            # Real homogeneity in the second slot.
            assert sip(x, y.scaled(lam)) == pytest.approx(
                lam * sip(x, y), rel=1e-9, abs=1e-9
            )
            # Positivity and the Cauchy-Schwarz bound.
            assert sip(x, x) == pytest.approx(x.norm**2, rel=1e-10, abs=1e-12)
            assert abs(sip(x, y)) <= x.norm * y.norm * (1.0 + 1e-10)

    def test_reduces_to_inner_product_at_two(self):
        rng = np.random.default_rng(22)
        exp = conjugate_exponent(2.0)
        for _ in range(50):
            xs, ys = rng.standard_normal((2, 5))
            got = sip(LpVector(xs, exp), LpVector(ys, exp))
            assert got == pytest.approx(float(xs @ ys), rel=1e-12, abs=1e-12)

    def test_zero_second_argument(self):
        exp = conjugate_exponent(3.0)
        assert sip(LpVector([1.0, 2.0], exp), LpVector([0.0, 0.0], exp)) == 0.0

    def test_mismatched_spaces_rejected(self):
        with pytest.raises(DimensionMismatchError):
            sip(
                LpVector([1.0], conjugate_exponent(2.0)),
                LpVector([1.0], conjugate_exponent(3.0)),
            )


class TestDuality:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
    def test_duality_map_supports_its_argument(self, p):
        rng = np.random.default_rng(23)
        exp = conjugate_exponent(p)
        for _ in range(50):
            h = LpVector(rng.standard_normal(4), exp)
            f = duality_map(h)
            assert f(h) == pytest.approx(h.norm, rel=1e-12)
            assert f.norm == pytest.approx(1.0, rel=1e-12)

    def test_duality_map_rejects_zero(self):
        with pytest.raises(DegenerateInputError):
            duality_map(LpVector([0.0, 0.0], conjugate_exponent(2.0)))

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_attainment_point_postconditions(self, p):
        rng = np.random.default_rng(24)
        exp = conjugate_exponent(p)
        for _ in range(100):
            f = Functional(rng.standard_normal(4), exp)
            xhat = norm_attainment_point(f)
            assert xhat.norm == pytest.approx(1.0, rel=1e-10)
            assert f(xhat) == pytest.approx(f.norm, rel=1e-10)

    @pytest.mark.parametrize("p", [1.5, 2.4, 3.0])
    def test_attainment_point_is_strict_maximum(self, p):
        # No other unit vector reaches the functional norm.
        rng = np.random.default_rng(25)
        exp = conjugate_exponent(p)
        f = Functional(rng.standard_normal(4), exp)
        xhat = norm_attainment_point(f)
        for _ in range(500):
            z = rng.standard_normal(4)
            z /= lp_norm(z, p)
            if lp_norm(z - xhat.coords, p) < 1e-6:
                continue
            assert f(z) < f.norm

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
    def test_attainment_inverts_duality_map(self, p):
        # Supporting x_hat of J(h) recovers h up to normalization.
        rng = np.random.default_rng(26)
        exp = conjugate_exponent(p)
        for _ in range(50):
            h = LpVector(rng.standard_normal(5), exp)
            back = norm_attainment_point(duality_map(h))
            want = h.coords / h.norm
            assert np.allclose(back.coords, want, atol=1e-9)

    def test_attainment_rejects_zero_functional(self):
        with pytest.raises(DegenerateInputError):
            norm_attainment_point(Functional([0.0, 0.0], conjugate_exponent(2.0)))


class TestSubspaceAndNullspace:
    def test_rank_deficient_basis_rejected(self):
        with pytest.raises(RankDeficiencyError):
            Subspace(3, np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]]))

    def test_too_many_columns_rejected(self):
        with pytest.raises(RankDeficiencyError):
            Subspace(2, np.ones((2, 3)))

    def test_nullspace_annihilates_and_has_right_dimension(self):
        rng = np.random.default_rng(27)
        exp = conjugate_exponent(2.5)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, n))
            gs = [Functional(rng.standard_normal(n), exp) for _ in range(k)]
            w = nullspace_intersection(gs, n)
            assert w.rank == n - k
            for g in gs:
                assert np.allclose(g.coeffs @ w.basis, 0.0, atol=1e-10)

    def test_empty_family_gives_full_space(self):
        w = nullspace_intersection([], 4)
        assert w.rank == 4

    def test_dependent_functionals_collapse(self):
        exp = conjugate_exponent(2.0)
        g = Functional([1.0, -1.0, 0.0], exp)
        g2 = Functional([2.0, -2.0, 0.0], exp)
        w = nullspace_intersection([g, g2], 3)
        assert w.rank == 2


class TestSymmetricEigen:
    def test_matches_numpy_on_random_matrices(self):
        rng = np.random.default_rng(28)
        for _ in range(25):
            n = int(rng.integers(1, 7))
            raw = rng.standard_normal((n, n))
            sym = 0.5 * (raw + raw.T)
            vals, vecs = symmetric_eigen(sym)
            want = np.sort(np.linalg.eigvalsh(sym))[::-1]
            assert np.allclose(vals, want, atol=1e-10)
            assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-10)
            assert np.allclose(sym @ vecs, vecs @ np.diag(vals), atol=1e-9)

    def test_rejects_asymmetric_input(self):
        with pytest.raises(PreconditionError):
            symmetric_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_oversized_input(self):
        with pytest.raises(CapacityError):
            symmetric_eigen(np.eye(17))

    def test_zero_matrix(self):
        vals, vecs = symmetric_eigen(np.zeros((3, 3)))
        assert np.allclose(vals, 0.0)
        assert np.allclose(vecs, np.eye(3))
