import itertools

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from thinpart.linalg import (
    LogDomainError,
    Subspace,
    frobenius,
    haar_orthogonal,
    hadamard_bound,
    mat_exp,
    mat_log,
    min_singular_ratio,
    op_norm,
    traceless_defect,
    wedge_power,
)


def _rng(index=0):
    return np.random.default_rng([77, index])


class TestExpLog:
    @pytest.mark.parametrize("case", range(40))
    def test_exp_matches_scipy(self, case):
        rng = _rng(case)
        n = int(rng.integers(2, 6))
        x = rng.standard_normal((n, n))
        got = mat_exp(x)
        want = scipy.linalg.expm(x)
        assert np.abs(got - want).max() <= 1e-10 * max(1.0, np.abs(want).max())

    @pytest.mark.parametrize("case", range(40))
    def test_log_matches_scipy(self, case):
        rng = _rng(1000 + case)
        n = int(rng.integers(2, 6))
        m = np.eye(n) + 0.3 * rng.standard_normal((n, n)) / n
        if not op_norm(m - np.eye(n)) < 1.0:
            pytest.skip("draw outside the log domain")
        got = mat_log(m)
        want = scipy.linalg.logm(m)
        assert np.abs(got - want).max() <= 1e-10

    def test_log_exp_round_trip(self):
        rng = _rng(7)
        for _ in range(20):
            x = 0.2 * rng.standard_normal((3, 3))
            assert np.abs(mat_log(mat_exp(x)) - x).max() <= 1e-12

    def test_log_rejects_far_matrices(self):
        with pytest.raises(LogDomainError):
            mat_log(np.diag([3.0, 1.0]))
        # boundary: ||M - I|| exactly 1 is out
        with pytest.raises(LogDomainError):
            mat_log(np.diag([2.0, 1.0]))

    def test_log_of_unipotent_is_nilpotent(self):
        # the series terminates exactly for a single off-diagonal entry
        m = np.eye(2)
        m[0, 1] = 0.01
        log = mat_log(m)
        assert log[0, 1] == pytest.approx(0.01, rel=1e-15)
        assert abs(log[0, 0]) < 1e-18 and abs(log[1, 0]) < 1e-18

    def test_exp_of_zero(self):
        assert np.array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))

    def test_exp_rejects_non_finite(self):
        with pytest.raises(ValueError):
            mat_exp(np.array([[np.inf, 0.0], [0.0, 0.0]]))


class TestWedge:
    @pytest.mark.parametrize("case", range(25))
    def test_cauchy_binet_multiplicativity(self, case):
        rng = _rng(2000 + case)
        n = int(rng.integers(2, 6))
        l = int(rng.integers(1, n + 1))
        a = rng.standard_normal((n, n))
        b = rng.standard_normal((n, n))
        left = wedge_power(a @ b, l)
        right = wedge_power(a, l) @ wedge_power(b, l)
        assert np.abs(left - right).max() <= 1e-10 * max(1.0, np.abs(left).max())

    @pytest.mark.parametrize("case", range(25))
    def test_singular_values_are_subset_products(self, case):
        rng = _rng(3000 + case)
        n = int(rng.integers(2, 6))
        l = int(rng.integers(1, n + 1))
        a = rng.standard_normal((n, n))
        sv = np.linalg.svd(a, compute_uv=False)
        want = sorted(
            (float(np.prod(sv[list(ix)])) for ix in itertools.combinations(range(n), l)),
            reverse=True,
        )
        got = np.linalg.svd(wedge_power(a, l), compute_uv=False)
        assert np.abs(got - np.array(want)).max() <= 1e-8 * max(1.0, want[0])

    def test_diagonal_case(self):
        d = np.diag([2.0, 3.0, 5.0])
        got = wedge_power(d, 2)
        assert got == pytest.approx(np.diag([6.0, 10.0, 15.0]), rel=1e-12)

    def test_top_wedge_is_determinant(self):
        rng = _rng(4)
        a = rng.standard_normal((4, 4))
        assert wedge_power(a, 4)[0, 0] == pytest.approx(np.linalg.det(a), rel=1e-10)

    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            wedge_power(np.eye(3), 0)
        with pytest.raises(ValueError):
            wedge_power(np.eye(3), 4)


class TestHaar:
    def test_special_orthogonal(self):
        for case in range(30):
            rng = _rng(5000 + case)
            n = int(rng.integers(1, 7))
            q = haar_orthogonal(n, rng)
            assert np.abs(q.T @ q - np.eye(n)).max() <= 1e-12
            assert np.linalg.det(q) == pytest.approx(1.0, abs=1e-12)

    def test_rotation_angle_is_uniform(self):
        # SO(2) Haar is the uniform angle; quartile counts must be balanced
        rng = _rng(6000)
        angles = []
        for _ in range(4000):
            q = haar_orthogonal(2, rng)
            angles.append(np.arctan2(q[1, 0], q[0, 0]))
        counts, _ = np.histogram(angles, bins=4, range=(-np.pi, np.pi))
        assert counts.min() > 850 and counts.max() < 1150

    def test_rejects_zero_dimension(self):
        with pytest.raises(ValueError):
            haar_orthogonal(0, _rng())


class TestNormsAndSubspace:
    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_norm_inequalities(self, index):
        rng = _rng(7000 + index)
        n = int(rng.integers(1, 7))
        a = rng.standard_normal((n, n))
        op = op_norm(a)
        fro = frobenius(a)
        assert op <= fro * (1 + 1e-12)
        assert fro <= np.sqrt(n) * op * (1 + 1e-12)

    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_hadamard_dominates_det(self, index):
        rng = _rng(8000 + index)
        n = int(rng.integers(1, 7))
        a = rng.standard_normal((n, n))
        bound = hadamard_bound(a)
        assert bound >= abs(np.linalg.det(a)) - 1e-9 * max(1.0, bound)

    def test_traceless_defect_is_relative(self):
        assert traceless_defect(np.diag([1.0, -1.0])) == 0.0
        # the defect is measured in units of 1e-10 * ||X||_F
        assert traceless_defect(np.eye(2)) > 1.0

    def test_subspace_requires_orthonormal_basis(self):
        with pytest.raises(ValueError):
            Subspace(3, np.ones((3, 2)))
        with pytest.raises(ValueError):
            Subspace(3, np.eye(3)[:, :0])

    def test_min_singular_ratio_identity_projection(self):
        w = Subspace(3, np.eye(3)[:, :2])
        assert min_singular_ratio(np.eye(3), w) == pytest.approx(1.0)

    def test_min_singular_ratio_rejects_non_projection(self):
        w = Subspace(2, np.eye(2)[:, :1])
        with pytest.raises(ValueError):
            min_singular_ratio(2.0 * np.eye(2), w)
