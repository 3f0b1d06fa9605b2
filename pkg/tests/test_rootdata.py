from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thinpart.rootdata import (
    build_root_system,
    delta_lower_bound,
    group_constants,
    order_bound_real,
)

# Closed-form data for the classical families, computed by hand:
# (positive root count, largest height, largest highest-root coefficient).
_CLOSED_FORMS = {
    ("A", 1): (1, 1, 1),
    ("A", 2): (3, 2, 1),
    ("A", 3): (6, 3, 1),
    ("A", 5): (15, 5, 1),
    ("B", 2): (4, 3, 2),
    ("B", 3): (9, 5, 2),
    ("C", 2): (4, 3, 2),
    ("C", 3): (9, 5, 2),
    ("D", 3): (6, 3, 1),  # D_3 = A_3: every highest-root coefficient is 1
    ("D", 4): (12, 5, 2),
}


class TestRootSystems:
    @pytest.mark.parametrize("family,rank", sorted(_CLOSED_FORMS))
    def test_counts_heights_coefficients(self, family, rank):
        count, ht, cmax = _CLOSED_FORMS[(family, rank)]
        rs = build_root_system(family, rank)
        assert len(rs.positive_roots) == count
        assert rs.ht_sum == ht
        assert rs.coeff_max == cmax

    @pytest.mark.parametrize("rank", range(1, 7))
    def test_type_a_height_multiset(self, rank):
        # height h occurs rank + 1 - h times in A_rank
        heights = sorted(build_root_system("A", rank).heights)
        want = sorted(h for h in range(1, rank + 1) for _ in range(rank + 1 - h))
        assert heights == want

    def test_coefficients_are_nonnegative(self):
        for family, rank in _CLOSED_FORMS:
            rs = build_root_system(family, rank)
            assert all(c >= 0 for root in rs.positive_roots for c in root)
            assert all(sum(root) >= 1 for root in rs.positive_roots)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            build_root_system("E", 6)
        with pytest.raises(ValueError):
            build_root_system("D", 1)


class TestGroupConstants:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_dimension_formulas(self, n):
        gc = group_constants(n)
        assert gc.dim_g == n * n - 1
        assert gc.dim_u == n * (n - 1) // 2
        assert gc.rank_k == n // 2
        assert gc.ht_sum == n - 1
        assert gc.coeff_max == 1

    def test_rejects_n_below_two(self):
        with pytest.raises(ValueError):
            group_constants(1)


class TestExactBounds:
    # Frozen by hand from the closed forms:
    #   order bound (6 ht dim_u + 1)^rank_k, delta (3 ht dim_g)^-(rank_k + 1)
    _EXPECTED = {
        2: (7, Fraction(1, 81)),
        3: (37, Fraction(1, 2304)),
        4: (11881, Fraction(1, 2460375)),
    }

    @pytest.mark.parametrize("n", sorted(_EXPECTED))
    def test_frozen_values(self, n):
        want_order, want_delta = self._EXPECTED[n]
        gc = group_constants(n)
        assert order_bound_real(gc) == want_order
        db = delta_lower_bound(gc)
        assert db.delta == want_delta
        assert db.inverse_final == want_delta.denominator

    @pytest.mark.parametrize("n", range(2, 9))
    def test_chain_ordering(self, n):
        # the order-based inverse bound is the sharper of the two
        db = delta_lower_bound(group_constants(n))
        assert 0 < db.inverse_order <= db.inverse_final
        assert db.delta == Fraction(1, db.inverse_final)

    def test_delta_decreases_with_n(self):
        deltas = [delta_lower_bound(group_constants(n)).delta for n in range(2, 8)]
        assert all(a > b for a, b in zip(deltas, deltas[1:]))

    @given(st.integers(2, 12))
    @settings(max_examples=20, deadline=None)
    def test_rational_arithmetic_only(self, n):
        db = delta_lower_bound(group_constants(n))
        assert isinstance(db.delta, Fraction)
        assert db.delta > 0
        assert order_bound_real(group_constants(n)) >= 7
