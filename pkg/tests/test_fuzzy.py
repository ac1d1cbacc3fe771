import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzybns.errors import DataError
from fuzzybns.fuzzy import (
    TriangularFuzzyNumber,
    alpha_cut,
    fuzzify_bar,
    fuzzy_expectation,
    membership,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@st.composite
def triangles(draw):
    vals = sorted(draw(st.tuples(finite, finite, finite)))
    return TriangularFuzzyNumber(*vals)


@st.composite
def nondegenerate_triangles(draw):
    a = draw(st.floats(min_value=-1e6, max_value=1e6 - 2))
    m = draw(st.floats(min_value=a + 1e-3, max_value=1e6 - 1))
    u = draw(st.floats(min_value=m + 1e-3, max_value=1e6))
    return TriangularFuzzyNumber(a, m, u)


@st.composite
def price_like_triangles(draw):
    """Kernel-proportional legs, the shape real daily bars have; keeps the
    1e-12 membership consistency meaningful in float64."""
    kernel = draw(st.floats(min_value=1.0, max_value=1e4))
    left = kernel * draw(st.floats(min_value=0.005, max_value=0.2))
    right = kernel * draw(st.floats(min_value=0.005, max_value=0.2))
    return TriangularFuzzyNumber(kernel - left, kernel, kernel + right)


class TestMembership:
    def test_kernel_has_full_membership(self):
        assert membership(TriangularFuzzyNumber(1, 2, 3), 2) == 1.0

    def test_linear_midpoint_of_rising_edge(self):
        assert membership(TriangularFuzzyNumber(1, 2, 3), 1.5) == 0.5

    def test_outside_support_is_zero(self):
        a = TriangularFuzzyNumber(1, 2, 3)
        assert membership(a, 0.5) == 0.0
        assert membership(a, 3.5) == 0.0
        # support boundary is exactly zero for a non-degenerate triple
        assert membership(a, 1.0) == 0.0
        assert membership(a, 3.0) == 0.0

    def test_degenerate_edges_keep_kernel_at_one(self):
        assert membership(TriangularFuzzyNumber(2, 2, 3), 2) == 1.0
        assert membership(TriangularFuzzyNumber(1, 2, 2), 2) == 1.0
        crisp = TriangularFuzzyNumber(5, 5, 5)
        assert membership(crisp, 5) == 1.0
        assert membership(crisp, 5.0001) == 0.0

    def test_invalid_ordering_rejected(self):
        with pytest.raises(ValueError):
            TriangularFuzzyNumber(3, 2, 1)

    @given(nondegenerate_triangles(), st.floats(min_value=0, max_value=1))
    def test_membership_one_only_at_kernel(self, a, frac):
        x = a.a_l + frac * (a.a_u - a.a_l)
        m = membership(a, x)
        assert 0.0 <= m <= 1.0
        if m == 1.0:
            assert x == pytest.approx(a.a_m, abs=1e-9)


class TestAlphaCut:
    def test_full_support_at_zero(self):
        assert alpha_cut(TriangularFuzzyNumber(1, 2, 4), 0.0) == (1, 4)

    def test_kernel_at_one(self):
        assert alpha_cut(TriangularFuzzyNumber(1, 2, 4), 1.0) == (2, 2)

    def test_half_cut(self):
        # (1-a)*a_l + a*a_m and (1-a)*a_u + a*a_m at a=0.5
        assert alpha_cut(TriangularFuzzyNumber(1, 2, 4), 0.5) == (1.5, 3.0)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            alpha_cut(TriangularFuzzyNumber(1, 2, 3), -0.1)
        with pytest.raises(ValueError):
            alpha_cut(TriangularFuzzyNumber(1, 2, 3), 1.1)

    @given(triangles(), st.floats(0, 1), st.floats(0, 1))
    def test_nesting(self, a, alpha1, alpha2):
        lo, hi = sorted((alpha1, alpha2))
        outer = alpha_cut(a, lo)
        inner = alpha_cut(a, hi)
        assert outer[0] <= inner[0] + 1e-12
        assert inner[1] <= outer[1] + 1e-12

    @given(price_like_triangles(), st.floats(1e-6, 1), st.floats(0, 1))
    def test_cut_members_reach_alpha(self, a, alpha, frac):
        left, right = alpha_cut(a, alpha)
        x = left + frac * (right - left)
        assert membership(a, x) >= alpha - 1e-12


class TestFuzzyExpectation:
    # the published summary triples and their weighted expectations
    TABLE = [
        ((2118.59, 2130.65, 2140.96), {0.3: 2127.98, 0.5: 2130.21, 0.7: 2132.45}),
        ((2066.58, 2078.18, 2085.19), {0.3: 2075.17, 0.5: 2077.03, 0.7: 2078.89}),
        ((1074.77, 1099.23, 1125.12), {0.3: 1094.55, 0.5: 1099.59, 0.7: 1104.62}),
        ((3535.23, 3580.84, 3588.11), {0.3: 3565.97, 0.5: 3571.26, 0.7: 3576.54}),
    ]

    @pytest.mark.parametrize("triple,expected", TABLE)
    def test_golden_values(self, triple, expected):
        a = TriangularFuzzyNumber(*triple)
        for lam, value in expected.items():
            assert fuzzy_expectation(a, lam) == pytest.approx(value, abs=0.01)

    def test_crisp_is_identity(self):
        crisp = TriangularFuzzyNumber(7.5, 7.5, 7.5)
        for lam in (0.0, 0.25, 0.5, 1.0):
            assert fuzzy_expectation(crisp, lam) == 7.5

    def test_weight_domain(self):
        with pytest.raises(ValueError):
            fuzzy_expectation(TriangularFuzzyNumber(1, 2, 3), 1.5)

    @given(triangles(), st.floats(0, 1))
    def test_bounds_and_neutral_value(self, a, lam):
        e = fuzzy_expectation(a, lam)
        assert (a.a_l + a.a_m) / 2 - 1e-9 <= e <= (a.a_m + a.a_u) / 2 + 1e-9
        neutral = fuzzy_expectation(a, 0.5)
        assert neutral == pytest.approx((a.a_l / 2 + a.a_m + a.a_u / 2) / 2, rel=1e-12)

    @given(triangles(), st.floats(0, 1), st.floats(0, 1))
    def test_affine_in_weight(self, a, l1, l2):
        e1 = fuzzy_expectation(a, l1)
        e2 = fuzzy_expectation(a, l2)
        slope = (a.a_u - a.a_l) / 2
        assert e2 - e1 == pytest.approx((l2 - l1) * slope, abs=1e-6)
        if l2 >= l1:
            assert e2 >= e1 - 1e-12 * max(1.0, abs(e1))  # ulp slack at large scales


class TestFuzzifyBar:
    def test_builds_low_close_high(self):
        a = fuzzify_bar(1074.77, 1099.23, 1125.12)
        assert (a.a_l, a.a_m, a.a_u) == (1074.77, 1099.23, 1125.12)

    def test_zero_range_day(self):
        a = fuzzify_bar(5, 5, 5)
        assert a.is_crisp

    def test_close_above_high_rejected(self):
        with pytest.raises(DataError) as exc:
            fuzzify_bar(10, 12, 11)
        assert exc.value.bar == (10, 12, 11)

    def test_nonfinite_rejected(self):
        with pytest.raises(DataError):
            fuzzify_bar(10, math.nan, 11)
