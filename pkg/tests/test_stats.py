"""Tests for trend statistics."""

import math

import pytest

from src.infrastructure.utils.stats import trend_correlation


class TestTrendCorrelation:
    """Tests for trend_correlation."""

    def test_hand_computed_value(self):
        """Test rho = -0.5 for ranks (1, 2, 3) against (3, 1, 2)."""
        assert trend_correlation([1, 2, 3], [3, 1, 2]) == pytest.approx(-0.5)

    def test_monotone_inputs(self):
        """Test perfect agreement and disagreement."""
        assert trend_correlation([1, 2, 3, 4], [10, 20, 30, 45]) == pytest.approx(1.0)
        assert trend_correlation([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)

    def test_ties_use_average_ranks(self):
        """Test that tied values share their average rank."""
        assert trend_correlation([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(0.9486833, rel=1e-6)

    def test_constant_input_is_nan(self):
        """Test that a constant sequence has no defined correlation."""
        assert math.isnan(trend_correlation([1, 1, 1], [1, 2, 3]))

    @pytest.mark.parametrize("xs,ys", [([1], [1]), ([1, 2], [1, 2, 3])])
    def test_invalid_lengths(self, xs, ys):
        """Test that fewer than two points or unequal lengths raise ValueError."""
        with pytest.raises(ValueError):
            trend_correlation(xs, ys)
