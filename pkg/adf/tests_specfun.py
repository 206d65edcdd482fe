import math

import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import DomainError
from adf.utils.specfun import (
    complete_beta, digamma, incomplete_beta, inverse_incomplete_beta, log_barnes_g, log_gamma,
)

GLAISHER = 1.28242712910062263687


def log_g_half():
    """log G(1/2) from its closed form in terms of the Glaisher constant."""
    return math.log(2.0) / 24.0 + 0.125 - 0.25 * math.log(math.pi) - 1.5 * math.log(GLAISHER)


class GammaFunctionTest(SimpleTestCase):
    def test_log_gamma_matches_factorials(self):
        """Test log Γ(n) = log (n − 1)! at integers."""
        for n in range(1, 8):
            self.assertAlmostEqual(log_gamma(n), math.log(math.factorial(n - 1)), places=12)

    def test_log_gamma_accepts_arrays(self):
        """Test array arguments come back as arrays."""
        values = log_gamma(np.array([0.5, 1.0]))
        self.assertEqual(values.shape, (2,))
        self.assertAlmostEqual(values[0], 0.5 * math.log(math.pi), places=12)

    def test_digamma_at_one(self):
        """Test ψ(1) = −γ."""
        self.assertAlmostEqual(digamma(1.0), -np.euler_gamma, places=12)

    def test_non_positive_arguments_raise(self):
        """Test the real-domain checks."""
        with self.assertRaises(DomainError):
            log_gamma(0.0)
        with self.assertRaises(DomainError):
            digamma(-1.5)


class BarnesGTest(SimpleTestCase):
    def test_integer_values(self):
        """Test G(1) = G(2) = G(3) = 1, G(4) = 2 and G(5) = 12."""
        for x, value in ((1, 1.0), (2, 1.0), (3, 1.0), (4, 2.0), (5, 12.0)):
            self.assertAlmostEqual(log_barnes_g(x), math.log(value), places=11)

    def test_half_integer_closed_form(self):
        """Test log G(1/2) against the Glaisher-constant identity."""
        self.assertAlmostEqual(log_barnes_g(0.5), log_g_half(), places=10)

    def test_series_on_both_sides_of_one(self):
        """Test G(3/2) = Γ(1/2)·G(1/2) with both values taken from the series."""
        expected = log_g_half() + 0.5 * math.log(math.pi)
        self.assertAlmostEqual(log_barnes_g(1.5), expected, places=10)

    def test_functional_equation_under_shifts(self):
        """Test log G(x + 1) − log G(x) = log Γ(x)."""
        for x in (0.2, 0.75, 1.3, 2.6, 4.1):
            self.assertAlmostEqual(log_barnes_g(x + 1.0) - log_barnes_g(x), log_gamma(x), places=10)

    def test_domain(self):
        """Test non-positive arguments raise."""
        with self.assertRaises(DomainError):
            log_barnes_g(0.0)


class IncompleteBetaTest(SimpleTestCase):
    def test_full_interval_is_complete_beta(self):
        """Test B(1; a, b) = B(a, b)."""
        self.assertAlmostEqual(incomplete_beta(1.0, 0.5, 0.5), math.pi, places=12)
        self.assertAlmostEqual(incomplete_beta(1.0, 2.0, 3.0), complete_beta(2.0, 3.0), places=12)

    def test_half_one_is_square_root(self):
        """Test B(x; 1/2, 1) = 2√x."""
        for x in (0.0, 0.09, 0.5, 1.0):
            self.assertAlmostEqual(incomplete_beta(x, 0.5, 1.0), 2.0 * math.sqrt(x), places=12)

    def test_arcsine_form(self):
        """Test B(x; 1/2, 1/2) = 2 arcsin √x."""
        x = np.array([0.1, 0.4, 0.8])
        np.testing.assert_allclose(incomplete_beta(x, 0.5, 0.5), 2.0 * np.arcsin(np.sqrt(x)), rtol=1e-12)

    def test_inverse_round_trip(self):
        """Test B^{−1}(B(x; a, b); a, b) = x."""
        for a, b in ((0.5, 0.5), (0.5, 0.2), (0.5, 1.0), (2.0, 3.0)):
            for x in (0.01, 0.3, 0.77, 0.999):
                y = incomplete_beta(x, a, b)
                self.assertAlmostEqual(inverse_incomplete_beta(y, a, b), x, delta=1e-10)

    def test_inverse_end_points(self):
        """Test y = 0 and y = B(a, b) map to the interval ends."""
        self.assertEqual(inverse_incomplete_beta(0.0, 0.5, 0.5), 0.0)
        self.assertEqual(inverse_incomplete_beta(math.pi, 0.5, 0.5), 1.0)

    def test_domain_errors(self):
        """Test x outside [0, 1], y above B(a, b) and non-positive parameters."""
        with self.assertRaises(DomainError):
            incomplete_beta(1.5, 0.5, 0.5)
        with self.assertRaises(DomainError):
            inverse_incomplete_beta(4.0, 0.5, 0.5)
        with self.assertRaises(DomainError):
            complete_beta(0.0, 1.0)
