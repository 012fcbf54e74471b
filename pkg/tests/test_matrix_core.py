#!/usr/bin/env python3
"""
Tests for the dense matrix primitives and validation helpers
"""

import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the parent directory to the path so we can import the packages
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from linalg.matrix_core import (
    HermitianEig,
    as_complex_matrix,
    frobenius_distance,
    hermitian_eig,
    is_unitary,
)
from utils.errors import ValidationError
from utils.validation import require_pair, require_probabilities, validate_pair


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


class TestComplexMatrix(unittest.TestCase):
    """Test cases for matrix carriers"""

    def test_converts_real_input(self):
        """Real nested lists become read-only complex matrices"""
        m = as_complex_matrix([[1, 2], [3, 4]])
        self.assertEqual(m.dtype, np.complex128)
        self.assertFalse(m.flags.writeable)

    def test_rejects_vectors_and_empty(self):
        """Only non-empty two-dimensional data is accepted"""
        with self.assertRaises(ValidationError):
            as_complex_matrix([1, 2, 3])
        with self.assertRaises(ValidationError):
            as_complex_matrix(np.zeros((0, 0)))

    def test_rejects_non_finite(self):
        """NaN and Inf entries are rejected"""
        with self.assertRaises(ValidationError):
            as_complex_matrix([[1.0, np.nan], [0.0, 1.0]])
        with self.assertRaises(ValidationError):
            as_complex_matrix([[np.inf]])

    def test_frobenius_distance(self):
        """Distance of two matrices is the norm of their difference"""
        self.assertAlmostEqual(frobenius_distance(np.eye(2), np.zeros((2, 2))), np.sqrt(2.0))
        with self.assertRaises(ValidationError):
            frobenius_distance(np.eye(2), np.eye(3))

    def test_is_unitary(self):
        """Unitary and non-unitary matrices are told apart"""
        theta = 0.3
        rotation = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        self.assertTrue(is_unitary(rotation * np.exp(0.7j)))
        self.assertFalse(is_unitary(2.0 * rotation))


class TestHermitianEig(unittest.TestCase):
    """Test cases for the Hermitian eigendecomposition"""

    def setUp(self):
        """Set up test fixtures"""
        self.rng = np.random.default_rng(11)

    @settings(deadline=None, max_examples=25)
    @given(n=st.integers(min_value=1, max_value=24), seed=st.integers(min_value=0, max_value=2**31))
    def test_reconstruction(self, n, seed):
        """Eigenpairs reconstruct the matrix with orthonormal vectors"""
        h = random_hermitian(np.random.default_rng(seed), n)
        eig = hermitian_eig(h)
        self.assertTrue(np.all(np.diff(eig.eigenvalues) >= 0))
        self.assertTrue(is_unitary(eig.eigenvectors))
        self.assertLessEqual(np.linalg.norm(eig.reconstruct() - h), 1e-10 * np.linalg.norm(h))

    def test_degenerate_spectrum(self):
        """Repeated eigenvalues still give an orthonormal basis"""
        h = np.diag([1.0, 1.0, 1.0, 2.0]).astype(complex)
        eig = hermitian_eig(h)
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0, 1.0, 2.0], atol=1e-14)
        self.assertTrue(is_unitary(eig.eigenvectors))

    def test_rejects_non_hermitian(self):
        """A clearly non-Hermitian matrix is refused"""
        with self.assertRaises(ValidationError):
            hermitian_eig([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        """Rectangular input is refused"""
        with self.assertRaises(ValidationError):
            hermitian_eig(np.ones((2, 3)))

    def test_record_checks_order(self):
        """HermitianEig refuses unsorted eigenvalues"""
        with self.assertRaises(ValueError):
            HermitianEig(eigenvalues=[2.0, 1.0], eigenvectors=np.eye(2))

    def test_record_checks_orthonormality(self):
        """HermitianEig refuses non-orthonormal vectors"""
        with self.assertRaises(ValueError):
            HermitianEig(eigenvalues=[1.0, 2.0], eigenvectors=[[1.0, 1.0], [0.0, 1.0]])


class TestValidationHelpers(unittest.TestCase):
    """Test cases for probability and label validation"""

    def test_probabilities_clamp_roundoff(self):
        """Tiny negative values are clamped to zero"""
        p = require_probabilities([0.5, 0.5 + 1e-13, -1e-13])
        self.assertEqual(p[2], 0.0)

    def test_probabilities_reject_negative(self):
        """Clearly negative entries are refused"""
        with self.assertRaises(ValidationError):
            require_probabilities([1.2, -0.2])

    def test_probabilities_reject_unnormalized(self):
        """Lists not summing to one are refused"""
        with self.assertRaises(ValidationError):
            require_probabilities([0.5, 0.4])

    def test_pairs(self):
        """Label pairs must be distinct and inside 1..N"""
        self.assertTrue(validate_pair((1, 4), 4))
        self.assertFalse(validate_pair((2, 2), 4))
        self.assertFalse(validate_pair((0, 1), 4))
        self.assertFalse(validate_pair((1, 5), 4))
        self.assertEqual(require_pair((3, 1), 4), (3, 1))
        with self.assertRaises(ValidationError):
            require_pair((5, 1), 4)


if __name__ == "__main__":
    unittest.main()
