#!/usr/bin/env python3
"""
Tests for the Takagi factorization and the antisymmetric canonical form
"""

import os
import sys
import unittest

import numpy as np
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the parent directory to the path so we can import the packages
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from linalg.canonical import (
    Parity,
    antisym_canonical,
    canonical_spectrum,
    normal_reduction,
    takagi,
)
from linalg.matrix_core import is_unitary
from utils.errors import ValidationError

SIZES = (2, 3, 5, 8, 16, 33, 64)


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n)
    return a + a.T


def random_antisymmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n)
    return a - a.T


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestTakagi(unittest.TestCase):
    """Test cases for the Takagi factorization"""

    def test_diagonal_input(self):
        """A nonnegative diagonal matrix is its own factorization"""
        result = takagi(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(result.d, [3.0, 1.0], atol=1e-14)
        np.testing.assert_allclose(result.u, np.eye(2), atol=1e-14)

    def test_two_by_two_symmetric(self):
        """[[i, i], [i, 1]] has Takagi values sqrt(2 +- sqrt(2))"""
        m = np.array([[1j, 1j], [1j, 1.0]])
        result = takagi(m)
        expected = [np.sqrt(2 + np.sqrt(2)), np.sqrt(2 - np.sqrt(2))]
        np.testing.assert_allclose(result.d, expected, atol=1e-12)
        self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10 * np.linalg.norm(m))

    def test_rank_deficient(self):
        """Null modes complete U to a unitary matrix"""
        v = np.array([1.0, 1j, 0.5])
        m = np.outer(v, v)
        result = takagi(m)
        self.assertAlmostEqual(result.d[0], np.vdot(v, v).real, places=12)
        np.testing.assert_array_equal(result.d[1:], [0.0, 0.0])
        self.assertTrue(is_unitary(result.u, 1e-10))
        self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10 * np.linalg.norm(m))

    def test_zero_matrix(self):
        """The zero matrix factorizes with d = 0"""
        result = takagi(np.zeros((3, 3)))
        np.testing.assert_array_equal(result.d, np.zeros(3))
        self.assertTrue(is_unitary(result.u))

    def test_rejects_non_symmetric(self):
        """Non-symmetric input is refused"""
        with self.assertRaises(ValidationError):
            takagi([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        """Rectangular input is refused"""
        with self.assertRaises(ValidationError):
            takagi(np.ones((2, 3)))

    def test_random_sweep(self):
        """Random symmetric matrices reconstruct with unitary modes at every size"""
        rng = np.random.default_rng(2024)
        for n in SIZES:
            for _ in range(200):
                m = random_symmetric(rng, n)
                result = takagi(m)
                self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10 * np.linalg.norm(m))
                self.assertTrue(is_unitary(result.u, 1e-10))
                self.assertTrue(np.all(np.diff(result.d) <= 0))

    @settings(deadline=None, max_examples=30)
    @given(n=st.integers(min_value=1, max_value=64), seed=st.integers(min_value=0, max_value=2**31))
    def test_values_match_spectrum(self, n, seed):
        """d equals the square roots of the eigenvalues of M^dagger M"""
        m = random_symmetric(np.random.default_rng(seed), n)
        m = m / np.linalg.norm(m)
        result = takagi(m)
        np.testing.assert_allclose(result.d, np.sqrt(canonical_spectrum(m, Parity.SYMMETRIC)), atol=1e-10)


class TestAntisymCanonical(unittest.TestCase):
    """Test cases for the antisymmetric canonical form"""

    def test_single_block(self):
        """[[0, z], [-z, 0]] is already canonical"""
        result = antisym_canonical([[0.0, 0.7], [-0.7, 0.0]])
        np.testing.assert_allclose(result.blocks, [0.7], atol=1e-14)
        self.assertEqual(result.null_dim, 0)
        np.testing.assert_allclose(np.sort(np.abs(result.u), axis=1), [[0.0, 1.0], [0.0, 1.0]], atol=1e-12)
        np.testing.assert_allclose(result.reconstruct(), [[0.0, 0.7], [-0.7, 0.0]], atol=1e-12)

    def test_three_by_three(self):
        """A real 3x3 antisymmetric matrix has one block and one null mode"""
        m = np.array([[0.0, 0.6, 0.8], [-0.6, 0.0, 0.0], [-0.8, 0.0, 0.0]])
        result = antisym_canonical(m)
        self.assertEqual(result.null_dim, 1)
        np.testing.assert_allclose(result.blocks, [np.linalg.norm(m) / np.sqrt(2.0)], atol=1e-12)
        np.testing.assert_allclose(result.reconstruct(), m, atol=1e-12)

    def test_degenerate_blocks(self):
        """Equal block values in a rotated basis are still resolved"""
        rng = np.random.default_rng(5)
        w = random_unitary(rng, 6)
        core = np.zeros((6, 6), dtype=complex)
        for j, z in enumerate((0.5, 0.5, 0.2)):
            core[2 * j, 2 * j + 1], core[2 * j + 1, 2 * j] = z, -z
        m = w.T @ core @ w
        result = antisym_canonical(m)
        np.testing.assert_allclose(result.blocks, [0.5, 0.5, 0.2], atol=1e-12)
        self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10 * np.linalg.norm(m))

    def test_widely_spread_blocks(self):
        """Block values many orders of magnitude apart keep unitary modes"""
        rng = np.random.default_rng(17)
        for s in (1e-3, 1e-6, 1e-9, 1e-10):
            for n in (4, 7):
                for _ in range(3):
                    w = random_unitary(rng, n)
                    core = np.zeros((n, n), dtype=complex)
                    core[0, 1], core[1, 0] = 1.0, -1.0
                    core[2, 3], core[3, 2] = s, -s
                    m = w.T @ core @ w
                    result = antisym_canonical(m)
                    self.assertTrue(is_unitary(result.u, 1e-10))
                    np.testing.assert_allclose(result.blocks, [1.0, s], atol=1e-12)
                    self.assertEqual(result.null_dim, n - 4)
                    self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10)

    def test_rejects_symmetric(self):
        """Symmetric input is refused"""
        with self.assertRaises(ValidationError):
            antisym_canonical(np.eye(2))

    def test_random_sweep(self):
        """Random antisymmetric matrices reconstruct, pair and show odd null spaces"""
        rng = np.random.default_rng(4202)
        for n in SIZES:
            for _ in range(200):
                m = random_antisymmetric(rng, n)
                result = antisym_canonical(m)
                scale = np.linalg.norm(m)
                self.assertLessEqual(np.linalg.norm(result.reconstruct() - m), 1e-10 * scale)
                self.assertTrue(is_unitary(result.u, 1e-10))
                self.assertEqual(2 * result.blocks.size + result.null_dim, n)
                singular = la.svdvals(m)
                paired = np.concatenate([np.repeat(result.blocks, 2), np.zeros(result.null_dim)])
                np.testing.assert_allclose(singular, paired, atol=1e-10 * scale)
                if n % 2:
                    self.assertGreaterEqual(result.null_dim, 1)


class TestCanonicalSpectrum(unittest.TestCase):
    """Test cases for the factorization-free spectrum"""

    def test_diagonal(self):
        """diag(sqrt 0.9, sqrt 0.1) gives (0.9, 0.1)"""
        p = canonical_spectrum(np.diag(np.sqrt([0.9, 0.1])), Parity.SYMMETRIC)
        np.testing.assert_allclose(p, [0.9, 0.1], atol=1e-14)

    def test_slater(self):
        """The two-site antisymmetric state gives (1/2, 1/2)"""
        s = 1.0 / np.sqrt(2.0)
        np.testing.assert_allclose(canonical_spectrum([[0, s], [-s, 0]], Parity.ANTISYMMETRIC), [0.5, 0.5])

    def test_two_by_two_symmetric(self):
        """The normalized 2x2 symmetric case has p = (2 +- sqrt 2) / 4"""
        m = np.array([[1j, 1j], [1j, 1.0]]) / 2.0
        expected = [(2 + np.sqrt(2)) / 4, (2 - np.sqrt(2)) / 4]
        np.testing.assert_allclose(canonical_spectrum(m, Parity.SYMMETRIC), expected, atol=1e-12)

    @settings(deadline=None, max_examples=30)
    @given(n=st.integers(min_value=2, max_value=20), seed=st.integers(min_value=0, max_value=2**31))
    def test_unitary_congruence_invariance(self, n, seed):
        """W^T M W has the same spectrum as M"""
        rng = np.random.default_rng(seed)
        for parity, sample in ((Parity.SYMMETRIC, random_symmetric), (Parity.ANTISYMMETRIC, random_antisymmetric)):
            m = sample(rng, n)
            m = m / np.linalg.norm(m)
            w = random_unitary(rng, n)
            np.testing.assert_allclose(
                canonical_spectrum(w.T @ m @ w, parity), canonical_spectrum(m, parity), atol=1e-10
            )


class TestNormalReduction(unittest.TestCase):
    """Test cases for the reduction to a normal matrix"""

    def test_reduction(self):
        """C is normal, keeps the symmetry type and rebuilds M"""
        rng = np.random.default_rng(8)
        for parity, sample in ((Parity.SYMMETRIC, random_symmetric), (Parity.ANTISYMMETRIC, random_antisymmetric)):
            m = sample(rng, 7)
            result = normal_reduction(m)
            c = result.c
            self.assertIs(result.parity, parity)
            np.testing.assert_allclose(c @ c.conj().T, c.conj().T @ c, atol=1e-10 * np.linalg.norm(m) ** 2)
            np.testing.assert_allclose(c, int(parity) * c.T, atol=1e-10 * np.linalg.norm(m))
            np.testing.assert_allclose(result.u @ c @ result.u.T, m, atol=1e-10 * np.linalg.norm(m))

    def test_rejects_general_matrix(self):
        """A matrix that is neither symmetric nor antisymmetric is refused"""
        with self.assertRaises(ValidationError):
            normal_reduction([[1.0, 2.0], [0.0, 1.0]])


if __name__ == "__main__":
    unittest.main()
