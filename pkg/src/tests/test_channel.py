"""Tests for sparse channel generation."""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import unittest  # noqa: E402

import numpy as np  # noqa: E402
import numpy.testing as npt  # noqa: E402
from scipy import stats  # noqa: E402

from modules.channel import (  # noqa: E402
    TapDistribution,
    complex_gaussian,
    generate_sparse_channel,
)
from modules.errors import InvalidSparsityError  # noqa: E402

UNIFORM = TapDistribution.EQUAL_MAGNITUDE_UNIFORM
GAUSSIAN = TapDistribution.GAUSSIAN


class TestGenerateSparseChannel(unittest.TestCase):

    def setUp(self) -> None:
        self.rng = np.random.default_rng(1234)

    def test_equal_magnitude_default_size(self) -> None:
        h = generate_sparse_channel(96, 4, UNIFORM, self.rng)

        self.assertEqual(h.n, 96)
        self.assertEqual(h.k, 4)
        self.assertEqual(np.count_nonzero(h.taps), 4)
        npt.assert_array_equal(np.flatnonzero(h.taps), h.support)
        npt.assert_allclose(np.abs(h.taps[h.support]), 0.5, rtol=0, atol=1e-15)
        self.assertLess(abs(np.linalg.norm(h.taps) - 1.0), 1e-12)

    def test_dense_limit(self) -> None:
        h = generate_sparse_channel(5, 5, UNIFORM, self.rng)

        npt.assert_array_equal(h.support, np.arange(5))
        npt.assert_allclose(np.abs(h.taps), 1 / np.sqrt(5), atol=1e-15)

    def test_gaussian_energy_in_expectation(self) -> None:
        energies = [generate_sparse_channel(96, 4, GAUSSIAN, self.rng).energy
                    for _ in range(10_000)]

        self.assertLess(abs(np.mean(energies) - 1.0), 0.05)

    def test_gaussian_taps_are_not_renormalized(self) -> None:
        energies = {round(generate_sparse_channel(96, 4, GAUSSIAN, self.rng).energy, 6)
                    for _ in range(20)}

        self.assertGreater(len(energies), 1)

    def test_sparsity_and_support_for_both_laws(self) -> None:
        for dist in (UNIFORM, GAUSSIAN):
            for _ in range(200):
                h = generate_sparse_channel(96, 6, dist, self.rng)
                self.assertEqual(np.count_nonzero(h.taps), 6)
                self.assertTrue(np.all(np.diff(h.support) > 0))
                self.assertTrue(np.all((h.support >= 0) & (h.support < 96)))

    def test_equal_magnitude_norm_every_draw(self) -> None:
        for k in (1, 2, 4, 8, 16):
            h = generate_sparse_channel(96, k, UNIFORM, self.rng)
            self.assertLess(abs(np.linalg.norm(h.taps) - 1.0), 1e-12)

    def test_support_positions_are_uniform(self) -> None:
        counts = np.zeros(96)
        for _ in range(10_000):
            counts[generate_sparse_channel(96, 4, UNIFORM, self.rng).support] += 1

        _, p_value = stats.chisquare(counts)
        self.assertGreater(p_value, 0.01)

    def test_invalid_sparsity(self) -> None:
        with self.assertRaises(InvalidSparsityError):
            generate_sparse_channel(4, 5, UNIFORM, self.rng)
        with self.assertRaises(InvalidSparsityError):
            generate_sparse_channel(4, 0, UNIFORM, self.rng)

    def test_accepts_distribution_names(self) -> None:
        h = generate_sparse_channel(16, 2, "gaussian", self.rng)
        self.assertEqual(h.k, 2)

    def test_same_seed_same_channel(self) -> None:
        a = generate_sparse_channel(96, 4, GAUSSIAN, np.random.default_rng(7))
        b = generate_sparse_channel(96, 4, GAUSSIAN, np.random.default_rng(7))

        npt.assert_array_equal(a.taps, b.taps)
        npt.assert_array_equal(a.support, b.support)


class TestComplexGaussian(unittest.TestCase):

    def test_variance_split_between_parts(self) -> None:
        z = complex_gaussian(np.random.default_rng(3), 100_000, 0.5)

        self.assertAlmostEqual(np.var(z.real), 0.25, delta=0.01)
        self.assertAlmostEqual(np.var(z.imag), 0.25, delta=0.01)

    def test_zero_variance_leaves_stream_untouched(self) -> None:
        rng = np.random.default_rng(11)
        npt.assert_array_equal(complex_gaussian(rng, 5, 0.0), np.zeros(5))
        self.assertEqual(rng.standard_normal(), np.random.default_rng(11).standard_normal())

    def test_longer_draw_extends_shorter_one(self) -> None:
        short = complex_gaussian(np.random.default_rng(5), 5, 1.0)
        long = complex_gaussian(np.random.default_rng(5), 9, 1.0)

        npt.assert_array_equal(long[:5], short)


if __name__ == "__main__":
    unittest.main()
