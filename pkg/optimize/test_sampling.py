#!/usr/bin/env python3
import unittest

import numpy as np

from geoent.states.qstate import HybridSpec, SeedPattern, named_state, named_seed, superpose, make_basic_ti
from geoent.overlap.overlap import TyingPattern, tying_from_seed, overlap_sq
from geoent.optimize.model import SampleConfig
from geoent.optimize.sampling import sample_maximize
from geoent.optimize.streams import block_size, draw_block, derive_seed


def hybrid(first, second, c, phi=np.pi / 3):
    return superpose(HybridSpec(((named_state(first), np.sqrt(c)),
                                 (named_state(second), np.exp(1j * phi) * np.sqrt(1 - c)))))


class TestStreams(unittest.TestCase):
    """
        Testcase for counter-keyed streams
    """

    def test_block_is_reproducible(self):
        a1, t1 = draw_block(42, 3, 100, 2)
        a2, t2 = draw_block(42, 3, 100, 2)
        np.testing.assert_array_equal(a1, a2)
        np.testing.assert_array_equal(t1, t2)
        self.assertTrue(np.all((t1 >= 0) & (t1 < 2 * np.pi)))

    def test_blocks_and_keys_differ(self):
        a1, _ = draw_block(42, 0, 10, 1)
        a2, _ = draw_block(42, 1, 10, 1)
        a3, _ = draw_block(42, 0, 10, 1, stream_key=(7,))
        self.assertFalse(np.array_equal(a1, a2))
        self.assertFalse(np.array_equal(a1, a3))

    def test_block_size(self):
        self.assertEqual(block_size(4), 1 << 16)
        self.assertEqual(block_size(16), 16)

    def test_derive_seed(self):
        self.assertEqual(derive_seed(1, "A1-1", 2), derive_seed(1, "A1-1", 2))
        self.assertNotEqual(derive_seed(1, "A1-1", 2), derive_seed(1, "A1-1", 3))
        self.assertNotEqual(derive_seed(1, "A1-1", 2), derive_seed(1, "A1-2", 2))
        self.assertLess(derive_seed(1, "A1-1", 2), 2 ** 64)


class TestSampleMaximize(unittest.TestCase):
    """
        Testcase for random sampling
    """

    def test_seed_tying_reaches_one_fifth(self):
        psi = named_state("psi1a_5")
        cfg = SampleConfig(100_000, 0, tying_from_seed(named_seed("psi1a_5")))
        r = sample_maximize(psi, cfg)
        self.assertGreaterEqual(r.lambda_, 0.195)
        self.assertLessEqual(r.lambda_, 0.2 + 1e-12)

    def test_pi_tying_below_one_fifth(self):
        # 5 a^2 (1-a)^3 peaks at a = 2/5
        psi = named_state("psi1a_5")
        r = sample_maximize(psi, SampleConfig(20_000, 0, TyingPattern.permutation_invariant(5)))
        self.assertAlmostEqual(r.lambda_, 5 * 0.4 ** 2 * 0.6 ** 3, delta=1e-4)

    def test_rounding_hits_vertex(self):
        r = sample_maximize(named_state("GHZ_4"), SampleConfig(100_000, 1, TyingPattern.free(4)))
        self.assertAlmostEqual(r.lambda_, 0.5, delta=1e-12)
        self.assertTrue(set(r.best_params.a.tolist()) <= {0.0, 1.0})

    def test_without_rounding(self):
        r = sample_maximize(named_state("GHZ_4"), SampleConfig(1000, 1, TyingPattern.free(4), include_boundary_rounding=False))
        self.assertLess(r.lambda_, 0.5)

    def test_table_row(self):
        psi = hybrid("GHZ_4", "GHZp_4", 0.75)
        r = sample_maximize(psi, SampleConfig(100_000, 3, tying_from_seed(named_seed("GHZp_4"))))
        self.assertGreaterEqual(r.lambda_, 0.37)

    def test_result_consistent(self):
        psi = hybrid("psi1a_6", "psi2a_6", 0.5)
        r = sample_maximize(psi, SampleConfig(5000, 9, TyingPattern.free(6), stall_window=1000))
        self.assertAlmostEqual(overlap_sq(psi, r.best_params), r.lambda_, delta=1e-12)
        self.assertLess(r.improved_at, r.samples_used)
        self.assertEqual(r.steady, r.samples_used - 1 - r.improved_at >= 1000)

    def test_deterministic_and_split_independent(self):
        psi = named_state("psi2_8")
        cfg = SampleConfig(10_000, 42, TyingPattern.free(8))
        r1 = sample_maximize(psi, cfg)
        r2 = sample_maximize(psi, cfg)
        r3 = sample_maximize(psi, cfg, workers=3)
        self.assertEqual(r1.lambda_, r2.lambda_)
        self.assertEqual(r1.lambda_, r3.lambda_)
        self.assertEqual(r1.improved_at, r3.improved_at)
        np.testing.assert_array_equal(r1.best_params.a, r3.best_params.a)

    def test_monotone_in_samples(self):
        psi = hybrid("W_5", "psi1a_5", 0.5)
        tying = TyingPattern.free(5)
        values = [ sample_maximize(psi, SampleConfig(n, 5, tying, stall_window=1)).lambda_
                   for n in (10, 100, 1000, 40_000, 70_000) ]
        self.assertEqual(values, sorted(values))

    def test_product_shortcut(self):
        psi = make_basic_ti("1111")
        r = sample_maximize(psi, SampleConfig(10, 0, TyingPattern.permutation_invariant(4), stall_window=1))
        self.assertEqual(r.lambda_, 1.0)
        self.assertEqual(r.samples_used, 0)

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            SampleConfig(0, 0, TyingPattern.free(3))
        with self.assertRaises(ValueError):
            SampleConfig(10, 0, TyingPattern.free(3), stall_window=11)
        with self.assertRaises(ValueError):
            SampleConfig(10, -1, TyingPattern.free(3), stall_window=5)
        self.assertEqual(SampleConfig.create(10, 0, TyingPattern.free(3)).stall_window, 10)

    def test_default_stall_window_follows_samples(self):
        self.assertEqual(SampleConfig(1000, 1, TyingPattern.free(4)).stall_window, 1000)
        self.assertEqual(SampleConfig(50_000, 1, TyingPattern.free(4)).stall_window, 10_000)


if __name__ == '__main__':
    unittest.main()
