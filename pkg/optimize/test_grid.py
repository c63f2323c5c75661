#!/usr/bin/env python3
import unittest

import numpy as np

from geoent.states.qstate import HybridSpec, NAMED_SEEDS, named_state, named_seed, superpose, make_w
from geoent.overlap.overlap import TyingPattern, tying_from_seed, overlap_sq
from geoent.overlap.closed_form import lambda_known_basic
from geoent.optimize.grid import grid_oracle, GridBudgetExceeded


class TestGridOracle(unittest.TestCase):
    """
        Testcase for the brute-force oracle
    """

    def test_examples(self):
        r = grid_oracle(named_state("psi1b_5"), tying_from_seed(named_seed("psi1b_5")), 100)
        self.assertGreaterEqual(r.lambda_, 0.1999)
        r = grid_oracle(named_state("GHZ_3"), TyingPattern.permutation_invariant(3), 50)
        self.assertAlmostEqual(r.lambda_, 0.5, delta=1e-15)
        r = grid_oracle(make_w(3), TyingPattern.permutation_invariant(3), 300)
        self.assertAlmostEqual(r.lambda_, 4 / 9, delta=2e-5)
        self.assertEqual(r.method, "grid")

    def test_catalog_agreement(self):
        for name, seed in NAMED_SEEDS.items():
            psi = named_state(name)
            expected = lambda_known_basic(seed)
            if psi.n_sites > 6 or isinstance(expected, str):
                continue
            r = grid_oracle(psi, tying_from_seed(named_seed(name)), 200)
            self.assertLessEqual(r.lambda_, expected.lambda_max + 1e-9, name)
            self.assertGreaterEqual(r.lambda_, expected.lambda_max - 1e-3, name)
            self.assertAlmostEqual(overlap_sq(psi, r.best_params), r.lambda_, delta=1e-12)

    def test_tied_below_free(self):
        psi = named_state("psi_4")
        tied = grid_oracle(psi, tying_from_seed(named_seed("psi_4")), 6)
        free = grid_oracle(psi, TyingPattern.free(4), 6)
        self.assertLessEqual(tied.lambda_, free.lambda_ + 1e-9)

        c = 0.25
        mixed = superpose(HybridSpec(((named_state("GHZ_4"), np.sqrt(c)),
                                      (named_state("GHZp_4"), np.exp(1j * np.pi / 3) * np.sqrt(1 - c)))))
        tied = grid_oracle(mixed, tying_from_seed(named_seed("GHZp_4")), 4)
        free = grid_oracle(mixed, TyingPattern.free(4), 4)
        self.assertTrue(free.extra["phases_gridded"])
        self.assertLessEqual(tied.lambda_, free.lambda_ + 1e-9)
        self.assertAlmostEqual(tied.lambda_, 0.375, delta=1e-12)

    def test_budget_guard(self):
        psi = superpose(HybridSpec(((named_state("GHZ_4"), 0.5), (named_state("GHZp_4"), 0.5j))))
        with self.assertRaises(GridBudgetExceeded) as ctx:
            grid_oracle(psi, TyingPattern.free(4), 200)
        self.assertEqual(ctx.exception.required, 200 ** 8)
        self.assertEqual(ctx.exception.axes, 8)


if __name__ == '__main__':
    unittest.main()
