#!/usr/bin/env python3
import unittest

import numpy as np

from geoent.states.qstate import (NAMED_SEEDS, SeedPattern, PureState, DimensionMismatch,
                                  named_state, make_w, make_dicke, cyclic_shift)
from geoent.overlap.overlap import *


CATALOG = list(NAMED_SEEDS) + ["GHZ_4", "GHZ_6", "GHZp_4", "GHZp_8", "W_3", "W_5", "S_4_2"]


def numeric_grad(psi, params, h=1e-6):
    a, theta = params.a.copy(), params.theta.copy()
    d_a, d_theta = np.zeros_like(a), np.zeros_like(theta)
    for i in range(len(a)):
        for vec, out in ((a, d_a), (theta, d_theta)):
            up, down = vec.copy(), vec.copy()
            up[i] += h
            down[i] -= h
            if vec is a:
                fu = overlap_sq(psi, ProductParams(up, theta))
                fd = overlap_sq(psi, ProductParams(down, theta))
            else:
                fu = overlap_sq(psi, ProductParams(a, up))
                fd = overlap_sq(psi, ProductParams(a, down))
            out[i] = (fu - fd) / (2 * h)
    return d_a, d_theta


class TestProductVector(unittest.TestCase):
    """
        Testcase for the product-state ansatz
    """

    def test_vertex(self):
        v = product_vector(ProductParams([1, 1, 1], [0.3, 1.0, 2.0]))
        self.assertAlmostEqual(abs(v.amplitudes[7]), 1.0, delta=1e-15)

    def test_formula(self):
        v = product_vector(ProductParams.uniform(3, 1 / 3, 0.0))
        self.assertAlmostEqual(v.amplitudes[int("100", 2)].real, np.sqrt(1 / 3) * (2 / 3), delta=1e-15)

    def test_phase_only(self):
        v = product_vector(ProductParams([0, 0], [np.pi, np.pi]))
        self.assertAlmostEqual(abs(v.amplitudes[0]), 1.0, delta=1e-15)
        self.assertEqual(len(v.support()), 1)

    def test_theta_is_wrapped(self):
        p = ProductParams([0.5], [-np.pi / 2])
        self.assertAlmostEqual(p.theta[0], 1.5 * np.pi)

    def test_rejects_bad_a(self):
        with self.assertRaises(ValueError):
            ProductParams([1.5, 0], [0, 0])
        with self.assertRaises(DimensionMismatch):
            ProductParams([0.5, 0.5], [0])

    def test_batch_matches_single(self):
        rng = np.random.default_rng(3)
        a, theta = rng.random((5, 4)), rng.random((5, 4)) * 2 * np.pi
        psi = named_state("psi_4")
        batch = overlap_sq_batch(psi, a, theta)
        for i in range(5):
            self.assertAlmostEqual(batch[i], overlap_sq(psi, ProductParams(a[i], theta[i])), delta=1e-14)


class TestOverlap(unittest.TestCase):
    """
        Testcase for overlap_sq and its properties
    """

    def test_values(self):
        self.assertAlmostEqual(overlap_sq(named_state("GHZ_3"), ProductParams.uniform(3, 1.0)), 0.5, delta=1e-15)
        self.assertAlmostEqual(overlap_sq(make_w(3), ProductParams.uniform(3, 1 / 3, 0.7)), 4 / 9, delta=1e-15)
        self.assertAlmostEqual(overlap_sq(named_state("psi_4"), ProductParams([1, 1, 0, 0], [0.1, 2, 3, 4])), 0.25, delta=1e-15)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            overlap_sq(make_w(3), ProductParams.uniform(4, 0.5))

    def test_bounds_and_self_overlap(self):
        rng = np.random.default_rng(11)
        for name in CATALOG:
            psi = named_state(name)
            n = psi.n_sites
            for _ in range(20):
                p = ProductParams(rng.random(n), rng.random(n) * 2 * np.pi)
                v = overlap_sq(psi, p)
                self.assertGreaterEqual(v, 0.0)
                self.assertLessEqual(v, 1.0)
                self.assertAlmostEqual(overlap_sq(product_vector(p), p), 1.0, delta=1e-12)

    def test_common_phase_invariance(self):
        rng = np.random.default_rng(5)
        for name in list(NAMED_SEEDS) + ["W_4", "S_4_2"]:
            psi = named_state(name)
            n = psi.n_sites
            p = ProductParams(rng.random(n), rng.random(n) * 2 * np.pi)
            q = ProductParams(p.a, p.theta + 1.234)
            self.assertAlmostEqual(overlap_sq(psi, p), overlap_sq(psi, q), delta=1e-12)

    def test_ring_symmetry(self):
        rng = np.random.default_rng(8)
        psi = named_state("psi1a_5")
        p = ProductParams(rng.random(5), rng.random(5) * 2 * np.pi)
        for s in range(5):
            self.assertAlmostEqual(overlap_sq(cyclic_shift(psi, s), shift_params(p, s)), overlap_sq(psi, p), delta=1e-12)

    def test_shift_params_matches_state_shift(self):
        p = ProductParams([0.2, 0.5, 0.9], [0.1, 0.2, 0.3])
        moved = cyclic_shift(product_vector(p), 1)
        self.assertTrue(moved.allclose(product_vector(shift_params(p, 1))))

    def test_ti_mixture_overlap(self):
        rng = np.random.default_rng(2)
        psi = named_state("psi3_6")
        p = ProductParams(rng.random(6), rng.random(6) * 2 * np.pi)
        self.assertAlmostEqual(ti_mixture_overlap(psi, p), overlap_sq(psi, p), delta=1e-12)

        # Not TI: the mixture averages over the shifted copies
        target = PureState(3, np.eye(8)[4])
        p = ProductParams([1, 0, 0], [0, 0, 0])
        self.assertAlmostEqual(ti_mixture_overlap(target, p), 1 / 3, delta=1e-12)


class TestGradient(unittest.TestCase):
    """
        Testcase for overlap_sq_grad
    """

    def test_finite_differences(self):
        rng = np.random.default_rng(1)
        for name in CATALOG:
            psi = named_state(name)
            n = psi.n_sites
            for _ in range(100):
                p = ProductParams(0.05 + 0.9 * rng.random(n), rng.random(n) * 2 * np.pi)
                g = overlap_sq_grad(psi, p)
                d_a, d_theta = numeric_grad(psi, p)
                np.testing.assert_allclose(g.d_a, d_a, rtol=1e-5, atol=1e-7)
                np.testing.assert_allclose(g.d_theta, d_theta, rtol=1e-5, atol=1e-7)
                self.assertFalse(g.one_sided.any())

    def test_stationary_at_w_maximizer(self):
        g = overlap_sq_grad(make_w(3), ProductParams.uniform(3, 1 / 3, 0.4))
        self.assertLess(np.linalg.norm(np.concatenate([g.d_a, g.d_theta])), 1e-9)

    def test_real_state_theta_gradient(self):
        rng = np.random.default_rng(4)
        for name in ("GHZ_4", "psi2a_6", "S_4_2"):
            psi = named_state(name)
            g = overlap_sq_grad(psi, ProductParams(rng.random(psi.n_sites), np.zeros(psi.n_sites)))
            self.assertLess(np.max(np.abs(g.d_theta)), 1e-12)

    def test_boundary_is_one_sided(self):
        psi = named_state("psi_4")
        p = ProductParams([1, 0.4, 0, 0.7], [0, 0, 0, 0])
        g = overlap_sq_grad(psi, p)
        self.assertTrue(g.one_sided[0] and g.one_sided[2])
        self.assertFalse(g.one_sided[1] or g.one_sided[3])
        self.assertTrue(np.all(np.isfinite(g.d_a)))
        # moving a_0 inward from 1 is a finite difference of the objective
        inward = ProductParams([1 - 1e-7, 0.4, 0, 0.7], [0, 0, 0, 0])
        self.assertAlmostEqual(g.d_a[0], (overlap_sq(psi, inward) - overlap_sq(psi, p)) / -1e-7, delta=1e-6)


class TestTying(unittest.TestCase):
    """
        Testcase for tying patterns
    """

    def test_pi(self):
        p = expand_tied(TyingPattern.permutation_invariant(4), [0.3], [1.0])
        self.assertTrue(np.all(p.a == 0.3))
        self.assertTrue(np.all(p.theta == 1.0))

    def test_from_seed(self):
        self.assertEqual(tying_from_seed(SeedPattern.from_string("11000")).classes(), [[0, 1], [2, 3, 4]])
        self.assertEqual(tying_from_seed(SeedPattern.from_string("10100")).classes(), [[0, 2], [1, 3, 4]])
        self.assertTrue(tying_from_seed(SeedPattern.from_string("1111")).is_permutation_invariant)

    def test_expand(self):
        t = tying_from_seed(SeedPattern.from_string("11000"))
        p = expand_tied(t, [0.9, 0.1], [0.0, 1.0])
        np.testing.assert_array_equal(p.a, [0.9, 0.9, 0.1, 0.1, 0.1])
        with self.assertRaises(DimensionMismatch):
            expand_tied(t, [0.1], [0.0])

    def test_identity(self):
        a, th = np.array([0.1, 0.2, 0.3]), np.array([0.4, 0.5, 0.6])
        p = expand_tied(TyingPattern.free(3), a, th)
        np.testing.assert_array_equal(p.a, a)
        np.testing.assert_allclose(p.theta, th)

    def test_labels_validated(self):
        with self.assertRaises(ValueError):
            TyingPattern((0, 2, 2))

    def test_partition_compare(self):
        self.assertTrue(TyingPattern((1, 1, 0)).same_partition(TyingPattern((0, 0, 1))))
        self.assertFalse(TyingPattern((0, 1, 0)).same_partition(TyingPattern((0, 0, 1))))

    def test_reduce(self):
        t = TyingPattern((0, 1, 0, 1))
        np.testing.assert_allclose(t.reduce([1.0, 2.0, 3.0, 4.0]), [4.0, 6.0])


if __name__ == '__main__':
    unittest.main()
