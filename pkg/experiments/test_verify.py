#!/usr/bin/env python3
import os
import unittest

import numpy as np

from geoent.core.basemodule import VerificationFailed
from geoent.states.qstate import named_state, make_w
from geoent.overlap.overlap import ProductParams
from geoent.experiments.tables import TableConfig
from geoent.experiments.verify import *


class TestVerify(unittest.TestCase):
    """
        Testcase for the verification helpers and suites
    """

    def test_dicke_decomposition(self):
        self.assertTrue(verify_dicke_decomposition())
        self.assertFalse(verify_dicke_decomposition((np.sqrt(1 / 3) + 0.01, np.sqrt(2 / 3))))
        self.assertFalse(verify_dicke_decomposition(components=("psi_4", "GHZp_4")))

    def test_incoherent_mixture(self):
        value = separable_mixture_overlap(named_state("GHZ_3"),
                                          [ProductParams.uniform(3, 1.0), ProductParams.uniform(3, 0.0)],
                                          [0.5, 0.5])
        self.assertAlmostEqual(value, 0.5, delta=1e-12)
        with self.assertRaises(ValueError):
            separable_mixture_overlap(named_state("GHZ_3"), [ProductParams.uniform(3, 1.0)], [0.7])

    def test_pure_sufficiency(self):
        r = verify_pure_sufficiency(named_state("GHZ_3"), 0.5, n_trials=10_000)
        self.assertTrue(r.passed)
        self.assertLessEqual(r.max_observed, 0.5 + 1e-9)
        r = verify_pure_sufficiency(make_w(3), 4 / 9, n_trials=10_000, seed=3)
        self.assertTrue(r.passed)
        self.assertEqual(r.to_dict()["n_trials"], 10_000)

    def test_pure_sufficiency_detects_low_reference(self):
        r = verify_pure_sufficiency(named_state("GHZ_3"), 0.1, n_trials=1000)
        self.assertFalse(r.passed)
        self.assertGreater(r.violations, 0)

    def test_dicke_suite(self):
        report = run_suite("dicke")
        self.assertTrue(report.passed)
        self.assertEqual(len(report.checks), 3)
        report.raise_for_failure()

    def test_closed_forms_suite(self):
        report = closed_forms_suite(oracle_resolution=100)
        self.assertTrue(report.passed, [ c.to_dict() for c in report.failures() ])
        self.assertTrue(any(c.name == "psi3_6 grid oracle" for c in report.checks))

    def test_purity_suite(self):
        report = run_suite("purity", n_trials=200, oracle_resolution=50)
        self.assertTrue(report.passed, [ c.to_dict() for c in report.failures() ])
        self.assertEqual(report.to_dict()["n_failed"], 0)

    def test_failed_report_raises(self):
        report = SuiteReport("demo")
        report.add("ok", True)
        report.add("broken", False, "expected")
        self.assertFalse(report.passed)
        with self.assertRaises(VerificationFailed):
            report.raise_for_failure()

    def test_unknown_suite(self):
        with self.assertRaises(KeyError):
            run_suite("everything")


@unittest.skipUnless(os.getenv("GEOENT_SLOW"), "reruns the four-qubit table, set GEOENT_SLOW=1")
class TestHierarchySuite(unittest.TestCase):

    def test_four_qubit_hierarchy(self):
        report = hierarchy_suite(TableConfig(n_samples=100_000))
        self.assertTrue(report.passed, [ c.to_dict() for c in report.failures() ])


if __name__ == '__main__':
    unittest.main()
