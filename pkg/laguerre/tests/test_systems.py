from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from laguerre.exceptions import InvalidInput
from laguerre.lax import lax_chain
from laguerre.mvop import build_family
from laguerre.reports import ResidualReport
from laguerre.suites import run_suite, sweep
from laguerre.systems import (
    fd_convergence_ratio,
    lax_derivatives,
    residual_closed_systems,
    residual_dp_system,
    residual_p_system,
)

from .utils import dg1_spec, scalar_spec


def failures(report):
    return [(e.n, e.s, e.identity, e.rel_residual) for e in report.failures]


class DiscreteSystemTests(SimpleTestCase):
    def test_scalar_discrete_system(self):
        chain = lax_chain(build_family(scalar_spec(alpha=1.0, s=1.0), 5))
        report = ResidualReport('discrete')
        for n in range(1, 5):
            residual_dp_system(chain, n, report)
        self.assertTrue(report.passed, failures(report))
        self.assertFalse(report.get('lax-shift-z-1', n=2).skipped)

    def test_matrix_discrete_system(self):
        for s in (0.5, 1.0, 2.0):
            chain = lax_chain(build_family(dg1_spec(s=s), 4))
            report = ResidualReport('discrete')
            for n in range(4):
                residual_dp_system(chain, n, report)
            self.assertTrue(report.passed, failures(report))

    def test_scalar_dp1_reduction(self):
        alpha = 1.5
        chain = lax_chain(build_family(scalar_spec(alpha=alpha, s=1.0), 3))
        for n, lq in enumerate(chain):
            assert_allclose(lq.alpha_rec[0, 0], 2 * n + alpha + 1 + lq.a[0, 0], rtol=1e-8)

    def test_boundaries_are_flagged(self):
        chain = lax_chain(build_family(scalar_spec(), 1))
        report = residual_dp_system(chain, 0)
        self.assertTrue(report.get('dP3', n=0).skipped)
        self.assertFalse(report.get('dP2', n=0).skipped)
        report = residual_dp_system(chain, 1)
        self.assertTrue(report.get('dP4', n=1).skipped)
        with self.assertRaises(IndexError):
            residual_dp_system(chain, 2)


class ContinuousSystemTests(SimpleTestCase):
    def test_scalar_p_system(self):
        report = ResidualReport('continuous')
        for n in (0, 2):
            residual_p_system(lax_derivatives(scalar_spec(s=1.0), n, 1.0), report)
        self.assertTrue(report.passed, failures(report))
        self.assertTrue(report.get('P2', n=0).skipped)

    def test_matrix_p_system(self):
        report = ResidualReport('continuous')
        for n in (1, 3):
            residual_p_system(lax_derivatives(dg1_spec(s=1.0), n, 1.0), report)
        self.assertTrue(report.passed, failures(report))

    def test_second_order_stencil(self):
        ratio = fd_convergence_ratio(scalar_spec(s=1.0), 1, 1.0, 'P3', h=2e-3)
        self.assertGreaterEqual(ratio, 3.5)
        self.assertLessEqual(ratio, 4.5)

    def test_five_point_stencil_is_default(self):
        spec = dg1_spec(s=1.0)
        deriv = lax_derivatives(spec, 2, 1.0)
        self.assertEqual(deriv.order, 4)
        central = lax_derivatives(spec, 2, 1.0, h=1e-4, order=2)
        assert_allclose(deriv.dot['a'], central.dot['a'], rtol=1e-6, atol=1e-8)
        self.assertIsNone(lax_derivatives(spec, 0, 1.0).dot['gamma_nm1'])
        with self.assertRaises(InvalidInput):
            lax_derivatives(spec, 1, 1.0, order=3)

    def test_toda_alpha_at_top_degree(self):
        report = residual_p_system(lax_derivatives(dg1_spec(s=1.0), 5, 1.0))
        entry = report.get('toda-alpha', n=5)
        self.assertTrue(entry.passed, entry.rel_residual)
        self.assertTrue(report.passed, failures(report))

    def test_stencil_preconditions(self):
        with self.assertRaises(InvalidInput):
            lax_derivatives(scalar_spec(s=1.0), 1, 1e-4)
        with self.assertRaises(InvalidInput):
            lax_derivatives(scalar_spec(s=1.0), 1, 0.015)
        lax_derivatives(scalar_spec(s=1.0), 1, 0.015, order=2)
        with self.assertRaises(InvalidInput):
            lax_derivatives(dg1_spec(normalize_gamma0=True), 1, 1.0)


class ClosedSystemTests(SimpleTestCase):
    def test_scalar_closed_systems(self):
        spec = scalar_spec(alpha=1.0, s=1.0)
        chain = lax_chain(build_family(spec, 4))
        report = ResidualReport('closed')
        for n in (1, 2):
            residual_closed_systems(chain, n, lax_derivatives(spec, n, 1.0), report=report)
        self.assertTrue(report.passed, failures(report))

    def test_matrix_closed_systems_pick_inverse_reading(self):
        spec = dg1_spec(s=1.0)
        chain = lax_chain(build_family(spec, 4))
        report = ResidualReport('closed')
        for n in (1, 2, 3):
            residual_closed_systems(chain, n, lax_derivatives(spec, n, 1.0), report=report)
        self.assertTrue(report.passed, failures(report))
        self.assertEqual(report.context['d_reading'], {'1': 'inverse', '2': 'inverse', '3': 'inverse'})
        self.assertEqual(report.get('difference-second-order-D', n=2).note, 'reading=inverse')

    def test_zero_degree_is_skipped(self):
        chain = lax_chain(build_family(scalar_spec(), 1))
        report = residual_closed_systems(chain, 0)
        self.assertTrue(all(entry.skipped for entry in report.entries))

    def test_derivative_degree_must_match(self):
        spec = scalar_spec(s=1.0)
        chain = lax_chain(build_family(spec, 3))
        with self.assertRaises(InvalidInput):
            residual_closed_systems(chain, 2, lax_derivatives(spec, 1, 1.0))


class SuiteGridTests(SimpleTestCase):
    S_LIST = [0.5, 1.0, 2.0]

    def test_structural_grid(self):
        for spec in (scalar_spec(alpha=1.0), dg1_spec()):
            report = run_suite(spec, 'structural', 5, self.S_LIST)
            self.assertTrue(report.passed, failures(report))
            self.assertEqual({e.n for e in report.entries}, set(range(6)))

    def test_continuous_grid(self):
        for spec in (scalar_spec(alpha=1.0), dg1_spec()):
            report = run_suite(spec, 'continuous', 5, self.S_LIST)
            self.assertTrue(report.passed, failures(report))
            self.assertEqual({e.s for e in report.entries}, set(self.S_LIST))

    def test_parallel_sweep_matches_serial(self):
        spec = scalar_spec(alpha=1.0)
        serial = sweep(spec, 'discrete', 3, [0.5, 1.0], jobs=1)
        parallel = sweep(spec, 'discrete', 3, [0.5, 1.0], jobs=2)
        self.assertTrue(parallel.passed, failures(parallel))
        self.assertEqual([e.sort_key() for e in serial.sorted_entries()],
                         [e.sort_key() for e in parallel.sorted_entries()])
        for mine, theirs in zip(serial.sorted_entries(), parallel.sorted_entries()):
            self.assertAlmostEqual(mine.abs_residual, theirs.abs_residual, delta=1e-12 * (1 + mine.abs_residual))
