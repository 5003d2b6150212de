import csv
import json
import os
import tempfile
from unittest import mock

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write_spec(self, data, name='spec.json'):
        path = self.path(name)
        with open(path, 'w') as handle:
            json.dump(data, handle)
        return path

    def call(self, *args, **options):
        options.setdefault('out', self.path('out'))
        options.setdefault('stdout', open(os.devnull, 'w'))
        options.setdefault('stderr', open(os.devnull, 'w'))
        self.addCleanup(options['stdout'].close)
        self.addCleanup(options['stderr'].close)
        return call_command(*args, **options)

    def read_json(self, name):
        with open(self.path(name)) as handle:
            return json.load(handle)


SCALAR = {'N': 1, 'alpha': 1.0, 's': 1.0, 'B': [[0]]}
DG1 = {'s': 1.0, 'dg1': {'N': 2, 'alpha': 1.0, 'nu': [1.0]}}


class VerifyCommandTests(CommandTestCase):
    def test_structural_suite_passes(self):
        spec = self.write_spec(SCALAR)
        self.call('verify', spec=spec, suite='structural', nmax=5)
        report = self.read_json('out.json')
        self.assertTrue(report['passed'])
        with open(self.path('out.csv')) as handle:
            rows = list(csv.DictReader(handle))
        self.assertTrue(rows)
        self.assertTrue(all(row['suite'] == 'structural' for row in rows))

    def test_section_final_suite(self):
        spec = self.write_spec(DG1)
        self.call('verify', spec=spec, suite='section-final', nmax=2, s_list='0.5,2')
        report = self.read_json('out.json')
        self.assertEqual(sorted({e['s'] for e in report['entries']}), [0.0, 0.5, 2.0])

    @override_settings(MVOP_TOLERANCES={'structural': 0.0})
    def test_failed_tolerance_exits_one(self):
        spec = self.write_spec(SCALAR)
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', spec=spec, suite='structural', nmax=2)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_invalid_spec_exits_two(self):
        spec = self.write_spec({'N': 1, 'alpha': -1.0, 'B': [[0]]})
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', spec=spec, suite='structural', nmax=1)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertEqual(self.read_json('out.error.json')['error'], 'ValidationError')

    def test_linear_algebra_error_exits_two(self):
        spec = self.write_spec(SCALAR)
        with mock.patch('laguerre.management.commands.verify.run_suite',
                        side_effect=np.linalg.LinAlgError('Singular matrix')):
            with self.assertRaises(CommandError) as ctx:
                self.call('verify', spec=spec, suite='structural', nmax=1)
        self.assertEqual(ctx.exception.returncode, 2)
        payload = self.read_json('out.error.json')
        self.assertEqual(payload['error'], 'SingularMatrix')
        self.assertIn('Singular matrix', payload['detail'])

    def test_numerical_failure_exits_two(self):
        spec = self.write_spec(SCALAR)
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', spec=spec, suite='section-final', nmax=1)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertEqual(self.read_json('out.error.json')['error'], 'InvalidInput')


class ShippedSpecTests(CommandTestCase):
    def test_default_run_passes_on_every_shipped_spec(self):
        for name in ('scalar', 'diagonal', 'dg1'):
            with self.subTest(spec=name):
                spec = os.path.join(settings.BASE_DIR, 'specs', f'{name}.json')
                self.call('verify', spec=spec, suite='all', s_list='0.5,1,2', out=self.path(name))
                report = self.read_json(f'{name}.json')
                self.assertTrue(report['passed'])
                self.assertEqual(report['context']['n_max'], settings.MVOP_DEFAULT_NMAX)


class OutputCommandTests(CommandTestCase):
    def test_family_of_degree_zero(self):
        spec = self.write_spec(SCALAR)
        self.call('family', spec=spec, nmax=0, lax=True)
        data = self.read_json('out.json')
        self.assertEqual(data['n_max'], 0)
        self.assertEqual(data['polynomials'][0]['coefficients'], [[[[1.0, 0.0]]]])
        self.assertEqual(len(data['lax']), 1)

    def test_moments_table(self):
        spec = self.write_spec(DG1)
        self.call('moments', spec=spec, kmax=2)
        with open(self.path('out.csv')) as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual(len(rows), 4 * 4)
        self.assertEqual(rows[0]['k'], '-1')

    def test_zero_length_evolution(self):
        spec = self.write_spec(SCALAR)
        self.call('evolve', spec=spec, n=1, s0=1.0, s1=1.0, dump_trajectory=True)
        with open(self.path('out.trajectory.csv')) as handle:
            rows = list(csv.reader(handle))
        self.assertEqual(len(rows), 2)
        self.assertTrue(self.read_json('out.json')['passed'])

    def test_bootstrap(self):
        spec = self.write_spec(DG1)
        self.call('bootstrap', spec=spec, nmax=2)
        steps = self.read_json('out.steps.json')
        self.assertEqual([step['n'] for step in steps], [0, 1, 2])
        self.assertIsNone(steps[0]['beta_rec'])

    def test_piii_scan(self):
        spec = self.write_spec(SCALAR)
        self.call('piii', spec=spec, n=1, s0=0.5, s1=0.55, ds=0.01)
        with open(self.path('out.samples.csv')) as handle:
            rows = list(csv.reader(handle))
        self.assertEqual(len(rows), 1 + 4)

    def test_parallel_sweep(self):
        spec = self.write_spec(SCALAR)
        self.call('sweep', spec=spec, start=0.5, stop=2.0, steps=3, suite='structural', nmax=3, jobs=2)
        report = self.read_json('out.json')
        self.assertTrue(report['passed'])
        self.assertEqual(sorted({e['s'] for e in report['entries']}), [0.5, 1.25, 2.0])

    def test_serial_sweep(self):
        spec = self.write_spec(SCALAR)
        self.call('sweep', spec=spec, start=0.5, stop=1.5, steps=3, suite='discrete', nmax=2, jobs=1)
        report = self.read_json('out.json')
        self.assertEqual(sorted({e['s'] for e in report['entries']}), [0.5, 1.0, 1.5])
