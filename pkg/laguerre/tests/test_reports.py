import csv
import os
import tempfile

from django.test import SimpleTestCase, override_settings

from laguerre.reports import CSV_COLUMNS, ResidualReport, effective_tolerance
from laguerre.serializers import ResidualReportSerializer


class ReportTests(SimpleTestCase):
    def build(self):
        report = ResidualReport('discrete')
        report.add('dP2', 2, 1.0, 1e-9, 1.0)
        report.add('dP1', 1, 1.0, 1e-3, 0.0)
        report.skip('dP3', 0, 1.0, 'batas n=0')
        return report

    def test_pass_and_fail(self):
        report = self.build()
        self.assertFalse(report.passed)
        self.assertEqual([e.identity for e in report.failures], ['dP1'])
        self.assertEqual(report.get('dP2').rel_residual, 0.5e-9)

    @override_settings(MVOP_TOL_SCALE=1e4)
    def test_tolerance_scale(self):
        self.assertAlmostEqual(effective_tolerance('discrete'), 1e-2)
        self.assertTrue(self.build().passed)

    def test_unknown_tolerance(self):
        with self.assertRaises(KeyError):
            effective_tolerance('tidak-ada')

    def test_csv_is_sorted_and_omits_skips(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'r.csv')
            self.build().write_csv(path)
            with open(path) as handle:
                rows = list(csv.DictReader(handle))
        self.assertEqual(list(rows[0].keys()), CSV_COLUMNS)
        self.assertEqual([row['identity'] for row in rows], ['dP1', 'dP2'])
        self.assertEqual(rows[0]['pass'], 'False')

    def test_serialised_report(self):
        data = ResidualReportSerializer(self.build()).data
        self.assertFalse(data['passed'])
        self.assertEqual([e['identity'] for e in data['entries']], ['dP3', 'dP1', 'dP2'])
        self.assertTrue(data['entries'][0]['skipped'])
