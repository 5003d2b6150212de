import numpy as np

from laguerre.suites import SUITE_CHOICES, sweep

from ._base import MVOPCommand


class Command(MVOPCommand):
    help = 'Jalankan satu suite pada grid parameter secara paralel.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--param', choices=['s'], default='s')
        parser.add_argument('--from', dest='start', type=float, required=True)
        parser.add_argument('--to', dest='stop', type=float, required=True)
        parser.add_argument('--steps', type=int, required=True)
        parser.add_argument('--suite', choices=SUITE_CHOICES, default='structural')
        parser.add_argument('--nmax', type=int, default=None)
        parser.add_argument('--jobs', type=int, default=None, help='Jumlah worker (default MVOP_JOBS)')

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        grid = np.linspace(options['start'], options['stop'], max(options['steps'], 1))
        report = sweep(spec, options['suite'], self.default_nmax(options['nmax']), grid, jobs=options['jobs'])
        self.finish(report)
