from laguerre.suites import SUITE_CHOICES, initial_data_report, run_suite
from laguerre.systems import READINGS

from ._base import MVOPCommand, parse_floats


class Command(MVOPCommand):
    help = 'Jalankan suite verifikasi identitas pada grid (n, s); exit 0 hanya bila semua lolos.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--nmax', type=int, default=None)
        parser.add_argument('--s-list', default=None, help='Daftar s dipisah koma (default: s dari spec)')
        parser.add_argument('--suite', choices=SUITE_CHOICES, default='all')
        parser.add_argument('--reading', choices=READINGS, default=None,
                            help='Bacaan suku a B a pada D_n (default: residual terkecil)')
        parser.add_argument('--initial-data', action='store_true', help="Bandingkan dua rute a_n'(0), b_n'(0)")

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        n_max = self.default_nmax(options['nmax'])
        s_list = parse_floats(options['s_list']) if options['s_list'] else [spec.s]
        report = run_suite(spec, options['suite'], n_max, s_list, options['reading'])
        if options['initial_data']:
            report.extend(initial_data_report(spec, n_max))
        self.finish(report)
