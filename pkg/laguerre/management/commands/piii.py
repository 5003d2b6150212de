import csv

from laguerre.suites import piii_report

from ._base import MVOPCommand


class Command(MVOPCommand):
    help = 'Pindai residual Painleve III dari a_n(s) untuk bobot Laguerre skalar.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--s0', type=float, required=True)
        parser.add_argument('--s1', type=float, required=True)
        parser.add_argument('--ds', type=float, default=0.01)

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        report, samples = piii_report(spec, options['n'], options['s0'], options['s1'], options['ds'])
        with open(f'{self.prefix}.samples.csv', 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(['s', 'a', 'adot', 'addot', 'residual', 'first_order_residual'])
            for row in samples:
                writer.writerow([row.s, row.a.real, row.adot.real, row.addot.real, row.residual,
                                 row.first_order_residual])
        self.finish(report)
