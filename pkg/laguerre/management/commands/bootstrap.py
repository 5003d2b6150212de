from laguerre.serializers import BootstrapStepSerializer
from laguerre.suites import bootstrap_report

from ._base import MVOPCommand, write_json


class Command(MVOPCommand):
    help = 'Iterasi diskret empat langkah dari a_0 (gamma_0 = I), dibandingkan dengan data Hankel.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--nmax', type=int, default=None)
        parser.add_argument('--guard', action='store_true', help='Hentikan bila menyimpang > MVOP_BOOTSTRAP_GUARD')

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        report, steps = bootstrap_report(spec, self.default_nmax(options['nmax']), guard=options['guard'])
        write_json(f'{self.prefix}.steps.json', BootstrapStepSerializer(steps, many=True).data)
        self.finish(report)
