from laguerre.serializers import LaxStateSerializer
from laguerre.suites import evolution_report

from ._base import MVOPCommand, write_json


class Command(MVOPCommand):
    help = 'Integrasikan sistem tertutup orde satu untuk (a_n, b_n, B_n, B-hat_n) dari s0 ke s1.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--s0', type=float, required=True)
        parser.add_argument('--s1', type=float, required=True)
        parser.add_argument('--dump-trajectory', action='store_true')

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        report, trajectory = evolution_report(spec, options['n'], options['s0'], options['s1'],
                                              dense=options['dump_trajectory'])
        write_json(f'{self.prefix}.state.json', LaxStateSerializer(trajectory.final).data)
        if options['dump_trajectory']:
            trajectory.write_csv(f'{self.prefix}.trajectory.csv')
            self.stdout.write(f"{len(trajectory.states)} titik lintasan ditulis ke {self.prefix}.trajectory.csv")
        self.finish(report)
