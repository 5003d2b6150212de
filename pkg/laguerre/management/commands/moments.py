import csv

from laguerre.weight import weight_for

from ._base import MVOPCommand


class Command(MVOPCommand):
    help = 'Tabel momen matriks k = -1..kmax dari bobot (CSV).'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--kmax', type=int, default=8)

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        weight = weight_for(spec)
        path = f'{self.prefix}.csv'
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(['k', 'i', 'j', 're', 'im'])
            for k in range(-1, options['kmax'] + 1):
                M = weight.moment(k)
                for i in range(spec.N):
                    for j in range(spec.N):
                        writer.writerow([k, i, j, M[i, j].real, M[i, j].imag])
        self.stdout.write(f"Momen k=-1..{options['kmax']} ditulis ke {path}")
