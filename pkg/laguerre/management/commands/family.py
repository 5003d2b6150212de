from laguerre.lax import lax_chain
from laguerre.mvop import build_family
from laguerre.serializers import LaxQuantitiesSerializer, MVOPFamilySerializer

from ._base import MVOPCommand, write_json


class Command(MVOPCommand):
    help = 'Dump famili MVOP monik (koefisien, gamma_n, alpha_n, beta_n) sebagai JSON.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--nmax', type=int, default=None)
        parser.add_argument('--lax', action='store_true', help='Sertakan data Lax (p, q, a, b, B_n, B-hat_n)')

    def run(self, **options):
        spec = self.load_spec(options['spec'])
        fam = build_family(spec, self.default_nmax(options['nmax']))
        data = MVOPFamilySerializer(fam).data
        if options['lax']:
            data['lax'] = LaxQuantitiesSerializer(lax_chain(fam), many=True).data
        write_json(f'{self.prefix}.json', data)
        self.stdout.write(f"Famili n=0..{fam.n_max} untuk spec {spec.digest} ditulis ke {self.prefix}.json")
