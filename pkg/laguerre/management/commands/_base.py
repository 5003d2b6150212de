import json
import logging
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from laguerre.exceptions import MVOPError, SingularMatrix
from laguerre.serializers import ResidualReportSerializer, WeightSpecSerializer

logger = logging.getLogger('laguerre.commands')


def parse_floats(text):
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise CommandError(f"Daftar bilangan tidak valid: {text!r}", returncode=2) from None


def write_json(path, data):
    with open(path, 'w') as handle:
        json.dump(data, handle, indent=2, sort_keys=True)


class MVOPCommand(BaseCommand):
    """Dasar bersama: memuat spec, menulis laporan dan kontrak kode keluar.

    Keluar 1 bila ada toleransi yang gagal, keluar 2 untuk input tidak valid
    atau kegagalan numerik (dengan ``<out>.error.json`` di samping output lain).
    """

    def add_arguments(self, parser):
        parser.add_argument('--spec', required=True, help='File JSON spesifikasi bobot')
        parser.add_argument('--out', default='mvop', help='Prefix file output')

    def handle(self, *args, **options):
        self.prefix = options['out']
        try:
            return self.run(**options)
        except serializers.ValidationError as exc:
            self._fail({'error': 'ValidationError', 'detail': exc.detail})
        except MVOPError as exc:
            self._fail(exc.as_dict())
        except np.linalg.LinAlgError as exc:
            self._fail(SingularMatrix(f"Aljabar linear gagal: {exc}").as_dict())

    def run(self, **options):
        raise NotImplementedError

    def _fail(self, payload):
        path = f'{self.prefix}.error.json'
        write_json(path, payload)
        logger.error("Perintah gagal: %s", payload)
        raise CommandError(f"{payload['error']}: {payload['detail']} (lihat {path})", returncode=2)

    def load_spec(self, path):
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise serializers.ValidationError({'spec': f"Tidak bisa membaca {path}: {exc}"})
        serializer = WeightSpecSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        spec = serializer.save()
        logger.info("Spec %s dimuat dari %s", spec.digest, path)
        return spec

    def default_nmax(self, value):
        return settings.MVOP_DEFAULT_NMAX if value is None else value

    def finish(self, report):
        """Menulis ``<out>.json`` dan ``<out>.csv`` lalu menerapkan kontrak kode keluar."""
        write_json(f'{self.prefix}.json', ResidualReportSerializer(report).data)
        report.write_csv(f'{self.prefix}.csv')
        checked = [entry for entry in report.entries if not entry.skipped]
        failures = report.failures
        self.stdout.write(f"{report.suite}: {len(checked)} identitas diperiksa, {len(failures)} gagal")
        for entry in failures:
            self.stderr.write(f"  GAGAL n={entry.n} s={entry.s:g} {entry.identity}: "
                              f"rel={entry.rel_residual:.3e} > {entry.tolerance:.1e}")
        if failures:
            raise CommandError(f"{len(failures)} identitas di luar toleransi", returncode=1)
        self.stdout.write(self.style.SUCCESS("Semua identitas dalam toleransi"))
