"""Laporan residual: satu entri per (suite, n, s, identitas) beserta penulis CSV."""
import csv
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .linalg import fro, relative

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['suite', 'n', 's', 'identity', 'abs_residual', 'rel_residual', 'tolerance', 'pass']


def effective_tolerance(name):
    try:
        base = settings.MVOP_TOLERANCES[name]
    except KeyError:
        raise KeyError(f"Toleransi '{name}' tidak terdaftar di MVOP_TOLERANCES") from None
    return base * settings.MVOP_TOL_SCALE


@dataclass
class ResidualEntry:
    suite: str
    n: int
    s: float
    identity: str
    abs_residual: float
    rel_residual: float
    tolerance: float
    passed: bool
    skipped: bool = False
    note: str = ''

    def sort_key(self):
        return (self.suite, self.n, self.s, self.identity)

    def row(self):
        return {
            'suite': self.suite,
            'n': self.n,
            's': self.s,
            'identity': self.identity,
            'abs_residual': self.abs_residual,
            'rel_residual': self.rel_residual,
            'tolerance': self.tolerance,
            'pass': self.passed,
        }


@dataclass
class ResidualReport:
    suite: str
    context: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)

    def add(self, identity, n, s, abs_residual, reference=0.0, tolerance=None):
        """Mencatat residual; ``reference`` adalah norma untuk skala relatif."""
        abs_residual = float(abs_residual)
        rel = relative(abs_residual, float(reference))
        tol = effective_tolerance(tolerance or self.suite)
        ok = bool(np.isfinite(rel) and rel <= tol)
        entry = ResidualEntry(self.suite, int(n), float(s), identity, abs_residual, rel, tol, ok)
        self.entries.append(entry)
        if not ok:
            logger.info("GAGAL %s n=%d s=%g %s: rel=%.3e > %.1e", self.suite, n, s, identity, rel, tol)
        return entry

    def add_terms(self, identity, n, s, residual, terms, tolerance=None):
        """Matriks residual dan suku penyusunnya; suku terbesar menentukan skala."""
        reference = max((fro(t) for t in terms), default=0.0)
        return self.add(identity, n, s, fro(residual), reference, tolerance)

    def skip(self, identity, n, s, reason, tolerance=None):
        tol = effective_tolerance(tolerance or self.suite)
        entry = ResidualEntry(self.suite, int(n), float(s), identity, 0.0, 0.0, tol, True, True, reason)
        self.entries.append(entry)
        logger.warning("Dilewati %s n=%d s=%g %s: %s", self.suite, n, s, identity, reason)
        return entry

    def extend(self, other):
        self.entries.extend(other.entries)
        for key, value in other.context.items():
            self.context.setdefault(key, value)
        return self

    @property
    def passed(self):
        return all(entry.passed for entry in self.entries)

    @property
    def failures(self):
        return [entry for entry in self.entries if not entry.passed]

    def get(self, identity, n=None, s=None):
        for entry in self.entries:
            if entry.identity == identity and (n is None or entry.n == n) and (s is None or entry.s == s):
                return entry
        raise KeyError(identity)

    def sorted_entries(self):
        return sorted(self.entries, key=ResidualEntry.sort_key)

    def write_csv(self, path):
        with open(path, 'w', newline='') as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for entry in self.sorted_entries():
                if not entry.skipped:
                    writer.writerow(entry.row())
