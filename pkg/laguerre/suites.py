"""Suite verifikasi atas grid (n, s) dan pembangun laporan yang dipakai bersama oleh perintah."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import django
from django.conf import settings

from .evolution import (
    LaxState,
    bootstrap_discrete,
    evolve_ode,
    initial_derivatives,
    laguerre_diagonal_parameter,
    scalar_piii_scan,
)
from .exceptions import InvalidInput
from .lax import compute_lax, lax_chain, verify_structural
from .linalg import fro
from .mvop import build_family, orthogonality_residual
from .reports import ResidualReport
from .special_family import build_dg1, verify_dg1, verify_section_final
from .systems import lax_derivatives, residual_closed_systems, residual_dp_system, residual_p_system

logger = logging.getLogger(__name__)

SUITES = ('structural', 'orthogonality', 'discrete', 'continuous', 'closed', 'section-final')
SUITE_CHOICES = SUITES + ('all',)


def _plain(spec, suite):
    """Suite yang bergerak dalam s atau membandingkan dengan B0 butuh bobot tanpa skala."""
    if spec.normalize_gamma0:
        logger.info("Suite %s: normalisasi gamma_0 dimatikan untuk spec %s", suite, spec.digest)
        return replace(spec, normalize_gamma0=False)
    return spec


def _structural(spec, n_max, report):
    fam = build_family(spec, n_max)
    chain = lax_chain(fam, n_max)
    for n, lq in enumerate(chain):
        verify_structural(fam, lq, chain[n - 1] if n else None, report)


def _orthogonality(spec, n_max, report):
    report.extend(orthogonality_residual(build_family(spec, n_max)))


def _discrete(spec, n_max, report):
    chain = lax_chain(build_family(spec, n_max + 1))
    for n in range(n_max + 1):
        residual_dp_system(chain, n, report)


def _continuous(spec, n_max, report):
    spec = _plain(spec, 'continuous')
    for n in range(n_max + 1):
        residual_p_system(lax_derivatives(spec, n, spec.s), report)


def _closed(spec, n_max, report, reading=None):
    spec = _plain(spec, 'closed')
    chain = lax_chain(build_family(spec, n_max + 1))
    for n in range(n_max + 1):
        residual_closed_systems(chain, n, lax_derivatives(spec, n, spec.s), reading, report)


def _section_final(spec, n_max, report):
    spec = _plain(spec, 'section-final')
    dg1 = build_dg1(spec.dg1_nu, spec.alpha, spec.N)
    fam = build_family(spec, n_max + 1)
    chain = lax_chain(fam)
    for n in range(n_max + 1):
        verify_section_final(fam, chain, n, dg1, report)


RUNNERS = {
    'structural': _structural,
    'orthogonality': _orthogonality,
    'discrete': _discrete,
    'continuous': _continuous,
    'closed': _closed,
    'section-final': _section_final,
}


def run_suite(spec, suite, n_max, s_list, reading=None):
    if suite not in SUITE_CHOICES:
        raise InvalidInput(f"Suite tidak dikenal: {suite}; pilih salah satu {SUITE_CHOICES}.")
    names = SUITES if suite == 'all' else (suite,)
    if spec.dg1_nu is None:
        if suite == 'section-final':
            raise InvalidInput("Suite section-final butuh spec dengan blok dg1.")
        names = tuple(name for name in names if name != 'section-final')
    report = ResidualReport(suite, context={'spec': spec.digest, 'n_max': n_max, 's_list': list(s_list)})
    for name in names:
        part = ResidualReport(name)
        if name == 'section-final':
            verify_dg1(build_dg1(spec.dg1_nu, spec.alpha, spec.N), part)
        for s in s_list:
            spec_s = spec.with_s(s)
            if name == 'closed':
                _closed(spec_s, n_max, part, reading)
            else:
                RUNNERS[name](spec_s, n_max, part)
        logger.info("Suite %s: %d entri, %d gagal", name, len(part.entries), len(part.failures))
        report.extend(part)
    return report


def _init_worker():
    # interpreter baru (spawn/forkserver) perlu memuat settings lagi
    django.setup()


def _sweep_point(args):
    spec, suite, n_max, s, reading = args
    return run_suite(spec, suite, n_max, [s], reading)


def sweep(spec, suite, n_max, s_values, jobs=None, reading=None):
    """``run_suite`` di setiap s secara paralel; baris kembali dalam urutan laporan yang terurut."""
    jobs = jobs or settings.MVOP_JOBS
    tasks = [(spec, suite, n_max, float(s), reading) for s in s_values]
    report = ResidualReport(suite, context={'spec': spec.digest, 'n_max': n_max, 's_list': [t[3] for t in tasks]})
    if jobs <= 1 or len(tasks) <= 1:
        parts = [_sweep_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker) as pool:
            parts = list(pool.map(_sweep_point, tasks))
    for part in parts:
        report.extend(part)
    logger.info("Sweep %s: %d titik s, %d worker", suite, len(tasks), jobs)
    return report


def bootstrap_report(spec, n_max, guard=False):
    """(a, b, B_n, B-hat_n, alpha_n, beta_n) hasil bootstrap terhadap nilai dari Hankel."""
    spec = replace(spec, normalize_gamma0=True)
    steps = bootstrap_discrete(spec, n_max, guard=guard)
    fam = build_family(spec, n_max)
    chain = lax_chain(fam)
    report = ResidualReport('bootstrap', context={'spec': spec.digest, 'n_max': n_max})
    for step, lq in zip(steps, chain):
        for name in ('a', 'b', 'Bn', 'Bhat', 'alpha_rec'):
            mine, ref = getattr(step, name), getattr(lq, name)
            report.add(f'bootstrap-{name}', step.n, step.s, fro(mine - ref), fro(ref))
        if step.n == 0:
            report.skip('bootstrap-beta_rec', 0, step.s, 'beta_0 tidak terdefinisi')
        else:
            report.add('bootstrap-beta_rec', step.n, step.s, fro(step.beta_rec - lq.beta_rec), fro(lq.beta_rec))
    return report, steps


def evolution_report(spec, n, s0, s1, dense=False):
    """Evolusi dari data Hankel di s0 lalu bandingkan titik akhir dengan hasil bangun ulang di s1."""
    spec = _plain(spec, 'evolve')
    trajectory = evolve_ode(spec, n, s0, s1, dense=dense)
    reference = LaxState.from_lax(compute_lax(build_family(spec.with_s(s1), n), n))
    report = ResidualReport('evolve', context={'spec': spec.digest, 's0': s0, 's1': s1})
    for name in ('a', 'b', 'Bn', 'Bhat'):
        mine, ref = getattr(trajectory.final, name), getattr(reference, name)
        report.add(f'evolve-{name}', n, s1, fro(mine - ref), fro(ref))
    return report, trajectory


def initial_data_report(spec, n_max):
    """a_n'(0), b_n'(0) lewat dua rute independen: overlap vs kuadratur bila famili
    s = 0 Laguerre-diagonal, selain itu kuadratur vs momen.
    """
    routes = ('overlap', 'quadrature') if laguerre_diagonal_parameter(spec) is not None else ('quadrature', 'moments')
    report = ResidualReport('structural', context={'spec': spec.digest, 'n_max': n_max, 'routes': list(routes)})
    for n in range(n_max + 1):
        adot, bdot = initial_derivatives(spec, n, route=routes[0])
        adot_q, bdot_q = initial_derivatives(spec, n, route=routes[1])
        report.add('initial-adot-routes', n, 0.0, fro(adot - adot_q), fro(adot), tolerance='initial-data')
        if n > 0:
            report.add('initial-bdot-routes', n, 0.0, fro(bdot - bdot_q), fro(bdot), tolerance='initial-data')
    return report


def piii_report(spec, n, s0, s1, ds):
    steps = int(round((s1 - s0) / ds))
    if steps < 2:
        raise InvalidInput("Grid PIII butuh minimal 3 titik.")
    grid = [s0 + k * ds for k in range(steps + 1)]
    return scalar_piii_scan(spec, n, grid)
