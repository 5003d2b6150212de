"""Residual sistem diskret, kontinu dan tertutup yang dipenuhi data Lax.

Identitas diskret memakai rantai ``LaxQuantities`` pada satu s, berindeks n.
Identitas kontinu memakai bundel ``LaxDerivatives``; turunan-s di dalamnya
adalah beda hingga (stensil tiga atau lima titik) dari famili yang dibangun ulang di s + k h.
Setiap residual adalah selisih kedua ruas; nilai relatifnya
diskalakan dengan suku terbesar yang ikut dalam identitas.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .exceptions import InvalidInput
from .lax import assemble_lax_matrices, compute_lax
from .linalg import BlockMatrix, adj, comm, eye, fro, inv, solve, zeros
from .mvop import build_family
from .reports import ResidualReport

logger = logging.getLogger(__name__)

READINGS = ('inverse', 'literal')


def _at(chain, n):
    if not 0 <= n < len(chain):
        raise IndexError(f"Data Lax untuk n={n} tidak tersedia (rantai 0..{len(chain) - 1}).")
    lq = chain[n]
    if lq.n != n:
        raise InvalidInput(f"Rantai Lax tidak berurutan: posisi {n} berisi n={lq.n}.")
    return lq


def residual_dp_system(chain, n, report=None):
    """dP1-dP5, beta_n teleskopik, identitas monodromi formal dan bentuk gabungannya."""
    lq = _at(chain, n)
    s, N, alpha, B = lq.s, lq.N, lq.alpha, lq.B
    I = eye(N)
    report = report or ResidualReport('discrete')
    a, b, beta = lq.a, lq.b, lq.beta_or_zero
    c = (2 * n + alpha + 1) * I

    rhs = c + a + B + adj(lq.Bn)
    report.add_terms('dP1', n, s, lq.alpha_rec - rhs, [lq.alpha_rec, c, a, B, lq.Bn])

    has_next = n + 1 < len(chain)
    if has_next:
        nxt = _at(chain, n + 1)
        conj_b = lq.gamma_inv @ adj(b) @ lq.gamma_n
        lhs = s * I - lq.alpha_rec @ a
        report.add_terms('dP2', n, s, lhs - nxt.b - conj_b, [s * I, lq.alpha_rec @ a, nxt.b, conj_b])

        rhs = lq.alpha_rec + nxt.b - b + comm(B, lq.alpha_rec)
        report.add_terms('dP4', n, s, nxt.beta_rec - beta - rhs, [nxt.beta_rec, beta, lq.alpha_rec, nxt.b, b])
    else:
        report.skip('dP2', n, s, 'butuh n+1')
        report.skip('dP4', n, s, 'butuh n+1')

    a_inv_b = solve(a, b, what=f'a_{n}')
    if n == 0:
        report.skip('dP3', n, s, 'a_{-1} tidak terdefinisi')
        report.skip('dP5', n, s, 'a_{-1} tidak terdefinisi')
        report.skip('telescoped-beta', n, s, 'beta_0 tidak terdefinisi')
        report.skip('combined-monodromy', n, s, 'a_{-1} tidak terdefinisi')
    else:
        prev = _at(chain, n - 1)
        lhs = b @ b - s * b
        rhs = a @ beta @ prev.a
        report.add_terms('dP3', n, s, lhs - rhs, [b @ b, s * b, rhs])

        if has_next:
            lhs = nxt.a @ nxt.beta_rec - beta @ prev.a
            rhs = lq.alpha_rec @ b - nxt.b @ lq.alpha_rec
            report.add_terms('dP5', n, s, lhs - rhs, [nxt.a @ nxt.beta_rec, beta @ prev.a, lq.alpha_rec @ b])
        else:
            report.skip('dP5', n, s, 'butuh n+1')

        total = n * ((n + alpha) * I + B) + b
        for k in range(n):
            x = chain[k].a + adj(chain[k].Bn)
            total = total + x + comm(B, x)
        report.add_terms('telescoped-beta', n, s, beta - total, [beta, total])

        a_star = a @ adj(lq.Bn) @ a_inv_b
        common = s * (n * I + B - lq.Bhat) - b @ ((2 * n + alpha) * I + B) - a_star - b @ a_inv_b
        combined_rhs = common + solve(a, b @ b, what=f'a_{n}')
        combined_lhs = a @ beta + beta @ prev.a
        report.add_terms('combined-monodromy', n, s, combined_lhs - combined_rhs, [combined_lhs, common])

    rhs = (s * (n * I + B + a_inv_b - lq.Bhat) - b @ ((2 * n + alpha) * I + B)
           - b @ a_inv_b - a @ adj(lq.Bn) @ a_inv_b)
    report.add_terms('formal-monodromy', n, s, a @ beta - rhs, [a @ beta, s * I, s * B, s * lq.Bhat, rhs])

    if has_next:
        residual_lax_compatibility(lq, nxt, report)
    return report


def residual_lax_compatibility(lq, nxt, report):
    """Koefisien z^0, z^-1, z^-2 dari dU/dz + U A^(n) - A^(n+1) U."""
    n, s = lq.n, lq.s
    here, there = assemble_lax_matrices(lq), assemble_lax_matrices(nxt)
    E, U0 = here.u_linear.full(), here.u_const.full()
    A1, A2 = here.a_minus1.full(), here.a_minus2.full()
    A1n, A2n = there.a_minus1.full(), there.a_minus2.full()
    S3 = BlockMatrix.sigma3(lq.N).full()
    z0 = E + E @ A1 - 0.5 * U0 @ S3 - A1n @ E + 0.5 * S3 @ U0
    z1 = E @ A2 + U0 @ A1 - A2n @ E - A1n @ U0
    z2 = U0 @ A2 - A2n @ U0
    report.add_terms('lax-shift-z0', n, s, z0, [E @ A1, A1n @ E, U0])
    report.add_terms('lax-shift-z-1', n, s, z1, [E @ A2, U0 @ A1, A2n @ E, A1n @ U0])
    report.add_terms('lax-shift-z-2', n, s, z2, [U0 @ A2, A2n @ U0])
    return report


@dataclass(eq=False)
class LaxDerivatives:
    """Data Lax di (n, s) beserta turunan beda hingga terhadap s.

    ``dot`` berisi turunan pertama dengan langkah h, ``ddot`` turunan kedua
    a_n dan b_n dengan langkah h2; ``order`` adalah orde stensil (2 atau 4).
    """

    n: int
    s: float
    h: float
    h2: float
    lq: object
    lq_next: object
    lq_prev: object = None
    order: int = 4
    dot: dict = field(default_factory=dict)
    ddot: dict = field(default_factory=dict)


DIFFERENTIATED = ('gamma_n', 'gamma_inv', 'gamma_nm1', 'a', 'b', 'alpha_rec', 'beta_rec', 'P0', 'Bn', 'Bhat')

# bobot (offset -> koefisien) untuk turunan pertama dan kedua
STENCILS = {
    2: ({-1: -0.5, 1: 0.5}, {-1: 1.0, 0: -2.0, 1: 1.0}),
    4: ({-2: 1 / 12, -1: -2 / 3, 1: 2 / 3, 2: -1 / 12},
        {-2: -1 / 12, -1: 4 / 3, 0: -5 / 2, 1: 4 / 3, 2: -1 / 12}),
}


def _lax_at(spec, n, s):
    return compute_lax(build_family(spec.with_s(s), n), n)


def _a_minus2(lq):
    return assemble_lax_matrices(lq).a_minus2.full()


def _combine(weights, samples, value, step):
    parts = [value(samples[k]) for k in weights]
    if any(part is None for part in parts):
        return None
    return sum(w * part for w, part in zip(weights.values(), parts)) / step


def lax_derivatives(spec, n, s, h=None, h2=None, order=None):
    order = settings.MVOP_FD_ORDER if order is None else order
    if order not in STENCILS:
        raise InvalidInput(f"Orde stensil harus salah satu {tuple(STENCILS)}, dapat {order}.")
    if order == 2:
        default_h, default_h2 = settings.MVOP_FD_STEP, settings.MVOP_FD_STEP2
    else:
        default_h, default_h2 = settings.MVOP_FD5_STEP, settings.MVOP_FD5_STEP2
    h = default_h if h is None else h
    h2 = default_h2 if h2 is None else h2
    if spec.normalize_gamma0:
        raise InvalidInput("Turunan terhadap s butuh bobot tanpa normalisasi gamma_0 (skala bergantung s).")
    first, second = STENCILS[order]
    reach = max(first) * max(h, h2)
    if s - reach <= 0:
        raise InvalidInput(f"Stensil beda hingga keluar dari s > 0: s={s}, h={h}, h2={h2}, orde={order}.")

    fam = build_family(spec.with_s(s), n + 1)
    lq, lq_next = compute_lax(fam, n), compute_lax(fam, n + 1)
    lq_prev = compute_lax(fam, n - 1) if n > 0 else None
    deriv = LaxDerivatives(n=n, s=s, h=h, h2=h2, lq=lq, lq_next=lq_next, lq_prev=lq_prev, order=order)

    samples = {k: _lax_at(spec, n, s + k * h) for k in first}
    for name in DIFFERENTIATED:
        deriv.dot[name] = _combine(first, samples, lambda q, name=name: getattr(q, name), h)
    deriv.dot['A2'] = _combine(first, samples, _a_minus2, h)

    samples = {k: _lax_at(spec, n, s + k * h2) for k in second}
    for name in ('a', 'b'):
        deriv.ddot[name] = _combine(second, samples, lambda q, name=name: getattr(q, name), h2 * h2)
    logger.debug("Turunan Lax n=%d s=%g h=%.1e h2=%.1e orde=%d selesai", n, s, h, h2, order)
    return deriv


def residual_p_system(deriv, report=None):
    """P1-P4, pasangan Toda, Pdot dan kompatibilitas-s pasangan Lax."""
    lq, nxt, dot = deriv.lq, deriv.lq_next, deriv.dot
    n, s, N, alpha, B = lq.n, lq.s, lq.N, lq.alpha, lq.B
    I = eye(N)
    a, b, beta = lq.a, lq.b, lq.beta_or_zero
    report = report or ResidualReport('continuous')

    lhs, rhs = s * dot['gamma_n'], lq.gamma_n @ a
    report.add_terms('P1', n, s, lhs - rhs, [lhs, rhs])

    a_inv_b = solve(a, b, what=f'a_{n}')
    if n == 0:
        report.skip('P2', n, s, 'gamma_{-1} tidak terdefinisi')
        report.skip('toda-beta', n, s, 'beta_0 tidak terdefinisi')
    else:
        lhs, rhs = s * dot['gamma_nm1'], -lq.gamma_n @ a_inv_b @ (s * I - b)
        report.add_terms('P2', n, s, lhs - rhs, [lhs, rhs])
        prev = deriv.lq_prev
        lhs, rhs = s * dot['beta_rec'], beta @ prev.a - a @ beta
        report.add_terms('toda-beta', n, s, lhs - rhs, [lhs, beta @ prev.a, a @ beta])

    conj_b = lq.gamma_inv @ adj(b) @ lq.gamma_n
    rhs = (2 * n + alpha + 1) * a + a @ a + B @ a + a @ adj(lq.Bn) - s * I + b + conj_b
    report.add_terms('P3', n, s, s * dot['a'] - rhs, [s * dot['a'], (2 * n + alpha + 1) * a, a @ a, s * I, rhs])

    rhs = b + comm(B, b) - a_inv_b @ (s * I - b) - a @ beta
    report.add_terms('P4', n, s, s * dot['b'] - rhs, [s * dot['b'], b, a_inv_b @ (s * I - b), a @ beta])

    lhs = s * dot['alpha_rec']
    report.add_terms('toda-alpha', n, s, lhs - (b - nxt.b), [lhs, b, nxt.b, lq.alpha_rec])
    rhs = lq.alpha_rec - nxt.beta_rec + beta + comm(B, lq.alpha_rec)
    report.add_terms('toda-alpha-beta', n, s, lhs - rhs, [lhs, lq.alpha_rec, nxt.beta_rec, beta])

    lhs = s * dot['P0'] @ inv(lq.P0, what=f'P_{n}(0)')
    rhs = n * I + B - lq.Bhat + a_inv_b
    report.add_terms('pdot', n, s, lhs - rhs, [lhs, n * I, B, lq.Bhat, a_inv_b])

    mats = assemble_lax_matrices(lq)
    A1, A2 = mats.a_minus1.full(), mats.a_minus2.full()
    S3 = BlockMatrix.sigma3(N).full()
    dgamma_nm1 = zeros(N) if dot['gamma_nm1'] is None else dot['gamma_nm1']
    dA1 = BlockMatrix(zeros(N), -dot['gamma_inv'] / (2j * np.pi), 2j * np.pi * dgamma_nm1, zeros(N)).full()
    z1 = dA1 + (S3 @ A2 - A2 @ S3) / (2 * s)
    z2 = dot['A2'] - A2 / s - (A1 @ A2 - A2 @ A1) / s
    report.add_terms('lax-s-z-1', n, s, z1, [dA1, A2 / s])
    report.add_terms('lax-s-z-2', n, s, z2, [dot['A2'], A2 / s, A1 @ A2 / s])
    return report


def _calC(lq, nxt):
    """C_n = s a^{-1} - a - a B a^{-1} - a b_{n+1} a^{-2} - b a^{-1}."""
    a, b, s, B = lq.a, lq.b, lq.s, lq.B
    a_inv = inv(a, what=f'a_{lq.n}')
    return s * a_inv - a - a @ B @ a_inv - a @ nxt.b @ a_inv @ a_inv - b @ a_inv


def _calD(lq, nxt, prev, reading):
    """D_n = (s - b)(B + b a_{n-1}^{-1}) + (I + a + a B a^{-1} + a b_{n+1} a^{-2}) b."""
    a, b, s, B = lq.a, lq.b, lq.s, lq.B
    I = eye(lq.N)
    a_inv = inv(a, what=f'a_{lq.n}')
    middle = a @ B @ a_inv if reading == 'inverse' else a @ B @ a - I
    first = B if prev is None else B + b @ inv(prev.a, what=f'a_{prev.n}')
    return (lq.s * I - b) @ first + (I + a + middle + a @ nxt.b @ a_inv @ a_inv) @ b


def _shat_display(lq, nxt, prev, reading):
    """Ruas kanan rumus eksplisit s B-hat_n yang menutup sistem diskret."""
    a, b, s, B, n = lq.a, lq.b, lq.s, lq.B, lq.n
    I = eye(lq.N)
    a_inv = inv(a, what=f'a_{n}')
    middle = a @ B @ a_inv if reading == 'inverse' else a @ B @ a - I
    value = n * s * I + (s * I - b) @ B + (I + a + middle + a @ nxt.b @ a_inv @ a_inv) @ b
    if prev is not None:
        value = value - (b @ b - s * b) @ inv(prev.a, what=f'a_{prev.n}')
    return value


def _discrete_closed(chain, n, report, reading=None):
    lq = _at(chain, n)
    s, N, alpha, B = lq.s, lq.N, lq.alpha, lq.B
    I = eye(N)
    if n == 0:
        for name in ('discrete-first-order-a', 'discrete-first-order-b', 'discrete-first-order-c', 'discrete-first-order-d', 'difference-second-order-C', 'difference-second-order-D', 'bhat-closed-form'):
            report.skip(name, n, s, 'butuh n-1', tolerance='closed')
        return None
    prev = _at(chain, n - 1)
    a, b, ap = lq.a, lq.b, prev.a
    smb = s * I - b

    lhs = ap @ b + prev.b @ ap
    rhs = s * ap - (2 * n + alpha - 1) * ap @ ap - ap @ ap @ ap - ap @ (B + adj(prev.Bn)) @ ap
    report.add_terms('discrete-first-order-a', n, s, lhs - rhs, [ap @ b, prev.b @ ap, s * ap, ap @ ap @ ap],
                     tolerance='closed')

    a_inv_b = solve(a, b, what=f'a_{n}')
    inner = (s * (n * I + B - lq.Bhat + a_inv_b) - b @ ((2 * n + alpha) * I + B + a_inv_b)
             - a @ adj(lq.Bn) @ a_inv_b)
    report.add_terms('discrete-first-order-b', n, s, b @ b - s * b - inner @ ap, [b @ b, s * b, inner @ ap],
                     tolerance='closed')

    ap_inv = inv(ap, what=f'a_{n - 1}')
    lhs = a @ adj(lq.Bn) @ a_inv_b @ smb
    rhs = b @ smb @ ap_inv @ adj(prev.Bn) @ ap
    report.add_terms('discrete-first-order-c', n, s, lhs - rhs, [lhs, rhs], tolerance='closed')

    lhs = lq.Bhat @ smb
    rhs = smb @ ap_inv @ prev.Bhat @ ap
    report.add_terms('discrete-first-order-d', n, s, lhs - rhs, [lhs, rhs], tolerance='closed')

    if n + 1 >= len(chain):
        report.skip('difference-second-order-C', n, s, 'butuh n+1', tolerance='closed')
        report.skip('difference-second-order-D', n, s, 'butuh n+1', tolerance='closed')
        return None
    nxt = _at(chain, n + 1)
    C_n, C_p = _calC(lq, nxt), _calC(prev, lq)
    bsb = b @ smb
    lhs = C_n @ bsb - bsb @ ap_inv @ ap_inv @ C_p @ ap @ ap
    report.add_terms('difference-second-order-C', n, s, lhs - 2 * bsb, [C_n @ bsb, 2 * bsb], tolerance='closed')

    pprev = _at(chain, n - 2) if n >= 2 else None

    def d_residual(which):
        D_n, D_p = _calD(lq, nxt, prev, which), _calD(prev, lq, pprev, which)
        lhs = D_n @ smb - smb @ ap_inv @ D_p @ ap
        rhs = s * (b - s * I)
        return lhs - rhs, [D_n @ smb, rhs]

    residuals = {which: d_residual(which) for which in READINGS}
    if reading is None:
        reading = min(READINGS, key=lambda which: fro(residuals[which][0]))
    residual, terms = residuals[reading]
    entry = report.add_terms('difference-second-order-D', n, s, residual, terms, tolerance='closed')
    entry.note = f'reading={reading}'
    report.context.setdefault('d_reading', {})[str(n)] = reading
    other = [which for which in READINGS if which != reading][0]
    logger.warning("D_n n=%d s=%g: bacaan '%s' (|res|=%.2e) vs '%s' (|res|=%.2e)",
                   n, s, reading, fro(residual), other, fro(residuals[other][0]))

    display = _shat_display(lq, nxt, prev, reading)
    report.add_terms('bhat-closed-form', n, s, s * lq.Bhat - display, [s * lq.Bhat, display],
                     tolerance='closed')
    return reading


def _continuous_closed(deriv, report):
    lq, dot, ddot = deriv.lq, deriv.dot, deriv.ddot
    n, s, N, alpha, B = lq.n, lq.s, lq.N, lq.alpha, lq.B
    I = eye(N)
    a, b = lq.a, lq.b
    a_inv = inv(a, what=f'a_{n}')
    a_inv_b = a_inv @ b
    c = (2 * n + alpha + 1) * I
    tol = 'closed-continuous'

    rhs = -s * I + b + (c + B + a + a_inv_b) @ a + a @ adj(lq.Bn)
    report.add_terms('differential-first-order-a', n, s, s * dot['a'] - rhs, [s * dot['a'], s * I, c @ a, rhs], tolerance=tol)
    rhs = (b @ (c + B + a_inv_b) - s * (2 * a_inv_b + n * I + B - lq.Bhat) + a_inv @ b @ b
           + comm(B, b) + a @ adj(lq.Bn) @ a_inv_b)
    report.add_terms('differential-first-order-b', n, s, s * dot['b'] - rhs, [s * dot['b'], s * lq.Bhat, s * a_inv_b, rhs],
                     tolerance=tol)
    rhs = comm(adj(a), lq.Bn)
    report.add_terms('differential-first-order-c', n, s, s * dot['Bn'] - rhs, [s * dot['Bn'], rhs], tolerance=tol)
    rhs = comm(a_inv_b + B, lq.Bhat)
    report.add_terms('differential-first-order-d', n, s, s * dot['Bhat'] - rhs, [s * dot['Bhat'], rhs], tolerance=tol)

    rebuilt = a_inv @ (s * dot['a'] + s * I - b - (c + B + a + a_inv_b) @ a)
    report.add_terms('bn-recovery', n, s, rebuilt - adj(lq.Bn), [adj(lq.Bn), rebuilt], tolerance=tol)
    rebuilt = dot['b'] + n * I + B + a_inv_b - dot['a'] @ a_inv_b + a @ b / s
    report.add_terms('bhat-recovery', n, s, rebuilt - lq.Bhat, [lq.Bhat, rebuilt], tolerance=tol)

    da, db = dot['a'], dot['b']
    inner = (db - da + a_inv @ db @ a + da @ a - (da @ a_inv @ a_inv + a_inv @ da @ a_inv) @ b @ a
             + B @ da - da @ a_inv @ B @ a + comm(a_inv_b, da) - I)
    outer = comm(B @ a, a) + comm(a_inv_b, a @ a)
    rhs = da @ a_inv @ da + da @ a_inv + inner / s - outer / (s * s)
    report.add_terms('differential-second-order-a', n, s, ddot['a'] - rhs, [ddot['a'], da @ a_inv @ da, inner / s, outer / (s * s)],
                     tolerance='closed-second-order')

    inner = (a @ db + comm(db, B) + da @ a_inv @ comm(B, b) - a_inv @ (db @ b + b @ db)
             + (da @ a_inv @ a_inv + a_inv @ da @ a_inv) @ b @ b + da @ a_inv_b + a_inv_b)
    rhs = ((da @ a_inv + a_inv @ da) @ a_inv_b + da @ a_inv @ db - a_inv @ db
           + a @ (b + comm(B, b)) / (s * s) - inner / s)
    report.add_terms('differential-second-order-b', n, s, ddot['b'] - rhs, [ddot['b'], a_inv @ db, inner / s],
                     tolerance='closed-second-order')


def residual_closed_systems(chain, n, derivatives=None, reading=None, report=None):
    """Sistem diskret orde satu, sistem beda orde dua C_n/D_n dan,
    dengan ``derivatives``, sistem diferensial orde satu dan orde dua.

    ``reading`` menetapkan tafsiran suku a_n B a_n dalam D_n; ``None``
    memilih ('inverse' atau 'literal') yang menyisakan residual lebih kecil.
    """
    report = report or ResidualReport('closed')
    _discrete_closed(chain, n, report, reading)
    if derivatives is not None:
        if derivatives.n != n:
            raise InvalidInput(f"Turunan untuk n={derivatives.n}, bukan n={n}.")
        _continuous_closed(derivatives, report)
    return report


def fd_convergence_ratio(spec, n, s, identity, h=None, order=2):
    """Rasio residual(h) / residual(h/2) satu identitas kontinu; sekitar 2^order."""
    h = settings.MVOP_FD_STEP if h is None else h
    coarse = residual_p_system(lax_derivatives(spec, n, s, h=h, order=order)).get(identity)
    fine = residual_p_system(lax_derivatives(spec, n, s, h=h / 2, order=order)).get(identity)
    if fine.abs_residual == 0:
        return np.inf
    return coarse.abs_residual / fine.abs_residual
