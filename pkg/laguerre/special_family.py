"""Pasangan khusus (B, B0) dengan [B, B0] = B0 dan B^2 + alpha B - B0 Hermitian.

Kedua matriks serupa dengan bentuk sederhana: dengan J = diag(N-1, ..., 0) dan
geseran nilpoten L = sum nu_k E_{k,k+1},

    B = Z J Z^{-1},    B0 = Z L Z^{-1},

dengan Z segitiga atas satuan yang memenuhi Z (D - L) = D Z untuk
D = J^2 + alpha J. Maka x^B = Z x^J Z^{-1} adalah polinom matriks, sehingga
bobotnya selalu punya ``tt_poly`` yang eksak.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateParameters, InvalidInput
from .linalg import adj, comm, eye, fro, hermitian_defect, inv, mat_power_log, rsolve, solve
from .reports import ResidualReport
from .weight import WeightSpec

logger = logging.getLogger(__name__)

INVARIANT_TOL = 1e-12
H_SAMPLES = np.geomspace(0.1, 10.0, 10)


@dataclass(frozen=True, eq=False)
class DG1Family:
    N: int
    alpha: float
    nu: tuple
    J: np.ndarray
    L: np.ndarray
    Z: np.ndarray
    c: np.ndarray
    B: np.ndarray
    B0: np.ndarray

    @property
    def hermitian_part(self):
        """B^2 + alpha B - B0."""
        return self.B @ self.B + self.alpha * self.B - self.B0

    def invariant_defects(self):
        upper = np.tril(self.Z, -1)
        return {
            'commutator': fro(comm(self.B, self.B0) - self.B0),
            'hermitian': hermitian_defect(self.hermitian_part),
            'nilpotent': fro(np.linalg.matrix_power(self.B0, self.N)),
            'unit-upper': fro(upper) + fro(np.diag(self.Z) - 1),
        }

    def tt_poly(self):
        """Koefisien T(x) T(x)* untuk T(x) = Z x^J Z^{-1} = x^B."""
        Z_inv = inv(self.Z, what='Z')
        projectors = [self.Z[:, [j]] @ Z_inv[[j], :] for j in range(self.N)]
        degrees = np.real(np.diag(self.J)).astype(int)
        coeffs = [np.zeros((self.N, self.N), dtype=complex) for _ in range(2 * int(degrees.max()) + 1)]
        for j, Pj in enumerate(projectors):
            for k, Pk in enumerate(projectors):
                coeffs[degrees[j] + degrees[k]] += Pj @ adj(Pk)
        # jumlahnya Hermitian per pangkat; buang asimetri pembulatan
        return tuple(0.5 * (C + adj(C)) for C in coeffs)

    def weight_spec(self, s, normalize_gamma0=False):
        return WeightSpec(
            N=self.N,
            alpha=self.alpha,
            s=s,
            B=self.B,
            tt_poly=self.tt_poly(),
            normalize_gamma0=normalize_gamma0,
            dg1_nu=self.nu,
        )


def build_dg1(nu, alpha, N):
    if N < 1:
        raise InvalidInput(f"N harus >= 1, dapat {N}.")
    nu = tuple(complex(v) for v in nu)
    if len(nu) != N - 1:
        raise InvalidInput(f"nu butuh {N - 1} nilai untuk N={N}, dapat {len(nu)}.")
    if any(v == 0 for v in nu):
        raise DegenerateParameters("Semua nu_k harus tidak nol.")
    alpha = float(alpha)

    diag = np.arange(N - 1, -1, -1, dtype=float)
    c = diag ** 2 + alpha * diag
    J = np.diag(diag).astype(complex)
    L = np.diag(np.array(nu, dtype=complex), 1) if N > 1 else np.zeros((1, 1), dtype=complex)

    Z = np.eye(N, dtype=complex)
    for i in range(N):
        for j in range(i + 1, N):
            gap = c[j] - c[i]
            if abs(gap) <= INVARIANT_TOL * (1.0 + abs(c[i])):
                raise DegenerateParameters(
                    f"c_{i + 1} = c_{j + 1} = {c[i]:g} untuk alpha={alpha}: Z tidak terdefinisi.")
            Z[i, j] = Z[i, j - 1] * nu[j - 1] / gap

    Z_inv = inv(Z, what='Z')
    family = DG1Family(N, alpha, nu, J, L, Z, c, Z @ J @ Z_inv, Z @ L @ Z_inv)
    scale = 1.0 + fro(family.B) ** 2 + fro(family.B0)
    for name, defect in family.invariant_defects().items():
        if defect > INVARIANT_TOL * scale:
            raise DegenerateParameters(f"Invarian DG1 '{name}' gagal: defek {defect:.3e}.")
    logger.debug("DG1 N=%d alpha=%g nu=%s dibangun", N, alpha, nu)
    return family


def h_identity_residual(dg1, samples=H_SAMPLES):
    """Residual terbesar dari z^B (B^2 + alpha B - B0) z^{-B} / z = (B^2 + alpha B) / z - B0."""
    worst = 0.0
    square = dg1.B @ dg1.B + dg1.alpha * dg1.B
    for z in samples:
        zB = mat_power_log(dg1.B, z)
        lhs = rsolve(zB @ dg1.hermitian_part / z, zB, what='z^B')
        worst = max(worst, fro(lhs - (square / z - dg1.B0)) / (1.0 + fro(square / z) + fro(dg1.B0)))
    return worst


def verify_dg1(dg1, report=None):
    report = report or ResidualReport('section-final', context={'dg1_nu': [str(v) for v in dg1.nu]})
    for name, defect in dg1.invariant_defects().items():
        report.add(f'dg1-{name}', 0, 0.0, defect, fro(dg1.B0) + fro(dg1.B) ** 2)
    report.add('h-conjugation', 0, 0.0, h_identity_residual(dg1), 0.0)
    return report


def _x(dg1, lq):
    return lq.B @ lq.B + dg1.alpha * lq.B + comm(dg1.B0, lq.an_coeff)


def _ln(dg1, lq):
    return lq.gamma_n @ dg1.B0 @ lq.gamma_inv


def _y(dg1, lq):
    Ln = _ln(dg1, lq)
    shifted = lq.gamma_n @ lq.an_coeff @ lq.gamma_inv
    return lq.Bn @ lq.Bn + dg1.alpha * lq.Bn + comm(Ln, shifted)


def _e(dg1, lq):
    return dg1.B0 - adj(_ln(dg1, lq))


def verify_section_final(fam, chain, n, dg1, report=None):
    """Relasi tambahan yang dibawa pasangan khusus, ditambah reduksi B-hat."""
    if fam.spec.normalize_gamma0:
        raise InvalidInput("Relasi famili khusus butuh bobot tanpa normalisasi gamma_0.")
    report = report or ResidualReport('section-final', context={'spec': fam.spec.digest})
    lq = chain[n]
    s, N = lq.s, lq.N
    I = eye(N)
    a, b, beta = lq.a, lq.b, lq.beta_or_zero
    a_inv_b = solve(a, b, what=f'a_{n}')
    smb = s * I - b
    X, Y, En = _x(dg1, lq), _y(dg1, lq), _e(dg1, lq)
    Y_adj = adj(Y)
    bhat_sq = lq.Bhat @ lq.Bhat + dg1.alpha * lq.Bhat

    Ln = _ln(dg1, lq)
    report.add('ln-nilpotent', n, s, fro(np.linalg.matrix_power(Ln, N)), fro(Ln) ** N)

    lhs = smb @ En - En @ a_inv_b @ a
    rhs = X @ a - a @ Y_adj
    report.add_terms('final-a-intertwining', n, s, lhs - rhs, [smb @ En, En @ a_inv_b @ a, X @ a, a @ Y_adj])

    lhs = X - Y_adj
    rhs = dg1.B0 @ lq.alpha_rec - lq.alpha_rec @ adj(Ln)
    report.add_terms('final-y-difference', n, s, lhs - rhs, [X, Y_adj, dg1.B0 @ lq.alpha_rec])

    reduced = X + En @ a_inv_b
    report.add_terms('bhat-reduction', n, s, bhat_sq - reduced, [bhat_sq, X, En @ a_inv_b])

    if n == 0:
        for name in ('final-b-commutator', 'final-alpha-commutator', 'final-monodromy-bhat', 'final-monodromy-ab'):
            report.skip(name, n, s, 'beta_0, L_{-1} tidak terdefinisi', tolerance='section-final')
        return report

    E_prev = _e(dg1, chain[n - 1])
    left = a @ beta @ E_prev
    lhs = left + En @ a_inv_b @ smb
    rhs = comm(X, b)
    report.add_terms('final-b-commutator', n, s, lhs - rhs, [left, En @ a_inv_b @ smb, X @ b])

    if n + 1 < len(chain):
        nxt = chain[n + 1]
        alpha_n = lq.alpha_rec
        lhs = _e(dg1, nxt) @ nxt.beta_rec - beta @ E_prev
        rhs = comm(X, alpha_n) + comm(alpha_n, dg1.B0 @ alpha_n)
        report.add_terms('final-alpha-commutator', n, s, lhs - rhs,
                         [_e(dg1, nxt) @ nxt.beta_rec, beta @ E_prev, X @ alpha_n, alpha_n @ dg1.B0 @ alpha_n])
    else:
        report.skip('final-alpha-commutator', n, s, 'butuh n+1')

    lhs = left - smb @ En @ a_inv_b + s * bhat_sq
    rhs = smb @ X + a @ Y_adj @ a_inv_b
    report.add_terms('final-monodromy-bhat', n, s, lhs - rhs, [left, smb @ En @ a_inv_b, s * bhat_sq, smb @ X])

    total = a_inv_b @ X - Y_adj @ a_inv_b + beta @ E_prev + a_inv_b @ En @ a_inv_b
    report.add_terms('final-monodromy-ab', n, s, total,
                     [a_inv_b @ X, Y_adj @ a_inv_b, beta @ E_prev, a_inv_b @ En @ a_inv_b])
    return report
