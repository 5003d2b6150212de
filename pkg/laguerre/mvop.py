"""Polinom ortogonal bernilai matriks yang monik dari sistem momen blok-Hankel.

Untuk derajat n, koefisien A = [a_{n,0} ... a_{n,n-1}] dari
P_n(x) = x^n I + sum_j a_{n,j} x^j memenuhi sistem ortogonalitas kanan
A H_n = -R_n, dengan H_n = [M_{i+j}]_{i,j<n} dan R_n = [M_n ... M_{2n-1}].
H_n Hermitian definit positif, jadi A* = -H_n^{-1} R_n* diselesaikan dengan
Cholesky setelah ekuilibrasi diagonal simetris.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from django.conf import settings

from .exceptions import InvalidInput, SingularMoment
from .linalg import adj, eye, fro, hermitian_defect, inv, zeros
from .reports import ResidualReport
from .weight import weight_for

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class MVOPFamily:
    """Koefisien disimpan sampai derajat n_max + 1 agar alpha_{n_max} tersedia."""

    spec: object
    n_max: int
    coeffs: list
    gamma: list
    gamma_inv: list
    alpha_rec: list
    beta_rec: list
    hankel_cond: list = field(default_factory=list)

    @property
    def N(self):
        return self.spec.N

    @property
    def s(self):
        return self.spec.s

    @property
    def weight(self):
        return weight_for(self.spec)

    @property
    def B(self):
        """B dari bobot kerja (terkonjugasi penskalaan gamma_0 bila aktif)."""
        return self.weight.B

    def moment(self, k):
        return self.weight.moment(k)

    def coeff(self, n, j):
        """a_{n,j}, dengan a_{n,n} = I dan nol di luar 0..n."""
        if j == n:
            return eye(self.N)
        if j < 0 or j > n:
            return zeros(self.N)
        return self.coeffs[n][j]

    def sub_leading(self, n):
        """a_{n,n-1}; nol untuk n = 0."""
        return self.coeff(n, n - 1)

    def check_degree(self, n):
        if not 0 <= n <= self.n_max:
            raise InvalidInput(f"Derajat n={n} di luar 0..{self.n_max}.")


def _solve_hankel(moments, n, N):
    """Koefisien P_n sebagai array (n, N, N), beserta kondisi setelah ekuilibrasi."""
    H = np.block([[moments[i + j] for j in range(n)] for i in range(n)])
    R = np.hstack([moments[n + j] for j in range(n)])
    d = np.sqrt(np.real(np.diag(H)))
    if np.any(d <= 0):
        raise SingularMoment(f"Diagonal block-Hankel tidak positif pada n={n}.", n=n)
    D = 1.0 / d
    Hs = D[:, None] * H * D[None, :]
    cond = float(np.linalg.cond(Hs))
    if not np.isfinite(cond) or cond > settings.MVOP_HANKEL_COND_LIMIT:
        raise SingularMoment(f"Block-Hankel singular pada n={n}: kondisi {cond:.3e}.", n=n, cond=cond)
    try:
        factor = sla.cho_factor(Hs, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMoment(f"Cholesky block-Hankel gagal pada n={n}: {exc}", n=n, cond=cond) from exc
    A_adj = -D[:, None] * sla.cho_solve(factor, D[:, None] * adj(R))
    A = adj(A_adj)
    return A.reshape(N, n, N).transpose(1, 0, 2), cond


def build_family(spec, n_max):
    if n_max < 0:
        raise InvalidInput(f"n_max harus >= 0, dapat {n_max}.")
    weight = weight_for(spec)
    N = spec.N
    moments = [weight.moment(k) for k in range(2 * n_max + 2)]

    coeffs, gamma, gamma_inv, conds = [], [], [], []
    for n in range(n_max + 2):
        if n == 0:
            a_n, cond = np.zeros((0, N, N), dtype=complex), 1.0
        else:
            a_n, cond = _solve_hankel(moments, n, N)
        coeffs.append(a_n)
        conds.append(cond)
        if n <= n_max:
            g_inv = moments[2 * n] + sum((a_n[i] @ moments[i + n] for i in range(n)), zeros(N))
            gamma_inv.append(g_inv)
            gamma.append(inv(g_inv, what=f'gamma_{n}'))

    def sub_leading(n):
        return coeffs[n][n - 1] if n > 0 else zeros(N)

    alpha_rec = [sub_leading(n) - sub_leading(n + 1) for n in range(n_max + 1)]
    beta_rec = [None] + [gamma_inv[n] @ gamma[n - 1] for n in range(1, n_max + 1)]

    logger.debug("Famili %s s=%g n_max=%d: kondisi Hankel maks %.2e",
                 spec.digest, spec.s, n_max, max(conds))
    return MVOPFamily(
        spec=spec,
        n_max=n_max,
        coeffs=coeffs,
        gamma=gamma,
        gamma_inv=gamma_inv,
        alpha_rec=alpha_rec,
        beta_rec=beta_rec,
        hankel_cond=conds,
    )


def eval_poly(fam, n, x):
    """P_n(x) dengan aturan Horner; ``x`` boleh skalar atau array simpul 1-d."""
    if not 0 <= n <= fam.n_max + 1:
        raise InvalidInput(f"Derajat n={n} di luar 0..{fam.n_max + 1}.")
    x = np.asarray(x, dtype=complex)
    value = np.broadcast_to(eye(fam.N), x.shape + (fam.N, fam.N)).copy()
    for j in range(n - 1, -1, -1):
        value = x[..., None, None] * value + fam.coeffs[n][j]
    return value


def poly_stack(fam, x, n_top=None):
    """[P_0(x); ...; P_n_top(x)] ditumpuk per baris, bentuk (len(x), (n_top+1)N, N)."""
    n_top = fam.n_max if n_top is None else n_top
    return np.concatenate([eval_poly(fam, n, x) for n in range(n_top + 1)], axis=-2)


def orthogonality_residual(fam):
    """Matriks Gram famili dengan kuadratur dibandingkan gamma_n^{-1} delta_{nm}."""
    N, n_max = fam.N, fam.n_max
    weight = fam.weight

    def kernel(x, tt):
        P = poly_stack(fam, x)
        return P @ tt @ np.conj(np.swapaxes(P, -1, -2))

    gram = weight.integrate(kernel)
    report = ResidualReport('orthogonality', context={'spec': fam.spec.digest})
    for n in range(n_max + 1):
        for m in range(n_max + 1):
            block = gram[n * N:(n + 1) * N, m * N:(m + 1) * N]
            expected = fam.gamma_inv[n] if n == m else zeros(N)
            scale = np.sqrt(fro(fam.gamma_inv[n]) * fro(fam.gamma_inv[m]))
            report.add(f'orthogonality(m={m})', n, fam.s, fro(block - expected), scale)
    for n in range(n_max + 1):
        report.add('gamma-hermitian', n, fam.s, hermitian_defect(fam.gamma[n]), fro(fam.gamma[n]),
                   tolerance='structural')
    return report
