"""Data tripel Lax MVOP Laguerre terdeformasi di z = 0 dan z = tak hingga.

Notasi: P_n(0) adalah suku konstan polinom monik dan
G_n = int_0^inf P_n(y) W(y) / y dy = sum_j a_{n,j} M_{j-1}, sehingga
transformasi Cauchy di titik asal adalah C(P_n W)(0) = G_n / (2 pi i). Maka

    p_n = G_n P_n(0)* / (2 pi i),      q_n = 2 pi i gamma_{n-1} P_{n-1}(0) P_n(0)^{-1},
    a_n = 2 pi i s p_n gamma_n,        b_n = s p_n q_n,

dengan q_0 = b_0 = 0.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput
from .linalg import BlockMatrix, adj, comm, eye, fro, hermitian_defect, inv, rsolve, skew_defect, solve, zeros
from .mvop import eval_poly
from .reports import ResidualReport

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


@dataclass(eq=False)
class LaxQuantities:
    n: int
    s: float
    alpha: float
    B: np.ndarray
    p: np.ndarray
    q: np.ndarray
    a: np.ndarray
    b: np.ndarray
    Bn: np.ndarray
    Bhat: np.ndarray
    P0: np.ndarray
    P0_prev: np.ndarray
    G: np.ndarray
    G_prev: np.ndarray
    an_coeff: np.ndarray
    gamma_n: np.ndarray
    gamma_inv: np.ndarray
    gamma_nm1: np.ndarray
    alpha_rec: np.ndarray
    beta_rec: np.ndarray

    @property
    def N(self):
        return self.a.shape[0]

    @property
    def beta_or_zero(self):
        """beta_n dengan konvensi beta_0 = 0 (P_{-1} = 0)."""
        return zeros(self.N) if self.beta_rec is None else self.beta_rec

    @property
    def gamma_nm1_or_zero(self):
        return zeros(self.N) if self.gamma_nm1 is None else self.gamma_nm1


def cauchy_integral(fam, n):
    """G_n = int P_n(y) W(y) / y dy dari momen k = -1 .. n-1."""
    return sum((fam.coeff(n, j) @ fam.moment(j - 1) for j in range(n + 1)), zeros(fam.N))


def cauchy_integral_quadrature(fam, n, m=None):
    """int P_n(y) W(y) P_m(y)* / y dy dengan kuadratur; m = None membuang faktor kanan."""
    def kernel(x, tt):
        left = eval_poly(fam, n, x) @ tt
        if m is None:
            return left
        return left @ np.conj(np.swapaxes(eval_poly(fam, m, x), -1, -2))

    return fam.weight.integrate(kernel, power=-1)


def compute_lax(fam, n):
    fam.check_degree(n)
    N, s = fam.N, fam.s
    B = fam.B
    P0 = fam.coeff(n, 0)
    G = cauchy_integral(fam, n)
    gamma_n = fam.gamma[n]
    p = G @ adj(P0) / TWO_PI_I
    a = s * G @ adj(P0) @ gamma_n
    if n == 0:
        P0_prev = G_prev = gamma_nm1 = None
        q = b = zeros(N)
    else:
        P0_prev = fam.coeff(n - 1, 0)
        G_prev = cauchy_integral(fam, n - 1)
        gamma_nm1 = fam.gamma[n - 1]
        q = TWO_PI_I * rsolve(gamma_nm1 @ P0_prev, P0, what=f'P_{n}(0)')
        b = s * p @ q
    return LaxQuantities(
        n=n,
        s=s,
        alpha=fam.spec.alpha,
        B=B,
        p=p,
        q=q,
        a=a,
        b=b,
        Bn=gamma_n @ B @ fam.gamma_inv[n],
        Bhat=rsolve(P0 @ B, P0, what=f'P_{n}(0)'),
        P0=P0,
        P0_prev=P0_prev,
        G=G,
        G_prev=G_prev,
        an_coeff=fam.sub_leading(n),
        gamma_n=gamma_n,
        gamma_inv=fam.gamma_inv[n],
        gamma_nm1=gamma_nm1,
        alpha_rec=fam.alpha_rec[n],
        beta_rec=fam.beta_rec[n],
    )


def lax_chain(fam, n_top=None):
    n_top = fam.n_max if n_top is None else n_top
    return [compute_lax(fam, n) for n in range(n_top + 1)]


def dual_route(fam, lq):
    """a_n dan b_n dari integral berbobot P_n W P_n* / y dan P_n W P_{n-1}* / y."""
    s, n = fam.s, lq.n
    a = s * cauchy_integral_quadrature(fam, n, n) @ lq.gamma_n
    if n == 0:
        return a, zeros(fam.N)
    b = s * cauchy_integral_quadrature(fam, n, n - 1) @ lq.gamma_nm1
    return a, b


@dataclass(eq=False)
class LaxMatrices:
    a_minus1: BlockMatrix
    a_minus2: BlockMatrix
    a_minus2_alt: BlockMatrix
    u_const: BlockMatrix
    u_linear: BlockMatrix

    def u(self, z):
        """U^(n)(z) = z * u_linear + u_const."""
        return BlockMatrix.from_full(z * self.u_linear.full() + self.u_const.full())


def y_minus1(lq):
    """Koefisien 1/z dalam Y^(n)(z) z^{-n sigma_3} di tak hingga."""
    return BlockMatrix(
        lq.an_coeff,
        -lq.gamma_inv / TWO_PI_I,
        -TWO_PI_I * lq.gamma_nm1_or_zero,
        -adj(lq.an_coeff),
    )


def q_matrices(lq):
    """Q^(n) = Y^(n)(0) dan inversnya dalam bentuk faktor skew-Hermitian."""
    I = eye(lq.N)
    p, q, P0 = lq.p, lq.q, lq.P0
    P0_inv = inv(P0, what=f'P_{lq.n}(0)')
    Q = BlockMatrix(I, p, -q, I - q @ p) @ BlockMatrix.diag(P0, adj(P0_inv))
    Q_inv = BlockMatrix.diag(P0_inv, adj(P0)) @ BlockMatrix(I - p @ q, -p, q, I)
    return Q, Q_inv


def assemble_lax_matrices(lq):
    N, n, s = lq.N, lq.n, lq.s
    I = eye(N)
    p, q, a, b = lq.p, lq.q, lq.a, lq.b
    shift = (n + lq.alpha / 2) * I
    a_minus1 = BlockMatrix(
        shift + lq.B,
        -lq.gamma_inv / TWO_PI_I,
        TWO_PI_I * lq.gamma_nm1_or_zero,
        -shift - adj(lq.B),
    )
    a_minus2 = BlockMatrix(
        0.5 * s * (I - 2 * p @ q),
        -s * p,
        -s * q @ (I - p @ q),
        -0.5 * s * (I - 2 * q @ p),
    )
    a_minus2_alt = BlockMatrix(
        0.5 * s * I - b,
        -a @ lq.gamma_inv / TWO_PI_I,
        -TWO_PI_I * lq.gamma_n @ solve(a, b @ (s * I - b), what=f'a_{n}'),
        -0.5 * s * I + adj(b),
    )
    u_const = BlockMatrix(-lq.alpha_rec, lq.gamma_inv / TWO_PI_I, -TWO_PI_I * lq.gamma_n, zeros(N))
    u_linear = BlockMatrix.diag(I, zeros(N))
    return LaxMatrices(a_minus1, a_minus2, a_minus2_alt, u_const, u_linear)


def verify_structural(fam, lq, lq_prev=None, report=None):
    """LOF, skew-Hermitian, bb*, relasi beta-b, rute dual serta bentuk A_{-1}, A_{-2}."""
    report = report or ResidualReport('structural', context={'spec': fam.spec.digest})
    n, s, N = lq.n, lq.s, lq.N
    I = eye(N)
    B = lq.B

    if n == 0:
        report.skip('lof', n, s, 'gamma_{-1} tidak terdefinisi')
        report.skip('beta-b-relation', n, s, 'beta_0 tidak terdefinisi')
    else:
        if lq_prev is None or lq_prev.n != n - 1:
            raise InvalidInput(f"verify_structural n={n} butuh data Lax n-1.")
        wronskian = lq.gamma_nm1 @ (lq.P0_prev @ adj(lq.G) - lq.G_prev @ adj(lq.P0))
        report.add_terms('lof', n, s, wronskian - I, [I, wronskian])
        beta_b = lq.beta_rec - lq.b + lq.an_coeff + comm(B, lq.an_coeff)
        report.add_terms('beta-b-relation', n, s, beta_b, [lq.beta_rec, lq.b, lq.an_coeff])

    report.add('p-skew-hermitian', n, s, skew_defect(lq.p), fro(lq.p))
    report.add('q-skew-hermitian', n, s, skew_defect(lq.q), fro(lq.q))
    report.add('gamma-hermitian', n, s, hermitian_defect(lq.gamma_n), fro(lq.gamma_n))

    bb_left = lq.gamma_inv @ adj(lq.b) @ lq.gamma_n
    bb_right = solve(lq.a, lq.b @ lq.a, what=f'a_{n}')
    report.add_terms('bb-star', n, s, bb_left - bb_right, [bb_left, bb_right])

    a_quad, b_quad = dual_route(fam, lq)
    report.add_terms('dual-route-a', n, s, a_quad - lq.a, [lq.a])
    if n > 0:
        report.add_terms('dual-route-b', n, s, b_quad - lq.b, [lq.b])
        b_alt = s * lq.G @ adj(lq.P0_prev) @ lq.gamma_nm1
        report.add_terms('dual-route-b-moments', n, s, b_alt - lq.b, [lq.b])
    else:
        report.skip('dual-route-b', n, s, 'b_0 = 0')

    mats = assemble_lax_matrices(lq)
    A2, A2_alt = mats.a_minus2.full(), mats.a_minus2_alt.full()
    report.add_terms('a2-two-forms', n, s, A2 - A2_alt, [A2, A2_alt])
    report.add('a2-trace', n, s, abs(mats.a_minus2.trace()), fro(A2))
    report.add_terms('a2-square', n, s, A2 @ A2 - 0.25 * s * s * np.eye(2 * N), [A2 @ A2, 0.25 * s * s * np.eye(2 * N)])

    Q, Q_inv = q_matrices(lq)
    report.add_terms('q-inverse', n, s, (Q @ Q_inv).full() - np.eye(2 * N), [Q.full(), Q_inv.full()])
    sigma3 = BlockMatrix.sigma3(N)
    conj = 0.5 * s * (Q @ sigma3 @ Q_inv).full()
    report.add_terms('a2-conjugation', n, s, conj - A2, [conj, A2])

    shift = (n + lq.alpha / 2) * I
    diag = BlockMatrix.diag(shift + B, -shift - adj(B)).full()
    Y = y_minus1(lq).full()
    S3 = sigma3.full()
    from_y = diag + 0.5 * (S3 @ Y - Y @ S3)
    A1 = mats.a_minus1.full()
    report.add_terms('a1-from-y-minus1', n, s, from_y - A1, [from_y, A1])
    return report
