"""Utilitas matriks kompleks padat untuk objek N x N dan 2N x 2N.

Setiap besaran matriks (B, gamma_n, p_n, a_n, ...) adalah ``numpy.ndarray``
complex128 berbentuk (N, N); koefisien Lax berupa ``BlockMatrix``, yaitu
grid 2 x 2 dari blok semacam itu. Semua norma adalah Frobenius.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from django.conf import settings

from .exceptions import InvalidInput, SingularMatrix

logger = logging.getLogger(__name__)

CMatrix = np.ndarray


def as_cmatrix(data, N=None):
    M = np.array(data, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInput(f"Matrix harus persegi, dapat shape {M.shape}.")
    if N is not None and M.shape[0] != N:
        raise InvalidInput(f"Matrix harus {N}x{N}, dapat {M.shape[0]}x{M.shape[1]}.")
    if not np.all(np.isfinite(M)):
        raise InvalidInput("Matrix mengandung nilai non-finite.")
    return M


def eye(N):
    return np.eye(N, dtype=complex)


def zeros(N):
    return np.zeros((N, N), dtype=complex)


def adj(M):
    return np.conj(M).T


def fro(M):
    return float(np.linalg.norm(M))


def comm(A, B):
    return A @ B - B @ A


def hermitian_defect(M):
    return fro(M - adj(M))


def skew_defect(M):
    return fro(M + adj(M))


def relative(abs_residual, reference):
    """Residual bebas skala: abs / (1 + |reference|)."""
    return abs_residual / (1.0 + reference)


def mat_power_log(B, x):
    """x^B = exp(B log x) untuk x real > 0."""
    if not np.isfinite(x):
        raise InvalidInput("x harus finite.")
    if x <= 0:
        raise InvalidInput(f"x^B hanya untuk x > 0, dapat x={x}.")
    B = as_cmatrix(B)
    if x == 1.0:
        return eye(B.shape[0])
    return sla.expm(B * np.log(x))


def condition(M):
    return float(np.linalg.cond(M))


def _check_condition(M, what):
    cond = condition(M)
    limit = settings.MVOP_COND_LIMIT
    if not np.isfinite(cond) or cond > limit:
        raise SingularMatrix(f"{what}: kondisi {cond:.3e} melebihi batas {limit:.0e}.", cond=cond)
    return cond


def solve(M, rhs, what='solve'):
    """Mengembalikan X dengan M X = rhs; M singular dilaporkan, tidak diregularisasi."""
    _check_condition(M, what)
    return sla.solve(M, rhs)


def rsolve(rhs, M, what='rsolve'):
    """Mengembalikan X dengan X M = rhs."""
    _check_condition(M, what)
    return sla.solve(M.T, rhs.T).T


def inv(M, what='inverse'):
    return solve(M, eye(M.shape[0]), what=what)


def hermitian_sqrt(M):
    """Akar kuadrat utama matriks Hermitian definit positif."""
    H = 0.5 * (M + adj(M))
    w, V = np.linalg.eigh(H)
    if np.any(w <= 0):
        raise SingularMatrix("Akar kuadrat: matrix tidak definit positif.", cond=np.inf)
    return (V * np.sqrt(w)) @ adj(V)


@dataclass(frozen=True)
class BlockMatrix:
    """Grid 2 x 2 dari blok N x N, misalnya Y_{-1}, Q^(n), A_{-1}, A_{-2}, U^(n)."""

    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray

    def __post_init__(self):
        shapes = {blk.shape for blk in (self.b11, self.b12, self.b21, self.b22)}
        if len(shapes) != 1:
            raise InvalidInput(f"Semua blok harus berdimensi sama, dapat {shapes}.")

    @property
    def N(self):
        return self.b11.shape[0]

    def full(self):
        return np.block([[self.b11, self.b12], [self.b21, self.b22]])

    @classmethod
    def from_full(cls, M):
        N = M.shape[0] // 2
        return cls(M[:N, :N], M[:N, N:], M[N:, :N], M[N:, N:])

    @classmethod
    def diag(cls, top, bottom):
        return cls(top, zeros(top.shape[0]), zeros(top.shape[0]), bottom)

    @classmethod
    def sigma3(cls, N):
        return cls.diag(eye(N), -eye(N))

    def __matmul__(self, other):
        return BlockMatrix.from_full(self.full() @ other.full())

    def __add__(self, other):
        return BlockMatrix.from_full(self.full() + other.full())

    def __sub__(self, other):
        return BlockMatrix.from_full(self.full() - other.full())

    def trace(self):
        return complex(np.trace(self.b11) + np.trace(self.b22))
