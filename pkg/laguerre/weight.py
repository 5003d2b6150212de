"""Bobot Laguerre terdeformasi W(s;x) = x^alpha e^{-x-s/x} T(x) T*(x).

``WeightSpec`` adalah deskripsi yang tidak berubah; ``Weight`` adalah evaluator
yang memegang cache momen dan, bila diminta, penskalaan dua sisi yang membuat
gamma_0 = I. Semua objek hilir dibangun dari ``Weight.moment``; metode
kuadratur ada untuk pemeriksaan silang oracle.
"""
import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from . import quadrature
from .exceptions import DivergentMoment, InvalidInput
from .linalg import adj, as_cmatrix, fro, hermitian_defect, hermitian_sqrt, inv, mat_power_log
from .specfun import scalar_moment

logger = logging.getLogger(__name__)

POSITIVITY_SAMPLES = np.logspace(-4, 4, 17)


def _frozen(M):
    M = np.array(M, dtype=complex)
    M.setflags(write=False)
    return M


def _pairs(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


@dataclass(frozen=True, eq=False)
class WeightSpec:
    N: int
    alpha: float
    s: float
    B: np.ndarray
    tt_poly: tuple = None
    normalize_gamma0: bool = False
    dg1_nu: tuple = None
    digest: str = field(init=False, default='')

    def __post_init__(self):
        if self.N < 1:
            raise InvalidInput(f"N harus >= 1, dapat {self.N}.")
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise InvalidInput(f"alpha harus > 0, dapat {self.alpha}.")
        if not np.isfinite(self.s) or self.s < 0:
            raise InvalidInput(f"s harus >= 0, dapat {self.s}.")
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 's', float(self.s))
        object.__setattr__(self, 'B', _frozen(as_cmatrix(self.B, self.N)))
        if self.tt_poly is not None:
            coeffs = tuple(_frozen(as_cmatrix(C, self.N)) for C in self.tt_poly)
            if not coeffs:
                raise InvalidInput("tt_poly tidak boleh kosong.")
            for j, C in enumerate(coeffs):
                if hermitian_defect(C) > 1e-12 * (1.0 + fro(C)):
                    raise InvalidInput(f"Koefisien tt_poly ke-{j} tidak Hermitian.")
            object.__setattr__(self, 'tt_poly', coeffs)
            self._check_positive()
        if self.dg1_nu is not None:
            object.__setattr__(self, 'dg1_nu', tuple(complex(v) for v in self.dg1_nu))
        payload = json.dumps(self.canonical(), sort_keys=True)
        object.__setattr__(self, 'digest', hashlib.sha1(payload.encode()).hexdigest()[:12])

    def _check_positive(self):
        for x in POSITIVITY_SAMPLES:
            values = np.linalg.eigvalsh(tt_poly_value(self.tt_poly, x))
            if values.min() <= 0:
                raise InvalidInput(f"T(x)T*(x) tidak definit positif di x={x:.3g}.")

    def canonical(self):
        return {
            'N': self.N,
            'alpha': self.alpha,
            's': self.s,
            'B': _pairs(self.B),
            'tt_poly': None if self.tt_poly is None else [_pairs(C) for C in self.tt_poly],
            'normalize_gamma0': bool(self.normalize_gamma0),
            'dg1_nu': None if self.dg1_nu is None else [[v.real, v.imag] for v in self.dg1_nu],
        }

    def with_s(self, s):
        return replace(self, s=s)

    @property
    def is_scalar_laguerre(self):
        return self.N == 1 and not np.any(self.B)


def tt_poly_value(coeffs, x):
    """sum_k C_k x^k di satu skalar atau di setiap titik array (sumbu pertama)."""
    x = np.asarray(x, dtype=float)
    powers = x[..., None] ** np.arange(len(coeffs))
    return np.tensordot(powers, np.array(coeffs), axes=(-1, 0))


class Weight:
    """Evaluator dan cache momen untuk satu ``WeightSpec``.

    Dengan ``normalize_gamma0`` bobot kerja adalah S^{-1} W S^{-1}, dengan
    S = moment_0^{1/2} bobot mentah pada s ini. Lalu T diganti
    S^{-1} T dan B diganti S^{-1} B S, sehingga struktur Lax tidak berubah.
    """

    def __init__(self, spec):
        self.spec = spec
        self._lock = threading.Lock()
        self._moments = {}
        self.scale = None
        self.scale_inv = None
        if spec.normalize_gamma0:
            S = hermitian_sqrt(self._raw_moment(0))
            self.scale, self.scale_inv = S, inv(S, what='normalisasi gamma_0')
            logger.debug("Weight %s dinormalisasi: |S|=%.3e", spec.digest, fro(S))

    @cached_property
    def B(self):
        if self.scale is None:
            return self.spec.B
        return self.scale_inv @ self.spec.B @ self.scale

    def _scaled(self, M):
        if self.scale is None:
            return M
        return self.scale_inv @ M @ self.scale_inv

    def _raw_tt(self, x):
        spec = self.spec
        if spec.tt_poly is not None:
            return tt_poly_value(spec.tt_poly, x)
        T = sla.expm(spec.B[None, :, :] * np.log(x)[:, None, None])
        return T @ np.conj(np.swapaxes(T, -1, -2))

    def tt(self, x):
        """T(x)T*(x) bobot kerja di setiap simpul ``x``."""
        values = self._raw_tt(np.atleast_1d(np.asarray(x, dtype=float)))
        if self.scale is None:
            return values
        return self.scale_inv @ values @ self.scale_inv

    def __call__(self, x):
        if not np.isfinite(x) or x <= 0:
            raise InvalidInput(f"Bobot hanya untuk x > 0, dapat x={x}.")
        spec = self.spec
        log_scalar = spec.alpha * np.log(x) - x - (spec.s / x if spec.s else 0.0)
        if self.spec.tt_poly is None:
            T = mat_power_log(spec.B, x)
            tt = self._scaled(T @ adj(T))
        else:
            tt = self.tt(x)[0]
        return np.exp(log_scalar) * tt

    def _raw_moment(self, k):
        spec = self.spec
        if k < -1:
            raise InvalidInput(f"Momen hanya untuk k >= -1, dapat k={k}.")
        if spec.tt_poly is not None:
            total = np.zeros((spec.N, spec.N), dtype=complex)
            for j, C in enumerate(spec.tt_poly):
                if np.any(C):
                    total += C * scalar_moment(spec.alpha + k + j + 1, spec.s)
            return total
        if not np.any(spec.B - np.diag(np.diag(spec.B))):
            # x^B diagonal: T T* = diag(x^{2 Re b_i})
            powers = 2.0 * np.real(np.diag(spec.B))
            return np.diag([scalar_moment(spec.alpha + k + 1 + p, spec.s) for p in powers]).astype(complex)
        if spec.s == 0:
            lowest = float(np.min(np.linalg.eigvals(spec.B).real))
            if spec.alpha + k + 1 + 2 * min(lowest, 0.0) <= 0:
                raise DivergentMoment(f"Momen k={k} divergen di s=0 (alpha={spec.alpha}, min Re eig B={lowest}).")
        return self._raw_quadrature(k)

    def _raw_quadrature(self, k):
        factor = quadrature.log_laguerre_factor(self.spec.alpha + k, self.spec.s)
        return quadrature.half_line(factor, self._raw_tt)

    def moment(self, k):
        """int_0^inf x^k W(s;x) dx bobot kerja, di-cache per k."""
        with self._lock:
            cached = self._moments.get(k)
        if cached is not None:
            return cached
        value = self._scaled(self._raw_moment(k))
        value.setflags(write=False)
        with self._lock:
            self._moments.setdefault(k, value)
        return value

    def integrate(self, kernel, power=0):
        """int_0^inf x^power x^alpha e^{-x-s/x} kernel(x, TT*(x)) dx dengan kuadratur.

        ``kernel`` menerima array simpul dan nilai T T* yang ditumpuk lalu
        mengembalikan array dengan simpul pada sumbu pertama.
        """
        factor = quadrature.log_laguerre_factor(self.spec.alpha + power, self.spec.s)
        return quadrature.half_line(factor, lambda x: kernel(x, self.tt(x)))

    def moment_quadrature(self, k):
        if self.spec.s == 0 and self.spec.alpha + k + 1 <= 0:
            raise DivergentMoment(f"Momen k={k} divergen di s=0.")
        return self.integrate(lambda x, tt: tt, power=k)


_registry_lock = threading.Lock()
_registry = {}
REGISTRY_SIZE = 256


def weight_for(spec):
    """``Weight`` bersama per digest spec; nilai s berbeda mendapat entri berbeda."""
    with _registry_lock:
        found = _registry.get(spec.digest)
    if found is not None:
        return found
    built = Weight(spec)
    with _registry_lock:
        if len(_registry) >= REGISTRY_SIZE:
            _registry.clear()
        return _registry.setdefault(spec.digest, built)


def eval_weight(spec, x):
    return weight_for(spec)(x)


def matrix_moment(spec, k):
    return weight_for(spec).moment(k)
