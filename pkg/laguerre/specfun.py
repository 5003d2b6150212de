"""Fungsi khusus skalar di balik momen Laguerre terdeformasi."""
import logging

import numpy as np
from scipy import special

from . import quadrature
from .exceptions import DivergentMoment, InvalidInput

logger = logging.getLogger(__name__)


def _check_finite(**values):
    for name, value in values.items():
        if not np.isfinite(value):
            raise InvalidInput(f"{name} harus finite, dapat {value}.")


def bessel_k(nu, z):
    """Fungsi MacDonald K_nu(z) untuk nu real dan z > 0."""
    _check_finite(nu=nu, z=z)
    if z <= 0:
        raise InvalidInput(f"K_nu hanya untuk z > 0, dapat z={z}.")
    return float(special.kv(nu, z))


def log_bessel_k(nu, z):
    """log K_nu(z) lewat kve berskala, aman saat kv overflow atau underflow."""
    _check_finite(nu=nu, z=z)
    if z <= 0:
        raise InvalidInput(f"K_nu hanya untuk z > 0, dapat z={z}.")
    return float(np.log(special.kve(nu, z)) - z)


def bessel_k_integral(nu, z):
    """K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, dengan kuadratur exp-sinh."""
    _check_finite(nu=nu, z=z)
    if z <= 0:
        raise InvalidInput(f"K_nu hanya untuk z > 0, dapat z={z}.")

    def log_factor(t):
        return -z * np.cosh(t) + np.logaddexp(nu * t, -nu * t) - np.log(2.0)

    return float(quadrature.half_line(log_factor))


def scalar_moment(sigma, s):
    """int_0^inf x^(sigma-1) e^(-x-s/x) dx = 2 s^(sigma/2) K_sigma(2 sqrt(s)).

    Di s = 0 nilainya Gamma(sigma) dan divergen untuk sigma <= 0. Untuk s > 0
    integral konvergen untuk setiap sigma real.
    """
    _check_finite(sigma=sigma, s=s)
    if s < 0:
        raise InvalidInput(f"s harus >= 0, dapat {s}.")
    if s == 0:
        if sigma <= 0:
            raise DivergentMoment(f"Momen divergen di s=0 untuk sigma={sigma} <= 0.")
        return float(special.gamma(sigma))

    z = 2.0 * np.sqrt(s)
    with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
        log_k = log_bessel_k(sigma, z)
    if not np.isfinite(log_k):
        # kve keluar dari rentang double untuk s sangat kecil
        logger.debug("kve(%s, %s) tidak finite, pakai kuadratur", sigma, z)
        return scalar_moment_quadrature(sigma, s)
    return float(np.exp(np.log(2.0) + 0.5 * sigma * np.log(s) + log_k))


def scalar_moment_quadrature(sigma, s):
    """Oracle kuadratur untuk ``scalar_moment``."""
    _check_finite(sigma=sigma, s=s)
    if s == 0 and sigma <= 0:
        raise DivergentMoment(f"Momen divergen di s=0 untuk sigma={sigma} <= 0.")
    return float(quadrature.half_line(quadrature.log_laguerre_factor(sigma - 1.0, s)))


def monic_laguerre(n, a):
    """Koefisien naik polinom Laguerre monik berderajat n.

    (-1)^n n! L_n^(a)(x) = sum_k (-1)^(n+k) n!/k! binom(n+a, n-k) x^k.
    """
    if n < 0:
        raise InvalidInput(f"Derajat harus >= 0, dapat {n}.")
    k = np.arange(n + 1)
    coeffs = (-1.0) ** (n + k) * special.poch(k + 1.0, n - k) * special.binom(n + a, n - k)
    coeffs[n] = 1.0
    return coeffs


def laguerre_overlap(n, m, a1, a2, sigma):
    """int_0^inf Lhat_n^(a1) Lhat_m^(a2) x^(sigma-1) e^(-x) dx.

    Jumlah ganda Pochhammer
    (-1)^(n+m) Gamma(sigma) (a1+1)_n (a2+1)_m
        sum_k sum_l (-n)_k (-m)_l (sigma)_(k+l) / ((a1+1)_k (a2+1)_l k! l!).
    """
    if sigma <= 0:
        raise DivergentMoment(f"Overlap divergen untuk sigma={sigma} <= 0.")
    if a1 <= -1 or a2 <= -1:
        raise InvalidInput(f"Parameter Laguerre harus > -1, dapat a1={a1}, a2={a2}.")
    k = np.arange(n + 1)[:, None]
    l = np.arange(m + 1)[None, :]
    terms = (
        special.poch(-n, k) * special.poch(-m, l) * special.poch(sigma, k + l)
        / (special.poch(a1 + 1.0, k) * special.poch(a2 + 1.0, l)
           * special.factorial(k) * special.factorial(l))
    )
    prefactor = (-1.0) ** (n + m) * special.gamma(sigma) * special.poch(a1 + 1.0, n) * special.poch(a2 + 1.0, m)
    return float(prefactor * terms.sum())
