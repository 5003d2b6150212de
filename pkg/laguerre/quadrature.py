"""Kuadratur eksponensial ganda (exp-sinh) pada setengah garis (0, inf).

Simpul x = exp(pi/2 sinh t), t = k h, menutup kedua ujung secara eksponensial
ganda, sehingga singularitas esensial exp(-s/x) di titik nol dan peluruhan
eksponensial di tak hingga terselesaikan tanpa pemotongan. Integran dipecah
menjadi faktor skalar yang diberikan lewat logaritmanya (x^a e^{-x-s/x} dan
sejenisnya) dan bagian array tervektorisasi; simpul yang bobot berskalanya
underflow dibuang sebelum bagian array dievaluasi, jadi pertumbuhan polinom
tidak pernah overflow.

Integral ini menjadi oracle independen untuk momen bentuk tertutup.
"""
import logging

import numpy as np
from django.conf import settings

from .exceptions import InvalidInput

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * np.pi
T_MAX = 5.0
LOG_UNDERFLOW = -700.0
MIN_LEVEL = 3


def exp_sinh_nodes(h, t_max=T_MAX):
    """Mengembalikan (x, log_w) aturan exp-sinh dengan langkah h."""
    k = np.arange(-int(np.ceil(t_max / h)), int(np.ceil(t_max / h)) + 1)
    t = k * h
    u = HALF_PI * np.sinh(t)
    x = np.exp(u)
    log_w = np.log(h) + np.log(HALF_PI * np.cosh(t)) + u
    return x, log_w


def _level_sum(log_factor, func, h):
    x, log_w = exp_sinh_nodes(h)
    with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
        log_total = log_w + log_factor(x)
    keep = np.isfinite(log_total) & (log_total > LOG_UNDERFLOW)
    x, scale = x[keep], np.exp(log_total[keep])
    if func is None:
        return scale.sum()
    values = np.asarray(func(x))
    return np.tensordot(scale, values, axes=(0, 0))


def half_line(log_factor, func=None, rtol=None, max_level=None):
    """Mengintegralkan exp(log_factor(x)) * func(x) pada (0, inf).

    ``log_factor`` memetakan array simpul ke log faktor skalar positif.
    ``func`` memetakan array simpul ke array yang sumbu pertamanya berjalan
    atas simpul (misalnya bentuk (len(x), N, N)); bila kosong berarti 1.
    Langkah dibagi dua sampai dua jumlah berturut-turut sepakat hingga ``rtol``.
    """
    rtol = settings.MVOP_QUAD_RTOL if rtol is None else rtol
    max_level = settings.MVOP_QUAD_MAX_LEVEL if max_level is None else max_level
    if max_level < MIN_LEVEL:
        raise InvalidInput(f"max_level minimal {MIN_LEVEL}.")

    h = 0.5
    previous = _level_sum(log_factor, func, h)
    change = np.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        current = _level_sum(log_factor, func, h)
        size = float(np.max(np.abs(current))) if np.size(current) else 0.0
        change = float(np.max(np.abs(current - previous))) / max(size, np.finfo(float).tiny)
        previous = current
        if level >= MIN_LEVEL and change <= rtol:
            logger.debug("half_line konvergen: level=%d h=%.2e change=%.1e", level, h, change)
            return current
    logger.warning("half_line belum konvergen: h=%.2e change=%.1e > rtol=%.1e", h, change, rtol)
    return previous


def log_laguerre_factor(power, s):
    """log dari x^power e^{-x-s/x}, bagian skalar setiap integran berbobot."""
    if s < 0:
        raise InvalidInput(f"s harus >= 0, dapat {s}.")

    def log_factor(x):
        value = power * np.log(x) - x
        if s > 0:
            value = value - s / x
        return value

    return log_factor
