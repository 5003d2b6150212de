import numpy as np

from laguerre.special_family import build_dg1
from laguerre.weight import WeightSpec


def scalar_spec(alpha=1.0, s=1.0, **extra):
    return WeightSpec(N=1, alpha=alpha, s=s, B=[[0.0]], **extra)


def dg1_spec(s=1.0, nu=(1.0,), alpha=1.0, normalize_gamma0=False):
    return build_dg1(nu, alpha, len(nu) + 1).weight_spec(s, normalize_gamma0)


def assert_close(testcase, actual, expected, rtol):
    actual, expected = np.asarray(actual), np.asarray(expected)
    scale = 1.0 + float(np.linalg.norm(expected))
    diff = float(np.linalg.norm(actual - expected))
    testcase.assertLessEqual(diff / scale, rtol, f"selisih relatif {diff / scale:.3e} > {rtol:.1e}")
