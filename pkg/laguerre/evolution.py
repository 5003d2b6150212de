"""Evolusi maju data Lax: dalam s sepanjang sistem ODE orde satu yang tertutup,
dan dalam n lewat bootstrap diskret empat langkah. Juga kemiringan awal di s = 0
dan pemindaian reduksi Painleve III skalar.
"""
import csv
import logging
from dataclasses import dataclass, replace

import numpy as np
from django.conf import settings
from scipy.integrate import solve_ivp

from .exceptions import InvalidInput, IterationDiverged, SingularMatrix, StepFailure
from .lax import cauchy_integral, cauchy_integral_quadrature, compute_lax, lax_chain
from .linalg import adj, comm, eye, fro, inv, relative, rsolve, solve, zeros
from .mvop import build_family
from .reports import ResidualReport
from .specfun import laguerre_overlap
from .weight import weight_for

logger = logging.getLogger(__name__)

STATE_FIELDS = ('a', 'b', 'Bn', 'Bhat')
ROUTES = ('auto', 'overlap', 'quadrature', 'moments')


@dataclass(eq=False)
class LaxState:
    """Empat variabel sistem tertutup pada (n, s)."""

    n: int
    s: float
    a: np.ndarray
    b: np.ndarray
    Bn: np.ndarray
    Bhat: np.ndarray

    @classmethod
    def from_lax(cls, lq):
        return cls(lq.n, lq.s, lq.a, lq.b, lq.Bn, lq.Bhat)

    def pack(self):
        return np.concatenate([getattr(self, name).ravel() for name in STATE_FIELDS])

    @classmethod
    def unpack(cls, n, s, y, N):
        blocks = y.reshape(len(STATE_FIELDS), N, N)
        return cls(n, s, *[np.array(block) for block in blocks])

    def distance(self, other, fields=STATE_FIELDS):
        """Selisih relatif terbesar atas field yang diberikan."""
        return max(relative(fro(getattr(self, f) - getattr(other, f)), fro(getattr(other, f))) for f in fields)


def _unnormalised(spec, what):
    if spec.normalize_gamma0:
        raise InvalidInput(f"{what} butuh bobot tanpa normalisasi gamma_0 (skala bergantung s).")
    return spec


def closed_rhs(n, alpha, B, state):
    """Turunan-s dari (a, b, B_n, B-hat_n) menurut sistem orde satu tertutup."""
    s, a, b, Bn, Bhat = state.s, state.a, state.b, state.Bn, state.Bhat
    N = a.shape[0]
    I = eye(N)
    a_inv = inv(a, what=f'a_{n}')
    a_inv_b = a_inv @ b
    c = (2 * n + alpha + 1) * I
    da = (-s * I + b + (c + B + a + a_inv_b) @ a + a @ adj(Bn)) / s
    db = (b @ (c + B + a_inv_b) - s * (2 * a_inv_b + n * I + B - Bhat) + a_inv @ b @ b
          + comm(B, b) + a @ adj(Bn) @ a_inv_b) / s
    dBn = comm(adj(a), Bn) / s
    dBhat = comm(a_inv_b + B, Bhat) / s
    return LaxState(n, s, da, db, dBn, dBhat)


@dataclass(eq=False)
class Trajectory:
    final: LaxState
    states: list

    def write_csv(self, path):
        N = self.final.a.shape[0]
        header = ['s']
        for name in STATE_FIELDS:
            for i in range(N):
                for j in range(N):
                    header += [f'{name}_{i}{j}_re', f'{name}_{i}{j}_im']
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for state in self.states:
                row = [state.s]
                for value in state.pack():
                    row += [value.real, value.imag]
                writer.writerow(row)


def evolve_ode(spec, n, s0, s1, init=None, dense=False):
    """Mengintegralkan sistem orde satu tertutup untuk (a_n, b_n, B_n, B-hat_n) dari s0 ke s1."""
    spec = _unnormalised(spec, 'Evolusi ODE')
    min_s = settings.MVOP_ODE_MIN_S
    if min(s0, s1) < min_s:
        raise InvalidInput(f"Integrasi hanya untuk s >= {min_s}; dapat s0={s0}, s1={s1}.")
    if init is None:
        init = LaxState.from_lax(compute_lax(build_family(spec.with_s(s0), n), n))
    if init.n != n or init.s != s0:
        raise InvalidInput(f"Data awal untuk (n={init.n}, s={init.s}), bukan (n={n}, s={s0}).")
    if s1 == s0:
        return Trajectory(init, [init])

    N, alpha, B = spec.N, spec.alpha, spec.B
    last_good = {'s': s0}

    def rhs(s, y):
        try:
            deriv = closed_rhs(n, alpha, B, LaxState.unpack(n, s, y, N))
        except SingularMatrix as exc:
            raise StepFailure(f"a_{n} singular sepanjang lintasan: {exc}", last_s=last_good['s']) from exc
        last_good['s'] = s
        return deriv.pack()

    t_eval = np.linspace(s0, s1, 101) if dense else [s1]
    sol = solve_ivp(rhs, (s0, s1), init.pack(), method='DOP853', t_eval=t_eval,
                    rtol=settings.MVOP_ODE_RTOL, atol=settings.MVOP_ODE_ATOL)
    if not sol.success:
        last = float(sol.t[-1]) if sol.t.size else last_good['s']
        raise StepFailure(f"Integrator berhenti: {sol.message}", last_s=last)
    logger.debug("evolve_ode n=%d %g->%g: %d evaluasi RHS", n, s0, s1, sol.nfev)
    states = [LaxState.unpack(n, float(s), sol.y[:, k], N) for k, s in enumerate(sol.t)]
    if not dense:
        states.insert(0, init)
    return Trajectory(states[-1], states)


@dataclass(eq=False)
class BootstrapStep:
    n: int
    s: float
    a: np.ndarray
    b: np.ndarray
    Bn: np.ndarray
    Bhat: np.ndarray
    alpha_rec: np.ndarray
    beta_rec: np.ndarray

    def state(self):
        return LaxState(self.n, self.s, self.a, self.b, self.Bn, self.Bhat)


def initial_a0(spec):
    """a_0 = s M_{-1} M_0^{-1} dari bobot kerja."""
    weight = weight_for(spec)
    return rsolve(spec.s * weight.moment(-1), weight.moment(0), what='M_0')


def bootstrap_discrete(spec, n_max, a0=None, guard=False):
    """Mengiterasi sistem diskret tertutup dari a_0 dengan gamma_0 = I.

    Tiap langkah: b_{n+1} dari persamaan diskret pertama, B-hat_{n+1} dari
    persamaan keempat, beta_{n+1} dari jumlah teleskopik dan B_{n+1} = beta^{-*} B_n beta^*,
    lalu a_{n+1} dari dP3. Dengan ``guard`` setiap langkah dibandingkan dengan
    nilai dari Hankel, dan deviasi di atas MVOP_BOOTSTRAP_GUARD menghentikan iterasi.
    """
    if not spec.normalize_gamma0:
        logger.info("Bootstrap: mengaktifkan normalisasi gamma_0 = I untuk spec %s", spec.digest)
        spec = replace(spec, normalize_gamma0=True)
    s, N, alpha = spec.s, spec.N, spec.alpha
    if s <= 0:
        raise InvalidInput(f"Bootstrap butuh s > 0, dapat s={s}.")
    I = eye(N)
    B = weight_for(spec).B
    a = initial_a0(spec) if a0 is None else np.asarray(a0, dtype=complex)
    b, Bn, Bhat = zeros(N), B.copy(), B.copy()
    reference = lax_chain(build_family(spec, n_max), n_max) if guard else None

    steps = []
    tail = zeros(N)
    beta = None
    for n in range(n_max + 1):
        alpha_rec = (2 * n + alpha + 1) * I + a + B + adj(Bn)
        step = BootstrapStep(n, s, a, b, Bn, Bhat, alpha_rec, beta)
        if reference is not None:
            deviation = step.state().distance(LaxState.from_lax(reference[n]))
            if deviation > settings.MVOP_BOOTSTRAP_GUARD:
                raise IterationDiverged(f"Bootstrap menyimpang pada n={n}: {deviation:.3e}", n=n, deviation=deviation)
        steps.append(step)
        if n == n_max:
            break

        k = n + 1
        rhs = s * a - (2 * n + alpha + 1) * a @ a - a @ a @ a - a @ (B + adj(Bn)) @ a - b @ a
        b_next = solve(a, rhs, what=f'a_{n}')
        smb = s * I - b_next
        Bhat_next = rsolve(smb @ solve(a, Bhat @ a, what=f'a_{n}'), smb, what=f's - b_{k}')
        x = a + adj(Bn)
        tail = tail + x + comm(B, x)
        beta = k * ((k + alpha) * I + B) + b_next + tail
        beta_adj = adj(beta)
        Bn_next = solve(beta_adj, Bn @ beta_adj, what=f'beta_{k}*')
        a_next = rsolve(rsolve(b_next @ b_next - s * b_next, a, what=f'a_{n}'), beta, what=f'beta_{k}')
        a, b, Bn, Bhat = a_next, b_next, Bn_next, Bhat_next
        logger.debug("Bootstrap n=%d: |a|=%.3e |b|=%.3e", k, fro(a), fro(b))
    return steps


def laguerre_diagonal_parameter(spec):
    """Parameter Laguerre alpha + j bila T T* = C x^j dengan C diagonal, selain itu None."""
    if spec.tt_poly is None:
        return spec.alpha if not np.any(spec.B) else None
    nonzero = [j for j, C in enumerate(spec.tt_poly) if np.any(C)]
    if len(nonzero) != 1:
        return None
    C = spec.tt_poly[nonzero[0]]
    if np.any(C - np.diag(np.diag(C))):
        return None
    return spec.alpha + nonzero[0]


def initial_derivatives(spec, n, route='auto'):
    """a_n'(0) dan b_n'(0) (None untuk n = 0) dari famili s = 0.

    Rute: 'overlap' memakai jumlah overlap Laguerre monik dan butuh T T*
    diagonal satu suku; 'quadrature' mengintegralkan P_n W P_m* / y secara numerik;
    'moments' memakai ekspansi momen k = -1. 'auto' mendahulukan 'overlap'.
    """
    if route not in ROUTES:
        raise InvalidInput(f"Rute tidak dikenal: {route}; pilih salah satu {ROUTES}.")
    spec0 = replace(spec, s=0.0, normalize_gamma0=False)
    param = laguerre_diagonal_parameter(spec0)
    if route == 'auto':
        route = 'overlap' if param is not None else 'quadrature'
    if route == 'overlap':
        if param is None:
            raise InvalidInput("Rute overlap butuh T T* = C x^j dengan C diagonal.")
        adot = np.diag([laguerre_overlap(n, n, param, param, param) / laguerre_overlap(n, n, param, param, param + 1)
                        for _ in range(spec.N)]).astype(complex)
        if n == 0:
            return adot, None
        ratio = (laguerre_overlap(n, n - 1, param, param, param)
                 / laguerre_overlap(n - 1, n - 1, param, param, param + 1))
        return adot, ratio * eye(spec.N)

    fam = build_family(spec0, n)
    if route == 'quadrature':
        adot = cauchy_integral_quadrature(fam, n, n) @ fam.gamma[n]
        bdot = None if n == 0 else cauchy_integral_quadrature(fam, n, n - 1) @ fam.gamma[n - 1]
    else:
        G = cauchy_integral(fam, n)
        adot = G @ adj(fam.coeff(n, 0)) @ fam.gamma[n]
        bdot = None if n == 0 else G @ adj(fam.coeff(n - 1, 0)) @ fam.gamma[n - 1]
    return adot, bdot


@dataclass
class PIIISample:
    s: float
    a: complex
    adot: complex
    addot: complex
    residual: float
    first_order_residual: float


def _check_grid(s_grid):
    grid = np.asarray(s_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise InvalidInput("Grid s butuh minimal 3 titik.")
    steps = np.diff(grid)
    if np.any(grid <= 0) or np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise InvalidInput("Grid s harus positif, naik dan seragam.")
    return grid, float(steps[0])


def scalar_piii_scan(spec, n, s_grid):
    """Residual Painleve III dari a_n(s) untuk bobot Laguerre skalar pada grid seragam.

    Turunan memakai beda sentral pada grid, jadi hanya titik interior yang
    dilaporkan. Persamaan orde satu untuk a_n ikut diperiksa dengan
    stensil pendeknya sendiri selebar MVOP_FD_STEP.
    """
    if not spec.is_scalar_laguerre:
        raise InvalidInput("Reduksi Painleve III hanya untuk N=1, B=0.")
    spec = replace(spec, normalize_gamma0=False)
    grid, ds = _check_grid(s_grid)
    alpha = spec.alpha
    h = settings.MVOP_FD_STEP

    def a_b(s):
        lq = compute_lax(build_family(spec.with_s(s), n), n)
        return complex(lq.a[0, 0]), complex(lq.b[0, 0])

    values = []
    for s in grid:
        values.append(a_b(s))
        if values[-1][0] == 0:
            raise InvalidInput(f"a_{n}(s) = 0 di s={s}: kutub 1/a.")

    report = ResidualReport('piii', context={'spec': spec.digest, 'ds': ds})
    samples = []
    c = 2 * n + alpha + 1
    for i in range(1, len(grid) - 1):
        s = float(grid[i])
        a, b = values[i]
        adot = (values[i + 1][0] - values[i - 1][0]) / (2 * ds)
        addot = (values[i + 1][0] - 2 * a + values[i - 1][0]) / (ds * ds)
        terms = [addot, adot ** 2 / a, adot / s, c * a ** 2 / s ** 2, a ** 3 / s ** 2, alpha / s, 1 / a]
        residual = abs(terms[0] - terms[1] + terms[2] - terms[3] - terms[4] - terms[5] + terms[6])
        report.add('painleve-iii', n, s, residual, max(abs(t) for t in terms))
        slope = (a_b(s + h)[0] - a_b(s - h)[0]) / (2 * h)
        first_terms = [s * slope, c * a, a * a, s, b + np.conj(b)]
        first = abs(first_terms[0] - (first_terms[1] + first_terms[2] - first_terms[3] + first_terms[4]))
        report.add('P3-scalar', n, s, first, max(abs(t) for t in first_terms), tolerance='continuous')
        samples.append(PIIISample(s, a, adot, addot, residual, first))
    return report, samples


def scalar_piii_residual(spec, n, s_grid):
    _, samples = scalar_piii_scan(spec, n, s_grid)
    return max(sample.residual for sample in samples)
