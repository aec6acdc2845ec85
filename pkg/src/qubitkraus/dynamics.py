"""Time evolution and entanglement: trajectories, concurrence and sudden death."""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import qops
from .errors import ConfigurationError
from .generator import tabulated_generator
from .kraus import apply_map, choi_from_map, kraus_from_choi, map_matrix, schrodinger_dress
from .model import damping_rates

WORKERS_ENV = "QUBITKRAUS_WORKERS"

_YY = np.kron(qops.pauli(2), qops.pauli(2))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 4, 4)
    concurrence: np.ndarray
    source: str  # "kraus" | "integrator"
    picture: str = "interaction"

    @property
    def purity(self):
        return np.einsum("nab,nba->n", self.states, self.states).real

    @property
    def trace_residual(self):
        return np.abs(np.einsum("naa->n", self.states) - 1)


@dataclass
class EsdResult:
    """First time at which the concurrence reaches zero, if any.

    ``bracket`` satisfies ``Lambda(lo) > 0 >= Lambda(hi)``.
    """

    esd_time: float = None
    bracket: tuple = None
    lambda_at_bracket: tuple = None

    @property
    def found(self):
        return self.esd_time is not None


def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] != 0:
        raise ValueError("times must be a 1-d sequence starting at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    return times


def concurrence_lambda(rho):
    """``sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)`` for the spin-flipped product.

    The ``l_i`` are the eigenvalues of ``rho (Y(x)Y) rho* (Y(x)Y)``, obtained
    from the similar Hermitian matrix ``sqrt(rho) (Y(x)Y) rho* (Y(x)Y) sqrt(rho)``.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = (rho + rho.conj().T) / 2
    w, v = np.linalg.eigh(rho)
    sq = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    flipped = _YY @ rho.conj() @ _YY
    m = sq @ flipped @ sq
    lam = np.clip(np.linalg.eigvalsh((m + m.conj().T) / 2), 0, None)
    s = np.sqrt(np.sort(lam)[::-1])
    return float(s[0] - s[1:].sum())


def concurrence(rho):
    """Wootters concurrence ``max(0, Lambda)``."""
    return max(0.0, concurrence_lambda(rho))


def integrate_master_equation(L, rho0, times, step_factor=0.02, max_steps=10_000_000):
    """Classic fourth-order Runge-Kutta for ``dc/dt = L c`` on the basis coefficients.

    The step never exceeds ``step_factor / ||L||_2``; requested ``times`` are hit exactly.
    """
    times = _check_times(times)
    L = np.asarray(L, dtype=float)
    norm = np.linalg.norm(L, 2)
    h_max = step_factor / norm if norm > 0 else math.inf
    spans = np.diff(times)
    counts = np.ceil(spans / h_max).astype(np.int64) if norm > 0 else np.ones(spans.size, np.int64)
    if counts.sum() > max_steps:
        raise ConfigurationError(
            f"integration needs {int(counts.sum())} steps (limit {max_steps}); ||L|| = {norm:.3e}"
        )
    c = qops.expand(rho0)
    coeffs = [c]
    for span, n in zip(spans, counts):
        h = span / n
        for _ in range(int(n)):
            k1 = L @ c
            k2 = L @ (c + h / 2 * k1)
            k3 = L @ (c + h / 2 * k2)
            k4 = L @ (c + h * k3)
            c = c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        coeffs.append(c)
    states = np.array([qops.reconstruct(x) for x in coeffs])
    return Trajectory(times, states, np.array([concurrence(s) for s in states]), "integrator")


def kraus_state(params, rho0, t, picture="schrodinger", rates=None):
    """State at time ``t`` through the generator -> map -> Choi -> Kraus pipeline."""
    rates = damping_rates(params) if rates is None else rates
    F = map_matrix(tabulated_generator(rates), t)
    ks = kraus_from_choi(choi_from_map(F), time=t)
    if picture == "schrodinger":
        ks = schrodinger_dress(ks, params, t)
    elif picture != "interaction":
        raise ValueError(f"unknown picture {picture!r}")
    return apply_map(ks, rho0)


def evolve_kraus(params, rho0, times, picture="schrodinger"):
    times = _check_times(times)
    rho0 = qops.check_density_matrix(rho0)
    rates = damping_rates(params)
    states = np.array([kraus_state(params, rho0, t, picture, rates) for t in times])
    return Trajectory(times, states, np.array([concurrence(s) for s in states]), "kraus", picture)


def default_t_max(params):
    """Five times the slowest decay time ``1 / (16 min(gamma1, gamma2))``."""
    rates = damping_rates(params)
    return 5.0 / (16.0 * min(rates.gamma1, rates.gamma2))


def esd_time(params, rho0, t_max=None, tol=1e-6, samples=400, picture="schrodinger"):
    """Locate the first zero of ``Lambda(t)`` by a forward scan followed by bisection.

    ``tol`` is relative: the returned bracket is narrower than ``tol * t_hi``.
    """
    rho0 = qops.check_density_matrix(rho0)
    if not concurrence(rho0) > 0:
        raise ValueError("initial state is not entangled")
    t_max = default_t_max(params) if t_max is None else t_max
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    rates = damping_rates(params)

    def lam(t):
        return concurrence_lambda(kraus_state(params, rho0, t, picture, rates))

    grid = np.linspace(0.0, t_max, samples + 1)
    lo, f_lo = 0.0, lam(0.0)
    for t in grid[1:]:
        f = lam(t)
        if f <= 0:
            hi, f_hi = t, f
            break
        lo, f_lo = t, f
    else:
        return EsdResult()
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        f = lam(mid)
        if f > 0:
            lo, f_lo = mid, f
        else:
            hi, f_hi = mid, f
    return EsdResult(0.5 * (lo + hi), (lo, hi), (f_lo, f_hi))


def default_workers():
    value = os.environ.get(WORKERS_ENV)
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def concurrence_surface(params, betas, times, picture="schrodinger", rho0=None, workers=None):
    """Rows ``(beta, t, C)`` ordered by beta then t.

    Each beta is evaluated independently; the result does not depend on ``workers``.
    """
    betas = np.asarray(betas, dtype=float)
    times = _check_times(times)
    if betas.ndim != 1 or betas.size == 0 or np.any(np.diff(betas) <= 0):
        raise ValueError("betas must be a non-empty increasing sequence")
    rho0 = qops.bell_plus() if rho0 is None else rho0
    workers = default_workers() if workers is None else workers

    def row(beta):
        traj = evolve_kraus(params.with_beta(beta), rho0, times, picture)
        return traj.concurrence

    if workers > 1 and betas.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, betas))
    else:
        rows = [row(b) for b in betas]
    bb, tt = np.meshgrid(betas, times, indexing="ij")
    return np.column_stack([bb.ravel(), tt.ravel(), np.concatenate(rows)])
