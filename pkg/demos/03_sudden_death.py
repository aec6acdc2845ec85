"""
Entanglement sudden death
=========================

Start from (|+-> + |-+>)/sqrt(2) and follow the concurrence.  It reaches zero
at a finite time, and a stronger qubit-qubit coupling delays that moment.
"""
import numpy as np

from qubitkraus import qops
from qubitkraus.dynamics import concurrence_surface, esd_time, evolve_kraus, integrate_master_equation
from qubitkraus.generator import tabulated_generator
from qubitkraus.model import ModelParams, damping_rates

bell = qops.bell_plus()
base = ModelParams()

for beta in (0.0, 50.0, 100.0):
    res = esd_time(base.with_beta(beta), bell)
    print(f"beta = {beta:5.1f}: concurrence vanishes at t = {res.esd_time:.6g}")

# %%
# Trajectory at beta = 50, checked against a plain Runge-Kutta integration.
p = base.with_beta(50.0)
times = np.linspace(0, 0.006, 13)
traj = evolve_kraus(p, bell, times)
oracle = integrate_master_equation(tabulated_generator(damping_rates(p)), bell, times)
inter = evolve_kraus(p, bell, times, "interaction")
gap = max(qops.trace_distance(a, b) for a, b in zip(inter.states, oracle.states))
print("\n     t      C       purity")
for t, c, pur in zip(times, traj.concurrence, traj.purity):
    print(f"{t:8.4f} {c:7.4f} {pur:8.4f}")
print(f"largest trace distance to the integrator: {gap:.1e}")

# %%
# A coarse (beta, t) surface, the raw data for a 3-d plot.
surface = concurrence_surface(base, np.linspace(0, 100, 5), np.linspace(0, 0.006, 7))
grid = surface[:, 2].reshape(5, 7)
print("\nconcurrence, rows beta = 0..100, columns t = 0..0.006")
print(np.round(grid, 3))
