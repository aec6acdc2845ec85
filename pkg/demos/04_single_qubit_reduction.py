"""
Single-qubit channel for qubit 1
================================

For a product input rho1 (x) rho2 the two-qubit channel induces a channel on
qubit 1 alone.  Its Kraus operators come from diagonalising a 4x4 matrix
built with the partner state rho2.
"""
import numpy as np

from qubitkraus import qops
from qubitkraus.kraus import apply_map, numeric_kraus, reduce_single_qubit
from qubitkraus.model import ModelParams, damping_rates

rng = np.random.default_rng(1)
rates = damping_rates(ModelParams(beta=50.0))
ks = numeric_kraus(rates, 3e-3)

for label in ("+", "-"):
    rho2 = qops.projector(qops.ket(label))
    red = reduce_single_qubit(ks, rho2)
    print(f"partner |{label}>: {len(red)} operators, weights {np.round(red.weights, 5)}")

# %%
# The reduced channel reproduces the partial trace of the full evolution.
rho1 = qops.random_density_matrix(rng, 2)
rho2 = qops.random_density_matrix(rng, 2)
red = reduce_single_qubit(ks, rho2)
full = qops.partial_trace(apply_map(ks, np.kron(rho1, rho2)), 2)
print("max |reduced - partial trace| =", f"{np.abs(apply_map(red, rho1) - full).max():.1e}")
