"""
Damping rates and the 16x16 generator
=====================================

Two qubits share an Ising coupling beta; only qubit 1 touches an Ohmic bath.
The bath enters through two damping rates, one per Bohr frequency
omega +- beta/2.  This script prints them for a few couplings and then
checks that the tabulated generator agrees with one built directly from
the jump operators.
"""
import numpy as np

from qubitkraus.generator import compare_generators, tabulated_generator
from qubitkraus.model import ModelParams, bohr_frequencies, damping_rates

base = ModelParams()  # omega=0.1, alpha=0.02, T=100, cutoff=100

print("beta     nu1        nu3        gamma1       gamma2")
for beta in (0.0, 10.0, 50.0, 100.0):
    p = base.with_beta(beta)
    nu = bohr_frequencies(p)
    r = damping_rates(p)
    print(f"{beta:5.0f} {nu.nu1:10.4f} {nu.nu3:10.4f} {r.gamma1:12.6f} {r.gamma2:12.6f}")

# %%
# The generator is real and symmetric; its spectrum is read off the closed form.
p = base.with_beta(50.0)
r = damping_rates(p)
L = tabulated_generator(r)
print("\nsymmetric:", np.array_equal(L, L.T))
print("eigenvalues:", np.round(np.sort(np.linalg.eigvalsh(L)), 3))
print("expected   :", np.round(sorted([0, 0, -16 * r.gamma1, -16 * r.gamma1, -16 * r.gamma2,
                                        -16 * r.gamma2, -32 * r.gamma1, -32 * r.gamma2]
                                       + [-8 * r.total] * 8), 3))

# %%
# Build the generator from the jump operators, fix one overall scale on
# entry (2, 2), and compare every position.
comp = compare_generators(p)
print(f"\ncalibration scale {comp.scale:g}, max |delta| on listed entries {comp.max_listed_delta:.1e}, "
      f"unlisted nonzero entries {len(comp.unlisted_nonzero)}")

# Reading the table straight onto the qubit-1-major basis does not work.
literal = compare_generators(p, placement="literal")
print(f"literal placement: max |delta| {literal.max_delta:.1f}, "
      f"{len(literal.unlisted_nonzero)} unlisted nonzero entries")
