"""
From generator to Kraus operators
=================================

F = exp(L t) is turned into a Choi matrix whose eigenvectors give the Kraus
operators.  The numeric set is then compared with the closed-form K1..K8.
"""
import numpy as np

from qubitkraus.analytic import analytic_kraus, asymptotic_sums, diagonal_coefficients
from qubitkraus.errors import FormulaDomainError
from qubitkraus.generator import tabulated_generator
from qubitkraus.kraus import choi_from_kraus, choi_from_map, kraus_from_choi, map_matrix, verify_cptp
from qubitkraus.model import ModelParams, damping_rates

p = ModelParams(beta=50.0)
r = damping_rates(p)
L = tabulated_generator(r)
t = 2e-3

S = choi_from_map(map_matrix(L, t))
ks = kraus_from_choi(S, time=t)
print(f"t = {t}: {len(ks)} Kraus operators, weights")
print(np.round(ks.weights, 6))
print(verify_cptp(ks).format())

# %%
# The closed-form diagonal pair K7, K8 depends on an auxiliary quantity B.
# As published, B makes A imaginary for every t > 0.
try:
    analytic_kraus(r, t, "printed")
except FormulaDomainError as exc:
    print("\nprinted B:", exc)

# Replacing its last term by 8 exp(56 tau) cosh(24 W tau) restores agreement.
ak = analytic_kraus(r, t, "corrected")
print("corrected B, Choi distance to numeric:", f"{np.abs(choi_from_kraus(ak) - S).max():.1e}")

co = diagonal_coefficients(r, 0.0)
print(f"\nat t = 0: B = {co.B}, A = {co.A}, A' = {co.A_prime}; K8 = -I: "
      f"{np.array_equal(analytic_kraus(r, 0.0).operators[7], -np.eye(4))}")

# %%
# Long-time limits of the two groups of operators.
late = analytic_kraus(r, 0.5, "corrected")
s16, s78 = asymptotic_sums(late)
print("\nsum K1..K6 K K ->", np.round(np.diag(s16).real, 6))
print("sum K7,K8 K K  ->", np.round(np.diag(s78).real, 6))
