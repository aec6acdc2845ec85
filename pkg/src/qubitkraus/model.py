"""Physical model: two coupled qubits, qubit 1 coupled to an Ohmic bath.

Units: hbar = k_B = 1.  The bath couples through ``S_1x = sigma_1x / 2`` and
the interaction picture is generated by

    H = omega/2 sigma_1z + omega/2 sigma_2z + beta/4 sigma_1z sigma_2z.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from . import qops
from .errors import SingularFrequencyError

# Relative tolerance for grouping degenerate eigenvalues and Bohr frequencies.
CLUSTER_RTOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; defaults are the values used for the entanglement study."""

    omega: float = 0.1
    beta: float = 0.0
    alpha: float = 0.02
    temperature: float = 100.0
    cutoff: float = 100.0

    def __post_init__(self):
        for name in ("omega", "beta", "alpha", "temperature", "cutoff"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        for name in ("omega", "alpha", "temperature", "cutoff"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta!r}")

    def with_beta(self, beta):
        return replace(self, beta=float(beta))


@dataclass(frozen=True)
class BohrFrequencies:
    nu1: float  # E1 - E2 = omega + beta/2
    nu2: float  # E1 - E3 = 2 omega
    nu3: float  # E2 - E3 = omega - beta/2


@dataclass(frozen=True)
class DampingRates:
    gamma1: float  # pairs with A2 (qubit 2 in |+>)
    gamma2: float  # pairs with A1 (qubit 2 in |->)

    def __post_init__(self):
        for name in ("gamma1", "gamma2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def total(self):
        return self.gamma1 + self.gamma2


def bohr_frequencies(params):
    return BohrFrequencies(
        nu1=params.omega + params.beta / 2,
        nu2=2 * params.omega,
        nu3=params.omega - params.beta / 2,
    )


def spectral_density(nu, params):
    """Ohmic spectral density ``alpha * nu * exp(-nu / cutoff)``, applied literally for any sign of ``nu``."""
    return params.alpha * nu * math.exp(-nu / params.cutoff)


def mean_occupation(nu, params):
    """Bose-Einstein occupation ``1 / (exp(nu/T) - 1)``."""
    if nu == 0:
        raise SingularFrequencyError("mean occupation diverges at zero frequency")
    return 1.0 / math.expm1(nu / params.temperature)


def transition_rate(nu, params):
    """High-temperature rate ``4 pi J(|nu|) n(|nu|)`` for a transition of Bohr frequency ``nu``.

    In the high-temperature limit the rates for a transition and its reverse
    coincide, so the rate is even in ``nu`` and is evaluated at ``|nu|``.
    """
    nu = abs(nu)
    return 4 * math.pi * spectral_density(nu, params) * mean_occupation(nu, params)


def damping_rates(params):
    """The two damping rates ``(gamma1, gamma2)`` at Bohr frequencies ``omega +- beta/2``.

    Raises :class:`SingularFrequencyError` when ``omega - beta/2`` is exactly zero.
    """
    nu = bohr_frequencies(params)
    for value in (nu.nu1, nu.nu3):
        if value == 0:
            raise SingularFrequencyError(
                f"Bohr frequency is zero (omega={params.omega}, beta={params.beta})"
            )
    return DampingRates(transition_rate(nu.nu1, params), transition_rate(nu.nu3, params))


def system_hamiltonian(params):
    z = qops.pauli(3)
    eye = qops.pauli(0)
    return (
        params.omega / 2 * np.kron(z, eye)
        + params.omega / 2 * np.kron(eye, z)
        + params.beta / 4 * np.kron(z, z)
    )


def coupling_operator():
    """System side of the bath coupling, ``S_1x = sigma_1x / 2``."""
    return np.kron(qops.pauli(1), qops.pauli(0)) / 2


def spectrum(params):
    """Energies and projectors ``[(E1, P1), (E2, P2), (E3, P3)]`` of the two-qubit Hamiltonian.

    The grouping is by product-state labels, so it stays fixed even at
    parameter values where two energies accidentally coincide.
    """
    w, b = params.omega, params.beta
    p1 = qops.projector(qops.ket("++"))
    p2 = qops.projector(qops.ket("+-")) + qops.projector(qops.ket("-+"))
    p3 = qops.projector(qops.ket("--"))
    return [(w + b / 4, p1), (-b / 4, p2), (-w + b / 4, p3)]


def _cluster(values, rtol=CLUSTER_RTOL):
    """Group sorted values into clusters; returns list of index lists."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values)
    scale = max(1.0, float(np.abs(values).max())) if values.size else 1.0
    groups = []
    for k in order:
        if groups and abs(values[k] - values[groups[-1][-1]]) <= rtol * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def eigenprojectors(H, rtol=CLUSTER_RTOL):
    """Distinct eigenvalues of Hermitian ``H`` with their spectral projectors."""
    evals, evecs = np.linalg.eigh(H)
    out = []
    for group in _cluster(evals, rtol):
        vecs = evecs[:, group]
        out.append((float(np.mean(evals[group])), vecs @ vecs.conj().T))
    return out


def eigenoperators(H, A, rtol=CLUSTER_RTOL, atol=1e-14):
    """Decompose ``A`` into eigenoperators of ``H``.

    Returns ``[(nu, A_nu), ...]`` sorted by ``nu``, where
    ``A_nu = sum_{E_m - E_n = nu} P_n A P_m``.  Summing all ``A_nu``
    reconstructs ``A``; terms with vanishing norm are omitted.
    """
    A = np.asarray(A, dtype=complex)
    proj = eigenprojectors(H, rtol)
    pieces = []
    for en, pn in proj:
        for em, pm in proj:
            pieces.append((em - en, pn @ A @ pm))
    out = []
    for group in _cluster([nu for nu, _ in pieces], rtol):
        nu = float(np.mean([pieces[k][0] for k in group]))
        op = sum(pieces[k][1] for k in group)
        if np.abs(op).max() > atol:
            out.append((nu, op))
    return out


def lindblad_operators(params):
    """Jump operators ``(A1, A2)`` from the projector pairs of :func:`spectrum`.

    ``A2 = P2 S_1x P1`` (Bohr frequency ``omega + beta/2``, qubit 2 in ``|+>``) and
    ``A1 = P3 S_1x P2`` (Bohr frequency ``omega - beta/2``, qubit 2 in ``|->``).
    They are kept separate even at ``beta = 0`` where both frequencies coincide.
    """
    (_, p1), (_, p2), (_, p3) = spectrum(params)
    s = coupling_operator()
    return p3 @ s @ p2, p2 @ s @ p1
