"""From generator to Kraus operators: ``F = exp(L t)``, Choi matrix, eigen-decomposition.

Conventions (all matrices in the Hermitian basis ``G`` of :mod:`qubitkraus.qops`):

* ``F_rs = tr(G_r Phi[G_s])`` is the map matrix;
* ``S_nm = sum_rs F_rs tr(G_r G_n G_s G_m)`` is the Choi matrix, and the map acts as
  ``Phi[rho] = sum_nm S_nm G_n rho G_m``;
* ``K_i = sqrt(d_i) sum_j U_ji G_j`` where column ``i`` of ``U`` is the eigenvector
  of ``S`` with eigenvalue ``d_i``.  This choice reproduces ``F`` from the Kraus set.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import qops
from .errors import ChannelInvalidError, NotCompletelyPositive, ReductionError
from .generator import from_printed_order, tabulated_generator
from .model import system_hamiltonian

CP_TOL = 1e-9
DROP_TOL = 1e-12
PICTURES = ("interaction", "schrodinger")


@dataclass
class KrausSet:
    """Kraus operators with their Choi weights ``d_i = ||K_i||_F^2``."""

    operators: np.ndarray  # (k, dim, dim)
    weights: np.ndarray  # (k,)
    time: float = None
    picture: str = "interaction"

    def __post_init__(self):
        self.operators = np.asarray(self.operators, dtype=complex)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.operators.ndim != 3 or len(self.operators) != len(self.weights):
            raise ValueError("operators must be (k, d, d) with one weight each")
        if self.picture not in PICTURES:
            raise ValueError(f"picture must be one of {PICTURES}")

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    @property
    def dim(self):
        return self.operators.shape[-1]

    def completeness(self):
        """``sum_i K_i^+ K_i``."""
        return np.einsum("kba,kbc->ac", self.operators.conj(), self.operators)

    def completeness_residual(self):
        return float(np.abs(self.completeness() - np.eye(self.dim)).max())

    def nonzero(self, tol=DROP_TOL):
        keep = self.weights > tol
        return KrausSet(self.operators[keep], self.weights[keep], self.time, self.picture)


def matrix_exponential(M, t=1.0):
    """``exp(M t)`` by scaling and squaring with a Pade approximant."""
    M = np.asarray(M)
    if not np.isfinite(t) or not np.all(np.isfinite(M)):
        raise ValueError("matrix exponential needs finite entries and time")
    if t == 0:
        return np.eye(M.shape[0], dtype=M.dtype)
    return scipy.linalg.expm(M * t)


def map_matrix(L, t):
    """Map matrix ``F(t) = exp(L t)`` for ``t >= 0``."""
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    return matrix_exponential(L, t)


def closed_form_map(rates, t):
    """Closed-form map matrix, indexed by printed position (see :mod:`.generator`)."""
    g1, g2 = rates.gamma1, rates.gamma2
    e16_1, e16_2 = np.exp(-16 * t * g1), np.exp(-16 * t * g2)
    e32_1, e32_2 = np.exp(-32 * t * g1), np.exp(-32 * t * g2)
    P = np.zeros((16, 16))
    P[0, 0] = P[6, 6] = 1.0
    for p in (2, 3, 14, 15):
        P[p - 1, p - 1] = (e16_1 + e16_2) / 2
    for a, b in ((2, 14), (3, 15)):
        P[a - 1, b - 1] = P[b - 1, a - 1] = (e16_1 - e16_2) / 2
    for p in (5, 6, 8, 9, 10, 11, 12, 13):
        P[p - 1, p - 1] = np.exp(-8 * t * (g1 + g2))
    P[3, 3] = P[15, 15] = (e32_1 + e32_2) / 2
    P[3, 15] = P[15, 3] = (e32_1 - e32_2) / 2
    return P


@lru_cache(maxsize=1)
def _four_trace_tensor():
    g = qops.hermitian_basis()
    t = np.einsum("rab,nbc,scd,mda->rnsm", g, g, g, g, optimize=True)
    t.flags.writeable = False
    return t


def four_trace_tensor():
    """``T[r, n, s, m] = tr(G_r G_n G_s G_m)`` over the Pauli-product basis."""
    return _four_trace_tensor()


def choi_from_map(F):
    """Choi matrix ``S_nm = sum_rs F_rs tr(G_r G_n G_s G_m)``."""
    return np.einsum("rs,rnsm->nm", np.asarray(F), four_trace_tensor())


def map_from_choi(S):
    """Inverse of :func:`choi_from_map` (the transform is an involution)."""
    F = np.einsum("nm,rnsm->rs", np.asarray(S), four_trace_tensor())
    return F.real if np.abs(F.imag).max() < 1e-12 else F


def choi_from_kraus(ks):
    """Choi matrix of a two-qubit Kraus set: ``S = sum_i c_i c_i^+`` with ``c_i = expand(K_i)``."""
    coeffs = np.array([qops.expand(k) for k in ks.operators])
    return np.einsum("in,im->nm", coeffs, coeffs.conj())


def map_from_kraus(ks):
    """Map matrix ``F_rs = tr(G_r sum_i K_i G_s K_i^+)``."""
    g = qops.hermitian_basis()
    ops = ks.operators
    images = np.einsum("kab,sbc,kdc->sad", ops, g, ops.conj())
    F = np.einsum("rab,sba->rs", g, images)
    return F.real if np.abs(F.imag).max() < 1e-12 else F


def kraus_from_choi(S, tol=CP_TOL, time=None, picture="interaction", drop=DROP_TOL):
    """Kraus operators from the eigen-decomposition of a Hermitian Choi matrix.

    Eigenvalues in ``[-tol, 0]`` are clamped to zero, weights ``<= drop`` are
    discarded and the rest are returned in descending order of weight.

    Raises
    ------
    NotCompletelyPositive
        If the smallest eigenvalue is below ``-tol``.
    """
    S = np.asarray(S, dtype=complex)
    S = (S + S.conj().T) / 2
    if np.abs(S.imag).max() <= 1e-12 * max(1.0, np.abs(S).max()):
        # Real eigenvectors keep the Kraus operators Hermitian under degeneracy.
        d, U = np.linalg.eigh(S.real)
    else:
        d, U = np.linalg.eigh(S)
    if d.min() < -tol:
        raise NotCompletelyPositive(d.min(), tol)
    d = np.clip(d, 0.0, None)
    order = np.argsort(d)[::-1]
    d, U = d[order], U[:, order]
    keep = d > drop
    d, U = d[keep], U[:, keep]
    # Deterministic sign: largest component of each eigenvector is positive real.
    lead = U[np.argmax(np.abs(U), axis=0), np.arange(U.shape[1])]
    U = U * (np.abs(lead) / lead)
    ops = np.einsum("ji,jab->iab", U * np.sqrt(d), qops.hermitian_basis())
    return KrausSet(ops, d, time, picture)


def numeric_kraus(rates, t, tol=CP_TOL, placement="relabelled"):
    """Interaction-picture Kraus set at time ``t`` via the full generator-map-Choi pipeline."""
    F = map_matrix(tabulated_generator(rates, placement), t)
    return kraus_from_choi(choi_from_map(F), tol=tol, time=t)


@dataclass
class CPTPReport:
    completeness: float
    unitality: float
    hermiticity: list
    tol: float

    @property
    def max_hermiticity(self):
        return max(self.hermiticity, default=0.0)

    @property
    def trace_preserving(self):
        return self.completeness <= self.tol

    @property
    def unital(self):
        return self.unitality <= self.tol

    @property
    def hermitian(self):
        return self.max_hermiticity <= self.tol

    @property
    def passed(self):
        return self.trace_preserving and self.unital

    def format(self):
        return (
            f"completeness={self.completeness:.3e} unitality={self.unitality:.3e} "
            f"hermiticity={self.max_hermiticity:.3e} tol={self.tol:.1e} "
            f"tp={self.trace_preserving} unital={self.unital} hermitian={self.hermitian}"
        )


def verify_cptp(ks, tol=CP_TOL):
    """Diagnostic residuals of a Kraus set; never raises."""
    ops = ks.operators
    eye = np.eye(ks.dim)
    unit = np.einsum("kab,kcb->ac", ops, ops.conj())
    herm = [float(np.abs(k - k.conj().T).max()) for k in ops]
    return CPTPReport(
        completeness=float(np.abs(ks.completeness() - eye).max()),
        unitality=float(np.abs(unit - eye).max()),
        hermiticity=herm,
        tol=tol,
    )


def apply_map(ks, rho, check_tol=1e-6):
    """``sum_i K_i rho K_i^+``; the Kraus set must be complete to ``check_tol``."""
    res = ks.completeness_residual()
    if res > check_tol:
        raise ChannelInvalidError(f"Kraus set completeness residual {res:.3e} exceeds {check_tol:.1e}")
    rho = np.asarray(rho, dtype=complex)
    out = np.einsum("kab,bc,kdc->ad", ks.operators, rho, ks.operators.conj())
    return (out + out.conj().T) / 2


def schrodinger_dress(ks, params, t=None):
    """Left-multiply each operator by ``exp(-i t H)`` with ``H`` the two-qubit Hamiltonian."""
    if ks.picture != "interaction":
        raise ValueError("Kraus set is already in the Schrodinger picture")
    t = ks.time if t is None else t
    if t is None:
        raise ValueError("time is required")
    # H is diagonal in the product basis.
    u = np.exp(-1j * t * np.diag(system_hamiltonian(params)).real)
    return KrausSet(u[None, :, None] * ks.operators, ks.weights, t, "schrodinger")


def reduce_single_qubit(ks, rho_other, trace_out=2, tol=CP_TOL, drop=DROP_TOL):
    """Single-qubit Kraus set for the kept qubit, given the product partner state.

    Every operator is expanded as ``K = sum_ij c_ij A_i (x) B_j`` with
    normalised Paulis ``sigma / sqrt(2)`` on both factors.  The matrix
    ``b_ii' = sum_k tr(B_ik rho B_i'k^+)`` with ``B_ik = sum_j c_ij B_j``
    is diagonalised, ``b = W diag(b_k) W^+``, and the reduced operators are
    ``sqrt(b_k) sum_i W_ik A_i``.  Valid only for uncorrelated inputs
    ``rho_1 (x) rho_2``.
    """
    if trace_out not in (1, 2):
        raise ValueError("trace_out must be 1 or 2")
    rho_other = qops.check_density_matrix(rho_other, dim=2)
    paulis = np.array([qops.pauli(i) for i in range(4)]) / np.sqrt(2)
    coeffs = np.array([qops.expand(k).reshape(4, 4) for k in ks.operators])
    if trace_out == 1:
        coeffs = coeffs.transpose(0, 2, 1)
    # partner[k, i] = sum_j c^k_ij P_j acting on the traced qubit
    partner = np.einsum("kij,jab->kiab", coeffs, paulis)
    b = np.einsum("kiab,bc,kpac->ip", partner, rho_other, partner.conj())
    b = (b + b.conj().T) / 2
    vals, W = np.linalg.eigh(b)
    if vals.min() < -tol:
        raise ReductionError(f"reduction matrix eigenvalue {vals.min():.3e} below -{tol:.1e}")
    vals = np.clip(vals, 0.0, None)
    order = np.argsort(vals)[::-1]
    vals, W = vals[order], W[:, order]
    keep = vals > drop
    vals, W = vals[keep], W[:, keep]
    ops = np.einsum("ik,iab->kab", W * np.sqrt(vals), paulis)
    return KrausSet(ops, vals, ks.time, ks.picture)


def closed_form_map_basis(rates, t):
    """:func:`closed_form_map` reindexed into the qubit-1-major basis."""
    return from_printed_order(closed_form_map(rates, t))
