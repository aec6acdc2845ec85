"""16x16 generator matrices ``L_ij = tr(G_i Lambda[G_j])`` in the Hermitian basis.

Two routes are provided: the closed-form table of nonzero entries
(:func:`tabulated_generator`) and a direct construction from the jump
operators of the model (:func:`microscopic_generator`).

The closed-form table is written in its own *printed order* of basis
elements.  :data:`PRINTED_LABELS` assigns a Pauli product to each printed
position; with that assignment the table coincides, up to one overall
scale, with the microscopic generator.  Placing the table directly onto the
qubit-1-major basis (``placement="literal"``) is kept for diagnostics only:
it yields a map that is not completely positive.
"""
from dataclasses import dataclass, field

import numpy as np

from . import qops
from .model import damping_rates, lindblad_operators

# (qubit-1 Pauli, qubit-2 Pauli) for printed positions 1..16.
PRINTED_LABELS = (
    (0, 0), (1, 0), (2, 0), (3, 0),
    (0, 1), (1, 1), (0, 3), (3, 1),
    (0, 2), (1, 2), (2, 2), (3, 2),
    (2, 1), (1, 3), (2, 3), (3, 3),
)

# PRINTED_ORDER[p - 1] is the basis index holding printed position p.
PRINTED_ORDER = np.array([qops.basis_index(i, j) for i, j in PRINTED_LABELS])

PLACEMENTS = ("relabelled", "literal")

# Printed positions (1-based) of the table, grouped by closed form.
DIAG_SUM8 = (2, 3, 5, 6, 8, 9, 10, 11, 12, 13, 14, 15)
OFFDIAG_DIFF8 = ((2, 14), (3, 15))
DIAG_SUM16 = (4, 16)
OFFDIAG_DIFF16 = ((4, 16),)


def _listed_positions():
    pos = {(p, p) for p in DIAG_SUM8 + DIAG_SUM16}
    for a, b in OFFDIAG_DIFF8 + OFFDIAG_DIFF16:
        pos.add((a, b))
        pos.add((b, a))
    return frozenset(pos)


LISTED_POSITIONS = _listed_positions()


def _order(placement):
    if placement == "relabelled":
        return PRINTED_ORDER
    if placement == "literal":
        return np.arange(qops.BASIS_SIZE)
    raise ValueError(f"placement must be one of {PLACEMENTS}, got {placement!r}")


def to_printed_order(M, placement="relabelled"):
    """Reindex a basis-ordered 16x16 matrix by printed positions."""
    order = _order(placement)
    return np.asarray(M)[np.ix_(order, order)]


def from_printed_order(P, placement="relabelled"):
    """Inverse of :func:`to_printed_order`."""
    order = _order(placement)
    M = np.zeros_like(np.asarray(P))
    M[np.ix_(order, order)] = P
    return M


def superoperator_matrix(fn, basis=None):
    """Matrix ``M_ij = tr(G_i fn(G_j))`` of a linear map ``fn`` on 4x4 operators."""
    basis = qops.hermitian_basis() if basis is None else basis
    images = np.array([fn(g) for g in basis])
    return np.einsum("iab,jba->ij", basis, images)


def dissipate(A, rho):
    """``A rho A^+ - {A^+ A, rho} / 2``."""
    ad = A.conj().T
    ada = ad @ A
    return A @ rho @ ad - 0.5 * (ada @ rho + rho @ ada)


def dissipator_matrix(A, basis=None):
    """Real 16x16 matrix of the dissipator generated by jump operator ``A``."""
    A = np.asarray(A, dtype=complex)
    M = superoperator_matrix(lambda g: dissipate(A, g), basis)
    return M.real


def tabulated_entries(rates):
    """The closed-form generator table indexed by printed position (0-based array)."""
    g1, g2 = rates.gamma1, rates.gamma2
    P = np.zeros((16, 16))
    for p in DIAG_SUM8:
        P[p - 1, p - 1] = -8 * (g1 + g2)
    for a, b in OFFDIAG_DIFF8:
        P[a - 1, b - 1] = P[b - 1, a - 1] = -8 * (g1 - g2)
    for p in DIAG_SUM16:
        P[p - 1, p - 1] = -16 * (g1 + g2)
    for a, b in OFFDIAG_DIFF16:
        P[a - 1, b - 1] = P[b - 1, a - 1] = -16 * (g1 - g2)
    return P


def tabulated_generator(rates, placement="relabelled"):
    """Generator built from the closed-form table, in the qubit-1-major basis."""
    return from_printed_order(tabulated_entries(rates), placement)


def microscopic_generator(params, scale=1.0, basis=None):
    """``scale * [g2 (D(A1) + D(A1^+)) + g1 (D(A2) + D(A2^+))]`` from the model's jump operators."""
    rates = damping_rates(params)
    a1, a2 = lindblad_operators(params)
    L = np.zeros((16, 16))
    for rate, A in ((rates.gamma2, a1), (rates.gamma1, a2)):
        L += rate * (dissipator_matrix(A, basis) + dissipator_matrix(A.conj().T, basis))
    return scale * L


@dataclass
class EntryComparison:
    position: tuple  # 1-based printed (row, col)
    label: str
    tabulated: float
    microscopic: float
    listed: bool

    @property
    def delta(self):
        return self.microscopic - self.tabulated


@dataclass
class GeneratorComparison:
    """Entry-by-entry comparison of the calibrated microscopic and tabulated generators."""

    placement: str
    scale: float
    tabulated: np.ndarray
    microscopic: np.ndarray
    rows: list = field(default_factory=list)

    @property
    def max_listed_delta(self):
        return max((abs(r.delta) for r in self.rows if r.listed), default=0.0)

    @property
    def unlisted_nonzero(self):
        return [r for r in self.rows if not r.listed and abs(r.microscopic) > 1e-12]

    @property
    def max_delta(self):
        return float(np.abs(self.microscopic - self.tabulated).max())

    def format(self):
        lines = [
            f"placement={self.placement} scale={self.scale:.12g}",
            f"max_listed_delta={self.max_listed_delta:.3e} max_delta={self.max_delta:.3e} "
            f"unlisted_nonzero={len(self.unlisted_nonzero)}",
            "row,col,label,tabulated,microscopic,delta,listed",
        ]
        for r in self.rows:
            lines.append(
                f"{r.position[0]},{r.position[1]},{r.label},{r.tabulated:.12g},"
                f"{r.microscopic:.12g},{r.delta:.3e},{int(r.listed)}"
            )
        return "\n".join(lines)


def compare_generators(params, placement="relabelled", atol=1e-12):
    """Calibrate the microscopic generator on printed entry (2, 2) and compare.

    The single scale factor absorbs the overall prefactor convention of the
    master equation.  Every position where either matrix is nonzero, or which
    belongs to the table, is reported; nothing is reconciled silently.
    """
    tab = tabulated_generator(damping_rates(params), placement)
    raw = microscopic_generator(params)
    order = _order(placement)
    k = order[1]
    if raw[k, k] == 0:
        raise ValueError("cannot calibrate: microscopic entry (2, 2) is zero")
    scale = tab[k, k] / raw[k, k]
    micro = scale * raw
    t_p = to_printed_order(tab, placement)
    m_p = to_printed_order(micro, placement)
    rows = []
    for a in range(16):
        for b in range(16):
            listed = (a + 1, b + 1) in LISTED_POSITIONS
            if listed or abs(t_p[a, b]) > atol or abs(m_p[a, b]) > atol:
                i = order[a]
                j = order[b]
                label = f"{qops.basis_label(i)}|{qops.basis_label(j)}"
                rows.append(EntryComparison((a + 1, b + 1), label, t_p[a, b], m_p[a, b], listed))
    return GeneratorComparison(placement, float(scale), tab, micro, rows)
