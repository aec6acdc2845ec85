"""Two-qubit operator algebra.

States are written in the product basis ``|++>, |+->, |-+>, |-->`` with
``sigma_z |+> = +|+>``; qubit 1 is the left tensor factor.  Operators are
plain ``numpy`` arrays of shape ``(4, 4)``.

The orthonormal Hermitian basis has 16 elements ``G[n] = s_i (x) s_j / 2``
with ``n = 4*i + j`` (zero-based, qubit-1 index major) and
``s_0, s_1, s_2, s_3 = I, sigma_x, sigma_y, sigma_z``.
"""
import numpy as np

_PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
_PAULI.flags.writeable = False

PAULI_NAMES = ("I", "X", "Y", "Z")

DIM = 4
BASIS_SIZE = DIM * DIM

# Tolerances used when validating density matrices.
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def pauli(index):
    """Return the 2x2 Pauli matrix ``I, X, Y, Z`` for ``index`` 0..3."""
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)) or not 0 <= index <= 3:
        raise ValueError(f"Pauli index must be an integer in 0..3, got {index!r}")
    return _PAULI[index].copy()


def sigma_minus():
    """Lowering operator ``|-><+|`` of a single qubit."""
    return (pauli(1) - 1j * pauli(2)) / 2


def sigma_plus():
    return sigma_minus().conj().T


def two_qubit(a, b):
    """Tensor product ``a (x) b`` with ``a`` acting on qubit 1."""
    return np.kron(a, b)


def _build_basis():
    basis = np.empty((BASIS_SIZE, DIM, DIM), dtype=complex)
    for i in range(4):
        for j in range(4):
            basis[4 * i + j] = np.kron(_PAULI[i], _PAULI[j]) / 2
    basis.flags.writeable = False
    return basis


_BASIS = _build_basis()


def hermitian_basis():
    """The 16 orthonormal Hermitian operators, shape ``(16, 4, 4)``.

    The returned array is read-only and shared; copy it before mutating.
    """
    return _BASIS


def basis_index(i, j):
    """Zero-based position of ``s_i (x) s_j / 2`` in :func:`hermitian_basis`."""
    return 4 * i + j


def basis_label(n):
    """Human readable label such as ``'Z(x)X'`` for zero-based index ``n``."""
    i, j = divmod(n, 4)
    return f"{PAULI_NAMES[i]}(x){PAULI_NAMES[j]}"


def expand(op, basis=None):
    """Coefficients ``c_n = tr(G_n op)`` of ``op`` in the Hermitian basis.

    Coefficients are real whenever ``op`` is Hermitian.
    """
    basis = _BASIS if basis is None else basis
    op = np.asarray(op)
    # tr(G_n op) = sum_ab G_n[a, b] op[b, a]
    return np.einsum("nab,ba->n", basis, op)


def reconstruct(coeffs, basis=None):
    """Inverse of :func:`expand`: ``sum_n c_n G_n``."""
    basis = _BASIS if basis is None else basis
    return np.einsum("n,nab->ab", np.asarray(coeffs), basis)


def ket(label):
    """Product ket from a string of ``+``/``-`` signs, e.g. ``ket('+-')``."""
    vec = np.ones(1, dtype=complex)
    for s in label:
        if s == "+":
            vec = np.kron(vec, [1, 0])
        elif s == "-":
            vec = np.kron(vec, [0, 1])
        else:
            raise ValueError(f"invalid ket label {label!r}")
    return vec


def projector(vec):
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def bell_plus():
    """The initial Bell state ``(|+-> + |-+>)/sqrt(2)`` as a density matrix."""
    return projector((ket("+-") + ket("-+")) / np.sqrt(2))


def maximally_mixed(dim=DIM):
    return np.eye(dim, dtype=complex) / dim


def partial_trace(op, which):
    """Trace out qubit ``which`` (1 or 2) of a two-qubit operator."""
    t = np.asarray(op).reshape(2, 2, 2, 2)
    if which == 2:
        return np.einsum("ajbj->ab", t)
    if which == 1:
        return np.einsum("iaib->ab", t)
    raise ValueError(f"which must be 1 or 2, got {which!r}")


def is_density_matrix(rho, dim=DIM):
    rho = np.asarray(rho)
    if rho.shape != (dim, dim) or not np.all(np.isfinite(rho)):
        return False
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        return False
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        return False
    return np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -PSD_TOL


def check_density_matrix(rho, dim=DIM):
    """Return ``rho`` as a complex array, raising ``ValueError`` if invalid."""
    rho = np.asarray(rho, dtype=complex)
    if not is_density_matrix(rho, dim):
        raise ValueError("not a valid density matrix (Hermitian, unit trace, PSD)")
    return rho


def trace_distance(rho, sigma):
    """``||rho - sigma||_1 / 2`` for Hermitian arguments."""
    diff = np.asarray(rho) - np.asarray(sigma)
    return 0.5 * np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).sum()


def purity(rho):
    return float(np.real(np.trace(rho @ rho)))


def random_density_matrix(rng, dim=DIM, rank=None):
    """Random state from the Ginibre ensemble (full rank unless ``rank`` given)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
