"""Exception types raised by qubitkraus."""


class QubitKrausError(Exception):
    """Base class for all package errors."""


class SingularFrequencyError(QubitKrausError, ZeroDivisionError):
    """A Bohr frequency is exactly zero where the Bose function diverges."""


class NotCompletelyPositive(QubitKrausError):
    """The Choi matrix has an eigenvalue below the negative tolerance."""

    def __init__(self, eigenvalue, tol):
        self.eigenvalue = float(eigenvalue)
        self.tol = float(tol)
        super().__init__(
            f"Choi matrix eigenvalue {self.eigenvalue:.3e} is below -{self.tol:.1e}; "
            "map is not completely positive"
        )


class FormulaDomainError(QubitKrausError, ValueError):
    """A closed-form expression was evaluated outside its real domain."""


class ChannelInvalidError(QubitKrausError, ValueError):
    """A Kraus set violates completeness beyond the allowed residual."""


class ReductionError(QubitKrausError, ValueError):
    """The single-qubit reduction matrix is not positive semidefinite."""


class ConfigurationError(QubitKrausError, ValueError):
    """Numerical settings cannot be honoured (e.g. step count explodes)."""
