"""Kraus-operator dynamics of two interacting qubits, one of them coupled to a thermal bath."""
from .analytic import analytic_kraus, asymptotic_sums, diagonal_coefficients
from .dynamics import (
    concurrence,
    concurrence_lambda,
    concurrence_surface,
    esd_time,
    evolve_kraus,
    integrate_master_equation,
)
from .errors import (
    ChannelInvalidError,
    ConfigurationError,
    FormulaDomainError,
    NotCompletelyPositive,
    QubitKrausError,
    ReductionError,
    SingularFrequencyError,
)
from .generator import compare_generators, microscopic_generator, tabulated_generator
from .kraus import (
    KrausSet,
    apply_map,
    choi_from_map,
    closed_form_map,
    kraus_from_choi,
    map_from_choi,
    map_matrix,
    numeric_kraus,
    reduce_single_qubit,
    schrodinger_dress,
    verify_cptp,
)
from .model import ModelParams, bohr_frequencies, damping_rates, lindblad_operators
from .verify import run_verification

__version__ = "0.1.0"
