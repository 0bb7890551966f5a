"""Relaxation superoperators for N-level quantum systems and their complete-positivity constraints.

Start from observable rates (population transfer ``gamma`` and decoherence
``Gamma``), build the dissipator with :func:`build_phenomenological`, test it
with :func:`full_validate`, extract Lindblad channels with :func:`diagonalize`
and watch the eigenvalues of ``rho(t)`` with :func:`propagate`.
"""

__version__ = "0.1.0"

from .basis import OperatorBasis, canonical_basis, matrix_unit, symmetric_basis_4
from .constraints import (
    Check,
    ConstraintReport,
    default_tol,
    distance_case,
    distance_rates,
    fourlevel_necessary,
    fourlevel_sufficient,
    full_validate,
    principal_minor_checks,
    spectral_check,
    threelevel_closed_form,
)
from .decomp import (
    PureDephasingRates,
    ReducedCoefficientMatrix,
    decay_induced_dephasing,
    dephasing_part,
    dephasing_rates_from_reduced,
    dephasing_superoperator,
    population_part,
    pure_dephasing,
    rates_from_pure_dephasing,
    reduced_matrix,
)
from .dissipator import (
    KossakowskiMatrix,
    RateSpec,
    build_phenomenological,
    elementary_generator,
    hamiltonian_superoperator,
    kossakowski_assemble,
    kossakowski_expand,
)
from .errors import (
    ContractViolation,
    DimensionError,
    LindbladForgeError,
    NotCompletelyPositiveError,
    NotExpandableError,
    ValidationError,
)
from .evolve import (
    EvolutionConfig,
    Trajectory,
    analytic_decay3,
    analytic_dephase3,
    positivity_breach,
    propagate,
    uniform_superposition,
)
from .lindblad import LindbladSet, diagonalize, reconstruct, threelevel_dephasing_generators
from .matcore import Spectrum, hermitian_spectrum, unvectorize, vectorize
from .presets import (
    PRESETS,
    build_preset,
    compare_lambda_v,
    get_preset,
    list_presets,
    tripod_dephasing_conditions,
    tripod_gd,
)
