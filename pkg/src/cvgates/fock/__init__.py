"""Truncated Fock-space backend."""

from .compare import (
    BraidingResult,
    CommutatorResult,
    PhaseComparison,
    braiding_check,
    compare_blocks,
    equiv_up_to_phase,
    guarded_unitarity_defect,
    hermiticity_defect,
    matrix_commutator_check,
)
from .kernels import apply_to_vector, circuit_columns, evolve, gate_unitary, guarded_block, guarded_shear_block
from .measure import MeasurementOutcome, apply, expectation, fidelity, measure_qubit, variance
from .space import (
    BudgetError,
    FockOperator,
    FockSpace,
    FockStateVec,
    TruncationError,
    check_budget,
    dimension_budget,
    expm_unitary,
    guard_mask,
    ladder_ops,
    project_subspace,
)
from .states import (
    analytic_cat,
    cat_amplitudes,
    coherent_amplitudes,
    coherent_state,
    fock_state,
    gaussian_amplitudes,
    hermite_functions,
    momentum_approx,
    momentum_approx_amplitudes,
    position_approx,
    position_approx_amplitudes,
    product_state,
    squeezed_vacuum,
    squeezed_vacuum_amplitudes,
)

__all__ = [
    "BraidingResult",
    "BudgetError",
    "CommutatorResult",
    "FockOperator",
    "FockSpace",
    "FockStateVec",
    "MeasurementOutcome",
    "PhaseComparison",
    "TruncationError",
    "analytic_cat",
    "apply",
    "apply_to_vector",
    "braiding_check",
    "cat_amplitudes",
    "check_budget",
    "circuit_columns",
    "coherent_amplitudes",
    "coherent_state",
    "compare_blocks",
    "dimension_budget",
    "equiv_up_to_phase",
    "evolve",
    "expectation",
    "expm_unitary",
    "fidelity",
    "fock_state",
    "gate_unitary",
    "gaussian_amplitudes",
    "guard_mask",
    "guarded_block",
    "guarded_shear_block",
    "guarded_unitarity_defect",
    "hermite_functions",
    "hermiticity_defect",
    "ladder_ops",
    "matrix_commutator_check",
    "measure_qubit",
    "momentum_approx",
    "momentum_approx_amplitudes",
    "position_approx",
    "position_approx_amplitudes",
    "product_state",
    "project_subspace",
    "squeezed_vacuum",
    "squeezed_vacuum_amplitudes",
    "variance",
]
