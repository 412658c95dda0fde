"""Two cavity-coupled atoms driven by white noise: dynamics, entanglement, CHSH."""

from .dynamics import (
    DegenerateSteadyStateError,
    ModeError,
    PropagationError,
    StateError,
    Trajectory,
    analytic_state_symmetric,
    analytic_steady_asymmetric,
    numeric_steady,
    propagate,
    trajectory,
    validate_density,
)
from .measures import (
    MeasureReport,
    NotXStateError,
    ThresholdReport,
    bell_max,
    bell_max_xform,
    concurrence,
    concurrence_x,
    correlation_matrix,
    measure_state,
    nt_threshold,
    omega_threshold,
    threshold_report,
    verstraete_bounds,
)
from .model import (
    EffectiveParams,
    FullModelParams,
    Liouvillian,
    atoms_rotating_frame,
    atoms_with_vacuum,
    build_effective_liouvillian,
    build_full_liouvillian,
    dissipator,
    effective_hamiltonian,
    full_hamiltonian,
    partial_trace_cavity,
    product_state,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateSteadyStateError",
    "EffectiveParams",
    "FullModelParams",
    "Liouvillian",
    "MeasureReport",
    "ModeError",
    "NotXStateError",
    "PropagationError",
    "StateError",
    "ThresholdReport",
    "Trajectory",
    "analytic_state_symmetric",
    "analytic_steady_asymmetric",
    "atoms_rotating_frame",
    "atoms_with_vacuum",
    "bell_max",
    "bell_max_xform",
    "build_effective_liouvillian",
    "build_full_liouvillian",
    "concurrence",
    "concurrence_x",
    "correlation_matrix",
    "dissipator",
    "effective_hamiltonian",
    "full_hamiltonian",
    "measure_state",
    "nt_threshold",
    "numeric_steady",
    "omega_threshold",
    "partial_trace_cavity",
    "product_state",
    "propagate",
    "threshold_report",
    "trajectory",
    "validate_density",
    "verstraete_bounds",
]
