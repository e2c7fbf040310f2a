"""Reverse engineering of non-lossy adiabatic drives for non-Hermitian
two-level systems, with verification by direct scaled integration.

Layers, bottom up: schedules (the time-dependent controls), biortho
(eigenframe algebra for any N), design (the two-level synthesis core),
adiabaticity (phase/decoupling/propagator diagnostics), dynamics (the
scaled Schrodinger integrator) and cli (file-emitting front end).
"""

from .adiabaticity import (
    AdiabaticityReport,
    FrameTrace,
    PhaseTrace,
    PQPartition,
    adiabatic_phase,
    cumulative_quadrature,
    adiabaticity_report,
    auxiliary_residual,
    auxiliary_residual_trace,
    propagator_g,
    propagator_g_closed_form,
    propagator_max_on_subgrid,
    pq_partition,
    rotating_hamiltonian,
)
from .biortho import (
    BiorthogonalFrame,
    Spectrum,
    assemble_hamiltonian,
    check_biorthogonality,
    frame_from_matrix,
    project_mode,
)
from .design import (
    DEFAULT_GUARDS,
    FieldSample,
    SingularityGuards,
    TwoLevelDesign,
    design_trace,
    eigenframe_constant_lambda,
    eigenframe_two_level,
    eigenvalue_trace,
    field_components,
    frame_trace,
    hamiltonian_fn,
    hamiltonian_full_form,
    ideal_relative_populations,
    lambda_of_alpha,
    omega_factors,
    refined_phase_trace,
    synthesize_dissipative,
    synthesize_simple,
)
from .dynamics import (
    ComparisonMetrics,
    PopulationTrace,
    ScaledStateTrace,
    compare_real_ideal,
    crossing_times,
    ideal_population_trace,
    integrate_schrodinger,
    inversion_time,
    mode_tracking_error,
    relative_populations,
)
from .errors import (
    ConsistencyViolation,
    DegenerateSpectrum,
    DimensionMismatch,
    GridMismatch,
    GridTooCoarse,
    NhdriveError,
    NonPositiveWidth,
    OrderViolation,
    SingularFrame,
    StepSizeUnderflow,
    SynthesisSingularity,
    ZeroInitialProjection,
    ZeroInitialState,
)
from .schedules import (
    AlphaValue,
    GammaSpec,
    RhoThetaParams,
    eval_alpha,
    eval_gamma,
    eval_rho_theta,
    finite_diff_derivative,
)

__version__ = "0.1.0"
