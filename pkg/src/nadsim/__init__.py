"""Simulation toolkit for a driven, damped two-level quantum system.

Builds the nonadiabatic dressed states of a pulsed near-resonant field in
closed form, checks the generalized (all-order) adiabaticity conditions,
verifies the analytic states against an independent Schrodinger-equation
integrator, and models the two-step transition loop, field-off collapse,
and pointer readout as stochastic processes.
"""

from .adiabaticity import (
    AdiabaticityReport,
    born_fock_condition,
    check,
    condition_ratio,
    frequency_form_check,
    nonadiabatic_function,
    ordinary_condition,
)
from .dynamics import (
    CoherenceDiagnostics,
    PopulationSeries,
    StateVector,
    Trajectory,
    coherence_diagnostics,
    fidelity_to_ground,
    integrate,
    population_series,
    project_bare,
    project_nads,
    project_nads_series,
)
from .errors import DegeneratePointError, EvaluationError, ScenarioError
from .field import (
    CONSTANT_WAVE,
    FLAT_TOP,
    GAUSSIAN,
    SECH,
    SHAPES,
    FieldSample,
    PulseSpec,
    envelope,
    envelope_derivative,
    field_value,
    log_derivative,
    phase,
    phase_derivative,
    total_phase,
)
from .measurement import (
    EXCITED,
    GROUND,
    EnsembleStats,
    LoopState,
    MCConfig,
    Outcome,
    collapse_on_field_off,
    ensemble,
    entangled_coefficients,
    expected_excited_occupation,
    expected_population_series,
    nonadiabatic_rate,
    run_trajectory,
    step_loop,
)
from .nads import (
    DressedComponents,
    DressedSeries,
    NadsQuantities,
    NadsSeries,
    SystemSpec,
    construct_excited_nads,
    construct_ground_nads,
    construct_nads,
    detuning,
    dressed_frequencies,
    lambdas,
    mixing,
    nonadiabatic_detuning,
    nonadiabatic_rabi,
    quantities,
    quantities_series,
    reduce_to_ads,
)
from .scenario import (
    BUILTIN_SCENARIOS,
    Scenario,
    load_scenario,
    parse_scenario,
    render_scenario,
)

__version__ = "0.1.0"
