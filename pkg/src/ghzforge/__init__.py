"""One-step GHZ-state generation for flux qubits in driven TLRs.

The package simulates a geometric-phase entangling gate: strongly driven
flux qubits couple off-resonantly to one transmission-line resonator (or
to the normal modes of two coupled ones), the mode traces a closed loop
in phase space, and at the closure time the qubits disentangle from the
field carrying pairwise sigma_x sigma_x phases that turn a product state
into a GHZ state.

Layers: `operators` (truncated-space linear algebra), `model` (circuit
records and Hamiltonian builders), `analytic` (closed forms: displacement
loops, pair phases, phase-condition solvers, SQUID coupler), `dynamics`
(fixed-step integration, trajectories, sweeps), `scenario` (JSON run
descriptions), `cli` / `selftest` (command line).
"""

from .analytic import (
    GHZ_CONVENTIONS,
    CoupledPhaseSolution,
    SinglePhaseSolution,
    SquidCoupler,
    accumulated_pair_phase,
    coupled_decoupling_time,
    coupled_pair_phase_matrix,
    decoupling_time,
    decoupling_unitary,
    effective_mutual_inductance,
    estimated_drive_fidelity,
    ghz_target,
    mode_displacement_amplitude,
    pair_phase_matrix,
    resonator_coupling_rate,
    solve_coupled_phase_condition,
    solve_single_phase_condition,
)
from .dynamics import (
    COUPLED_VARIANTS,
    SINGLE_VARIANTS,
    FrameConsistencyReport,
    IntegratorConfig,
    Trajectory,
    frame_consistency_report,
    ground_vacuum_state,
    run_coupled_resonator,
    run_single_resonator,
    sweep_drive_strength,
)
from .errors import (
    ApproximationWarning,
    GhzforgeError,
    PreconditionError,
    ScenarioFormatError,
    UnsolvableConditionError,
)
from .model import (
    CoupledTlrCircuit,
    DriveMappingReport,
    QubitSpec,
    ResonatorDrive,
    SingleTlrCircuit,
    TimeDependentHamiltonian,
    coupled_effective_hamiltonian,
    coupled_full_simulation_hamiltonian,
    coupled_rotating_frame_hamiltonian,
    coupling_strength,
    effective_hamiltonian,
    full_simulation_hamiltonian,
    interaction_picture_hamiltonian,
    lab_frame_hamiltonian,
    qubit_drive_from_resonator_drive,
    rotating_frame_hamiltonian,
)
from .operators import HilbertSpace
from .scenario import (
    LoadedScenario,
    bundled_scenario_names,
    bundled_scenario_path,
    load_scenario,
    run_scenario,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ApproximationWarning",
    "GhzforgeError",
    "PreconditionError",
    "ScenarioFormatError",
    "UnsolvableConditionError",
    "HilbertSpace",
    "QubitSpec",
    "SingleTlrCircuit",
    "CoupledTlrCircuit",
    "ResonatorDrive",
    "DriveMappingReport",
    "TimeDependentHamiltonian",
    "lab_frame_hamiltonian",
    "rotating_frame_hamiltonian",
    "interaction_picture_hamiltonian",
    "effective_hamiltonian",
    "full_simulation_hamiltonian",
    "coupled_rotating_frame_hamiltonian",
    "coupled_effective_hamiltonian",
    "coupled_full_simulation_hamiltonian",
    "qubit_drive_from_resonator_drive",
    "coupling_strength",
    "GHZ_CONVENTIONS",
    "ghz_target",
    "mode_displacement_amplitude",
    "accumulated_pair_phase",
    "decoupling_time",
    "coupled_decoupling_time",
    "pair_phase_matrix",
    "coupled_pair_phase_matrix",
    "decoupling_unitary",
    "estimated_drive_fidelity",
    "SquidCoupler",
    "effective_mutual_inductance",
    "resonator_coupling_rate",
    "SinglePhaseSolution",
    "CoupledPhaseSolution",
    "solve_single_phase_condition",
    "solve_coupled_phase_condition",
    "SINGLE_VARIANTS",
    "COUPLED_VARIANTS",
    "IntegratorConfig",
    "Trajectory",
    "ground_vacuum_state",
    "run_single_resonator",
    "run_coupled_resonator",
    "sweep_drive_strength",
    "FrameConsistencyReport",
    "frame_consistency_report",
    "LoadedScenario",
    "validate_scenario",
    "load_scenario",
    "run_scenario",
    "bundled_scenario_names",
    "bundled_scenario_path",
]
