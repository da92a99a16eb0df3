"""Schrodinger-equation integration and fidelity trajectories.

Fixed-step 4th-order Runge-Kutta on d|psi>/dt = -i H(t) |psi|, with the
step size tied to the fastest angular frequency the Hamiltonian builder
declares: default dt = (2 pi / omega_fastest)/64, and anything coarser than
(2 pi / omega_fastest)/50 is rejected outright.  Fixed stepping keeps
trajectories bit-reproducible, which the CSV regression harness relies on;
adaptive control would trade that away for speed nobody needs at these
dimensions.

Fidelity against the GHZ target is evaluated for both phase conventions at
every sample; the trajectory keeps the pointwise maximum and records which
convention won at the peak.  The produced phase depends on the sign of the
detuning and the elapsed drive rotation, so fixing one convention a priori
would report ~0 fidelity for a perfectly good GHZ state half the time.

Drive-strength sweeps fan out across a process pool (size from the
GHZFORGE_THREADS environment variable, else the CPU count); results are
ordered by multiplier index regardless of completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import GHZ_CONVENTIONS, ghz_target, mode_displacement_amplitude
from .errors import PreconditionError
from .model import (
    CoupledTlrCircuit,
    ResonatorDrive,
    SingleTlrCircuit,
    TimeDependentHamiltonian,
    coupled_effective_hamiltonian,
    coupled_full_simulation_hamiltonian,
    coupled_rotating_frame_hamiltonian,
    effective_hamiltonian,
    full_simulation_hamiltonian,
    interaction_picture_hamiltonian,
    lab_frame_hamiltonian,
    rotating_frame_hamiltonian,
)
from .operators import (
    HilbertSpace,
    displacement,
    embed,
    number_operator,
    partial_trace_modes,
)

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "FrameConsistencyReport",
    "ground_vacuum_state",
    "ghz_fidelity",
    "resolve_step",
    "evolve",
    "evolve_sampled",
    "run_single_resonator",
    "run_coupled_resonator",
    "sweep_drive_strength",
    "frame_consistency_report",
    "SINGLE_VARIANTS",
    "COUPLED_VARIANTS",
]

DEFAULT_STEP_DIVISOR = 64
MINIMUM_STEP_DIVISOR = 50

SINGLE_VARIANTS = ("full", "rotating", "intermediate", "effective")
COUPLED_VARIANTS = ("full", "rotating", "effective")

_SINGLE_BUILDERS = {
    "full": full_simulation_hamiltonian,
    "rotating": rotating_frame_hamiltonian,
    "intermediate": interaction_picture_hamiltonian,
    "effective": effective_hamiltonian,
}
_COUPLED_BUILDERS = {
    "full": coupled_full_simulation_hamiltonian,
    "rotating": coupled_rotating_frame_hamiltonian,
    "effective": coupled_effective_hamiltonian,
}


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    dt = None picks (2 pi / omega_fastest) / 64 from the Hamiltonian's
    declared fastest frequency.  renormalize_every = 0 disables in-flight
    renormalization: norm drift is a diagnostic we want to see, not hide.
    """

    dt: float | None = None
    renormalize_every: int = 0

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.renormalize_every < 0:
            raise ValueError("renormalize_every must be >= 0")


@dataclass
class Trajectory:
    """Sampled observables from one integration run."""

    times: np.ndarray
    fidelity: np.ndarray
    norm: np.ndarray
    mode_occupation: np.ndarray  # shape (n_samples, n_modes)
    label: str
    convention: str
    fidelity_by_convention: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def peak_fidelity(self) -> float:
        return float(np.max(self.fidelity))

    @property
    def peak_time(self) -> float:
        return float(self.times[int(np.argmax(self.fidelity))])

    @property
    def final_fidelity(self) -> float:
        return float(self.fidelity[-1])


def ground_vacuum_state(space: HilbertSpace) -> np.ndarray:
    """All qubits in the energy ground state, all modes in vacuum."""
    index = np.ravel_multi_index(
        (1,) * space.n_qubits + (0,) * space.n_modes, space.dims
    )
    psi = np.zeros(space.dim, dtype=complex)
    psi[index] = 1.0
    return psi


def ghz_fidelity(psi: np.ndarray, space: HilbertSpace, target: np.ndarray) -> float:
    """F = <target| Tr_modes |psi><psi| |target>, real in [0, 1]."""
    rho_q = partial_trace_modes(psi, space)
    return float(np.real(np.vdot(target, rho_q @ target)))


def resolve_step(hamiltonian: TimeDependentHamiltonian, config: IntegratorConfig | None) -> float:
    """Step size for this Hamiltonian, enforcing the fastest-frequency rule."""
    period = 2.0 * np.pi / hamiltonian.fastest_frequency
    if config is None or config.dt is None:
        return period / DEFAULT_STEP_DIVISOR
    limit = period / MINIMUM_STEP_DIVISOR
    if config.dt > limit:
        raise PreconditionError(
            f"dt = {config.dt:g} ns too coarse for fastest frequency "
            f"{hamiltonian.fastest_frequency:g} rad/ns (limit {limit:g} ns, "
            f"= period/{MINIMUM_STEP_DIVISOR})"
        )
    return config.dt


def _rhs(hamiltonian: TimeDependentHamiltonian, t: float, y: np.ndarray) -> np.ndarray:
    if hamiltonian.static is not None:
        out = hamiltonian.static @ y
    else:
        out = np.zeros_like(y)
    for (m, w), md in zip(hamiltonian.terms, hamiltonian._daggers):
        z = np.exp(1j * w * t)
        out += z * (m @ y) + np.conj(z) * (md @ y)
    return -1j * out


def evolve_sampled(
    hamiltonian: TimeDependentHamiltonian,
    psi0: np.ndarray,
    sample_times,
    config: IntegratorConfig | None = None,
) -> np.ndarray:
    """Integrate from t = 0 and return the state at each requested time.

    sample_times must be non-decreasing and non-negative; each is hit
    exactly (the step is shrunk uniformly inside each segment so sampling
    never perturbs the grid elsewhere).  Returns an array of shape
    (len(sample_times), dim).
    """
    samples = np.asarray(sample_times, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("sample_times must be a non-empty 1-D sequence")
    if samples[0] < 0 or np.any(np.diff(samples) < 0):
        raise ValueError("sample_times must be non-decreasing and start at t >= 0")
    dt = resolve_step(hamiltonian, config)
    renorm = config.renormalize_every if config is not None else 0

    y = np.asarray(psi0, dtype=complex).copy()
    if y.shape != (hamiltonian.space.dim,):
        raise ValueError("initial state does not match the Hamiltonian's space")
    out = np.empty((samples.size, y.size), dtype=complex)
    t_now = 0.0
    steps_done = 0
    for idx, t_target in enumerate(samples):
        span = t_target - t_now
        if span > 1e-15:
            n_steps = max(1, int(np.ceil(span / dt - 1e-12)))
            h = span / n_steps
            for i in range(n_steps):
                t = t_now + i * h
                k1 = _rhs(hamiltonian, t, y)
                k2 = _rhs(hamiltonian, t + 0.5 * h, y + (0.5 * h) * k1)
                k3 = _rhs(hamiltonian, t + 0.5 * h, y + (0.5 * h) * k2)
                k4 = _rhs(hamiltonian, t + h, y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                steps_done += 1
                if renorm and steps_done % renorm == 0:
                    y /= np.linalg.norm(y)
            t_now = t_target
        out[idx] = y
    return out


def evolve(
    hamiltonian: TimeDependentHamiltonian,
    psi0: np.ndarray,
    t_final: float,
    config: IntegratorConfig | None = None,
) -> np.ndarray:
    """State at t_final, integrating from t = 0."""
    return evolve_sampled(hamiltonian, psi0, [t_final], config)[0]


def _observe(
    states: np.ndarray,
    times: np.ndarray,
    space: HilbertSpace,
    label: str,
    convention: str,
) -> Trajectory:
    """Assemble a Trajectory from sampled states."""
    n_qubits = space.n_qubits
    targets = {c: ghz_target(n_qubits, c) for c in GHZ_CONVENTIONS}
    number_ops = [
        embed(number_operator(space.mode_levels[m]), space.mode_factor(m), space)
        for m in range(space.n_modes)
    ]
    norms = np.linalg.norm(states, axis=1)
    occupations = np.empty((states.shape[0], space.n_modes))
    fids = {c: np.empty(states.shape[0]) for c in GHZ_CONVENTIONS}
    for i, psi in enumerate(states):
        for m, n_op in enumerate(number_ops):
            occupations[i, m] = np.real(np.vdot(psi, n_op @ psi))
        rho_q = partial_trace_modes(psi, space)
        for c, tgt in targets.items():
            fids[c][i] = np.real(np.vdot(tgt, rho_q @ tgt))
    if convention == "auto":
        stacked = np.vstack([fids[c] for c in GHZ_CONVENTIONS])
        fidelity = stacked.max(axis=0)
        peak_idx = int(np.argmax(fidelity))
        winner = GHZ_CONVENTIONS[int(np.argmax(stacked[:, peak_idx]))]
    else:
        if convention not in GHZ_CONVENTIONS:
            raise ValueError(f"unknown GHZ phase convention {convention!r}")
        fidelity = fids[convention]
        winner = convention
    return Trajectory(
        times=times,
        fidelity=fidelity,
        norm=norms,
        mode_occupation=occupations,
        label=label,
        convention=winner,
        fidelity_by_convention=fids,
    )


def _sample_grid(t_final: float, sample_every: float) -> np.ndarray:
    if t_final <= 0 or sample_every <= 0:
        raise ValueError("t_final and sample_every must be positive")
    n = int(np.floor(t_final / sample_every + 1e-9))
    times = np.arange(n + 1) * sample_every
    if times[-1] < t_final - 1e-9 * max(1.0, t_final):
        times = np.append(times, t_final)
    else:
        times[-1] = t_final
    return times


def run_single_resonator(
    circuit: SingleTlrCircuit,
    variant: str,
    t_final: float,
    sample_every: float,
    fock_cutoff: int = 10,
    config: IntegratorConfig | None = None,
    convention: str = "auto",
) -> Trajectory:
    """Fidelity trajectory for the one-resonator circuit.

    variant picks the Hamiltonian: 'full' (counter-rotating terms kept),
    'rotating' (static RWA form), 'intermediate' (interaction picture with
    the drive-oscillating error terms), 'effective' (strong-driving limit).
    """
    try:
        builder = _SINGLE_BUILDERS[variant]
    except KeyError:
        raise ValueError(
            f"unknown variant {variant!r}; expected one of {SINGLE_VARIANTS}"
        ) from None
    space = HilbertSpace(n_qubits=circuit.n_qubits, mode_levels=(fock_cutoff,))
    hamiltonian = builder(circuit, space)
    times = _sample_grid(t_final, sample_every)
    states = evolve_sampled(hamiltonian, ground_vacuum_state(space), times, config)
    return _observe(states, times, space, hamiltonian.label, convention)


def run_coupled_resonator(
    circuit: CoupledTlrCircuit,
    variant: str,
    t_final: float,
    sample_every: float,
    fock_cutoffs: tuple[int, int] = (8, 8),
    config: IntegratorConfig | None = None,
    convention: str = "auto",
) -> Trajectory:
    """Fidelity trajectory for the two-resonator circuit (normal-mode basis)."""
    try:
        builder = _COUPLED_BUILDERS[variant]
    except KeyError:
        raise ValueError(
            f"unknown variant {variant!r}; expected one of {COUPLED_VARIANTS}"
        ) from None
    space = HilbertSpace(n_qubits=circuit.n_qubits, mode_levels=tuple(fock_cutoffs))
    hamiltonian = builder(circuit, space)
    times = _sample_grid(t_final, sample_every)
    states = evolve_sampled(hamiltonian, ground_vacuum_state(space), times, config)
    return _observe(states, times, space, hamiltonian.label, convention)


# ---------------------------------------------------------------------------
# drive-strength sweep
# ---------------------------------------------------------------------------


def _sweep_point(args):
    (circuit, variant, window_times, fock, config, convention) = args
    if isinstance(circuit, SingleTlrCircuit):
        space = HilbertSpace(n_qubits=circuit.n_qubits, mode_levels=(fock,))
        hamiltonian = _SINGLE_BUILDERS[variant](circuit, space)
    else:
        space = HilbertSpace(n_qubits=circuit.n_qubits, mode_levels=tuple(fock))
        hamiltonian = _COUPLED_BUILDERS[variant](circuit, space)
    states = evolve_sampled(hamiltonian, ground_vacuum_state(space), window_times, config)
    traj = _observe(states, window_times, space, hamiltonian.label, convention)
    traj.label = f"{traj.label}:rabi={circuit.rabi:.9g}"
    return traj


def worker_count(requested: int | None = None, n_tasks: int | None = None) -> int:
    """Process-pool size: explicit argument, else GHZFORGE_THREADS, else CPU count."""
    if requested is None:
        env = os.environ.get("GHZFORGE_THREADS", "").strip()
        if env:
            try:
                requested = int(env)
            except ValueError:
                raise ValueError(
                    f"GHZFORGE_THREADS must be a positive integer, got {env!r}"
                ) from None
        else:
            requested = os.cpu_count() or 1
    if requested < 1:
        raise ValueError("worker count must be >= 1")
    if n_tasks is not None:
        requested = min(requested, n_tasks)
    return requested


def sweep_drive_strength(
    circuit,
    variant: str,
    multipliers,
    window: tuple[float, float],
    window_sample_every: float,
    fock=10,
    config: IntegratorConfig | None = None,
    convention: str = "auto",
    workers: int | None = None,
) -> list[Trajectory]:
    """One trajectory per Rabi amplitude, sampled densely inside a time window.

    The drive amplitude at each point is multiplier x |delta| for the
    single-resonator circuit and multiplier x |J| for the coupled one.
    Each run still starts at t = 0; only the sampling is restricted to the
    window, dense enough to expose the fast fidelity oscillation at the
    drive frequency.  Results are ordered like the multipliers regardless
    of worker completion order.
    """
    multipliers = list(multipliers)
    if not multipliers:
        raise ValueError("multiplier list must not be empty")
    lo, hi = window
    if not 0 <= lo < hi:
        raise ValueError("window must satisfy 0 <= start < end")
    if isinstance(circuit, SingleTlrCircuit):
        base = abs(circuit.detuning)
    elif isinstance(circuit, CoupledTlrCircuit):
        base = abs(circuit.coupler_rate)
    else:
        raise TypeError("circuit must be a SingleTlrCircuit or CoupledTlrCircuit")
    n_window = int(np.floor((hi - lo) / window_sample_every + 1e-9))
    window_times = lo + np.arange(n_window + 1) * window_sample_every
    tasks = [
        (replace(circuit, rabi=float(mult) * base), variant, window_times, fock, config, convention)
        for mult in multipliers
    ]
    n_workers = worker_count(workers, len(tasks))
    if n_workers == 1:
        return [_sweep_point(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_sweep_point, tasks))


# ---------------------------------------------------------------------------
# laboratory-frame consistency diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameConsistencyReport:
    """Quantified agreement between the lab-frame and rotating-frame pictures.

    A lab-frame run with the resonator tone is displaced by D(-beta(t)),
    mapped to the qubit energy eigenbasis, and rotated at the drive
    frequency; the result is compared with a direct run of the
    counter-rotating-terms Hamiltonian from the same initial state.  The
    two agree up to (i) Fock truncation of the displaced coherent state and
    (ii) the counter-rotating coupling phase, so the overlap quantifies the
    frame bookkeeping rather than asserting exactness.
    """

    overlap: float
    norm_difference: float
    displacement_magnitude: float
    final_time: float
    rabi: float
    fock_cutoff: int


def frame_consistency_report(
    circuit: SingleTlrCircuit,
    drive: ResonatorDrive,
    fock_cutoff: int = 24,
    t_final: float | None = None,
    config: IntegratorConfig | None = None,
) -> FrameConsistencyReport:
    """Run the lab-frame/rotating-frame comparison for a one-qubit circuit.

    The circuit should carry modest parameters: the lab mode sits in a
    coherent state of amplitude |nu/delta|, so the Fock cutoff must cover
    |nu/delta|^2 photons with room to spare, and the lab integration must
    resolve phases up to omega_r x n_max.
    """
    if circuit.n_qubits != 1:
        raise ValueError("the frame-consistency diagnostic is defined for one qubit")
    delta = circuit.detuning
    beta0 = -drive.amplitude / delta
    if abs(beta0) ** 2 > fock_cutoff / 4:
        raise ValueError(
            f"displacement |beta|^2 = {abs(beta0)**2:.2f} too large for "
            f"fock_cutoff = {fock_cutoff}"
        )
    if t_final is None:
        t_final = 2.0 * np.pi / abs(delta)
    space = HilbertSpace(n_qubits=1, mode_levels=(fock_cutoff,))

    # lab-frame leg: displaced ground state, persistent-current basis
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    ground_eigen = ground_vacuum_state(space)
    qubit_map = np.kron(hadamard, np.eye(fock_cutoff))
    psi_pc = qubit_map @ ground_eigen
    d_start = embed(displacement(beta0, fock_cutoff), 1, space)
    psi_lab0 = d_start @ psi_pc
    h_lab = lab_frame_hamiltonian(circuit, drive, space)
    psi_lab = evolve(h_lab, psi_lab0, t_final, config)

    beta_t = beta0 * np.exp(-1j * circuit.omega_d * t_final)
    d_back = embed(displacement(-beta_t, fock_cutoff), 1, space)
    psi_disp = qubit_map @ (d_back @ psi_lab)  # back to the eigenbasis
    # undo the omega_d rotation of mode and qubit
    number_full = embed(number_operator(fock_cutoff), 1, space)
    sz_full = embed(np.diag([1.0, -1.0]), 0, space)
    generator = circuit.omega_d * (number_full + 0.5 * sz_full)
    phases = np.exp(1j * np.diag(generator) * t_final)
    psi_rot = phases * psi_disp

    # rotating-frame leg with counter-rotating terms kept
    from .model import qubit_drive_from_resonator_drive

    circuit_driven, _mapping = qubit_drive_from_resonator_drive(circuit, drive)
    h_full = full_simulation_hamiltonian(circuit_driven, space)
    psi_full = evolve(h_full, ground_eigen, t_final, config)

    overlap = float(abs(np.vdot(psi_full, psi_rot)) ** 2)
    phase = np.vdot(psi_rot, psi_full)
    if abs(phase) > 0:
        psi_aligned = psi_rot * (phase / abs(phase))
    else:
        psi_aligned = psi_rot
    norm_difference = float(np.linalg.norm(psi_full - psi_aligned))
    return FrameConsistencyReport(
        overlap=overlap,
        norm_difference=norm_difference,
        displacement_magnitude=float(abs(beta0)),
        final_time=float(t_final),
        rabi=float(circuit_driven.rabi),
        fock_cutoff=fock_cutoff,
    )
