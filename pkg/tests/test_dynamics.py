"""Integrator and trajectory machinery against independent oracles."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from ghzforge.analytic import (
    decoupling_time,
    decoupling_unitary,
    ghz_target,
    mode_displacement_amplitude,
    pair_phase_matrix,
)
from ghzforge.dynamics import (
    IntegratorConfig,
    Trajectory,
    evolve,
    evolve_sampled,
    frame_consistency_report,
    ghz_fidelity,
    ground_vacuum_state,
    resolve_step,
    run_coupled_resonator,
    run_single_resonator,
    sweep_drive_strength,
    worker_count,
)
from ghzforge.errors import PreconditionError
from ghzforge.model import (
    QubitSpec,
    ResonatorDrive,
    SingleTlrCircuit,
    TimeDependentHamiltonian,
    full_simulation_hamiltonian,
    rotating_frame_hamiltonian,
)
from ghzforge.operators import HilbertSpace, number_operator, pauli

TWO_PI = 2.0 * np.pi


def reference_single(rabi_mult=20.0, n_qubits=2, detuning_sign=-1.0):
    omega_d = TWO_PI * 10.1
    qubits = tuple(
        QubitSpec(gap=omega_d, coupling=TWO_PI * 0.05) for _ in range(n_qubits)
    )
    return SingleTlrCircuit(
        omega_r=omega_d + detuning_sign * TWO_PI * 0.1,
        qubits=qubits,
        omega_d=omega_d,
        rabi=rabi_mult * TWO_PI * 0.1,
    )


# ---------------------------------------------------------------------------
# integrator against closed-form and independent solvers
# ---------------------------------------------------------------------------


def test_static_diagonal_phases_exact():
    space = HilbertSpace(n_qubits=0, mode_levels=(5,))
    h = TimeDependentHamiltonian(
        space, 0.7 * number_operator(5), (), 0.7, "diag"
    )
    psi0 = np.ones(5, dtype=complex) / np.sqrt(5.0)
    t = 3.3
    psi = evolve(h, psi0, t, IntegratorConfig(dt=5e-4))
    expected = np.exp(-1j * 0.7 * np.arange(5) * t) * psi0
    assert np.max(np.abs(psi - expected)) < 1e-11


def test_rabi_flop_oracle():
    """Decoupled qubit under the transverse drive: textbook Rabi rotation."""
    circuit = SingleTlrCircuit(
        omega_r=TWO_PI * 10.0,
        qubits=(QubitSpec(gap=TWO_PI * 10.1, coupling=0.0),),
        omega_d=TWO_PI * 10.1,
        rabi=TWO_PI * 0.25,
    )
    space = HilbertSpace(n_qubits=1, mode_levels=(2,))
    h = rotating_frame_hamiltonian(circuit, space)
    psi0 = ground_vacuum_state(space)
    for t in (0.4, 1.0, 2.7):
        psi = evolve(h, psi0, t, IntegratorConfig(dt=5e-4))
        theta = 0.5 * circuit.rabi * t
        # ground component (qubit index 1, vacuum) and excited (index 0)
        assert psi[2] == pytest.approx(np.cos(theta), abs=1e-10)
        assert psi[0] == pytest.approx(-1j * np.sin(theta), abs=1e-10)


def test_fixed_step_matches_adaptive_dop853():
    """Full time-dependent Hamiltonian vs an independent adaptive solver."""
    circuit = reference_single(n_qubits=1)
    space = HilbertSpace(n_qubits=1, mode_levels=(6,))
    h = full_simulation_hamiltonian(circuit, space)
    psi0 = ground_vacuum_state(space)
    t_final = 2.0
    psi_rk4 = evolve(h, psi0, t_final, IntegratorConfig(dt=1e-4))

    def rhs(t, y):
        z = y[: space.dim] + 1j * y[space.dim :]
        dz = -1j * (h(t) @ z)
        return np.concatenate([dz.real, dz.imag])

    y0 = np.concatenate([psi0.real, psi0.imag])
    sol = solve_ivp(
        rhs, (0.0, t_final), y0, method="DOP853", rtol=1e-11, atol=1e-12
    )
    psi_ref = sol.y[: space.dim, -1] + 1j * sol.y[space.dim :, -1]
    assert np.max(np.abs(psi_rk4 - psi_ref)) < 1e-7


def test_mode_occupation_follows_conditional_displacement():
    """Effective variant: <n>(t) = sum_S P(S) |S B(t)|^2 over the sigma_x
    decomposition of the initial register; 2 |B|^2 for two ground qubits."""
    circuit = reference_single()
    t_half = 0.5 * decoupling_time(circuit.detuning, 1)
    traj = run_single_resonator(
        circuit, "effective", decoupling_time(circuit.detuning, 1), t_half / 2.0,
        fock_cutoff=10,
    )
    g = circuit.qubits[0].coupling
    for i, t in enumerate(traj.times):
        expected = 2.0 * abs(
            mode_displacement_amplitude(t, g, circuit.detuning)
        ) ** 2
        assert traj.mode_occupation[i, 0] == pytest.approx(expected, abs=2e-4)
    # the loop closes: the mode is back near vacuum at the gate time
    assert traj.mode_occupation[-1, 0] < 1e-4


def test_effective_run_matches_closure_unitary():
    """State-level agreement with the closed-form propagator at T_1."""
    circuit = reference_single()
    space = HilbertSpace(n_qubits=2, mode_levels=(10,))
    from ghzforge.model import effective_hamiltonian

    t_gate = decoupling_time(circuit.detuning, 1)
    psi = evolve(
        effective_hamiltonian(circuit, space), ground_vacuum_state(space), t_gate
    )
    u = decoupling_unitary(
        pair_phase_matrix(circuit.couplings, circuit.detuning, 1)
    )
    qubit_state = u @ np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)
    closure = np.kron(qubit_state, np.eye(10)[0])
    fidelity = abs(np.vdot(closure, psi)) ** 2
    assert fidelity > 0.9999


# ---------------------------------------------------------------------------
# sampling and step-size rules
# ---------------------------------------------------------------------------


def test_evolve_sampled_validates_input():
    space = HilbertSpace(n_qubits=1)
    h = TimeDependentHamiltonian(space, pauli("z"), (), 1.0, "toy")
    psi0 = np.array([1.0, 0.0], dtype=complex)
    with pytest.raises(ValueError):
        evolve_sampled(h, psi0, [])
    with pytest.raises(ValueError):
        evolve_sampled(h, psi0, [1.0, 0.5])
    with pytest.raises(ValueError):
        evolve_sampled(h, psi0, [-0.1, 0.5])
    with pytest.raises(ValueError):
        evolve_sampled(h, np.array([1.0, 0.0, 0.0], dtype=complex), [1.0])


def test_evolve_sampled_hits_times_exactly():
    space = HilbertSpace(n_qubits=0, mode_levels=(4,))
    h = TimeDependentHamiltonian(space, 1.3 * number_operator(4), (), 1.3, "diag")
    psi0 = np.ones(4, dtype=complex) / 2.0
    times = [0.0, 0.333, 0.9999, 2.5]
    states = evolve_sampled(h, psi0, times, IntegratorConfig(dt=1e-3))
    for row, t in zip(states, times):
        expected = np.exp(-1j * 1.3 * np.arange(4) * t) * psi0
        assert np.max(np.abs(row - expected)) < 1e-10
    # t = 0 row is the initial state, bit for bit
    assert np.array_equal(states[0], psi0)


def test_renormalization_pins_the_norm():
    circuit = reference_single()
    space = HilbertSpace(n_qubits=2, mode_levels=(6,))
    h = full_simulation_hamiltonian(circuit, space)
    psi = evolve(
        h, ground_vacuum_state(space), 1.0, IntegratorConfig(dt=5e-4, renormalize_every=1)
    )
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-14


def test_resolve_step_rules():
    space = HilbertSpace(n_qubits=1)
    h = TimeDependentHamiltonian(space, pauli("x"), (), TWO_PI, "toy")
    # default: a 64th of the fastest period (here: period = 1)
    assert resolve_step(h, None) == pytest.approx(1.0 / 64.0)
    assert resolve_step(h, IntegratorConfig()) == pytest.approx(1.0 / 64.0)
    # explicit finer step accepted verbatim
    assert resolve_step(h, IntegratorConfig(dt=1e-3)) == 1e-3
    # coarser than a 50th of the period: refused, not silently clamped
    with pytest.raises(PreconditionError, match="too coarse"):
        resolve_step(h, IntegratorConfig(dt=0.5))
    with pytest.raises(ValueError):
        IntegratorConfig(dt=-1.0)


def test_trajectory_sample_grid_ends_at_t_final():
    circuit = reference_single()
    traj = run_single_resonator(circuit, "effective", 10.0, 0.3, fock_cutoff=6)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == 10.0
    assert np.all(np.diff(traj.times) > 0)


def test_repeat_runs_are_bit_identical():
    circuit = reference_single()
    a = run_single_resonator(circuit, "rotating", 2.0, 0.1, fock_cutoff=6)
    b = run_single_resonator(circuit, "rotating", 2.0, 0.1, fock_cutoff=6)
    assert np.array_equal(a.fidelity, b.fidelity)
    assert np.array_equal(a.norm, b.norm)
    assert np.array_equal(a.mode_occupation, b.mode_occupation)


# ---------------------------------------------------------------------------
# trajectory bookkeeping
# ---------------------------------------------------------------------------


def test_run_rejects_unknown_variant():
    circuit = reference_single()
    with pytest.raises(ValueError, match="variant"):
        run_single_resonator(circuit, "exact", 1.0, 0.5)
    from ghzforge.model import CoupledTlrCircuit

    j = TWO_PI * 0.04
    coupled = CoupledTlrCircuit(
        omega_a=TWO_PI * 10.0,
        omega_b=TWO_PI * 10.0,
        qubits=(
            QubitSpec(gap=TWO_PI * 10.0 + 3 * j, coupling=np.sqrt(2) * j, resonator="A"),
            QubitSpec(gap=TWO_PI * 10.0 + 3 * j, coupling=np.sqrt(2) * j, resonator="B"),
        ),
        coupler_rate=j,
        omega_d=TWO_PI * 10.0 + 3 * j,
        rabi=42 * j,
    )
    with pytest.raises(ValueError, match="variant"):
        run_coupled_resonator(coupled, "intermediate", 1.0, 0.5)


def test_auto_convention_tracks_detuning_sign():
    for sign, expected in ((-1.0, "i_power"), (+1.0, "plus_i")):
        circuit = reference_single(detuning_sign=sign)
        t_gate = decoupling_time(circuit.detuning, 1)
        traj = run_single_resonator(circuit, "effective", t_gate, 1.0, fock_cutoff=8)
        assert traj.convention == expected
        assert traj.final_fidelity > 0.999
        assert set(traj.fidelity_by_convention) == {"i_power", "plus_i"}
    # a pinned convention is honored even when it is the losing one
    circuit = reference_single()
    t_gate = decoupling_time(circuit.detuning, 1)
    pinned = run_single_resonator(
        circuit, "effective", t_gate, 1.0, fock_cutoff=8, convention="plus_i"
    )
    assert pinned.convention == "plus_i"
    assert pinned.final_fidelity < 0.5


def test_trajectory_peak_properties():
    traj = Trajectory(
        times=np.array([0.0, 1.0, 2.0]),
        fidelity=np.array([0.2, 0.9, 0.4]),
        norm=np.ones(3),
        mode_occupation=np.zeros((3, 1)),
        label="toy",
        convention="i_power",
    )
    assert traj.peak_fidelity == 0.9
    assert traj.peak_time == 1.0
    assert traj.final_fidelity == 0.4


def test_ghz_fidelity_of_product_state():
    space = HilbertSpace(n_qubits=2, mode_levels=(3,))
    psi = ground_vacuum_state(space)
    target = ghz_target(2, "i_power")
    assert ghz_fidelity(psi, space, target) == pytest.approx(0.5, abs=1e-14)


# ---------------------------------------------------------------------------
# drive-strength sweep and the worker pool
# ---------------------------------------------------------------------------


def test_sweep_orders_results_and_restricts_window():
    circuit = reference_single()
    mults = [10.0, 20.0]
    out = sweep_drive_strength(
        circuit, "effective", mults, window=(9.5, 10.0), window_sample_every=0.1,
        fock=6, workers=1,
    )
    assert len(out) == 2
    for traj, mult in zip(out, mults):
        assert f"rabi={mult * TWO_PI * 0.1:.9g}" in traj.label
        assert traj.times[0] == pytest.approx(9.5)
        assert traj.times[-1] == pytest.approx(10.0)


def test_sweep_workers_agree_with_serial():
    circuit = reference_single()
    mults = [5.0, 20.0]
    kw = dict(
        variant="effective", multipliers=mults, window=(9.0, 10.0),
        window_sample_every=0.25, fock=6,
    )
    serial = sweep_drive_strength(circuit, workers=1, **kw)
    pooled = sweep_drive_strength(circuit, workers=2, **kw)
    for a, b in zip(serial, pooled):
        assert a.label == b.label
        assert np.array_equal(a.fidelity, b.fidelity)


def test_sweep_validates_input():
    circuit = reference_single()
    with pytest.raises(ValueError):
        sweep_drive_strength(circuit, "effective", [], (9.0, 10.0), 0.1)
    with pytest.raises(ValueError):
        sweep_drive_strength(circuit, "effective", [5.0], (10.0, 9.0), 0.1)
    with pytest.raises(TypeError):
        sweep_drive_strength("circuit", "effective", [5.0], (9.0, 10.0), 0.1)


def test_worker_count_rules(monkeypatch):
    monkeypatch.delenv("GHZFORGE_THREADS", raising=False)
    assert worker_count(3) == 3
    assert worker_count(8, n_tasks=2) == 2
    monkeypatch.setenv("GHZFORGE_THREADS", "5")
    assert worker_count() == 5
    assert worker_count(n_tasks=3) == 3
    # explicit argument beats the environment
    assert worker_count(2) == 2
    monkeypatch.setenv("GHZFORGE_THREADS", "zero")
    with pytest.raises(ValueError, match="GHZFORGE_THREADS"):
        worker_count()
    monkeypatch.setenv("GHZFORGE_THREADS", "5")
    with pytest.raises(ValueError):
        worker_count(0)


# ---------------------------------------------------------------------------
# laboratory-frame consistency diagnostic
# ---------------------------------------------------------------------------


def test_frame_consistency_single_qubit():
    circuit = SingleTlrCircuit(
        omega_r=TWO_PI * 10.0,
        qubits=(QubitSpec(gap=TWO_PI * 10.1, coupling=TWO_PI * 0.05),),
        omega_d=TWO_PI * 10.1,
    )
    drive = ResonatorDrive(amplitude=TWO_PI * 0.05, omega_d=circuit.omega_d)
    report = frame_consistency_report(circuit, drive, fock_cutoff=12, t_final=2.0)
    assert report.displacement_magnitude == pytest.approx(0.5, rel=1e-12)
    assert report.rabi == pytest.approx(TWO_PI * 0.05, rel=1e-12)
    assert report.overlap > 0.9999
    assert report.norm_difference < 0.01


def test_frame_consistency_preconditions():
    two_qubit = reference_single()
    drive = ResonatorDrive(amplitude=1.0, omega_d=two_qubit.omega_d)
    with pytest.raises(ValueError, match="one qubit"):
        frame_consistency_report(two_qubit, drive)
    one = SingleTlrCircuit(
        omega_r=TWO_PI * 10.0,
        qubits=(QubitSpec(gap=TWO_PI * 10.1, coupling=TWO_PI * 0.05),),
        omega_d=TWO_PI * 10.1,
    )
    big = ResonatorDrive(amplitude=TWO_PI * 2.0, omega_d=one.omega_d)
    with pytest.raises(ValueError, match="too large"):
        frame_consistency_report(one, big, fock_cutoff=8)
