"""Circuit parameter records and Hamiltonian builders.

The physical system is a set of gap-tunable flux qubits inductively coupled
to one transmission-line resonator (TLR), or to one of two TLRs that are
themselves coupled through a dc-SQUID.  The resonator is driven by a
microwave tone at the common qubit gap frequency omega_d; after displacing
the mode the tone acts as a transverse qubit drive of Rabi amplitude
Omega_R = 2 g nu / delta.

Builders return a :class:`TimeDependentHamiltonian`: a static part plus a
list of (matrix, frequency) terms, where each term contributes
``exp(i w t) M + exp(-i w t) M^dag``.  Calling the handle at a time t
assembles the dense matrix; the integrator consumes the term structure
directly.  Every builder also declares the fastest angular frequency present
so the step-size precondition can be enforced mechanically.

Frames, from the laboratory down:

* lab frame, persistent-current basis -- qubit term (Delta/2) sigma-bar_x,
  coupling g (a + a^dag) sigma-bar_z, resonator drive nu;
* rotating frame at omega_d in the qubit energy eigenbasis, rotating-wave
  coupling only -- the static Jaynes-Cummings-plus-drive Hamiltonian;
* the same frame with the counter-rotating drive and coupling terms
  restored -- the "full" benchmark Hamiltonian;
* interaction picture with respect to the detuned mode and the transverse
  drive -- exposes the error terms oscillating at Omega_R;
* strong-driving effective Hamiltonian -- a single sigma_x-conditional
  force on the mode, the generator of the geometric two-qubit phases.

For the two-resonator layout the same chain is expressed in the normal
modes P = (a + b)/sqrt(2), Q = (a - b)/sqrt(2), whose frequencies split by
the SQUID-mediated coupling +-J.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import constants
from .errors import ApproximationWarning, PreconditionError
from .operators import (
    HilbertSpace,
    annihilation,
    creation,
    embed,
    embedded_product,
    number_operator,
    pauli,
    sigma_minus,
    sigma_plus,
)

__all__ = [
    "QubitSpec",
    "SingleTlrCircuit",
    "CoupledTlrCircuit",
    "ResonatorDrive",
    "DriveMappingReport",
    "TimeDependentHamiltonian",
    "lab_frame_hamiltonian",
    "qubit_drive_from_resonator_drive",
    "rotating_frame_hamiltonian",
    "full_simulation_hamiltonian",
    "interaction_picture_hamiltonian",
    "effective_hamiltonian",
    "coupled_rotating_frame_hamiltonian",
    "coupled_bare_mode_hamiltonian",
    "coupled_full_simulation_hamiltonian",
    "coupled_effective_hamiltonian",
    "coupling_strength",
]

_RWA_RATIO = 0.2          # warn when g/omega_r or Omega_R/omega_d exceeds this
_STRONG_DRIVE_FACTOR = 5  # warn unless Omega_R >= factor * max(|delta|, g)
_RESONANCE_RTOL = 1e-12


@dataclass(frozen=True)
class QubitSpec:
    """One gap-tunable flux qubit biased at its optimal point.

    gap (rad/ns) is the tunnel splitting Delta; coupling (rad/ns) the
    qubit-resonator rate g; resonator says which TLR the qubit sits on
    ('A' or 'B', meaningful only in the two-resonator layout).  bias is
    the energy-bias term epsilon and must be zero: away from the optimal
    point the sigma-bar_z term re-enters and none of the frames below
    apply.
    """

    gap: float
    coupling: float
    resonator: str = "A"
    bias: float = 0.0

    def __post_init__(self):
        if self.gap <= 0:
            raise ValueError("qubit gap must be positive")
        if self.coupling < 0:
            raise ValueError("qubit-resonator coupling must be non-negative")
        if self.resonator not in ("A", "B"):
            raise ValueError("resonator assignment must be 'A' or 'B'")
        if self.bias != 0.0:
            raise ValueError(
                "nonzero energy bias epsilon is not supported; qubits must sit "
                "at the optimal point"
            )


@dataclass(frozen=True)
class SingleTlrCircuit:
    """N qubits coupled to one driven TLR.

    omega_r: resonator frequency (rad/ns); omega_d: drive frequency, equal to
    every qubit gap on resonance; rabi: transverse drive amplitude Omega_R
    (rad/ns, may carry sign).  The working detuning is delta = omega_r -
    omega_d and must be nonzero.
    """

    omega_r: float
    qubits: tuple[QubitSpec, ...]
    omega_d: float
    rabi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.omega_r <= 0 or self.omega_d <= 0:
            raise ValueError("frequencies must be positive")
        if not self.qubits:
            raise ValueError("circuit needs at least one qubit")
        if self.detuning == 0.0:
            raise ValueError("drive must be detuned from the resonator (delta != 0)")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def detuning(self) -> float:
        """delta = omega_r - omega_d, signed."""
        return self.omega_r - self.omega_d

    @property
    def couplings(self) -> tuple[float, ...]:
        return tuple(q.coupling for q in self.qubits)


@dataclass(frozen=True)
class CoupledTlrCircuit:
    """N qubits split over two identical TLRs that exchange photons at rate J.

    omega_a and omega_b must be equal (the normal-mode picture assumes
    degenerate bare resonators); the working detuning is
    delta' = omega - omega_d with |delta'| != |J| so the normal-mode
    denominators stay finite.
    """

    omega_a: float
    omega_b: float
    qubits: tuple[QubitSpec, ...]
    coupler_rate: float
    omega_d: float
    rabi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.omega_a != self.omega_b:
            raise ValueError("the two resonators must be degenerate (omega_a == omega_b)")
        if self.omega_a <= 0 or self.omega_d <= 0:
            raise ValueError("frequencies must be positive")
        if not self.qubits:
            raise ValueError("circuit needs at least one qubit")
        if abs(self.detuning) == abs(self.coupler_rate):
            raise ValueError("|delta'| must differ from |J| (degenerate normal mode)")

    @property
    def omega(self) -> float:
        return self.omega_a

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def detuning(self) -> float:
        """delta' = omega - omega_d, signed."""
        return self.omega - self.omega_d

    @property
    def couplings(self) -> tuple[float, ...]:
        return tuple(q.coupling for q in self.qubits)

    def qubit_indices(self, resonator: str) -> tuple[int, ...]:
        return tuple(i for i, q in enumerate(self.qubits) if q.resonator == resonator)


@dataclass(frozen=True)
class ResonatorDrive:
    """Microwave tone applied to the resonator: amplitude nu (rad/ns) at omega_d."""

    amplitude: float
    omega_d: float

    def __post_init__(self):
        if self.omega_d <= 0:
            raise ValueError("drive frequency must be positive")


@dataclass(frozen=True)
class DriveMappingReport:
    """Bookkeeping from the resonator-drive to qubit-drive translation."""

    rabi_per_qubit: tuple[float, ...]
    displacement_magnitude: float  # |nu / delta|, coherent amplitude of the displaced frame
    homogeneous: bool


@dataclass
class TimeDependentHamiltonian:
    """H(t) = static + sum_j [exp(i w_j t) M_j + exp(-i w_j t) M_j^dag].

    fastest_frequency (rad/ns) is the largest angular frequency relevant to
    resolving the dynamics and feeds the integrator step-size rule.
    """

    space: HilbertSpace
    static: np.ndarray | None
    terms: tuple[tuple[np.ndarray, float], ...]
    fastest_frequency: float
    label: str
    _daggers: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        dim = self.space.dim
        if self.static is not None and self.static.shape != (dim, dim):
            raise ValueError("static part does not match the space dimension")
        self.terms = tuple((np.asarray(m, dtype=complex), float(w)) for m, w in self.terms)
        self._daggers = tuple(m.conj().T for m, _ in self.terms)
        if self.fastest_frequency <= 0:
            raise ValueError("fastest_frequency must be positive")

    def __call__(self, t: float) -> np.ndarray:
        h = (
            np.zeros((self.space.dim, self.space.dim), dtype=complex)
            if self.static is None
            else self.static.astype(complex, copy=True)
        )
        for (m, w), md in zip(self.terms, self._daggers):
            z = np.exp(1j * w * t)
            h += z * m + np.conj(z) * md
        return h

    @property
    def is_static(self) -> bool:
        return not self.terms


def _qubit_ops(space: HilbertSpace, op: np.ndarray) -> list[np.ndarray]:
    return [embed(op, k, space) for k in range(space.n_qubits)]


def _check_rwa(circuit) -> None:
    omega_ref = getattr(circuit, "omega_r", None) or circuit.omega
    worst_g = max(q.coupling for q in circuit.qubits)
    if worst_g / omega_ref > _RWA_RATIO:
        warnings.warn(
            f"g/omega_r = {worst_g / omega_ref:.3f} strains the rotating-wave "
            "approximation",
            ApproximationWarning,
            stacklevel=3,
        )
    if abs(circuit.rabi) / circuit.omega_d > _RWA_RATIO:
        warnings.warn(
            f"Omega_R/omega_d = {abs(circuit.rabi) / circuit.omega_d:.3f} strains "
            "the rotating-wave approximation",
            ApproximationWarning,
            stacklevel=3,
        )


def _require_resonant(circuit) -> None:
    for i, q in enumerate(circuit.qubits):
        if abs(q.gap - circuit.omega_d) > _RESONANCE_RTOL * circuit.omega_d:
            raise PreconditionError(
                f"qubit {i} gap {q.gap:g} rad/ns is not resonant with the drive "
                f"{circuit.omega_d:g} rad/ns; the rotating-frame builders assume "
                "Delta_k = omega_d"
            )


# ---------------------------------------------------------------------------
# single resonator
# ---------------------------------------------------------------------------


def lab_frame_hamiltonian(
    circuit: SingleTlrCircuit, drive: ResonatorDrive, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Laboratory-frame Hamiltonian in the persistent-current basis.

    H(t) = omega_r a^dag a + sum_k (Delta_k/2) sigma-bar_x^k
         + sum_k g_k (a^dag + a) sigma-bar_z^k
         + nu (a^dag e^{-i omega_d t} + a e^{i omega_d t})

    Here sigma-bar are Paulis over the persistent-current states; the energy
    eigenbasis used by every rotating-frame builder is a Hadamard rotation
    away.  Used for the frame-consistency diagnostic, not for production
    runs (the lab mode sits in a coherent state of amplitude ~ nu/delta, so
    the commensurate Fock truncation can be large).
    """
    if space.n_modes != 1 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly one mode")
    if drive.omega_d != circuit.omega_d:
        raise ValueError("drive tone and circuit drive frequency disagree")
    nm = space.mode_levels[0]
    a = embed(annihilation(nm), space.mode_factor(0), space)
    n_op = embed(number_operator(nm), space.mode_factor(0), space)
    static = circuit.omega_r * n_op
    for k, q in enumerate(circuit.qubits):
        static = static + 0.5 * q.gap * embed(pauli("x"), k, space)
        static = static + q.coupling * embedded_product(
            space, {k: pauli("z"), space.mode_factor(0): annihilation(nm) + creation(nm)}
        )
    terms = []
    if drive.amplitude != 0.0:
        terms.append((drive.amplitude * a.conj().T, -circuit.omega_d))
    fastest = circuit.omega_r * nm + circuit.omega_d
    return TimeDependentHamiltonian(space, static, tuple(terms), fastest, "single:lab")


def qubit_drive_from_resonator_drive(
    circuit: SingleTlrCircuit, drive: ResonatorDrive
) -> tuple[SingleTlrCircuit, DriveMappingReport]:
    """Translate a resonator tone into the equivalent transverse qubit drive.

    Displacing the driven mode by beta(t) = -(nu/delta) e^{-i omega_d t}
    cancels the tone and leaves each qubit with the transverse drive
    -(2 g_k nu / delta) cos(omega_d t) sigma_x, i.e. a Rabi amplitude
    Omega_R = -2 g_k nu / delta (positive for a red-detuned drive).
    Returns the circuit with ``rabi`` set and a report with the per-qubit
    values; raises if the couplings are inhomogeneous, since a single
    Omega_R cannot represent that case.
    """
    if drive.omega_d != circuit.omega_d:
        raise ValueError("drive tone and circuit drive frequency disagree")
    delta = circuit.detuning
    per_qubit = tuple(-2.0 * q.coupling * drive.amplitude / delta for q in circuit.qubits)
    homogeneous = max(per_qubit) - min(per_qubit) <= 1e-12 * max(1.0, abs(per_qubit[0]))
    if not homogeneous:
        raise ValueError(
            "qubit couplings are inhomogeneous; the resonator tone maps to "
            f"per-qubit Rabi amplitudes {per_qubit} and no single Omega_R exists"
        )
    report = DriveMappingReport(
        rabi_per_qubit=per_qubit,
        displacement_magnitude=abs(drive.amplitude / delta),
        homogeneous=homogeneous,
    )
    return replace(circuit, rabi=per_qubit[0]), report


def rotating_frame_hamiltonian(
    circuit: SingleTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Static rotating-frame Hamiltonian (rotating-wave coupling only).

    H = delta a^dag a + sum_k g_k (a^dag sigma_-^k + a sigma_+^k)
      + sum_k (Omega_R/2)(sigma_+^k + sigma_-^k)

    in the frame rotating at omega_d for both the mode and the (resonant)
    qubits.
    """
    _require_resonant(circuit)
    _check_rwa(circuit)
    if space.n_modes != 1 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly one mode")
    nm = space.mode_levels[0]
    mode = space.mode_factor(0)
    n_op = embed(number_operator(nm), mode, space)
    static = circuit.detuning * n_op
    for k, q in enumerate(circuit.qubits):
        static = static + q.coupling * embedded_product(
            space, {k: sigma_minus(), mode: creation(nm)}
        )
        static = static + q.coupling * embedded_product(
            space, {k: sigma_plus(), mode: annihilation(nm)}
        )
        static = static + 0.5 * circuit.rabi * embed(pauli("x"), k, space)
    fastest = abs(circuit.rabi) + abs(circuit.detuning)
    return TimeDependentHamiltonian(space, static, (), fastest, "single:rotating")


def full_simulation_hamiltonian(
    circuit: SingleTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Rotating-frame Hamiltonian with the counter-rotating terms restored.

    Adds to the static rotating-frame part the drive term
    sum_k (Omega_R/2) sigma_+^k e^{2 i omega_d t} + h.c. and the coupling
    term sum_k g_k a^dag sigma_+^k e^{i (omega_r + omega_d) t} + h.c.
    This is the benchmark Hamiltonian: no approximation beyond the Fock
    truncation and the frame itself.
    """
    base = rotating_frame_hamiltonian(circuit, space)
    nm = space.mode_levels[0]
    mode = space.mode_factor(0)
    drive_cr = sum(
        0.5 * circuit.rabi * embed(sigma_plus(), k, space) for k in range(circuit.n_qubits)
    )
    coupling_cr = sum(
        q.coupling
        * embedded_product(space, {k: sigma_plus(), mode: creation(nm)})
        for k, q in enumerate(circuit.qubits)
    )
    terms = [(drive_cr, 2.0 * circuit.omega_d), (coupling_cr, circuit.omega_r + circuit.omega_d)]
    fastest = circuit.omega_r + circuit.omega_d
    return TimeDependentHamiltonian(space, base.static, tuple(terms), fastest, "single:full")


def interaction_picture_hamiltonian(
    circuit: SingleTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Coupling in the interaction picture of the detuned mode and the drive.

    Transforming the rotating-wave coupling with
    U0(t) = exp[-i t (delta a^dag a + sum_k (Omega_R/2) sigma_x^k)] leaves

    H(t) = sum_k (g_k/2) e^{-i delta t} a
           [sigma_x^k + i cos(Omega_R t) sigma_y^k - i sin(Omega_R t) sigma_z^k]
           + h.c.

    The sigma_y/sigma_z parts oscillate at Omega_R and average away for
    strong driving; dropping them gives :func:`effective_hamiltonian`.
    """
    _require_resonant(circuit)
    _check_rwa(circuit)
    if space.n_modes != 1 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly one mode")
    rabi = circuit.rabi
    if abs(rabi) < _STRONG_DRIVE_FACTOR * max(
        abs(circuit.detuning), max(circuit.couplings)
    ):
        warnings.warn(
            "Omega_R is not large against |delta| and g; the interaction-picture "
            "error terms will not average cleanly",
            ApproximationWarning,
            stacklevel=2,
        )
    nm = space.mode_levels[0]
    mode = space.mode_factor(0)
    delta = circuit.detuning
    a_local = annihilation(nm)

    def summed(qubit_op: np.ndarray, scale_per_qubit) -> np.ndarray:
        return sum(
            scale_per_qubit(q) * embedded_product(space, {k: qubit_op, mode: a_local})
            for k, q in enumerate(circuit.qubits)
        )

    # e^{-i delta t} * (g/2) a sigma_x  + h.c.
    m_x = summed(pauli("x"), lambda q: 0.5 * q.coupling)
    # i cos / -i sin pieces regrouped by their net phase:
    #   (g/4) a (i sigma_y - sigma_z) e^{i(Omega-delta)t} + (g/4) a (i sigma_y + sigma_z) e^{-i(Omega+delta)t}
    m_plus = summed(1j * pauli("y") - pauli("z"), lambda q: 0.25 * q.coupling)
    m_minus = summed(1j * pauli("y") + pauli("z"), lambda q: 0.25 * q.coupling)
    terms = (
        (m_x, -delta),
        (m_plus, rabi - delta),
        (m_minus, -(rabi + delta)),
    )
    fastest = abs(rabi) + abs(delta)
    return TimeDependentHamiltonian(space, None, terms, fastest, "single:intermediate")


def effective_hamiltonian(
    circuit: SingleTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Strong-driving effective Hamiltonian: a sigma_x-conditional mode force.

    H(t) = sum_k (g_k/2) sigma_x^k (a e^{-i delta t} + a^dag e^{i delta t})

    Commutators at different times are c-numbers times sigma_x^k sigma_x^j,
    so the propagator closes into conditional displacements plus pairwise
    geometric phases.
    """
    _require_resonant(circuit)
    _check_rwa(circuit)
    if space.n_modes != 1 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly one mode")
    if abs(circuit.rabi) < _STRONG_DRIVE_FACTOR * max(
        abs(circuit.detuning), max(circuit.couplings)
    ):
        warnings.warn(
            "Omega_R is not large against |delta| and g; the effective "
            "Hamiltonian is outside its strong-driving regime",
            ApproximationWarning,
            stacklevel=2,
        )
    nm = space.mode_levels[0]
    mode = space.mode_factor(0)
    m_x = sum(
        0.5 * q.coupling
        * embedded_product(space, {k: pauli("x"), mode: annihilation(nm)})
        for k, q in enumerate(circuit.qubits)
    )
    fastest = abs(circuit.detuning)
    return TimeDependentHamiltonian(
        space, None, ((m_x, -circuit.detuning),), fastest, "single:effective"
    )


# ---------------------------------------------------------------------------
# two coupled resonators, normal modes P and Q
# ---------------------------------------------------------------------------


def _coupled_static(circuit: CoupledTlrCircuit, space: HilbertSpace) -> np.ndarray:
    """Rotating-frame static part in the normal-mode basis."""
    np_levels, nq_levels = space.mode_levels
    p_fac, q_fac = space.mode_factor(0), space.mode_factor(1)
    delta = circuit.detuning
    j = circuit.coupler_rate
    static = (delta + j) * embed(number_operator(np_levels), p_fac, space)
    static = static + (delta - j) * embed(number_operator(nq_levels), q_fac, space)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for k, q in enumerate(circuit.qubits):
        sign_q = 1.0 if q.resonator == "A" else -1.0
        for fac, levels, sgn in ((p_fac, np_levels, 1.0), (q_fac, nq_levels, sign_q)):
            static = static + sgn * inv_sqrt2 * q.coupling * embedded_product(
                space, {k: sigma_minus(), fac: creation(levels)}
            )
            static = static + sgn * inv_sqrt2 * q.coupling * embedded_product(
                space, {k: sigma_plus(), fac: annihilation(levels)}
            )
        static = static + 0.5 * circuit.rabi * embed(pauli("x"), k, space)
    return static


def coupled_rotating_frame_hamiltonian(
    circuit: CoupledTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Static rotating-frame Hamiltonian in the normal-mode basis.

    H = (delta' + J) P^dag P + (delta' - J) Q^dag Q
      + (1/sqrt2) sum_A g_k (P^dag sigma_-^k + h.c.)
      + (1/sqrt2) sum_B g_j (P^dag sigma_-^j + h.c.)
      + (1/sqrt2) sum_A g_k (Q^dag sigma_-^k + h.c.)
      - (1/sqrt2) sum_B g_j (Q^dag sigma_-^j + h.c.)
      + sum_k (Omega_R/2) sigma_x^k

    with P = (a + b)/sqrt2, Q = (a - b)/sqrt2; the B-side Q coupling picks
    up the minus sign from the mode transformation.
    """
    _require_resonant(circuit)
    _check_rwa(circuit)
    if space.n_modes != 2 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly two modes")
    static = _coupled_static(circuit, space)
    fastest = abs(circuit.rabi) + abs(circuit.detuning) + abs(circuit.coupler_rate)
    return TimeDependentHamiltonian(space, static, (), fastest, "coupled:rotating")


def coupled_bare_mode_hamiltonian(
    circuit: CoupledTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Rotating-frame Hamiltonian in the bare a/b mode basis.

    H = delta' (a^dag a + b^dag b) + J (a^dag b + a b^dag)
      + sum_A g_k (a^dag sigma_-^k + h.c.) + sum_B g_j (b^dag sigma_-^j + h.c.)
      + sum_k (Omega_R/2) sigma_x^k

    Exists to check that the normal-mode builder is a spectral identity,
    not to run dynamics.
    """
    _require_resonant(circuit)
    if space.n_modes != 2 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly two modes")
    na_levels, nb_levels = space.mode_levels
    a_fac, b_fac = space.mode_factor(0), space.mode_factor(1)
    delta = circuit.detuning
    static = delta * embed(number_operator(na_levels), a_fac, space)
    static = static + delta * embed(number_operator(nb_levels), b_fac, space)
    static = static + circuit.coupler_rate * embedded_product(
        space, {a_fac: creation(na_levels), b_fac: annihilation(nb_levels)}
    )
    static = static + circuit.coupler_rate * embedded_product(
        space, {a_fac: annihilation(na_levels), b_fac: creation(nb_levels)}
    )
    for k, q in enumerate(circuit.qubits):
        fac, levels = (a_fac, na_levels) if q.resonator == "A" else (b_fac, nb_levels)
        static = static + q.coupling * embedded_product(
            space, {k: sigma_minus(), fac: creation(levels)}
        )
        static = static + q.coupling * embedded_product(
            space, {k: sigma_plus(), fac: annihilation(levels)}
        )
        static = static + 0.5 * circuit.rabi * embed(pauli("x"), k, space)
    fastest = abs(circuit.rabi) + abs(circuit.detuning) + abs(circuit.coupler_rate)
    return TimeDependentHamiltonian(space, static, (), fastest, "coupled:bare")


def coupled_full_simulation_hamiltonian(
    circuit: CoupledTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Normal-mode rotating-frame Hamiltonian with counter-rotating terms.

    Adds sum_k (Omega_R/2) sigma_+^k e^{2 i omega_d t} + h.c. and the
    counter-rotating halves of the four coupling sums, all oscillating at
    omega + omega_d, with the B-side Q terms carrying their minus sign.
    """
    base = coupled_rotating_frame_hamiltonian(circuit, space)
    np_levels, nq_levels = space.mode_levels
    p_fac, q_fac = space.mode_factor(0), space.mode_factor(1)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    drive_cr = sum(
        0.5 * circuit.rabi * embed(sigma_plus(), k, space) for k in range(circuit.n_qubits)
    )
    coupling_cr = np.zeros((space.dim, space.dim), dtype=complex)
    for k, q in enumerate(circuit.qubits):
        sign_q = 1.0 if q.resonator == "A" else -1.0
        coupling_cr = coupling_cr + inv_sqrt2 * q.coupling * embedded_product(
            space, {k: sigma_plus(), p_fac: creation(np_levels)}
        )
        coupling_cr = coupling_cr + sign_q * inv_sqrt2 * q.coupling * embedded_product(
            space, {k: sigma_plus(), q_fac: creation(nq_levels)}
        )
    terms = (
        (drive_cr, 2.0 * circuit.omega_d),
        (coupling_cr, circuit.omega + circuit.omega_d),
    )
    fastest = circuit.omega + circuit.omega_d
    return TimeDependentHamiltonian(space, base.static, terms, fastest, "coupled:full")


def coupled_effective_hamiltonian(
    circuit: CoupledTlrCircuit, space: HilbertSpace
) -> TimeDependentHamiltonian:
    """Strong-driving effective Hamiltonian for the two-resonator layout.

    H(t) = (sqrt2/4) sum_k g_k sigma_x^k (P e^{-i(delta'+J)t} + h.c.)
         + (sqrt2/4) [sum_A g_k sigma_x^k - sum_B g_j sigma_x^j]
                     (Q e^{-i(delta'-J)t} + h.c.)

    Both normal modes mediate sigma_x sigma_x phases; the sign structure
    makes the P and Q contributions add for same-resonator pairs and
    compete for cross-resonator pairs.
    """
    _require_resonant(circuit)
    _check_rwa(circuit)
    if space.n_modes != 2 or space.n_qubits != circuit.n_qubits:
        raise ValueError("space must carry the circuit's qubits and exactly two modes")
    if abs(circuit.rabi) < _STRONG_DRIVE_FACTOR * max(
        abs(circuit.detuning), max(circuit.couplings)
    ):
        warnings.warn(
            "Omega_R is not large against |delta'| and g; the effective "
            "Hamiltonian is outside its strong-driving regime",
            ApproximationWarning,
            stacklevel=2,
        )
    np_levels, nq_levels = space.mode_levels
    p_fac, q_fac = space.mode_factor(0), space.mode_factor(1)
    coeff = np.sqrt(2.0) / 4.0
    m_p = np.zeros((space.dim, space.dim), dtype=complex)
    m_q = np.zeros((space.dim, space.dim), dtype=complex)
    for k, q in enumerate(circuit.qubits):
        sign_q = 1.0 if q.resonator == "A" else -1.0
        m_p = m_p + coeff * q.coupling * embedded_product(
            space, {k: pauli("x"), p_fac: annihilation(np_levels)}
        )
        m_q = m_q + sign_q * coeff * q.coupling * embedded_product(
            space, {k: pauli("x"), q_fac: annihilation(nq_levels)}
        )
    delta = circuit.detuning
    j = circuit.coupler_rate
    terms = ((m_p, -(delta + j)), (m_q, -(delta - j)))
    fastest = abs(delta) + abs(j)
    return TimeDependentHamiltonian(space, None, terms, fastest, "coupled:effective")


# ---------------------------------------------------------------------------
# device-level coupling estimate
# ---------------------------------------------------------------------------


def coupling_strength(
    mutual_ph: float, persistent_current_na: float, inductance_nh: float, omega_r: float
) -> float:
    """Qubit-resonator coupling g from device parameters.

    g = M I_p I_r0 / hbar with the resonator's zero-point current
    I_r0 = sqrt(hbar omega_r / L) taken at the qubit's position.

    Parameters: mutual inductance in pH, qubit persistent current in nA,
    total resonator inductance in nH, omega_r in rad/ns.  Returns rad/ns.
    """
    if mutual_ph < 0 or persistent_current_na < 0:
        raise ValueError("mutual inductance and persistent current must be non-negative")
    if inductance_nh <= 0 or omega_r <= 0:
        raise ValueError("inductance and resonator frequency must be positive")
    m_si = constants.henry_from_ph(mutual_ph)
    ip_si = constants.ampere_from_na(persistent_current_na)
    l_si = constants.henry_from_nh(inductance_nh)
    omega_si = omega_r * 1e9
    i_r0 = np.sqrt(constants.HBAR_JS * omega_si / l_si)
    g_si = m_si * ip_si * i_r0 / constants.HBAR_JS
    return float(constants.rad_per_ns_from_rad_per_s(g_si))
