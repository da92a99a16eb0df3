"""Scenario files: JSON descriptions of a circuit plus run settings.

A scenario is the unit the command line works with.  All frequencies in
the file are ordinary frequencies in GHz and are multiplied by 2*pi on
load; times are in ns.  The schema is strict: unknown keys anywhere in
the document are rejected so that a typo cannot silently fall back to a
default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .constants import rad_per_ns_from_ghz
from .dynamics import (
    COUPLED_VARIANTS,
    SINGLE_VARIANTS,
    IntegratorConfig,
    Trajectory,
    run_coupled_resonator,
    run_single_resonator,
)
from .errors import ScenarioFormatError
from .model import (
    CoupledTlrCircuit,
    DriveMappingReport,
    QubitSpec,
    ResonatorDrive,
    SingleTlrCircuit,
    qubit_drive_from_resonator_drive,
)

SCHEMA_VERSION = 1

GHZ_PHASE_CHOICES = ("auto", "i_power", "plus_i")

_TOP_KEYS = {
    "schema_version",
    "description",
    "kind",
    "resonator",
    "drive_frequency_ghz",
    "qubits",
    "drive",
    "variant",
    "fock_cutoff",
    "fock_cutoffs",
    "t_final_ns",
    "sample_every_ns",
    "ghz_phase_convention",
    "integrator",
    "time_budget_s",
}


@dataclass
class LoadedScenario:
    """A validated scenario, converted to internal units (rad/ns)."""

    name: str
    kind: str
    circuit: SingleTlrCircuit | CoupledTlrCircuit
    variant: str
    fock: int | tuple[int, int]
    t_final_ns: float
    sample_every_ns: float
    convention: str
    integrator: IntegratorConfig
    time_budget_s: float | None
    drive_mapping: DriveMappingReport | None
    raw: dict


def _fail(where: str, message: str) -> ScenarioFormatError:
    return ScenarioFormatError(f"{where}: {message}")


def _require_mapping(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise _fail(where, f"expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise _fail(where, f"unknown key(s) {unknown}; allowed keys are {sorted(allowed)}")


def _get(obj: dict, key: str, where: str):
    if key not in obj:
        raise _fail(where, f"missing required key {key!r}")
    return obj[key]


def _number(value, where: str, *, positive=False, nonnegative=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(where, f"expected a number, got {value!r}")
    out = float(value)
    if positive and not out > 0:
        raise _fail(where, f"must be > 0, got {out}")
    if nonnegative and out < 0:
        raise _fail(where, f"must be >= 0, got {out}")
    return out


def _qubit_from_entry(entry, index: int, kind: str) -> QubitSpec:
    where = f"qubits[{index}]"
    obj = _require_mapping(entry, where)
    allowed = {"gap_ghz", "coupling_ghz", "bias_ghz"}
    if kind == "coupled":
        allowed = allowed | {"resonator"}
    _reject_unknown(obj, allowed, where)
    gap = _number(_get(obj, "gap_ghz", where), f"{where}.gap_ghz", positive=True)
    coupling = _number(
        _get(obj, "coupling_ghz", where), f"{where}.coupling_ghz", nonnegative=True
    )
    bias = _number(obj.get("bias_ghz", 0.0), f"{where}.bias_ghz")
    if bias != 0.0:
        # The scheme needs the qubits parked at their degeneracy points;
        # a biased qubit changes the coupling operator, not just numbers.
        raise _fail(f"{where}.bias_ghz", "must be 0 (qubits sit at the degeneracy point)")
    resonator = "A"
    if kind == "coupled":
        resonator = _get(obj, "resonator", where)
        if resonator not in ("A", "B"):
            raise _fail(f"{where}.resonator", f"must be 'A' or 'B', got {resonator!r}")
    return QubitSpec(
        gap=rad_per_ns_from_ghz(gap),
        coupling=rad_per_ns_from_ghz(coupling),
        resonator=resonator,
        bias=0.0,
    )


def _integrator_from_entry(entry, where: str) -> IntegratorConfig:
    if entry is None:
        return IntegratorConfig()
    obj = _require_mapping(entry, where)
    _reject_unknown(obj, {"dt_ns", "renormalize_every"}, where)
    dt = obj.get("dt_ns")
    if dt is not None:
        dt = _number(dt, f"{where}.dt_ns", positive=True)
    renorm = obj.get("renormalize_every", 0)
    if isinstance(renorm, bool) or not isinstance(renorm, int) or renorm < 0:
        raise _fail(f"{where}.renormalize_every", f"expected an integer >= 0, got {renorm!r}")
    return IntegratorConfig(dt=dt, renormalize_every=renorm)


def validate_scenario(data, name: str = "<scenario>") -> LoadedScenario:
    """Validate a parsed scenario document and build the circuit it describes.

    Raises ScenarioFormatError on any structural problem, including keys
    the schema does not know about.
    """
    top = _require_mapping(data, name)
    _reject_unknown(top, _TOP_KEYS, name)

    version = _get(top, "schema_version", name)
    if version != SCHEMA_VERSION:
        raise _fail(name, f"schema_version must be {SCHEMA_VERSION}, got {version!r}")

    description = top.get("description", "")
    if not isinstance(description, str):
        raise _fail(f"{name}.description", "expected a string")

    kind = _get(top, "kind", name)
    if kind not in ("single", "coupled"):
        raise _fail(f"{name}.kind", f"must be 'single' or 'coupled', got {kind!r}")

    omega_d = rad_per_ns_from_ghz(
        _number(_get(top, "drive_frequency_ghz", name), f"{name}.drive_frequency_ghz", positive=True)
    )

    qubit_entries = _get(top, "qubits", name)
    if not isinstance(qubit_entries, list) or not qubit_entries:
        raise _fail(f"{name}.qubits", "expected a non-empty list")
    qubits = tuple(
        _qubit_from_entry(entry, i, kind) for i, entry in enumerate(qubit_entries)
    )

    drive = _require_mapping(_get(top, "drive", name), f"{name}.drive")
    _reject_unknown(drive, {"rabi_ghz", "resonator_amplitude_ghz"}, f"{name}.drive")
    if ("rabi_ghz" in drive) == ("resonator_amplitude_ghz" in drive):
        raise _fail(
            f"{name}.drive",
            "exactly one of 'rabi_ghz' (direct qubit drive) or "
            "'resonator_amplitude_ghz' (drive through the resonator) is required",
        )

    variant = _get(top, "variant", name)
    convention = top.get("ghz_phase_convention", "auto")
    if convention not in GHZ_PHASE_CHOICES:
        raise _fail(
            f"{name}.ghz_phase_convention",
            f"must be one of {GHZ_PHASE_CHOICES}, got {convention!r}",
        )

    t_final = _number(_get(top, "t_final_ns", name), f"{name}.t_final_ns", positive=True)
    sample_every = _number(
        _get(top, "sample_every_ns", name), f"{name}.sample_every_ns", positive=True
    )
    integrator = _integrator_from_entry(top.get("integrator"), f"{name}.integrator")
    budget = top.get("time_budget_s")
    if budget is not None:
        budget = _number(budget, f"{name}.time_budget_s", positive=True)

    resonator = _require_mapping(_get(top, "resonator", name), f"{name}.resonator")
    mapping = None
    if kind == "single":
        if variant not in SINGLE_VARIANTS:
            raise _fail(f"{name}.variant", f"must be one of {SINGLE_VARIANTS}, got {variant!r}")
        _reject_unknown(resonator, {"omega_ghz"}, f"{name}.resonator")
        omega_r = rad_per_ns_from_ghz(
            _number(_get(resonator, "omega_ghz", f"{name}.resonator"),
                    f"{name}.resonator.omega_ghz", positive=True)
        )
        if "fock_cutoffs" in top:
            raise _fail(name, "'fock_cutoffs' is for coupled scenarios; use 'fock_cutoff'")
        fock = top.get("fock_cutoff", 8)
        if isinstance(fock, bool) or not isinstance(fock, int) or fock < 1:
            raise _fail(f"{name}.fock_cutoff", f"expected an integer >= 1, got {fock!r}")
        try:
            if "rabi_ghz" in drive:
                rabi = rad_per_ns_from_ghz(
                    _number(drive["rabi_ghz"], f"{name}.drive.rabi_ghz")
                )
                circuit = SingleTlrCircuit(
                    omega_r=omega_r, qubits=qubits, omega_d=omega_d, rabi=rabi
                )
            else:
                amplitude = rad_per_ns_from_ghz(
                    _number(drive["resonator_amplitude_ghz"],
                            f"{name}.drive.resonator_amplitude_ghz")
                )
                undriven = SingleTlrCircuit(
                    omega_r=omega_r, qubits=qubits, omega_d=omega_d, rabi=0.0
                )
                circuit, mapping = qubit_drive_from_resonator_drive(
                    undriven, ResonatorDrive(amplitude=amplitude, omega_d=omega_d)
                )
        except ValueError as exc:
            raise _fail(name, str(exc)) from exc
    else:
        if variant not in COUPLED_VARIANTS:
            raise _fail(f"{name}.variant", f"must be one of {COUPLED_VARIANTS}, got {variant!r}")
        _reject_unknown(
            resonator,
            {"omega_a_ghz", "omega_b_ghz", "coupler_rate_ghz"},
            f"{name}.resonator",
        )
        omega_a = rad_per_ns_from_ghz(
            _number(_get(resonator, "omega_a_ghz", f"{name}.resonator"),
                    f"{name}.resonator.omega_a_ghz", positive=True)
        )
        omega_b = rad_per_ns_from_ghz(
            _number(_get(resonator, "omega_b_ghz", f"{name}.resonator"),
                    f"{name}.resonator.omega_b_ghz", positive=True)
        )
        coupler_rate = rad_per_ns_from_ghz(
            _number(_get(resonator, "coupler_rate_ghz", f"{name}.resonator"),
                    f"{name}.resonator.coupler_rate_ghz")
        )
        if "fock_cutoff" in top:
            raise _fail(name, "'fock_cutoff' is for single scenarios; use 'fock_cutoffs'")
        fock_entry = top.get("fock_cutoffs", [8, 8])
        if (
            not isinstance(fock_entry, list)
            or len(fock_entry) != 2
            or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in fock_entry)
        ):
            raise _fail(
                f"{name}.fock_cutoffs", f"expected two integers >= 1, got {fock_entry!r}"
            )
        fock = (fock_entry[0], fock_entry[1])
        if "resonator_amplitude_ghz" in drive:
            raise _fail(
                f"{name}.drive",
                "driving through the resonator is only defined for the "
                "single-resonator layout; use 'rabi_ghz' here",
            )
        rabi = rad_per_ns_from_ghz(_number(drive["rabi_ghz"], f"{name}.drive.rabi_ghz"))
        try:
            circuit = CoupledTlrCircuit(
                omega_a=omega_a,
                omega_b=omega_b,
                qubits=qubits,
                coupler_rate=coupler_rate,
                omega_d=omega_d,
                rabi=rabi,
            )
        except ValueError as exc:
            raise _fail(name, str(exc)) from exc

    return LoadedScenario(
        name=name,
        kind=kind,
        circuit=circuit,
        variant=variant,
        fock=fock,
        t_final_ns=t_final,
        sample_every_ns=sample_every,
        convention=convention,
        integrator=integrator,
        time_budget_s=budget,
        drive_mapping=mapping,
        raw=top,
    )


def load_scenario(path) -> LoadedScenario:
    """Read and validate a scenario file from disk."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path.name}: not valid JSON ({exc})") from exc
    return validate_scenario(data, name=path.stem)


def run_scenario(scenario: LoadedScenario) -> Trajectory:
    """Integrate the scenario's circuit and return its trajectory."""
    if scenario.kind == "single":
        return run_single_resonator(
            scenario.circuit,
            scenario.variant,
            scenario.t_final_ns,
            scenario.sample_every_ns,
            fock_cutoff=scenario.fock,
            config=scenario.integrator,
            convention=scenario.convention,
        )
    return run_coupled_resonator(
        scenario.circuit,
        scenario.variant,
        scenario.t_final_ns,
        scenario.sample_every_ns,
        fock_cutoffs=scenario.fock,
        config=scenario.integrator,
        convention=scenario.convention,
    )


def bundled_scenario_names() -> list[str]:
    """Names (without .json) of the scenario files shipped in the package."""
    root = resources.files(__package__) / "scenarios"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (for reading and for tests)."""
    root = resources.files(__package__) / "scenarios"
    path = root / f"{name}.json"
    with resources.as_file(path) as concrete:
        if not concrete.exists():
            raise ScenarioFormatError(
                f"no bundled scenario named {name!r}; available: {bundled_scenario_names()}"
            )
        return Path(concrete)
