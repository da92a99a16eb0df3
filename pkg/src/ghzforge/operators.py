"""Dense operator toolbox for few-qubit, few-mode Hilbert spaces.

States are plain 1-D complex ndarrays and operators are 2-D complex ndarrays;
a :class:`HilbertSpace` records how the flat index factors into qubits and
bosonic modes.  Tensor factors are ordered qubits first (qubit 0 is the
slowest-varying index), then modes in declaration order.

Qubit basis convention used throughout the package: basis index 0 is the
*excited* energy eigenstate and index 1 the *ground* eigenstate, so the
standard Pauli matrices apply unchanged -- ``pauli('z')`` has eigenvalue +1
on the excited state and ``sigma_plus()`` raises ground to excited.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .errors import ApproximationWarning

__all__ = [
    "HilbertSpace",
    "pauli",
    "sigma_plus",
    "sigma_minus",
    "annihilation",
    "creation",
    "number_operator",
    "embed",
    "embedded_product",
    "partial_trace_modes",
    "matrix_exponential",
    "displacement",
    "hermiticity_defect",
    "unitarity_defect",
]

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class HilbertSpace:
    """Tensor-product space of ``n_qubits`` two-level systems and bosonic modes.

    Parameters
    ----------
    n_qubits : int
        Number of qubit factors.
    mode_levels : tuple of int
        Fock-space truncation of each bosonic mode, every entry >= 2.
    """

    n_qubits: int
    mode_levels: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        levels = tuple(int(n) for n in self.mode_levels)
        object.__setattr__(self, "mode_levels", levels)
        if any(n < 2 for n in levels):
            raise ValueError("every mode needs at least 2 Fock levels")
        if self.n_qubits == 0 and not levels:
            raise ValueError("space must contain at least one factor")

    @property
    def n_modes(self) -> int:
        return len(self.mode_levels)

    @property
    def dims(self) -> tuple[int, ...]:
        """Per-factor dimensions, qubits first."""
        return (2,) * self.n_qubits + self.mode_levels

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def mode_factor(self, mode: int) -> int:
        """Flat factor index of the given mode."""
        if not 0 <= mode < self.n_modes:
            raise ValueError(f"mode index {mode} out of range")
        return self.n_qubits + mode


def pauli(axis: str) -> np.ndarray:
    """Single-qubit Pauli matrix for axis 'x', 'y' or 'z'."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def sigma_plus() -> np.ndarray:
    """Qubit raising operator |excited><ground|."""
    return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def sigma_minus() -> np.ndarray:
    """Qubit lowering operator |ground><excited|."""
    return np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def annihilation(n_levels: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, a|n> = sqrt(n)|n-1>."""
    if n_levels < 2:
        raise ValueError("annihilation needs at least 2 levels")
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), k=1).astype(complex)


def creation(n_levels: int) -> np.ndarray:
    return annihilation(n_levels).conj().T


def number_operator(n_levels: int) -> np.ndarray:
    return np.diag(np.arange(n_levels, dtype=float)).astype(complex)


def _identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def embed(op: np.ndarray, factor: int, space: HilbertSpace) -> np.ndarray:
    """Lift a single-factor operator to the full space by tensoring identities."""
    return embedded_product(space, {factor: op})


def embedded_product(space: HilbertSpace, factor_ops: dict[int, np.ndarray]) -> np.ndarray:
    """Tensor product with the given operators on selected factors, identity elsewhere.

    Equivalent to the matrix product of the individually embedded operators
    when the factors are distinct, but built in one pass.
    """
    dims = space.dims
    pieces = []
    for i, d in enumerate(dims):
        if i in factor_ops:
            op = np.asarray(factor_ops[i], dtype=complex)
            if op.shape != (d, d):
                raise ValueError(
                    f"operator for factor {i} has shape {op.shape}, expected {(d, d)}"
                )
            pieces.append(op)
        else:
            pieces.append(_identity(d))
    unknown = set(factor_ops) - set(range(len(dims)))
    if unknown:
        raise ValueError(f"factor index out of range: {sorted(unknown)}")
    return reduce(np.kron, pieces)


def partial_trace_modes(state: np.ndarray, space: HilbertSpace) -> np.ndarray:
    """Reduced qubit density matrix after tracing out every bosonic mode.

    Accepts either a state vector or a density matrix on the full space.
    """
    q = 2 ** space.n_qubits
    m = space.dim // q
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if state.size != space.dim:
            raise ValueError("state vector does not match the space dimension")
        a = state.reshape(q, m)
        return a @ a.conj().T
    if state.shape != (space.dim, space.dim):
        raise ValueError("density matrix does not match the space dimension")
    return np.einsum("imjm->ij", state.reshape(q, m, q, m))


def matrix_exponential(op: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """expm(scale * op) via scaling-and-squaring."""
    return expm(np.asarray(op, dtype=complex) * scale)


def displacement(beta: complex, n_levels: int) -> np.ndarray:
    """Truncated displacement operator exp(beta a^dag - beta* a).

    Warns when the displaced state would press against the truncation,
    |beta|^2 > n_levels / 4.
    """
    if abs(beta) ** 2 > n_levels / 4.0:
        warnings.warn(
            f"displacement |beta|^2 = {abs(beta) ** 2:.3g} is large for "
            f"{n_levels} Fock levels; expect truncation error",
            ApproximationWarning,
            stacklevel=2,
        )
    a = annihilation(n_levels)
    return matrix_exponential(beta * a.conj().T - np.conj(beta) * a)


def hermiticity_defect(op: np.ndarray) -> float:
    """Max-abs deviation from H = H^dag."""
    op = np.asarray(op)
    return float(np.max(np.abs(op - op.conj().T)))


def unitarity_defect(op: np.ndarray) -> float:
    """Max-abs deviation of U^dag U from the identity."""
    op = np.asarray(op)
    return float(np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0]))))
