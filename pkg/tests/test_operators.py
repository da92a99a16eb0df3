"""Unit tests for the truncated-space operator toolbox."""

import math

import numpy as np
import pytest

from ghzforge.operators import (
    HilbertSpace,
    annihilation,
    creation,
    displacement,
    embed,
    embedded_product,
    hermiticity_defect,
    matrix_exponential,
    number_operator,
    partial_trace_modes,
    pauli,
    sigma_minus,
    sigma_plus,
    unitarity_defect,
)


def test_space_layout():
    space = HilbertSpace(n_qubits=2, mode_levels=(5, 3))
    assert space.dims == (2, 2, 5, 3)
    assert space.dim == 60
    assert space.n_modes == 2
    assert space.mode_factor(0) == 2
    assert space.mode_factor(1) == 3
    with pytest.raises(ValueError):
        space.mode_factor(2)


def test_pauli_algebra():
    sx, sy, sz = pauli("x"), pauli("y"), pauli("z")
    assert np.allclose(sx @ sy - sy @ sx, 2j * sz)
    assert np.allclose(sx @ sx, np.eye(2))
    assert np.allclose(sy @ sy, np.eye(2))
    with pytest.raises(ValueError):
        pauli("w")


def test_sigma_ladder_convention():
    # Index 0 is the excited state, index 1 the ground state.
    ground = np.array([0.0, 1.0])
    excited = np.array([1.0, 0.0])
    assert np.allclose(sigma_plus() @ ground, excited)
    assert np.allclose(sigma_plus() @ excited, 0.0)
    assert np.allclose(sigma_minus() @ excited, ground)
    # sigma_z = |e><e| - |g><g| with this ordering
    assert np.allclose(pauli("z") @ excited, excited)
    assert np.allclose(pauli("z") @ ground, -ground)
    assert np.allclose(sigma_plus(), 0.5 * (pauli("x") + 1j * pauli("y")))


def test_ladder_matrix_elements():
    a = annihilation(5)
    for n in range(1, 5):
        vec = np.zeros(5)
        vec[n] = 1.0
        out = a @ vec
        assert out[n - 1] == pytest.approx(np.sqrt(n))
    assert np.allclose(creation(5), a.conj().T)
    assert np.allclose(number_operator(5), np.diag(np.arange(5.0)))


def test_embed_matches_explicit_kron():
    space = HilbertSpace(n_qubits=2, mode_levels=(3,))
    sx = pauli("x")
    a = annihilation(3)
    eye2, eye3 = np.eye(2), np.eye(3)
    assert np.allclose(embed(sx, 0, space), np.kron(np.kron(sx, eye2), eye3))
    assert np.allclose(embed(sx, 1, space), np.kron(np.kron(eye2, sx), eye3))
    assert np.allclose(embed(a, 2, space), np.kron(np.kron(eye2, eye2), a))


def test_embedded_product_equals_product_of_embeds():
    rng = np.random.default_rng(11)
    space = HilbertSpace(n_qubits=2, mode_levels=(4,))
    op_q = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    op_m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    combined = embedded_product(space, {0: op_q, 2: op_m})
    assert np.allclose(combined, embed(op_q, 0, space) @ embed(op_m, 2, space))


def test_partial_trace_of_product_state():
    space = HilbertSpace(n_qubits=2, mode_levels=(3,))
    qubit_part = np.array([0.6, 0.0, 0.8j, 0.0])
    mode_part = np.array([1.0, 0.0, 0.0])
    psi = np.kron(qubit_part, mode_part)
    rho = partial_trace_modes(psi, space)
    assert np.allclose(rho, np.outer(qubit_part, qubit_part.conj()))


def test_partial_trace_random_state_properties():
    rng = np.random.default_rng(23)
    space = HilbertSpace(n_qubits=2, mode_levels=(3, 2))
    psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    psi /= np.linalg.norm(psi)
    rho = partial_trace_modes(psi, space)
    assert rho.shape == (4, 4)
    assert np.trace(rho) == pytest.approx(1.0)
    assert hermiticity_defect(rho) < 1e-13
    evals = np.linalg.eigvalsh(rho)
    assert np.all(evals > -1e-13)
    # density-matrix input gives the same answer
    rho2 = partial_trace_modes(np.outer(psi, psi.conj()), space)
    assert np.allclose(rho, rho2)


def test_displacement_builds_coherent_state():
    beta = 0.4 - 0.3j
    n_levels = 18
    d = displacement(beta, n_levels)
    assert unitarity_defect(d) < 1e-10
    vac = np.zeros(n_levels)
    vac[0] = 1.0
    coh = d @ vac
    amps = np.array(
        [
            np.exp(-abs(beta) ** 2 / 2) * beta**n / np.sqrt(math.factorial(n))
            for n in range(8)
        ]
    )
    assert np.allclose(coh[:8], amps, atol=1e-10)
    # inverse displacement undoes it
    assert np.allclose(displacement(-beta, n_levels) @ coh, vac, atol=1e-10)


def test_displacement_truncation_warning():
    with pytest.warns(UserWarning):
        displacement(2.0, 8)


def test_matrix_exponential_against_series():
    rng = np.random.default_rng(3)
    h = rng.normal(size=(6, 6))
    h = h + h.T
    u = matrix_exponential(h, scale=-1j * 0.37)
    # exponential of a Hermitian generator is unitary
    assert unitarity_defect(u) < 1e-12
    evals, vecs = np.linalg.eigh(h)
    direct = vecs @ np.diag(np.exp(-1j * 0.37 * evals)) @ vecs.conj().T
    assert np.allclose(u, direct, atol=1e-12)
