import math

import numpy as np
import pytest

from helpers import SEED_ANGLES
from oneway.generators import (
    CX,
    CZ,
    H,
    I2,
    X,
    Z,
    CZGate,
    cz_matrix,
    derived_gate,
    j_matrix,
    j_product,
    pauli_rotation,
    rotation_matrix,
)
from oneway.numerics import is_unitary, kron

S2 = 1 / math.sqrt(2)

# textbook constants written out, not derived from J
RX_PI = np.array([[0, -1j], [-1j, 0]])
P_HALF_PI = np.diag([1, 1j])


@pytest.fixture
def angles():
    return np.random.default_rng(SEED_ANGLES).uniform(-2 * math.pi, 2 * math.pi, 200)


def test_j_matrix_examples():
    np.testing.assert_allclose(j_matrix(0), H, atol=1e-15)
    np.testing.assert_allclose(j_matrix(math.pi), S2 * np.array([[1, -1], [1, 1]]), atol=1e-15)
    np.testing.assert_allclose(j_matrix(math.pi) @ j_matrix(0), X, atol=1e-15)


def test_j_matrix_unitary(angles):
    for a in angles[:50]:
        assert is_unitary(j_matrix(a), 1e-15)


def test_cz_matrix():
    cz = cz_matrix()
    assert cz[3, 3] == -1
    np.testing.assert_array_equal(cz @ cz, np.eye(4))
    np.testing.assert_allclose(kron(I2, H) @ cz @ kron(I2, H), CX, atol=1e-15)
    np.testing.assert_allclose(kron(I2, j_matrix(0)) @ CZ @ kron(I2, j_matrix(0)), CX, atol=1e-15)


def test_cz_gate_needs_distinct_wires():
    with pytest.raises(ValueError):
        CZGate((1, 1))


def test_derived_gates():
    np.testing.assert_allclose(derived_gate("X"), X, atol=1e-12)
    np.testing.assert_allclose(derived_gate("Z"), np.diag([1, -1]), atol=1e-12)
    np.testing.assert_allclose(derived_gate("H"), H, atol=1e-12)
    np.testing.assert_allclose(derived_gate("P", 0.0), I2, atol=1e-12)
    np.testing.assert_allclose(derived_gate("P", math.pi / 2), P_HALF_PI, atol=1e-12)
    with pytest.raises(ValueError):
        derived_gate("P")
    with pytest.raises(ValueError):
        derived_gate("Q")


def test_phase_gate_family(angles):
    for a in angles:
        np.testing.assert_allclose(derived_gate("P", a), np.diag([1, np.exp(1j * a)]), atol=1e-12)


def test_rotation_examples():
    np.testing.assert_allclose(rotation_matrix("z", 0), I2, atol=1e-12)
    np.testing.assert_allclose(rotation_matrix("x", math.pi), RX_PI, atol=1e-12)
    with pytest.raises(ValueError):
        rotation_matrix("w", 0.1)


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_rotations_match_textbook(axis, angles):
    paulis = {"x": X, "y": np.array([[0, -1j], [1j, 0]]), "z": Z}
    for a in angles[:20]:
        textbook = math.cos(a / 2) * I2 - 1j * math.sin(a / 2) * paulis[axis]
        np.testing.assert_allclose(rotation_matrix(axis, a), textbook, atol=1e-12)
        np.testing.assert_allclose(pauli_rotation(axis, a), textbook, atol=1e-12)


def test_ry_j_form(angles):
    for a in angles[:20]:
        expected = np.exp(-0.5j * a) * j_matrix(0) @ j_matrix(math.pi / 2) @ j_matrix(a) @ j_matrix(-math.pi / 2)
        np.testing.assert_allclose(rotation_matrix("y", a), expected, atol=1e-12)


def test_j0_involution():
    assert np.max(np.abs(j_matrix(0) @ j_matrix(0) - I2)) <= 1e-15


def test_additivity(angles):
    rng = np.random.default_rng(SEED_ANGLES + 1)
    for a, b in zip(angles, rng.permutation(angles)):
        np.testing.assert_allclose(j_product(a, 0, b), j_matrix(a + b), atol=1e-12)


def test_subtractivity(angles):
    rng = np.random.default_rng(SEED_ANGLES + 2)
    for a, b in zip(angles, rng.permutation(angles)):
        np.testing.assert_allclose(j_product(a, math.pi, b), np.exp(1j * a) * Z @ j_matrix(b - a), atol=1e-12)


def test_pauli_absorption(angles):
    for a in angles[:100]:
        np.testing.assert_allclose(X @ j_matrix(a), j_matrix(a + math.pi), atol=1e-12)
        np.testing.assert_allclose(j_matrix(a) @ Z, j_matrix(a + math.pi), atol=1e-12)
