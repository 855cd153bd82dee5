"""The one-parameter family J(alpha), controlled-Z, and operators built from them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

SQRT1_2 = 1 / math.sqrt(2)

# Plain matrices used as independent comparison targets.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = SQRT1_2 * np.array([[1, 1], [1, -1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True)
class JGate:
    wire: int
    angle: float


@dataclass(frozen=True)
class CZGate:
    wires: tuple[int, int]

    def __post_init__(self):
        if len(self.wires) != 2 or self.wires[0] == self.wires[1]:
            raise ValueError(f"CZ needs two distinct wires, got {self.wires}")
        object.__setattr__(self, "wires", (int(self.wires[0]), int(self.wires[1])))


Gate = Union[JGate, CZGate]


def j_matrix(alpha: float) -> np.ndarray:
    """``J(alpha) = [[1, e^{i alpha}], [1, -e^{i alpha}]] / sqrt(2)``."""
    e = cmath.exp(1j * alpha)
    return SQRT1_2 * np.array([[1, e], [1, -e]], dtype=complex)


def cz_matrix() -> np.ndarray:
    return CZ.copy()


def j_product(*angles: float) -> np.ndarray:
    """``J(a0) J(a1) ... J(an)`` as a matrix product (leftmost factor first)."""
    out = np.eye(2, dtype=complex)
    for a in angles:
        out = out @ j_matrix(a)
    return out


def derived_gate(name: str, alpha: float | None = None) -> np.ndarray:
    """X, Z, H or P(alpha) written as products of J.

    >>> np.allclose(derived_gate("X"), X)
    True
    """
    key = name.upper()
    if key == "X":
        return j_product(math.pi, 0.0)
    if key == "Z":
        return j_product(0.0, math.pi)
    if key == "H":
        return j_matrix(0.0)
    if key == "P":
        if alpha is None:
            raise ValueError("P needs an angle")
        return j_product(0.0, alpha)
    raise ValueError(f"unknown gate {name!r}")


def rotation_matrix(axis: str, alpha: float) -> np.ndarray:
    """Pauli rotation ``exp(-i alpha sigma/2)`` assembled from J factors."""
    phase = cmath.exp(-0.5j * alpha)
    axis = axis.lower()
    if axis == "x":
        return phase * j_product(alpha, 0.0)
    if axis == "y":
        return phase * j_product(0.0, math.pi / 2, alpha, -math.pi / 2)
    if axis == "z":
        return phase * j_product(0.0, alpha)
    raise ValueError(f"unknown axis {axis!r}")


def phase_matrix(alpha: float) -> np.ndarray:
    return np.diag([1, cmath.exp(1j * alpha)])


def controlled(u) -> np.ndarray:
    """Block matrix ``diag(I, u)`` with the control on the first qubit."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


def pauli_rotation(axis: str, alpha: float) -> np.ndarray:
    """Textbook ``R_axis(alpha)`` from cos/sin, independent of the J forms."""
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    axis = axis.lower()
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "z":
        return np.diag([cmath.exp(-0.5j * alpha), cmath.exp(0.5j * alpha)])
    raise ValueError(f"unknown axis {axis!r}")
