"""Single-qubit and controlled-U decompositions over {J(alpha), CZ}.

A :class:`GateWord` lists gates in operator order: ``gates[0]`` is the
leftmost factor and is therefore applied *last*.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .generators import CZGate, Gate, JGate, j_matrix, j_product, pauli_rotation
from .numerics import (
    MAX_QUBITS,
    VERIFY_TOL,
    canonical_angle,
    format_angle,
    is_unitary,
    kron_all,
    parse_angle,
)

# below this, sin(gamma/2) or cos(gamma/2) is treated as exactly zero
_DEGENERATE = 1e-12


class NotUnitaryError(ValueError):
    pass


class ZXDecomposition(NamedTuple):
    """``u = e^{i alpha} Rz(beta) Rx(gamma) Rz(delta)``."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def matrix(self) -> np.ndarray:
        return (
            cmath.exp(1j * self.alpha)
            * pauli_rotation("z", self.beta)
            @ pauli_rotation("x", self.gamma)
            @ pauli_rotation("z", self.delta)
        )


class JDecomposition(NamedTuple):
    """``u = e^{i alpha} J(0) J(beta) J(gamma) J(delta)``."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def matrix(self) -> np.ndarray:
        return cmath.exp(1j * self.alpha) * j_product(0.0, self.beta, self.gamma, self.delta)

    @property
    def control_phase(self) -> float:
        """Phase applied on the control wire of controlled-U, ``alpha + (beta+gamma+delta)/2``."""
        return self.alpha + (self.beta + self.gamma + self.delta) / 2


def _check_unitary_2x2(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not is_unitary(u, VERIFY_TOL):
        err = np.max(np.abs(u.conj().T @ u - np.eye(2))) if np.all(np.isfinite(u)) else math.inf
        raise NotUnitaryError(f"matrix is not unitary (residual {err:.3g})")
    return u


def zx_decompose(u) -> ZXDecomposition:
    """Z-X-Z Euler angles of a 2x2 unitary, including the global phase.

    ``gamma`` lies in [0, pi]; the other angles are reduced to (-pi, pi].
    When ``gamma`` is 0 or pi only one combination of ``beta`` and ``delta``
    is fixed, and ``delta`` is set to 0.
    """
    u = _check_unitary_2x2(u)
    det_phase = cmath.phase(np.linalg.det(u)) / 2
    v = cmath.exp(-1j * det_phase) * u  # now in SU(2)
    c, s = abs(v[0, 0]), abs(v[1, 0])
    gamma = 2 * math.atan2(s, c)
    # v00 = e^{-i(b+d)/2} c ,  v10 = -i e^{i(b-d)/2} s
    total = -2 * cmath.phase(v[0, 0])
    diff = 2 * cmath.phase(v[1, 0]) + math.pi
    if s < _DEGENERATE:
        beta, delta = total, 0.0
    elif c < _DEGENERATE:
        beta, delta = diff, 0.0
    else:
        beta, delta = (total + diff) / 2, (total - diff) / 2
    beta, delta = canonical_angle(beta), canonical_angle(delta)
    # fit the global phase last so that 2*pi wraps above cannot flip a sign
    bare = ZXDecomposition(0.0, beta, gamma, delta).matrix()
    alpha = canonical_angle(cmath.phase(np.vdot(bare, u)))
    return ZXDecomposition(alpha, beta, gamma, delta)


def j_decompose(u) -> JDecomposition:
    """Write ``u`` as ``e^{i alpha} J(0) J(beta) J(gamma) J(delta)``."""
    zx = zx_decompose(u)
    alpha = canonical_angle(zx.alpha - (zx.beta + zx.gamma + zx.delta) / 2)
    return JDecomposition(alpha, zx.beta, zx.gamma, zx.delta)


def abc_operators(d: JDecomposition) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Auxiliary operators with ``ABC = I`` and ``e^{i phi} A X B X C = u``.

    Here ``phi = (2 alpha + beta + gamma + delta) / 2`` (see :func:`abc_phase`).
    """
    _, b, g, dl = d
    pi = math.pi
    a_op = j_product(0.0, b + pi, -g / 2, -pi / 2)
    b_op = j_product(0.0, pi / 2, g / 2, (-pi - dl - b) / 2)
    c_op = j_product(0.0, (-b + dl - pi) / 2)
    return a_op, b_op, c_op


def abc_phase(d: JDecomposition) -> float:
    return (2 * d.alpha + d.beta + d.gamma + d.delta) / 2


@dataclass(frozen=True)
class GateWord:
    """An operator-order product of J and CZ gates on ``wires`` wires."""

    wires: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if not isinstance(self.wires, int) or self.wires < 0:
            raise ValueError(f"bad wire count {self.wires!r}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for k, g in enumerate(self.gates):
            touched = (g.wire,) if isinstance(g, JGate) else g.wires
            for w in touched:
                if not 0 <= w < self.wires:
                    raise IndexError(f"gate {k} uses wire {w} outside 0..{self.wires - 1}")

    def application_order(self) -> Iterable[Gate]:
        return reversed(self.gates)

    def to_json(self) -> str:
        gates = []
        for g in self.gates:
            if isinstance(g, JGate):
                gates.append({"kind": "J", "wire": g.wire, "angle": _json_angle(g.angle)})
            else:
                gates.append({"kind": "CZ", "wires": list(g.wires)})
        return json.dumps({"wires": self.wires, "gates": gates}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "GateWord":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid circuit JSON: {exc}") from None
        if not isinstance(obj, dict) or "wires" not in obj:
            raise ValueError('circuit JSON needs "wires"')
        gates: list[Gate] = []
        for k, g in enumerate(obj.get("gates", [])):
            kind = g.get("kind") if isinstance(g, dict) else None
            if kind == "J":
                gates.append(JGate(int(g["wire"]), parse_angle(g["angle"])))
            elif kind == "CZ":
                w = g.get("wires")
                if not isinstance(w, list) or len(w) != 2:
                    raise ValueError(f"gate {k}: CZ needs a pair of wires")
                gates.append(CZGate((int(w[0]), int(w[1]))))
            else:
                raise ValueError(f"gate {k}: unknown kind {kind!r}")
        return cls(obj["wires"], tuple(gates))


Circuit = GateWord


def _json_angle(x: float):
    text = format_angle(x)
    if text.endswith("pi"):
        return text[:-2] + " pi"
    return x


def controlled_u_decompose(u) -> GateWord:
    """Controlled-``u`` on wires (0 = control, 1 = target) as a 14-factor word.

    Evaluating the word reproduces ``diag(I, u)`` including the global phase.
    """
    d = j_decompose(u)
    _, b, g, dl = d
    pi = math.pi

    def j(w, a):
        return JGate(w, a)

    cz = CZGate((0, 1))
    gates = (
        j(0, 0.0), j(0, d.control_phase),
        j(1, 0.0), j(1, b + pi), j(1, -g / 2), j(1, -pi / 2),
        j(1, 0.0), cz,
        j(1, pi / 2), j(1, g / 2), j(1, (-pi - dl - b) / 2),
        j(1, 0.0), cz,
        j(1, (-b + dl - pi) / 2),
    )  # fmt: skip
    return GateWord(2, gates)


def lift(gate: Gate, n: int) -> np.ndarray:
    """Embed a gate into the full ``2**n``-dimensional space."""
    if isinstance(gate, JGate):
        if not 0 <= gate.wire < n:
            raise IndexError(f"wire {gate.wire} out of range for {n} wires")
        ops = [np.eye(2)] * n
        ops[gate.wire] = j_matrix(gate.angle)
        return kron_all(ops)
    w1, w2 = gate.wires
    if not (0 <= w1 < n and 0 <= w2 < n):
        raise IndexError(f"wires {gate.wires} out of range for {n} wires")
    idx = np.arange(1 << n)
    both = ((idx >> (n - 1 - w1)) & 1) & ((idx >> (n - 1 - w2)) & 1)
    return np.diag(np.where(both == 1, -1.0, 1.0)).astype(complex)


def evaluate_word(word: GateWord, n: int | None = None) -> np.ndarray:
    """Matrix of ``word`` on ``n`` wires (defaults to ``word.wires``)."""
    n = word.wires if n is None else n
    if n > MAX_QUBITS:
        raise ValueError(f"{n} wires exceeds the {MAX_QUBITS}-qubit limit")
    out = np.eye(1 << n, dtype=complex)
    for g in word.gates:
        out = out @ lift(g, n)
    return out

