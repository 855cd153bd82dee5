"""State-vector execution of patterns, branch by branch.

Measured qubits are projected out rather than kept collapsed, and qubits
are only added to the register (in ``|+>``) when first touched; both keep
the live state small for chain-like patterns.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .numerics import VERIFY_TOL, gp_distance, num_qubits_of
from .pattern import Entangle, Measure, Pattern, QubitId, XCorrect, ZCorrect

Outcome = Mapping[QubitId, int]

MAX_ALL_BRANCH_MEASUREMENTS = 12
MAX_ALL_BRANCH_INPUTS = 4

_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


class SimulationError(ValueError):
    pass


class BudgetExceeded(SimulationError):
    pass


class BranchSimulator:
    """Mutable register for stepping through one branch of a pattern.

    The register is a tensor whose leading axis is a batch axis (one slot
    per input column when extracting a map) followed by one axis per live
    qubit, in the order of :attr:`labels`.
    """

    def __init__(self, inputs: Sequence[QubitId], data: np.ndarray):
        self.labels: list[QubitId] = list(inputs)
        k = len(self.labels)
        data = np.asarray(data, dtype=complex)
        if data.ndim == 1:
            data = data[np.newaxis, :]
        if data.shape[1] != 1 << k:
            raise SimulationError(f"input has dimension {data.shape[1]}, expected {1 << k}")
        self.tensor = data.reshape((data.shape[0],) + (2,) * k)

    def copy(self) -> "BranchSimulator":
        other = object.__new__(BranchSimulator)
        other.labels = list(self.labels)
        other.tensor = self.tensor.copy()
        return other

    def _axis(self, q: QubitId) -> int:
        try:
            return 1 + self.labels.index(q)
        except ValueError:
            # first appearance of a non-input qubit: prepare it in |+>
            self.tensor = np.multiply.outer(self.tensor, _PLUS)
            self.labels.append(q)
            return len(self.labels)

    def entangle(self, i: QubitId, j: QubitId) -> None:
        ai, aj = self._axis(i), self._axis(j)
        idx = [slice(None)] * self.tensor.ndim
        idx[ai] = 1
        idx[aj] = 1
        self.tensor = self.tensor.copy()
        self.tensor[tuple(idx)] *= -1

    def measure(self, q: QubitId, angle: float, bit: int) -> None:
        """Project onto ``<+_angle|`` (bit 0) or ``<-_angle|`` (bit 1) and drop the qubit."""
        a = self._axis(q)
        sign = -1 if bit else 1
        bra = np.array([1, sign * cmath.exp(-1j * angle)]) / math.sqrt(2)
        self.tensor = np.tensordot(self.tensor, bra, axes=([a], [0]))
        self.labels.remove(q)

    def pauli(self, q: QubitId, kind: str) -> None:
        a = self._axis(q)
        if kind == "X":
            self.tensor = np.flip(self.tensor, axis=a)
        else:
            idx = [slice(None)] * self.tensor.ndim
            idx[a] = 1
            self.tensor = self.tensor.copy()
            self.tensor[tuple(idx)] *= -1

    def apply(self, cmd, outcome: Outcome) -> None:
        if isinstance(cmd, Entangle):
            self.entangle(cmd.i, cmd.j)
        elif isinstance(cmd, Measure):
            if cmd.qubit not in outcome:
                raise SimulationError(f"outcome has no bit for measured qubit {cmd.qubit!r}")
            self.measure(cmd.qubit, cmd.angle, int(outcome[cmd.qubit]) & 1)
        elif isinstance(cmd, (XCorrect, ZCorrect)):
            parity = 0
            for s in cmd.signal:
                if s not in outcome:
                    raise SimulationError(f"signal refers to {s!r} which has no outcome")
                parity ^= int(outcome[s]) & 1
            if parity:
                self.pauli(cmd.qubit, "X" if isinstance(cmd, XCorrect) else "Z")
        else:
            raise SimulationError(f"unknown command {cmd!r}")

    def norm_squared(self) -> np.ndarray:
        """Squared norm of each batch slot."""
        flat = self.tensor.reshape(self.tensor.shape[0], -1)
        return np.einsum("bi,bi->b", flat.conj(), flat).real

    def output(self, outputs: Sequence[QubitId]) -> np.ndarray:
        """Batch of output vectors, qubits permuted into ``outputs`` order."""
        for q in outputs:
            self._axis(q)
        if set(self.labels) != set(outputs):
            extra = sorted(set(self.labels) - set(outputs))
            raise SimulationError(f"unmeasured non-output qubits {extra}")
        order = [0] + [1 + self.labels.index(q) for q in outputs]
        t = np.transpose(self.tensor, order)
        return t.reshape(t.shape[0], -1)


def _run(p: Pattern, data: np.ndarray, outcome: Outcome) -> np.ndarray:
    sim = BranchSimulator(p.inputs, data)
    for cmd in p.commands:
        sim.apply(cmd, outcome)
    return sim.output(p.outputs)


def run_branch(p: Pattern, state, outcome: Outcome) -> np.ndarray:
    """Run one branch on an input state; the returned output state is sub-normalised."""
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise SimulationError("run_branch takes a single state vector")
    num_qubits_of(state.shape[0])
    return _run(p, state, outcome)[0]


def extract_map(p: Pattern, outcome: Outcome) -> np.ndarray:
    """Unnormalised linear map (outputs x inputs) of one branch."""
    cols = _run(p, np.eye(1 << len(p.inputs), dtype=complex), outcome)
    return cols.T


def zero_outcome(p: Pattern) -> dict[QubitId, int]:
    return {q: 0 for q in p.measured}


def implemented_map(p: Pattern) -> np.ndarray:
    """All-zero branch map rescaled by ``2**(m/2)``; phase is left untouched."""
    m = len(p.measured)
    return extract_map(p, zero_outcome(p)) * 2 ** (m / 2)


def branch_norm(m: np.ndarray) -> float:
    """Root-mean-square singular value, ``|m|_F / sqrt(#columns)``."""
    return float(np.linalg.norm(m) / math.sqrt(m.shape[1]))


def normalize_phase(m: np.ndarray) -> np.ndarray:
    """Rotate ``m`` so its largest-magnitude entry (lowest index on ties) is real positive."""
    flat = m.reshape(-1)
    mags = np.abs(flat)
    top = mags.max()
    if top == 0:
        return m.copy()
    k = int(np.flatnonzero(mags >= top * (1 - 1e-9))[0])
    return m * (abs(flat[k]) / flat[k])


def enumerate_outcomes(p: Pattern) -> list[dict[QubitId, int]]:
    meas = p.measured
    return [dict(zip(meas, bits)) for bits in itertools.product((0, 1), repeat=len(meas))]


def sample_outcomes(p: Pattern, n: int, seed: int = 0) -> list[dict[QubitId, int]]:
    """The all-zero branch followed by ``n`` uniformly random branches."""
    meas = p.measured
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(n, len(meas)))
    return [zero_outcome(p)] + [dict(zip(meas, map(int, row))) for row in bits]


@dataclass(frozen=True)
class BranchReport:
    outcome: dict[QubitId, int]
    map: np.ndarray
    norm: float
    phase: float  # relative to the reference (all-zero) branch


@dataclass(frozen=True)
class VerificationReport:
    deterministic: bool  # every branch equals the reference up to a phase
    strictly_deterministic: bool  # ... with no phase either
    uniform: bool
    implemented: np.ndarray
    reference_map: np.ndarray
    max_branch_deviation: float
    branches: tuple[BranchReport, ...]
    num_measurements: int

    @property
    def branch_count(self) -> int:
        return len(self.branches)


def verify_pattern(p: Pattern, branches: str | int = "all", seed: int = 0, tol: float = VERIFY_TOL) -> VerificationReport:
    """Simulate branches of ``p`` and check that they all realise the same map.

    Parameters
    ----------
    p : Pattern
        Pattern to check.
    branches : "all" or int
        ``"all"`` enumerates every outcome (limited to 12 measurements and 4
        inputs); an integer ``n`` samples ``n`` random branches with ``seed``
        in addition to the all-zero reference branch.
    tol : float
        Tolerance on branch deviations, measured after rescaling each branch
        by ``2**(m/2)`` so it is comparable with a unitary.

    Returns
    -------
    VerificationReport
        ``implemented`` is the phase-normalised reference map;
        ``reference_map`` keeps its original phase.
    """
    m = len(p.measured)
    if branches == "all":
        if m > MAX_ALL_BRANCH_MEASUREMENTS or len(p.inputs) > MAX_ALL_BRANCH_INPUTS:
            raise BudgetExceeded(
                f"{m} measurements and {len(p.inputs)} inputs exceed the exhaustive budget; "
                "use a random branch strategy"
            )
        outcomes = enumerate_outcomes(p)
    elif isinstance(branches, int) and not isinstance(branches, bool) and branches >= 0:
        outcomes = sample_outcomes(p, branches, seed)
    else:
        raise ValueError(f"bad branch strategy {branches!r}")

    scale = 2 ** (m / 2)
    reference = extract_map(p, outcomes[0]) * scale
    ref_sq = np.vdot(reference, reference).real
    reports = []
    deterministic = strict = uniform = True
    worst = 0.0
    for oc in outcomes:
        bm = extract_map(p, oc)
        scaled = bm * scale
        overlap = np.vdot(reference, scaled)
        phase = cmath.phase(overlap) if abs(overlap) > 0 else 0.0
        dev = gp_distance(scaled, reference)
        strict_dev = float(np.linalg.norm(scaled - reference))
        worst = max(worst, dev)
        norm = branch_norm(bm)
        deterministic &= dev <= tol
        strict &= strict_dev <= tol
        uniform &= abs(norm * scale - 1) <= tol
        reports.append(BranchReport(oc, bm, norm, phase))
    if ref_sq == 0:
        deterministic = strict = False
    return VerificationReport(
        deterministic=deterministic,
        strictly_deterministic=strict,
        uniform=uniform,
        implemented=normalize_phase(reference),
        reference_map=reference,
        max_branch_deviation=worst,
        branches=tuple(reports),
        num_measurements=m,
    )
