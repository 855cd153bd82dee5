"""Shared test utilities: seeded Haar unitaries and a dense reference simulator."""

import math

import numpy as np

from oneway.pattern import Entangle, Measure, XCorrect

# Test corpora draw from numpy's PCG64 with these fixed seeds.
SEED_UNITARIES = 20240521
SEED_ANGLES = 7
SEED_CIRCUITS = 1234


def haar_unitary(rng, dim=2):
    """Haar-random unitary via QR of a complex Ginibre matrix (phase-corrected)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unitary_corpus(n, seed=SEED_UNITARIES):
    rng = np.random.default_rng(seed)
    return [haar_unitary(rng) for _ in range(n)]


def _op_on(op, k, n, psi):
    """Apply single-qubit ``op`` to qubit ``k`` of an ``n``-qubit vector."""
    t = psi.reshape(1 << k, 2, 1 << (n - k - 1))
    return np.einsum("ab,ibj->iaj", op, t).reshape(-1)


def dense_branch_map(p, outcome):
    """Branch map computed on the full register with every qubit allocated upfront.

    Measurements are applied as rank-one projectors (the qubit is kept) and
    traced out at the end by reading the measured qubits' final basis values.
    """
    order = list(p.inputs) + [q for q in p.qubits if q not in p.inputs]
    n = len(order)
    pos = {q: k for k, q in enumerate(order)}
    plus = np.array([1, 1]) / math.sqrt(2)
    aux = np.ones(1)
    for _ in range(n - len(p.inputs)):
        aux = np.kron(aux, plus)
    columns = []
    for col in range(1 << len(p.inputs)):
        psi_in = np.zeros(1 << len(p.inputs), dtype=complex)
        psi_in[col] = 1
        psi = np.kron(psi_in, aux)
        for c in p.commands:
            if isinstance(c, Entangle):
                i, j = pos[c.i], pos[c.j]
                idx = np.arange(1 << n)
                both = ((idx >> (n - 1 - i)) & 1) & ((idx >> (n - 1 - j)) & 1)
                psi = np.where(both == 1, -psi, psi)
            elif isinstance(c, Measure):
                s = outcome[c.qubit]
                v = np.array([1, (-1) ** s * np.exp(1j * c.angle)]) / math.sqrt(2)
                # collapse onto |0> after projecting so the qubit can be dropped later
                proj = np.outer([1, 0], v.conj())
                psi = _op_on(proj, pos[c.qubit], n, psi)
            else:
                if sum(outcome[q] for q in c.signal) % 2:
                    pauli = np.array([[0, 1], [1, 0]]) if isinstance(c, XCorrect) else np.diag([1, -1])
                    psi = _op_on(pauli, pos[c.qubit], n, psi)
        # measured qubits are all |0> now; read off output amplitudes in declared order
        t = psi.reshape((2,) * n)
        index = tuple(0 if q in p.measured else slice(None) for q in order)
        kept = [q for q in order if q not in p.measured]
        t = np.transpose(t[index], [kept.index(q) for q in p.outputs])
        columns.append(t.reshape(-1))
    return np.array(columns).T
