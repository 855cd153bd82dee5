"""Dense complex linear algebra used throughout the package.

Matrices and state vectors are plain ``numpy`` arrays of dtype ``complex128``.
Qubit 0 is the most significant bit of a computational-basis index, so
``kron(a, b)`` puts ``a`` on qubit 0.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_QUBITS = 20
ALGEBRA_TOL = 1e-12
VERIFY_TOL = 1e-9


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible or too large."""


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex matrix, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def num_qubits_of(dim: int) -> int:
    """Return ``n`` with ``2**n == dim`` or raise."""
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def kron(a, b, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Kronecker product with the left factor on the high-order qubits."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dim = a.shape[0] * b.shape[0]
    if dim > 1 << max_qubits:
        raise DimensionError(f"kron result of dimension {dim} exceeds {max_qubits} qubits")
    return np.kron(a, b)


def kron_all(ops: Sequence, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = kron(out, op, max_qubits)
    return out


def gp_distance(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` minimised over a global phase.

    Equals ``sqrt(|a|^2 + |b|^2 - 2|tr(a^H b)|)``, but is evaluated as
    ``|a - e^{it*} b|_F`` at the optimal phase ``e^{it*} = tr(b^H a)/|tr(b^H a)|``
    so that nearly equal inputs do not lose half their digits to cancellation.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def is_unitary(a, tol: float = ALGEBRA_TOL) -> bool:
    """True iff ``max |a^H a - I| <= tol`` entrywise."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    err = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(err)) <= tol)


def basis_state(bits: str) -> np.ndarray:
    """Computational basis vector, e.g. ``basis_state("01")`` is ``|01>``."""
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2) if bits else 0] = 1.0
    return v


def apply_local(op, targets: Sequence[int], state) -> np.ndarray:
    """Apply ``op`` to the qubits ``targets`` of ``state``.

    The first target is the most significant bit of ``op``'s index space; all
    other qubits see the identity.
    """
    op = np.asarray(op, dtype=complex)
    state = np.asarray(state, dtype=complex)
    n = num_qubits_of(state.shape[0])
    targets = list(targets)
    k = len(targets)
    if len(set(targets)) != k:
        raise ValueError(f"duplicate targets {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise IndexError(f"target {t} out of range for {n} qubits")
    if op.shape != (1 << k, 1 << k):
        raise DimensionError(f"operator shape {op.shape} does not act on {k} qubits")
    psi = state.reshape((2,) * n)
    gate = op.reshape((2,) * (2 * k))
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), targets))
    # tensordot leaves the gate's output axes first; move them back into place
    out = np.moveaxis(out, list(range(k)), targets)
    return out.reshape(-1)


def canonical_angle(x: float) -> float:
    """Reduce ``x`` modulo 2*pi into the interval (-pi, pi]."""
    r = math.pi - math.fmod(math.pi - x, 2 * math.pi)
    if r <= -math.pi:
        r += 2 * math.pi
    elif r > math.pi:
        r -= 2 * math.pi
    return r


def angles_close(a: float, b: float, tol: float = VERIFY_TOL) -> bool:
    """Compare two angles modulo 2*pi."""
    return abs(canonical_angle(a - b)) <= tol


_ANGLE_RE = re.compile(r"^\s*([+-]?)\s*(\d*)\s*(?:/\s*(\d+))?\s*\*?\s*pi\s*$")


def parse_angle(value) -> float:
    """Parse a float or a rational multiple of pi such as ``"-1/2pi"`` or ``"3/4 pi"``."""
    if isinstance(value, bool):
        raise ValueError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        x = float(value)
    else:
        text = str(value).strip()
        m = _ANGLE_RE.match(text)
        if m:
            sign, num, den = m.groups()
            p = int(num) if num else 1
            q = int(den) if den else 1
            if q == 0:
                raise ValueError(f"zero denominator in angle {value!r}")
            x = p * math.pi / q
            if sign == "-":
                x = -x
        else:
            try:
                x = float(text)
            except ValueError:
                raise ValueError(f"malformed angle {value!r}") from None
    if not math.isfinite(x):
        raise ValueError(f"non-finite angle {value!r}")
    return x


def rational_pi(x: float, max_den: int = 24, tol: float = VERIFY_TOL) -> Fraction | None:
    """Return ``p/q`` with ``q <= max_den`` if ``x`` is within ``tol`` of ``p/q * pi``."""
    frac = Fraction(x / math.pi).limit_denominator(max_den)
    if abs(float(frac) * math.pi - x) < tol:
        return frac
    return None


def format_pi(frac: Fraction) -> str:
    if frac == 0:
        return "0"
    if frac.denominator == 1:
        return f"{frac.numerator}pi"
    return f"{frac.numerator}/{frac.denominator}pi"


def format_angle(x: float, exact: bool = True) -> str:
    """Render an angle for text formats.

    With ``exact=True`` the rational-pi form is used only when parsing it back
    reproduces ``x`` bit for bit; otherwise ``repr`` of the float is emitted.
    """
    if x == 0:
        return "0"
    frac = rational_pi(x)
    if frac is not None:
        text = format_pi(frac)
        if not exact or parse_angle(text) == x:
            return text
    return repr(float(x))


def matrix_to_json(m) -> str:
    m = as_matrix(m)
    entries = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return json.dumps({"dim": m.shape[0], "entries": entries})


def matrix_from_json(text: str) -> np.ndarray:
    """Parse ``{"dim": d, "entries": [[re, im], ...]}`` (row-major)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid matrix JSON: {exc}") from None
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValueError('matrix JSON needs "dim" and "entries"')
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError(f"bad dim {dim!r}")
    num_qubits_of(dim)
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != dim * dim:
        n = len(entries) if isinstance(entries, list) else "?"
        raise ValueError(f"expected {dim * dim} entries, got {n}")
    values = []
    for e in entries:
        if not isinstance(e, list) or len(e) != 2:
            raise ValueError(f"entry {e!r} is not an [re, im] pair")
        values.append(complex(float(e[0]), float(e[1])))
    return as_matrix(np.array(values).reshape(dim, dim))
