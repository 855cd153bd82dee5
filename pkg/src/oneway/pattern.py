"""Measurement patterns for the one-way model.

A pattern stores its commands in *application order*: ``commands[0]`` runs
first. Written measurement-calculus expressions read right to left, so the
expression ``X_2^{s_1} M_1^{-a} E_12`` becomes ``[E(1,2), M(1,-a), X(2,{1})]``.
Non-input qubits start in ``|+>``.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .decomp import GateWord, controlled_u_decompose
from .generators import JGate
from .numerics import format_angle, parse_angle

QubitId = str


@dataclass(frozen=True)
class Entangle:
    i: QubitId
    j: QubitId

    @property
    def qubits(self) -> tuple[QubitId, ...]:
        return (self.i, self.j)


@dataclass(frozen=True)
class Measure:
    """xy-plane measurement; outcome 0 projects onto ``|+_angle>``."""

    qubit: QubitId
    angle: float

    @property
    def qubits(self) -> tuple[QubitId, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class XCorrect:
    qubit: QubitId
    signal: frozenset[QubitId] = frozenset()

    @property
    def qubits(self) -> tuple[QubitId, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class ZCorrect:
    qubit: QubitId
    signal: frozenset[QubitId] = frozenset()

    @property
    def qubits(self) -> tuple[QubitId, ...]:
        return (self.qubit,)


Command = Union[Entangle, Measure, XCorrect, ZCorrect]


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class Pattern:
    qubits: tuple[QubitId, ...]
    inputs: tuple[QubitId, ...]
    outputs: tuple[QubitId, ...]
    commands: tuple[Command, ...] = ()
    name: str = field(default="pattern", compare=False)

    def __post_init__(self):
        for attr in ("qubits", "inputs", "outputs", "commands"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))

    @property
    def measured(self) -> tuple[QubitId, ...]:
        """Measured qubits in the order they are measured."""
        return tuple(c.qubit for c in self.commands if isinstance(c, Measure))

    @property
    def edges(self) -> list[tuple[QubitId, QubitId]]:
        return [(c.i, c.j) for c in self.commands if isinstance(c, Entangle)]

    def relabel(self, mapping: Mapping[QubitId, QubitId] | None = None, prefix: str = "") -> "Pattern":
        """Rename qubits through ``mapping``; unmapped labels get ``prefix`` prepended."""
        mapping = mapping or {}

        def f(q):
            return mapping.get(q, prefix + q)

        cmds = []
        for c in self.commands:
            if isinstance(c, Entangle):
                cmds.append(Entangle(f(c.i), f(c.j)))
            elif isinstance(c, Measure):
                cmds.append(Measure(f(c.qubit), c.angle))
            else:
                cmds.append(type(c)(f(c.qubit), frozenset(f(q) for q in c.signal)))
        return Pattern(
            _dedupe(f(q) for q in self.qubits),
            tuple(f(q) for q in self.inputs),
            tuple(f(q) for q in self.outputs),
            tuple(cmds),
            self.name,
        )


def _dedupe(items: Iterable[QubitId]) -> tuple[QubitId, ...]:
    return tuple(dict.fromkeys(items))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    index: int | None
    detail: str

    def __str__(self):
        where = "" if self.index is None else f" (command {self.index})"
        return f"{self.kind}{where}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok


def validate(p: Pattern) -> ValidationReport:
    """Check the structural invariants of ``p`` and report every violation."""
    out: list[Violation] = []
    qubits = set(p.qubits)
    if len(qubits) != len(p.qubits):
        out.append(Violation("duplicate qubit", None, "qubit declared twice"))
    for role, seq in (("input", p.inputs), ("output", p.outputs)):
        if len(set(seq)) != len(seq):
            out.append(Violation(f"duplicate {role}", None, f"{role}s {list(seq)}"))
        for q in seq:
            if q not in qubits:
                out.append(Violation(f"unknown {role}", None, f"{q!r} is not a declared qubit"))
    outputs = set(p.outputs)
    measured_at: dict[QubitId, int] = {}
    touched: set[QubitId] = set()
    for k, c in enumerate(p.commands):
        for q in c.qubits:
            if q not in qubits:
                out.append(Violation("unknown qubit", k, f"{q!r} is not a declared qubit"))
            if q in measured_at:
                out.append(Violation("used after measurement", k, f"{q!r} measured at command {measured_at[q]}"))
        if isinstance(c, Entangle):
            if c.i == c.j:
                out.append(Violation("self entanglement", k, f"E on {c.i!r} twice"))
            touched.update(c.qubits)
        elif isinstance(c, Measure):
            if c.qubit in outputs:
                out.append(Violation("output measured", k, f"{c.qubit!r} is an output"))
            if not math.isfinite(c.angle):
                out.append(Violation("bad angle", k, repr(c.angle)))
            touched.add(c.qubit)
            measured_at.setdefault(c.qubit, k)
        else:
            for s in c.signal:
                if s not in measured_at:
                    out.append(Violation("forward dependency", k, f"signal uses unmeasured {s!r}"))
    for q in p.qubits:
        if q not in outputs and q not in measured_at:
            out.append(Violation("not measured", None, f"non-output {q!r} is never measured"))
    inputs = set(p.inputs)
    for q in p.qubits:
        if q not in inputs and q not in touched:
            out.append(Violation("unused qubit", None, f"non-input {q!r} is never entangled or measured"))
    return ValidationReport(tuple(out))


def ensure_valid(p: Pattern) -> Pattern:
    report = validate(p)
    if not report.ok:
        raise PatternError("; ".join(str(v) for v in report.violations))
    return p


# ---------------------------------------------------------------------------
# generator patterns and combinators


def j_pattern(alpha: float, in_label: QubitId = "1", out_label: QubitId = "2") -> Pattern:
    """Two-qubit pattern implementing ``J(alpha)``: ``X_2^{s_1} M_1^{-alpha} E_12``."""
    if in_label == out_label:
        raise PatternError("j_pattern needs two distinct labels")
    return Pattern(
        (in_label, out_label),
        (in_label,),
        (out_label,),
        (
            Entangle(in_label, out_label),
            Measure(in_label, -alpha),
            XCorrect(out_label, frozenset({in_label})),
        ),
        name=f"J({format_angle(alpha)})",
    )


def cz_pattern(l1: QubitId = "1", l2: QubitId = "2") -> Pattern:
    """The single-command pattern ``E_12`` with both qubits as inputs and outputs."""
    if l1 == l2:
        raise PatternError("cz_pattern needs two distinct labels")
    return Pattern((l1, l2), (l1, l2), (l1, l2), (Entangle(l1, l2),), name="CZ")


def identity_pattern(labels: Sequence[QubitId]) -> Pattern:
    """Empty command sequence; with no labels this is the unit for :func:`tensor`."""
    labels = tuple(labels)
    return Pattern(labels, labels, labels, (), name="id")


def permutation_pattern(labels: Sequence[QubitId], perm: Sequence[int]) -> Pattern:
    """Empty pattern whose ``k``-th output is input ``perm[k]``."""
    labels = tuple(labels)
    if sorted(perm) != list(range(len(labels))):
        raise PatternError(f"{list(perm)} is not a permutation of {len(labels)} items")
    return Pattern(labels, labels, tuple(labels[k] for k in perm), (), name="perm")


def tensor(p1: Pattern, p2: Pattern) -> Pattern:
    """Juxtapose two patterns; ``p1`` qubits get prefix ``L/``, ``p2`` qubits ``R/``."""
    a = p1.relabel(prefix="L/")
    b = p2.relabel(prefix="R/")
    return Pattern(
        a.qubits + b.qubits,
        a.inputs + b.inputs,
        a.outputs + b.outputs,
        a.commands + b.commands,
        name=f"({p1.name} x {p2.name})",
    )


def compose(p2: Pattern, p1: Pattern) -> Pattern:
    """Run ``p1`` then ``p2``, feeding ``p1``'s k-th output into ``p2``'s k-th input.

    The result implements ``map(p2) @ map(p1)``. Qubits from ``p1`` get the
    prefix ``R/``; the non-input qubits of ``p2`` get ``L/``.
    """
    if len(p1.outputs) != len(p2.inputs):
        raise PatternError(f"cannot compose: {len(p1.outputs)} outputs vs {len(p2.inputs)} inputs")
    a = p1.relabel(prefix="R/")
    glue = dict(zip(p2.inputs, a.outputs))
    b = p2.relabel(glue, prefix="L/")
    return Pattern(
        _dedupe(a.qubits + b.qubits),
        a.inputs,
        b.outputs,
        a.commands + b.commands,
        name=f"{p2.name} . {p1.name}",
    )


# ---------------------------------------------------------------------------
# compiler


def compile_circuit(circuit: GateWord, labels: Sequence[Sequence[QubitId]] | None = None, name: str = "circuit") -> Pattern:
    """Lower a J/CZ circuit to a pattern, one frontier qubit per wire.

    ``labels[w]`` optionally names the successive qubits used on wire ``w``
    (input first); by default they are ``"w.k"``.
    """
    n = circuit.wires
    counts = [1] * n
    for g in circuit.gates:
        if isinstance(g, JGate):
            counts[g.wire] += 1
    if labels is None:
        labels = [[f"{w}.{k}" for k in range(counts[w])] for w in range(n)]
    else:
        labels = [list(seq) for seq in labels]
        if len(labels) != n or any(len(labels[w]) < counts[w] for w in range(n)):
            raise PatternError("not enough labels for the circuit's qubits")
        flat = [q for w in range(n) for q in labels[w][: counts[w]]]
        if len(set(flat)) != len(flat):
            raise PatternError("compile labels must be distinct")

    used = [0] * n
    frontier = [labels[w][0] for w in range(n)]
    qubits = list(frontier)
    commands: list[Command] = []
    for g in circuit.application_order():
        if isinstance(g, JGate):
            w = g.wire
            used[w] += 1
            q, fresh = frontier[w], labels[w][used[w]]
            commands += [Entangle(q, fresh), Measure(q, -g.angle), XCorrect(fresh, frozenset({q}))]
            frontier[w] = fresh
            qubits.append(fresh)
        else:
            w1, w2 = g.wires
            commands.append(Entangle(frontier[w1], frontier[w2]))
    return Pattern(tuple(qubits), tuple(labels[w][0] for w in range(n)), tuple(frontier), tuple(commands), name=name)


CONTROL_LABELS = ("A", "B", "C")
TARGET_LABELS = tuple(string.ascii_lowercase[:11])  # a .. k


def controlled_u_pattern(u) -> Pattern:
    """14-qubit pattern for controlled-``u`` with inputs (A, a) and outputs (C, k).

    Uppercase qubits carry the control wire, lowercase the target wire.
    """
    word = controlled_u_decompose(u)
    return compile_circuit(word, labels=[CONTROL_LABELS, TARGET_LABELS], name="controlled-U")


# ---------------------------------------------------------------------------
# text format


def serialize_pattern(p: Pattern) -> str:
    """Render ``p`` in the line-based text format (commands in application order)."""
    lines = [
        f"pattern {p.name}",
        "qubits: " + ",".join(p.qubits),
        "inputs: " + ",".join(p.inputs),
        "outputs: " + ",".join(p.outputs),
    ]
    for c in p.commands:
        if isinstance(c, Entangle):
            lines.append(f"E {c.i} {c.j}")
        elif isinstance(c, Measure):
            lines.append(f"M {c.qubit} {format_angle(c.angle)}")
        else:
            tag = "X" if isinstance(c, XCorrect) else "Z"
            lines.append(f"{tag} {c.qubit} [{'+'.join(sorted(c.signal))}]")
    return "\n".join(lines) + "\n"


class PatternSyntaxError(PatternError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _id_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_pattern(text: str, check: bool = True) -> Pattern:
    """Parse the text format. With ``check`` the result must also validate."""
    name = None
    header: dict[str, list[str]] = {}
    commands: list[Command] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            if not line.startswith("pattern"):
                raise PatternSyntaxError(lineno, "expected 'pattern <name>'")
            name = line[len("pattern"):].strip() or "pattern"
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() in ("qubits", "inputs", "outputs"):
            key = key.strip()
            if key in header:
                raise PatternSyntaxError(lineno, f"repeated '{key}' line")
            ids = _id_list(rest)
            if len(set(ids)) != len(ids):
                raise PatternSyntaxError(lineno, f"duplicate qubit in '{key}'")
            header[key] = ids
            continue
        parts = line.split()
        op = parts[0]
        try:
            if op == "E" and len(parts) == 3:
                commands.append(Entangle(parts[1], parts[2]))
            elif op == "M" and len(parts) == 3:
                commands.append(Measure(parts[1], parse_angle(parts[2])))
            elif op in ("X", "Z") and len(parts) in (2, 3):
                sig = parts[2] if len(parts) == 3 else "[]"
                if not (sig.startswith("[") and sig.endswith("]")):
                    raise ValueError(f"malformed signal {sig!r}")
                ids = [t for t in sig[1:-1].split("+") if t]
                cls = XCorrect if op == "X" else ZCorrect
                commands.append(cls(parts[1], frozenset(ids)))
            else:
                raise ValueError(f"unrecognised command {line!r}")
        except ValueError as exc:
            raise PatternSyntaxError(lineno, str(exc)) from None
    if name is None:
        raise PatternSyntaxError(1, "empty pattern text")
    for key in ("qubits", "inputs", "outputs"):
        if key not in header:
            raise PatternSyntaxError(len(text.splitlines()), f"missing '{key}' line")
    p = Pattern(tuple(header["qubits"]), tuple(header["inputs"]), tuple(header["outputs"]), tuple(commands), name)
    if check:
        ensure_valid(p)
    return p
