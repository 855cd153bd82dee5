"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) before
asserting, so a failing criterion is still reported alongside the others.
"""

import io
import json
import math
import time
from pathlib import Path

import numpy as np

from helpers import SEED_ANGLES, SEED_CIRCUITS, dense_branch_map, unitary_corpus
from oneway.cli import main
from oneway.decomp import abc_operators, abc_phase, controlled_u_decompose, evaluate_word, j_decompose
from oneway.generators import CX, CZ, H, I2, X, Z, controlled, derived_gate, j_matrix, j_product, phase_matrix
from oneway.graphs import build_graph, cycle_lengths, extreme_path_lengths, is_even, two_colour
from oneway.numerics import gp_distance, matrix_to_json
from oneway.pattern import (
    compile_circuit,
    compose,
    controlled_u_pattern,
    cz_pattern,
    identity_pattern,
    j_pattern,
    permutation_pattern,
    serialize_pattern,
    tensor,
)
from oneway.simulate import enumerate_outcomes, extract_map, implemented_map, verify_pattern
from test_graphs import _random_even_pattern
from test_simulate import random_circuit

GOLDEN = Path(__file__).parent / "golden"


def maxabs(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def test_criterion_1_generator_identities(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED_ANGLES)
    angles = rng.uniform(-2 * math.pi, 2 * math.pi, (200, 2))
    worst = maxabs(j_product(0.0, 0.0), I2)
    worst = max(worst, maxabs(derived_gate("X"), X), maxabs(derived_gate("Z"), Z), maxabs(derived_gate("H"), H))
    for a, b in angles:
        ja, jb = j_matrix(a), j_matrix(b)
        worst = max(
            worst,
            maxabs(ja @ j_matrix(0.0) @ jb, j_matrix(a + b)),
            maxabs(ja @ j_matrix(math.pi) @ jb, np.exp(1j * a) * Z @ j_matrix(b - a)),
            maxabs(X @ ja, j_matrix(a + math.pi)),
            maxabs(ja @ Z, j_matrix(a + math.pi)),
            maxabs(derived_gate("P", a), phase_matrix(a)),
        )
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    criterion("1 generator identities", ok, f"max err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_j_decomposition_round_trip(criterion):
    t0 = time.perf_counter()
    worst = max(maxabs(j_decompose(u).matrix(), u) for u in unitary_corpus(1000))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 5.0
    criterion("2 J-decomposition round trip", ok, f"max err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_controlled_u(criterion):
    t0 = time.perf_counter()
    corpus = unitary_corpus(1000)
    abc_err = 0.0
    for u in corpus:
        d = j_decompose(u)
        a, b, c = abc_operators(d)
        abc_err = max(abc_err, maxabs(a @ b @ c, I2), maxabs(np.exp(1j * abc_phase(d)) * a @ X @ b @ X @ c, u))
    cu_err = max(maxabs(evaluate_word(controlled_u_decompose(u)), controlled(u)) for u in corpus[:100])
    elapsed = time.perf_counter() - t0
    ok = abc_err <= 1e-10 and cu_err <= 1e-9 and elapsed < 10.0
    criterion("3 ABC and controlled-U words", ok, f"abc {abc_err:.1e}, word {cu_err:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_4_pattern_semantics(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED_ANGLES + 1)
    ok_flags, worst = True, 0.0
    for a in rng.uniform(-math.pi, math.pi, 100):
        r = verify_pattern(j_pattern(a), "all")
        ok_flags &= r.deterministic and r.uniform
        worst = max(worst, gp_distance(r.implemented, j_matrix(a)))
    cz = verify_pattern(cz_pattern(), "all")
    cz_exact = cz.strictly_deterministic and np.array_equal(cz.reference_map, CZ)
    elapsed = time.perf_counter() - t0
    ok = ok_flags and worst <= 1e-12 and cz_exact and elapsed < 5.0
    criterion("4 J and CZ pattern semantics", ok, f"max gp_distance {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_controlled_u_pattern(criterion):
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    for k, u in enumerate(unitary_corpus(5)):
        p = controlled_u_pattern(u)
        g = build_graph(p)
        lengths = extreme_path_lengths(g)
        r = verify_pattern(p, 256, seed=k)
        dist = gp_distance(r.implemented, controlled(u))
        worst = max(worst, dist)
        checks = {
            "qubits": len(p.qubits) == 14,
            "inputs": set(p.inputs) == {"A", "a"},
            "outputs": set(p.outputs) == {"C", "k"},
            "cycles": set(cycle_lengths(g)) == {6},
            "paths": {2, 6, 10} <= lengths and all(n % 2 == 0 for n in lengths),
            "even": is_even(g).even,
            "bipartite": two_colour(g).bipartite,
            "simulation": r.deterministic and dist <= 1e-9,
        }
        failures += [f"u{k}:{name}" for name, good in checks.items() if not good]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 180.0
    detail = f"max gp_distance {worst:.1e}, {elapsed:.2f}s" + (f", failed {failures}" if failures else "")
    criterion("5 controlled-U pattern structure and simulation", ok, detail)
    assert ok


def test_criterion_6_compiler_soundness(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED_CIRCUITS)
    worst = 0.0
    for _ in range(50):
        c = random_circuit(rng, max_wires=3, max_gates=8)
        worst = max(worst, maxabs(implemented_map(compile_circuit(c)), evaluate_word(c)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 120.0
    criterion("6 compiler soundness", ok, f"max err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_7_evenness_closure(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED_CIRCUITS + 7)
    broken = 0
    for _ in range(200):
        n1, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        p1, p2 = _random_even_pattern(rng, n1), _random_even_pattern(rng, n2)
        q = _random_even_pattern(rng, n1)
        broken += (not is_even(tensor(p1, p2)).even) + (not is_even(compose(q, p1)).even)
    elapsed = time.perf_counter() - t0
    ok = broken == 0 and elapsed < 5.0
    criterion("7 evenness closure", ok, f"{broken} odd results, {elapsed:.2f}s")
    assert ok


def _small_corpus():
    rng = np.random.default_rng(SEED_CIRCUITS + 8)
    patterns = [j_pattern(a) for a in rng.uniform(-math.pi, math.pi, 10)]
    patterns += [cz_pattern(), identity_pattern(["p", "q"]), permutation_pattern(["p", "q", "r"], [1, 2, 0])]
    patterns += [compose(j_pattern(0.3), j_pattern(-1.1)), tensor(j_pattern(0.5), cz_pattern())]
    patterns += [compile_circuit(random_circuit(rng)) for _ in range(40)]
    return [p for p in patterns if len(p.measured) <= 6]


def test_criterion_8_branch_completeness(criterion):
    t0 = time.perf_counter()
    corpus = _small_corpus()
    worst = oracle = 0.0
    for p in corpus:
        maps = [extract_map(p, oc) for oc in enumerate_outcomes(p)]
        total = sum(m.conj().T @ m for m in maps)
        worst = max(worst, maxabs(total, np.eye(1 << len(p.inputs))))
        # cross-check the branch maps themselves against the dense simulator
        oracle = max(oracle, maxabs(maps[-1], dense_branch_map(p, enumerate_outcomes(p)[-1])))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and oracle <= 1e-12 and elapsed < 30.0
    criterion("8 branch completeness", ok, f"{len(corpus)} patterns, max err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def _cli(*argv):
    return main(list(argv), out=io.StringIO())


def test_criterion_9_golden_and_exit_codes(tmp_path, criterion, capsys):
    golden_ok = serialize_pattern(controlled_u_pattern(X)) == (GOLDEN / "cu_x.pattern").read_text()

    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    x, cx, cz = write("x.json", matrix_to_json(X)), write("cx.json", matrix_to_json(CX)), write("cz.json", matrix_to_json(CZ))
    bad = write("bad.json", matrix_to_json(2 * I2))
    junk = write("junk.json", "not json")
    pat = str(GOLDEN / "cu_x.pattern")
    broken = write("broken.pattern", "pattern p\nqubits: 1,2\ninputs: 1\noutputs: 2\nM 2 0\n")
    circ = write("c.json", json.dumps({"wires": 1, "gates": [{"kind": "J", "wire": 0, "angle": 0}]}))
    cases = [
        (("decompose", "--matrix", x), 0),
        (("decompose", "--matrix", x, "--kind", "cu"), 0),
        (("decompose", "--matrix", bad), 2),
        (("decompose", "--matrix", junk), 2),
        (("compile", "--cu", x), 0),
        (("compile", "--circuit", circ), 0),
        (("compile", "--cu", bad), 2),
        (("verify", "--pattern", pat, "--matrix", cx, "--branches", "random:16"), 0),
        (("verify", "--pattern", pat, "--matrix", cz, "--branches", "random:16"), 1),
        (("verify", "--pattern", broken, "--matrix", x), 2),
        (("graph", "--pattern", pat, "--check", "even"), 0),
        (("graph", "--pattern", broken), 2),
    ]
    wrong = [(" ".join(a[:1]), want, got) for a, want in cases if (got := _cli(*a)) != want]
    capsys.readouterr()
    ok = golden_ok and not wrong
    detail = f"golden {'match' if golden_ok else 'MISMATCH'}, {len(cases) - len(wrong)}/{len(cases)} exit codes"
    criterion("9 golden pattern and CLI exit codes", ok, detail)
    assert ok
