"""Unitaries over the generators {J(alpha), CZ} and their one-way patterns."""

from .decomp import (
    GateWord,
    JDecomposition,
    ZXDecomposition,
    abc_operators,
    controlled_u_decompose,
    evaluate_word,
    j_decompose,
    zx_decompose,
)
from .generators import CZGate, JGate, cz_matrix, derived_gate, j_matrix, rotation_matrix
from .graphs import build_graph, cycle_lengths, extreme_path_lengths, is_even, two_colour
from .numerics import apply_local, gp_distance, is_unitary, kron
from .pattern import (
    Pattern,
    compile_circuit,
    compose,
    controlled_u_pattern,
    cz_pattern,
    j_pattern,
    parse_pattern,
    serialize_pattern,
    tensor,
    validate,
)
from .simulate import extract_map, run_branch, verify_pattern

__version__ = "0.1.0"
