"""Compile real matrices into permutation-based block-encoding circuits.

Pipeline: scale to doubly stochastic, Birkhoff-decompose into weighted
permutations, synthesise each permutation from multi-controlled X gates,
wrap them in a prepare/select/unprepare circuit, optimise, and verify by
dense simulation.
"""

from .birkhoff import BirkhoffDecomposition, Term, birkhoff_decompose, perfect_matching, reconstruct, truncate
from .circuit import Circuit, ControlledBlock, ControlTerm, MCXGate, RyGate, flatten, validate
from .matrix import (
    ScalingResult,
    circulant_scale,
    embed_row_stochastic,
    is_doubly_stochastic,
    sinkhorn_scale,
)
from .optimizer import commutes, group_pass, optimize, reduce_pass, reorder_pass
from .permutation import (
    Cycle,
    Permutation,
    Transposition,
    compose,
    cycle_to_transpositions,
    from_cycles,
    inverse,
    matrix_of,
    to_cycles,
)
from .pipeline import compile_matrix
from .simulator import encoded_block, unitary_of, verify_block_encoding
from .synth import BlockEncoding, lcu_block_encoding, permutation_to_circuit, state_prep, transposition_to_gates

__version__ = "0.1.0"
