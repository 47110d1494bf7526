"""Exact toolkit for lattice substitution systems and model-set criteria."""

from .coincidence import (
    AnalysisOptions,
    Outcome,
    Verdict,
    analyze,
    compute_color_cosets,
    modular_coincidence,
    row_disjointness,
    sqcap,
)
from .lattice import (
    AffineLatticeMap,
    IntegerLattice,
    apply_map,
    compose_maps,
    hnf,
    lattice_sum,
    residue,
    scale_lattice,
)
from .lssformat import format_system, load_system, parse_system
from .mfs import (
    MatrixFunctionSystem,
    inflation_matrix,
    is_primitive,
    power,
    validate_block_structure,
)
from .patch import Patch, Seed, find_seed, generate, substitute, superelement
from .sequences import (
    SequenceWitness,
    check_witness_conditions,
    exclusion_report,
    find_sequences,
)

__version__ = "0.1.0"
