"""Cellular automata on homogeneous cell spaces.

Cell spaces (groups acting transitively with chosen coordinates), the induced
right semi-action of stabiliser cosets, neighbourhood interiors/closures/
boundaries, Følner diagnostics, tilings, windowed automaton dynamics, pattern
entropy, and dual witness searches for non-surjectivity and
non-pre-injectivity cross-checked against exact desk-scale oracles.
"""

from .analyzer import (
    AnalysisBudgets,
    AnalysisReport,
    EntropyRow,
    EntropySeries,
    GoeWitness,
    entropy_series,
    find_goe_pattern,
    find_mutually_erasable,
    finite_space_oracle,
    goe_report,
    image_patterns,
    out_neighborhood,
    pre_injectivity_oracle_1d,
    surjectivity_oracle_1d,
    verify_witness,
)
from .automaton import (
    LocalRule,
    Pattern,
    SemiCellularAutomaton,
    act_on_pattern,
    builtin_rule,
    derive_overlap_set,
    eca_rule,
    make_automaton,
    occurs_at,
    replace_occurrences,
    restricted_step,
    semi_act_on_pattern,
    stabiliser_invariance,
)
from .errors import BudgetExceededError, PreconditionViolation, RegionOverflowError
from .folner import FolnerSequence, boundary_ratio, folner_box, folner_defect, folner_sequence
from .geometry import (
    CellSet,
    CosetSet,
    boundary,
    boundary_cells,
    box,
    close_coset_set,
    closure,
    closure_cells,
    coset_set_from_offsets,
    interior,
    interior_cells,
    make_coset_set,
    preimage_cells,
    semi_image,
    semi_preimage,
)
from .spaces import (
    CellSpace,
    Coset,
    DihedralSpace,
    GridSpace,
    PermutationSpace,
    SquareSymmetrySpace,
    space_from_json,
)
from .tilings import Tiling, TilingReport, derive_cover_set, greedy_tiling, tiling_density, verify_tiling

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
