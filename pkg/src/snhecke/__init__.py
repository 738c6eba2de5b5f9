"""Exact Kazhdan-Lusztig combinatorics of symmetric-group Hecke algebras."""

from .algebra import HeckeElt, IntHeckeElt, KLCache, form, get_cache, render_elt
from .cells import (
    CellDecomposition,
    a_function,
    a_table,
    afunction_property_report,
    cells,
    left_leq,
    lm_set,
    ln_set,
    right_leq,
    rn_set,
    twosided_leq,
)
from .kahrstrom import (
    KhVerdict,
    check_necessary_conditions,
    kh_graded,
    kh_scan,
    kh_table,
    kh_ungraded,
    parabolic_induction_report,
    scan_left_cell_invariance,
    scan_witness_variation,
)
from .laurent import ONE, V, VINV, ZERO, LaurentPoly
from .permutations import Perm, compose, elements, inverse, length, longest_element
from .submodules import (
    SpanBasis,
    Verdict,
    cor3345_hypothesis,
    cor3345_survey,
    cyclic_submodule,
    equals_lm,
    equals_ln_dual,
    membership,
    quasi_idempotent_check,
    rank_over_fraction_field,
)
from .tableaux import dominance_leq, hook_length_count, inverse_rs, rs, shape_of

__version__ = "0.1.0"
