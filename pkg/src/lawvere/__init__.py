"""Commutants, Kronecker products and centers of finitary operations on finite carriers."""

from .commutant import (
    commutant,
    commutant_slice,
    commutes_with_all,
    double_commutant,
    is_balanced,
    is_saturated,
    theories_commute,
)
from .errors import ArityMismatch, CarrierMismatch, EnumerationTooLarge, IntractableSlice, LawvereError
from .ops import (
    Carrier,
    OpTable,
    OpTuple,
    commutes,
    constant,
    eval_op,
    kron1,
    kron1_multi,
    kron2,
    kron2_multi,
    projection,
    superpose,
    transpose_vars,
)
from .rigs import Rig, check_rig_axioms, mat_aff_theory, mat_theory, matrix_kronecker, op_of_row, opposite, pointed_mod_theory
from .theories import Theory, center, clone_generate, contains, equal_upto, full_theory, is_commutative, projections_theory

__version__ = "0.1.0"
