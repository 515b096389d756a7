"""Exact computations with opers, Miura opers and critical-level weights.

The public surface mirrors the module layout: `rootdata` for Chevalley
tables and Weyl combinatorics, `series` for windowed Laurent series,
`oper` for canonical forms and normal forms, `miura` for the Miura
transformation, `linkage` for Kac-Kazhdan combinatorics, `cli` for the
command line.
"""

from .errors import DomainError, OperforgeError, PrecisionError, \
    SingularRecursionError
from .rootdata import (Algebra, CartanOrbitPoint, algebra, build_algebra,
                       coinvariant_dim, is_antidominant, is_dominant,
                       kostant_project, weyl_orbit)
from .series import DEFAULT_PRECISION, LieSeries, ScalarSeries
from .oper import (CanonicalOper, GaugeElement, NilpOperForm, NilpResidue,
                   RawOper, apply_gauge, canonicalize, horizontal_sections,
                   is_nilpotent_oper, lambda_nilp_form, loop_rotate,
                   nilp_normal_form, res_nilp, res_rs, singularity_order)
from .miura import (HConnection, MiuraClass, check_residue_diagram,
                    classify_miura_nilp, miura_inverse_dominant,
                    miura_transform)
from .linkage import (AffineWeight, CharacterTable, central_character,
                      is_antidominant_weight, kk_chain_search,
                      pbw_character, verma_character,
                      verma_irreducible_critical)

__version__ = "0.1.0"

__all__ = [
    "Algebra", "AffineWeight", "CanonicalOper", "CartanOrbitPoint",
    "CharacterTable", "DEFAULT_PRECISION", "DomainError", "GaugeElement",
    "HConnection", "LieSeries", "MiuraClass", "NilpOperForm", "NilpResidue",
    "OperforgeError", "PrecisionError", "RawOper", "ScalarSeries",
    "SingularRecursionError", "algebra", "apply_gauge", "build_algebra",
    "canonicalize", "central_character", "check_residue_diagram",
    "classify_miura_nilp", "coinvariant_dim", "horizontal_sections",
    "is_antidominant", "is_antidominant_weight", "is_dominant",
    "is_nilpotent_oper", "kk_chain_search", "kostant_project",
    "lambda_nilp_form", "loop_rotate", "miura_inverse_dominant",
    "miura_transform", "nilp_normal_form", "pbw_character", "res_nilp",
    "res_rs", "singularity_order", "verma_character",
    "verma_irreducible_critical", "weyl_orbit",
]
