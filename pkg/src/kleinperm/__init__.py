"""Modules over the Klein four-group algebra in characteristic 2.

Build any indecomposable, split arbitrary modules into indecomposables,
compute duals and Heller shifts, write down explicit permutation
resolutions and certify the permutation dimension.
"""

from .catalogue import (EInf, E, IndecompLabel, M, REG, TRIV, W, construct, dual_label,
                        format_label, heller_label, is_perm_label, parse_label, perm_labels,
                        catalogue_ppdim)
from .decomp import Decomposition, decompose, identify_indecomposable, is_indecomposable, is_isomorphic
from .errors import KleinpermError
from .exactmat import ExactMatrix, Subspace
from .gf2k import GF2, FieldPoly, FieldSpec, field_make, parse_field, parse_poly
from .homalg import (Resolution, check_exact, format_resolution, heller, parse_resolution,
                     projective_cover, snake_sequence)
from .kv4mod import (KV4Module, ModuleMap, direct_sum, dual, format_module, ker_sum, module_make,
                     parse_module, quotient)
from .moddsl import DiagramAst, ascii, lower, parse, render
from .permdim import (PpdimResult, build_resolution, certify_lower, is_permutation, ppdim,
                      ppdim_indecomposable)

__all__ = [
    "E", "EInf", "IndecompLabel", "M", "REG", "TRIV", "W", "construct", "dual_label",
    "format_label", "heller_label", "is_perm_label", "parse_label", "perm_labels", "catalogue_ppdim",
    "Decomposition", "decompose", "identify_indecomposable", "is_indecomposable", "is_isomorphic",
    "KleinpermError", "ExactMatrix", "Subspace",
    "GF2", "FieldPoly", "FieldSpec", "field_make", "parse_field", "parse_poly",
    "Resolution", "check_exact", "format_resolution", "heller", "parse_resolution",
    "projective_cover", "snake_sequence",
    "KV4Module", "ModuleMap", "direct_sum", "dual", "format_module", "ker_sum", "module_make",
    "parse_module", "quotient",
    "DiagramAst", "ascii", "lower", "parse", "render",
    "PpdimResult", "build_resolution", "certify_lower", "is_permutation", "ppdim",
    "ppdim_indecomposable",
]
