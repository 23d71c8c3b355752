"""Rigidity matrices of frustrated classical spin models and their homotopy classification."""

__version__ = "0.1.0"

from .abgroup import AbGroup, ext1, extension_candidates, from_presentation, smith_normal_form
from .classify import ClassificationQuery, Verdict, classify, classify_model
from .exactseq import GroupDataFile, apply_lemma, build_ladder, derive_query, propagate
from .invariants import LoopSpec, cycle_windings, det_winding, trim_signs
from .linearize import channel_major_order, linearize_channel_major, linearize_collinear
from .model import SpinModel, load_builtin, load_model, parse_model, validate
from .polynomial import RigidityPolynomial, grid_momenta
from .spectral import (flatten, gap_map, maxwell_index, retraction_path, singular_spectrum,
                       spinwave_spectrum, zero_locus)
from .symmetry import EquivarianceSpec, SymmetryClass, detect_class, trims, verify_equivariance

__all__ = [
    "AbGroup", "ClassificationQuery", "EquivarianceSpec", "GroupDataFile", "LoopSpec",
    "RigidityPolynomial", "SpinModel", "SymmetryClass", "Verdict", "apply_lemma", "build_ladder",
    "channel_major_order", "classify", "classify_model", "cycle_windings", "derive_query",
    "detect_class", "det_winding", "ext1", "extension_candidates", "flatten", "from_presentation",
    "gap_map", "grid_momenta", "linearize_channel_major", "linearize_collinear", "load_builtin",
    "load_model", "maxwell_index", "parse_model", "propagate", "retraction_path",
    "singular_spectrum", "smith_normal_form", "spinwave_spectrum", "trim_signs", "trims",
    "validate", "verify_equivariance", "zero_locus",
]
