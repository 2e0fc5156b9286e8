"""Exact Theta_2-indexed deformation complexes of finite k-linear monoidal categories."""

from __future__ import annotations

from .cochain import ComplexData, functor_data, identity_data
from .deform import (
    apply_deformation,
    axiom_check_mod_t2,
    deformation_classes,
    functor_deformation_classes,
    group_cohomology_oracle,
    split_3cochain,
    twist_coboundary,
)
from .exactfield import GF, QQ, DualNumbers
from .moncat import (
    FinMonCat,
    cyclic_group_table,
    deloop_algebra,
    dual_number_algebra,
    graded_algebra_category,
    validate,
    vec_g_omega,
    z2_sign_cocycle,
)
from .theta2 import TwoTree, enumerate_trees
from .totalization import build_reltot, build_tot, cohomology_dims, normalized_tot

__version__ = "0.1.0"

__all__ = [
    "ComplexData",
    "DualNumbers",
    "FinMonCat",
    "GF",
    "QQ",
    "TwoTree",
    "apply_deformation",
    "axiom_check_mod_t2",
    "build_reltot",
    "build_tot",
    "cohomology_dims",
    "cyclic_group_table",
    "deformation_classes",
    "deloop_algebra",
    "dual_number_algebra",
    "enumerate_trees",
    "functor_data",
    "functor_deformation_classes",
    "graded_algebra_category",
    "group_cohomology_oracle",
    "identity_data",
    "normalized_tot",
    "split_3cochain",
    "twist_coboundary",
    "validate",
    "vec_g_omega",
    "z2_sign_cocycle",
]
