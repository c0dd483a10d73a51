"""Homological invariants of finite-dimensional algebras over GF(p), with
explicitly verified witness towers in their bounded derived categories."""

__version__ = "0.1.0"

from . import linalg
from .algebra import Algebra, Quiver, build_from_quiver, from_structure_constants, path_algebra_example
from .complexes import ChainMap, Complex, cone, homology, is_quasi_iso, stalk, syzygy_normal_form
from .cotilting import cluster_tilt_check, cotilting_tower, is_cotilting, xt_oracle
from .errors import ReldimError
from .functor import EndContext, end_algebra, gldim_bound_tower, gldim_end
from .modules import (
    AtLeast,
    Module,
    ModuleMap,
    ext_dim,
    global_dim,
    hom_dim,
    hom_dims,
    in_add,
    inj_dim,
    proj_dim,
    projective_resolution,
    syzygy,
)
from .towers import SubcatOracle, WitnessTower, decompose_zb, level_upper, resolving_tower, shift_tower, verify_tower
from .verifier import Verdict, verify_data

__all__ = [
    "Algebra", "AtLeast", "ChainMap", "Complex", "EndContext", "Module", "ModuleMap", "Quiver",
    "ReldimError", "SubcatOracle", "Verdict", "WitnessTower", "build_from_quiver",
    "cluster_tilt_check", "cone", "cotilting_tower", "decompose_zb", "end_algebra", "ext_dim",
    "from_structure_constants", "gldim_bound_tower", "gldim_end", "global_dim", "hom_dim",
    "hom_dims", "homology", "in_add", "inj_dim", "is_cotilting", "is_quasi_iso", "level_upper",
    "linalg", "path_algebra_example", "proj_dim", "projective_resolution", "resolving_tower",
    "shift_tower", "stalk", "syzygy", "syzygy_normal_form", "verify_data", "verify_tower",
    "xt_oracle",
]
