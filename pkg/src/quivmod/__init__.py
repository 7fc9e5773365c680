"""Representations of quivers with relations, their semi-invariants and moduli.

Exact arithmetic over the rationals and prime fields throughout.
"""

from ._kernels import BACKEND
from .errors import (
    CapExceededError, FieldMismatchError, InconclusiveError, LiftError, MixedDenominatorError,
    PreconditionError, QuivmodError, ShapeError,
)
from .exactfield import GF, QQ, Fp, Matrix
from .polyring import Poly, RationalExpr, Var, arrow_var, param
from .quivercore import (
    GroupElement, Path, Quiver, Relation, Representation, act, check_relations, chi_theta,
    direct_sum, euler_form, eval_path, filt_assemble, hom_space, is_isomorphic, one_ps_limit,
    theta_eval,
)
from .schofield import (
    block_sign, double_quiver, domokos_lift, hat_dim, lift_to_double, schofield_semiinvariant, schofield_weight,
    semistable_witness, tau, tau_v, vertex_split, weight_to_dims,
)
from .siring import (
    ComponentSpec, Parametrization, SumSpec, hilbert_function, pullback_direct_sum, restrict_dim,
    si_space,
)
from .stability import (
    decompose_sample, enumerate_subreps, is_semistable, is_stable, jh_factors, polystabilize,
    s_equivalent,
)
from .harness import (
    VerificationReport, example_fixtures, product_side_hilbert, verify_orbit_removal,
    verify_product_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapExceededError",
    "FieldMismatchError",
    "InconclusiveError",
    "LiftError",
    "MixedDenominatorError",
    "PreconditionError",
    "QuivmodError",
    "ShapeError",
    "GF",
    "QQ",
    "Fp",
    "Matrix",
    "Poly",
    "RationalExpr",
    "Var",
    "arrow_var",
    "param",
    "GroupElement",
    "Path",
    "Quiver",
    "Relation",
    "Representation",
    "act",
    "check_relations",
    "chi_theta",
    "direct_sum",
    "euler_form",
    "eval_path",
    "filt_assemble",
    "hom_space",
    "is_isomorphic",
    "one_ps_limit",
    "theta_eval",
    "block_sign",
    "double_quiver",
    "domokos_lift",
    "hat_dim",
    "lift_to_double",
    "schofield_semiinvariant",
    "schofield_weight",
    "semistable_witness",
    "tau",
    "tau_v",
    "vertex_split",
    "weight_to_dims",
    "ComponentSpec",
    "Parametrization",
    "SumSpec",
    "hilbert_function",
    "pullback_direct_sum",
    "restrict_dim",
    "si_space",
    "decompose_sample",
    "enumerate_subreps",
    "is_semistable",
    "is_stable",
    "jh_factors",
    "polystabilize",
    "s_equivalent",
    "VerificationReport",
    "example_fixtures",
    "product_side_hilbert",
    "verify_orbit_removal",
    "verify_product_decomposition",
]
