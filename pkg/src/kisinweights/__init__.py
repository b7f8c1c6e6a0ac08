"""Exact computational tools for weight shifts of two-dimensional mod-p
inertial data over unramified base fields.

The package provides:

- exact finite-field and polynomial arithmetic (:mod:`.field`),
- tame inertial characters as exponent classes (:mod:`.chars`),
- rank-one Frobenius modules, slope invariants and the cyclic string
  decomposition (:mod:`.rankone`),
- rank-two extensions with exact morphism checking and parameter transport
  (:mod:`.ranktwo`),
- irregular weights, their regular companion weights and Hodge-Tate style
  tables (:mod:`.weights`),
- carrier-set matching, congruence and equivalence audits (:mod:`.matching`),
- the quadratic (doubled-index) frame with balanced carriers (:mod:`.quadratic`),
- a JSON command-line frontend (:mod:`.cli`).
"""

__version__ = "1.0.0"

from .chars import (
    InertialChar,
    SemisimpleShape,
    char_of_exponents,
    extend_to_quadratic,
    is_irreducible_pair,
)
from .field import Context, FiniteField, UPoly, make_field, poly_phi
from .matching import (
    DichotomyError,
    backward_from_mus,
    backward_from_theta,
    exceptional_audit,
    forward_sets,
    semisimple_decide,
    semisimple_equivalence_audit,
    subspace_transport_audit,
)
from .quadratic import (
    irr_backward,
    irr_equivalence_audit,
    irr_forward,
    is_balanced,
    rebalance,
)
from .rankone import (
    RankOneKisin,
    alpha,
    decompose_cyclic,
    hom_exists,
    in_Pprime,
    jmax,
    necessary_map_conditions,
)
from .ranktwo import PhiExtension, PhiMorphism, build_extension, transport_forward
from .weights import (
    Weight,
    blocks,
    ht_table,
    validate_irregular,
    weight_kmu,
    weight_kprime,
    weight_ktheta,
)

__all__ = [
    "__version__",
    "Context",
    "DichotomyError",
    "FiniteField",
    "InertialChar",
    "PhiExtension",
    "PhiMorphism",
    "RankOneKisin",
    "SemisimpleShape",
    "UPoly",
    "Weight",
    "alpha",
    "backward_from_mus",
    "backward_from_theta",
    "blocks",
    "build_extension",
    "char_of_exponents",
    "decompose_cyclic",
    "exceptional_audit",
    "extend_to_quadratic",
    "forward_sets",
    "hom_exists",
    "ht_table",
    "in_Pprime",
    "irr_backward",
    "irr_equivalence_audit",
    "irr_forward",
    "is_balanced",
    "is_irreducible_pair",
    "jmax",
    "make_field",
    "necessary_map_conditions",
    "poly_phi",
    "rebalance",
    "semisimple_decide",
    "semisimple_equivalence_audit",
    "subspace_transport_audit",
    "transport_forward",
    "validate_irregular",
    "weight_kmu",
    "weight_kprime",
    "weight_ktheta",
]
