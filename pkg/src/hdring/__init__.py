"""Exact kernel for a truncated skew-commutative divided-power ring, its
homotopy operators, and the explicit solution of the associated discrete
initial value problem."""

from .fields import GF, QQ
from .params import Truncation
from .ring import (
    Element,
    Monomial,
    e_gen,
    elem_add,
    elem_mul,
    exp_theta_h,
    h_gen,
    make_monomial,
    mono_mul,
    theta_gen,
    zeta_gen,
)
from .operators import (
    VBasis,
    decompose,
    delta_star,
    nabla_star,
    op_D,
    op_d,
    op_delta,
    op_nabla,
    op_shift,
    op_theta,
    pairing,
    pairing_combo,
)
from .solution import (
    PhiTable,
    phi_infinity,
    phi_initial,
    verify_lemma_aggregation,
    verify_lemma_cell,
    verify_theorem,
)
from .modp import check_p_integrality, extract_regrouped, reduce_mod_p, verify_theorem_mod_p
from .serialize import from_json, from_text, serialize, to_json, to_text
from .skewforms import SkewFamily, higgs_extend, rho1_symmetrize

__all__ = [
    "GF",
    "QQ",
    "Truncation",
    "Element",
    "Monomial",
    "VBasis",
    "PhiTable",
    "SkewFamily",
    "check_p_integrality",
    "decompose",
    "delta_star",
    "e_gen",
    "elem_add",
    "elem_mul",
    "exp_theta_h",
    "extract_regrouped",
    "from_json",
    "from_text",
    "h_gen",
    "higgs_extend",
    "make_monomial",
    "mono_mul",
    "nabla_star",
    "op_D",
    "op_d",
    "op_delta",
    "op_nabla",
    "op_shift",
    "op_theta",
    "pairing",
    "pairing_combo",
    "phi_infinity",
    "phi_initial",
    "reduce_mod_p",
    "rho1_symmetrize",
    "serialize",
    "theta_gen",
    "to_json",
    "to_text",
    "verify_lemma_aggregation",
    "verify_lemma_cell",
    "verify_theorem",
    "verify_theorem_mod_p",
    "zeta_gen",
]
