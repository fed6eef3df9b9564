"""Band-limited calculus on the future light cone, the Weyl algebra built on
its symplectic group of pairs, the Lorentz-invariant quasi-free state with
its cyclic-vector inner products, and the asymptotic field correspondence."""

from .cone import (
    ConeFunction,
    HyperboloidPoint,
    LorentzTransform,
    cone_gradient,
    coulomb_c,
    dsquare,
    integrate_invariant,
    log_F,
    lorentz_generator,
    lorentz_pullback,
    mdot,
    solve_F,
)
from .errors import (
    ConeProximityError,
    ConeWeylError,
    DegreeError,
    NonIntegerChargeError,
    NotCoexactError,
)
from .fields import (
    SpacetimePoint,
    eval_em_field_general,
    eval_em_field_regular,
    eval_phase_field,
    flux_charge,
)
from .gns import (
    GnsVector,
    KVector,
    dstar_gram,
    gns_inner,
    gram,
    j_map,
    k_inner,
    product_formula_oracle,
    state,
)
from .grid import QuadratureGrid, grid_for
from .lorentz import (
    AntisymTensor,
    CasimirFamilyPoint,
    axis_residual,
    casimir2_residual,
    h_gram,
    hyperbolic_kernel,
    k_vector,
    kernel_family,
    m_tensor,
    principal_series_map,
)
from .params import Params
from .weyl import (
    SymplecticPair,
    WeylElement,
    WeylGenerator,
    adjoint,
    charge_index,
    lorentz_automorphism,
    multiply,
    symplectic,
    weyl,
)

__version__ = "0.1.0"

__all__ = [
    "AntisymTensor",
    "CasimirFamilyPoint",
    "ConeFunction",
    "ConeProximityError",
    "ConeWeylError",
    "DegreeError",
    "GnsVector",
    "HyperboloidPoint",
    "KVector",
    "LorentzTransform",
    "NonIntegerChargeError",
    "NotCoexactError",
    "Params",
    "QuadratureGrid",
    "SpacetimePoint",
    "SymplecticPair",
    "WeylElement",
    "WeylGenerator",
    "adjoint",
    "axis_residual",
    "casimir2_residual",
    "charge_index",
    "cone_gradient",
    "coulomb_c",
    "dsquare",
    "dstar_gram",
    "eval_em_field_general",
    "eval_em_field_regular",
    "eval_phase_field",
    "flux_charge",
    "gns_inner",
    "gram",
    "grid_for",
    "h_gram",
    "hyperbolic_kernel",
    "integrate_invariant",
    "j_map",
    "k_inner",
    "k_vector",
    "kernel_family",
    "log_F",
    "lorentz_automorphism",
    "lorentz_generator",
    "lorentz_pullback",
    "m_tensor",
    "mdot",
    "multiply",
    "principal_series_map",
    "product_formula_oracle",
    "solve_F",
    "state",
    "symplectic",
    "weyl",
]
