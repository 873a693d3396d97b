"""Numerics for the two-parameter free unitary Segal-Bargmann transform.

The layers build on each other: truncated power series (``series``), the
conformal maps and their boundary values (``maps``, ``geometry``), the
measures nu_s and kernels k_{s,t} (``measures``) and finally the transform
itself (``transform``).
"""

from .geometry import BoundaryCurve, annulus_deviation, in_sigma, omega_boundary_curve, sigma_boundary_curve
from .laurent import LaurentPoly
from .maps import (
    KappaSolution,
    chi_boundary,
    chi_eval,
    chi_st_deriv,
    chi_st_eval,
    f_eval,
    f_st_eval,
    kappa_eval,
    support_endpoints,
)
from .measures import (
    ArcQuadrature,
    KernelEvaluator,
    density,
    kernel_integrand,
    kernel_mass,
    kernel_mgf_check,
    moment_quadrature,
    quadrature_rule,
    semicircle_density,
)
from .params import (
    BoundaryProximityWarning,
    DomainError,
    FreeSBError,
    NonInvertibleError,
    Params,
    PreconditionError,
    SolverError,
    UnitarityWarning,
)
from .polynomials import genfun_verify, p_poly, p_star_poly, q_poly
from .series import (
    TruncSeries,
    chi_series,
    chi_st_series,
    f_series,
    f_st_series,
    moment_closed_form,
    ps_compose,
    ps_exp,
    ps_mul,
    ps_revert,
    psi_series,
)
from .transform import (
    TransformResult,
    cauchy_eval,
    free_sb_poly,
    gram_matrix,
    inverse_transform_poly,
    l2_inner_product,
    reproducing_kernel,
    transform_eval,
    transform_poly,
)

__version__ = "0.1.0"
