"""Numerical verification of Kahler manifolds of quasi-constant holomorphic sectional curvature.

The package builds U(n)-invariant Kahler metrics on annuli of C^n, computes
their curvature from metric components, splits it as ``a*pi + b*Phi + c*Psi``
with respect to the radial distribution span{xi, J xi}, and checks the
structural identities that hold for such metrics.

Typical use::

    from qchkahler import potential_metric, potential_from_name, canonical_distribution
    from qchkahler import check_qch, sample_points

    g = potential_metric(potential_from_name("log1p"), n=3)
    report = check_qch(g, canonical_distribution(g), sample_points(g, 5, seed=0))
"""

from .diffgeo_engine import (
    Annulus,
    DistributionField,
    DistributionGeometry,
    MetricField,
    christoffel,
    involutivity,
    kahler_form_residual,
    lee_form,
    nabla_eta,
    principal_distribution,
    riemann,
    riemann_coordinates,
    w4_residual,
)
from .errors import ConstraintError, DegenerateFrameError, DomainError, NotBiconformallyFlat
from .metric_families import (
    BiconformalPair,
    biconformal_apply,
    biconformally_flat_normal_form,
    canonical_distribution,
    dilatational_apply,
    flat_metric,
    homothety_gap,
    make_pair,
    potential_from_name,
    potential_metric,
    potential_normal_form_v,
    random_normal_form_v,
    u_from_v,
)
from .qch_invariants import (
    Kind,
    QchCoefficients,
    coefficients_from_scalars,
    hol_profile,
    invariant_tensor,
    qc_tensor,
    qch_decompose,
    qch_tensor,
    scalars_from_coefficients,
)
from .radial import Jet, RadialScalar
from .rotational import (
    RadialChart,
    RotationalProfile,
    constant_curvature_meridian,
    dilatational_coefficients,
    induced_metric,
    meridian_b_values,
    meridian_y,
    nabla_J_identity_residual,
    rotational_metric,
    solve_b_zero_ode,
    warped_curvature,
    warped_curvature_residual,
)
from .structure_verify import (
    DEFAULT_TOLERANCES,
    Classification,
    VerificationReport,
    check_b0_distribution,
    check_b_distribution,
    check_coefficients,
    check_integrability,
    check_qc_invariance,
    check_qch,
    check_ricci_identity,
    check_symmetries,
    classify,
    composition_gap,
    decompose_at,
    five_conditions,
    flatten,
    sample_arclengths,
    sample_points,
)
from .tensor_core import (
    AdaptedFrame,
    KahlerTensor4,
    TangentSpace,
    adapted_frame,
    angle_phi,
    curvature_scalars,
    standard_complex_structure,
    symmetry_residuals,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
