"""Guaranteed smoothness and blow-up bounds for cold-plasma oscillations.

The package follows one dimensionless electron-plasma characteristic at a
time: the divergence pair (lambda, D) = (Div E, Div v) spirals clockwise
about the origin of its phase plane, and comparison curves sandwich the
squared divergence between axis crossings.  From those curves it counts the
oscillations guaranteed free of density blow-up, brackets the smooth
lifetime by quadrature, evaluates the pointwise smoothness/blow-up criteria,
and cross-checks everything against direct high-accuracy integration of the
exact characteristic systems.
"""

from .chaplygin_bounds import (
    BoundCurve,
    BoundKind,
    CriterionVerdict,
    Side,
    anchor_root_S1,
    anchor_root_S2,
    criterion_1d,
    criterion_first_period,
    irrotational_lower_curve,
    plain_lower_curve,
    q_rhs,
    sigma_curve,
    z1_irrotational,
    z1_plain,
    z_sigma,
)
from .core_dynamics import (
    CharacteristicState,
    FirstIntegralConstant,
    OrbitExtremes,
    PhasePoint,
    RadialProfile,
    constant_profile,
    evaluate_first_integral,
    first_integral_constant,
    g_at_maximum,
    gaussian_profile,
    j_exact_radial,
    orbit_extremes,
    period,
    profile_divergences,
    rhs_divergence,
    rhs_radial,
)
from .numerics import (
    BracketError,
    OdeTrajectory,
    QuadratureError,
    find_root,
    integrate,
    integrate_singular,
    lambert_w,
    optimize_scalar,
)
from .oracle import (
    BlowupRecord,
    CharacteristicRun,
    blowup_sweep,
    count_revolutions_oracle,
    detect_blowup,
    run_characteristic,
    sandwich_check,
)
from .pulse_analysis import (
    DEFAULT_SIGMA1,
    DEFAULT_SIGMA2,
    FixedPointResult,
    NoFixedPointError,
    PulseScenario,
    PulseVerdict,
    Thresholds,
    classify_pulse,
    f_plus_of_lambda0,
    fixed_point,
    lambda1_map,
    lambda2_map,
    lambert_fixed_point,
    optimize_thresholds,
)
from .spiral_counter import (
    FieldLifetime,
    LifetimeEstimate,
    Spiral,
    SpiralSegment,
    build_spiral,
    count_crossing_pairs,
    count_revolutions,
    guaranteed_field_lifetime,
    lifetime,
    segment_time,
)

__version__ = "1.0.0"
