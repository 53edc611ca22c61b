"""Numerical toolkit for coordinate-wise and Firey Minkowski combinations
of unconditional convex bodies, concave measures, and the inequality
checks relating them."""

from .bodies import (
    Body,
    CombinationKind,
    CombinationSpec,
    DilateBody,
    GridSet,
    HPolytope,
    LqBall,
    MinkowskiBody,
    TrigSupportBody,
    WulffBody,
    coord_combine,
    dilate,
    firey_combine,
    hausdorff_distance,
    minkowski_combine,
    octant_directions,
    sample_points,
)
from .certify import (
    ConcavityCertificate,
    Region,
    certify_region,
    criterion_matrix,
    gaussian_improved_exponent,
    jacobi_eigenvalues,
)
from .config import ConfigError, ScenarioConfig, bundled_config_path, load_config
from .extreal import ExtReal, NEG_INF, POS_INF, ZERO
from .means import (
    alpha_to_s,
    borell_s_alpha,
    exponent_compare,
    gamma_compose,
    p_mean,
    p_mean_grid,
    p_mean_m,
)
from .measures import (
    CurveResult,
    Density,
    MeasureEstimate,
    NumericsConfig,
    Potential,
    functional_B_curve,
    make_density,
    measure,
    measure_curve,
)
from .verify import (
    CHECKS,
    Report,
    TripleGrid,
    check_B_property,
    check_bmi,
    check_bmi_mset,
    check_dilation_concavity,
    check_firey_corollary,
    check_functional_B,
    check_gaussian_improvement,
    check_inclusion,
    check_lifting,
    check_plus1_is_minkowski,
    check_power_dilation_concavity,
    lift_to_uniform,
    scan_log_bm,
    uhrin_functional_check,
)

__version__ = "0.1.0"


def acceptance_config_path():
    """Path of the bundled acceptance scenario."""
    return bundled_config_path("acceptance")
