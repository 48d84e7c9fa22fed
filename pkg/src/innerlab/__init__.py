"""innerlab: numerics for inner functions, circle entropy geometry, and
the Gauss curvature equation on the unit disk."""

__version__ = "0.1.0"

from .backend import backend_name  # noqa: F401
from .bc_sets import (  # noqa: F401
    BCSet,
    CircleArc,
    StarSpec,
    dist_to_set,
    hausdorff_distance,
    hyperbolic_dist_to_star,
    merge,
    star_area_integral,
    star_contains,
)
from .measures import (  # noqa: F401
    DiskMeasure,
    SequenceDiagnostics,
    classify_sequence,
    diffuse_family,
    max_star_mass,
    star_mass,
    theta_for,
)
from .inner import (  # noqa: F401
    FiniteBlaschke,
    InnerFunctionRep,
    circle_entropy_quadrature,
    critical_points,
    frostman_shift,
    gamma,
    green,
    green_truncated,
    hyperbolic_dist,
    jensen_entropy,
    log_abs_inner,
    nevanlinna_gap,
)
from .roberts import RobertsDecomposition, RobertsParams, decompose, verify  # noqa: F401
from .gce import (  # noqa: F401
    GceProblem,
    GridFunction,
    PolarGrid,
    check_fund3,
    diffuse_experiment,
    harmonic_extension,
    green_potential,
    liouville_pullback,
    nearly_maximal,
    perron_hull_r,
    radial_solution,
    solve_dirichlet,
    u_max,
)
from .outer import OuterSpec, eval_phi, subdivide, weights  # noqa: F401
from .bergman import (  # noqa: F401
    BergmanSpaceSpec,
    SubspaceProbe,
    bergman_norm,
    d_recursion,
    distance_to_one,
    divide,
    h2_norm_and_lp,
)
