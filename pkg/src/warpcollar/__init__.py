"""warpcollar: build and certify warped collar metric extensions.

A collar metric dt^2 + f(t)^2 g_t is assembled from a convex warping profile
and a slice-metric family, its curvature bounds are verified against closed
formulas and an independent finite-difference oracle, geodesics and Jacobi
fields are driven through the collar to certify the absence of conjugate
points and the per-crossing expansion of Jacobi fields, and the far field is
rewritten in conformally compact normal form.
"""

__version__ = "0.1.0"

from .blend import smoothstep
from .profile import (
    CASE_FLAT,
    CASE_NEGATIVE,
    CASE_NONNEGATIVE,
    Bridge,
    CurvatureCase,
    FarField,
    FeasibilityResult,
    InfeasibleBridge,
    ProfileFunction,
    UnitProfile,
    build_profile,
    check_bridge_feasibility,
    eval_profile,
    scan_kappa_min,
    select_far_field,
)
from .slices import (
    ConformalTorus2D,
    ConstantWarp,
    ExtensionSchedule,
    InsufficientHeadroom,
    PhiSpec,
    ScaledConstCurv,
    ScheduleWarp,
    SliceData,
    build_extension_schedule,
    slice_data,
)
from .curvature import (
    CollarMetric,
    GridSpec,
    NonOrthonormalPlane,
    TangentPlane,
    build_collar_metric,
    collar_curvatures,
    far_field_curvatures,
    measure_interior_bound,
    mixed_extrema,
    sectional_curvature,
    verify_lemma_bounds,
)
from .fd_oracle import StepTooSmall, metric_components, oracle_sectional, riemann_lowered_fd
from .odes import EventSpec, StepRejected, Trajectory, integrate
from .dynamics import (
    GeodesicState,
    JacobiFrameState,
    JacobiTrajectory,
    RiccatiResult,
    VerifierConfig,
    certify_no_conjugate_points,
    certify_unbounded_growth,
    curvature_operator_along,
    entering_state,
    geodesic_step,
    integrate_geodesic,
    jacobi_evolve,
    normal_plane_curvature,
    riccati_evolve,
)
from .compactify import CompactifiedForm, compactify, m_samples, verify_even_in_y
from .report import (
    Check,
    CheckRow,
    ConfigMismatch,
    DEFAULT_SEED,
    VerificationReport,
    merge_reports,
    parse_report,
    report_to_csv,
    rng_from_seed,
)
