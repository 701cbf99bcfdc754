"""
@author jacobi petrucciani
@desc models submodule for warpiso
"""
from warpiso.models.warp import (  # noqa
    FiberSpec,
    RadialWeight,
    RegimeReport,
    WarpedSpace,
    WarpProfile,
    WeightPair,
    eval_profile,
    unit_ball_volume,
)
from warpiso.models.quadrature import (  # noqa
    FiberGrid,
    differentiate,
    fiber_grid,
    integrate_fiber,
    integrate_radial,
)
from warpiso.models.surface import (  # noqa
    GraphFunction,
    ShapeField,
    StarGraph,
    SurfaceFrame,
    boundary_integral,
    build_star_graph,
    enclosed_volume,
    export_graph,
    import_graph,
    shape_field,
    surface_frames,
)
from warpiso.models.iso import (  # noqa
    Verdicts,
    VerificationRecord,
    jensen_gap,
    omega_sharp_radius,
    space_form_catalog,
    verify_weighted_iso,
)
from warpiso.models.minkowski import (  # noqa
    ChainReport,
    PositivityReport,
    chain_margins,
    cone_positivity,
    corollary_run,
    hm_check,
    hm_residual,
)
from warpiso.models.spectral import (  # noqa
    AnnulusRecord,
    EigenBoundRecord,
    StabilityVerdict,
    ThresholdReport,
    lambda1_bound_check,
    power_counterexample,
    second_variation_probe,
    slice_stability,
    small_ball_threshold,
    stability_flip_radius,
    steklov_bound_check,
    surjectivity_counterexample,
)
