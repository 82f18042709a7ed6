"""Numeric verification: homotopy continuation on the BW criticality systems."""

from .counting import (
    EDNumericRun,
    PathFailureError,
    count_slice_points_n2,
    dedup_projective,
    numeric_eddegree,
    run_numeric_eddegree,
    solve_partials_n3,
)
from .systems import (
    ComplexPolySystem,
    StartSystem,
    TrackerConfig,
    build_ed_critical_system,
    bw_weights,
    random_data_point,
    square_map,
    total_degree_start,
    unit_gamma,
)
from .tracking import (
    Solution,
    SolutionSet,
    available_backends,
    get_backend,
    track_path,
    track_paths,
)

__all__ = [
    "ComplexPolySystem",
    "EDNumericRun",
    "PathFailureError",
    "Solution",
    "SolutionSet",
    "StartSystem",
    "TrackerConfig",
    "available_backends",
    "build_ed_critical_system",
    "bw_weights",
    "count_slice_points_n2",
    "dedup_projective",
    "get_backend",
    "numeric_eddegree",
    "random_data_point",
    "run_numeric_eddegree",
    "solve_partials_n3",
    "square_map",
    "total_degree_start",
    "track_path",
    "track_paths",
    "unit_gamma",
]
