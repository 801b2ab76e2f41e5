"""Pose trajectory filtering on the unit dual quaternion manifold.

Rigid poses are represented as unit dual quaternions (or split
rotation/translation pairs), windows of a pose sequence are mapped into
the tangent space at each pose, and a robust principal-component line fit
smooths the sequence. See the quat / dual / manifold / regression /
trajectory modules, and the `dqfilter` command line tool.
"""

from ._backend import BACKEND as backend_name
from .dual import (
    Screw,
    dq_exp,
    dq_log,
    dq_mul,
    from_pose,
    from_screw,
    to_matrix,
    to_pose,
    to_screw,
    transform_point,
)
from .manifold import exp_at, geodesic_distance, hemisphere_align, log_at
from .quat import from_axis_angle, quat_exp, quat_log, quat_mul, rotate_point
from .regression import filter_trajectory, gaussian_prior, irls_wpca, weighted_pca
from .trajectory import (
    ErrorReport,
    NoiseSpec,
    PoseTrajectory,
    SplineSpec,
    add_noise,
    evaluate,
    generate_spline_trajectory,
    kalman_baseline,
)

__version__ = "0.1.0"

__all__ = [
    "Screw",
    "ErrorReport",
    "NoiseSpec",
    "PoseTrajectory",
    "SplineSpec",
    "add_noise",
    "backend_name",
    "dq_exp",
    "dq_log",
    "dq_mul",
    "evaluate",
    "exp_at",
    "filter_trajectory",
    "from_axis_angle",
    "from_pose",
    "from_screw",
    "gaussian_prior",
    "generate_spline_trajectory",
    "geodesic_distance",
    "hemisphere_align",
    "irls_wpca",
    "kalman_baseline",
    "log_at",
    "quat_exp",
    "quat_log",
    "quat_mul",
    "rotate_point",
    "to_matrix",
    "to_pose",
    "to_screw",
    "transform_point",
    "weighted_pca",
]
