"""Synthetic pose trajectories, noise injection, error metrics and a
linear Kalman baseline.

Ground-truth trajectories interpolate five control poses (rotation axis,
rotation angle and translation channels) with natural cubic splines over
uniform knots, sampled densely. Noise is uniform in [-sigma, sigma] on the
angle, on each axis component (followed by re-normalization) and on each
translation component; a seeded subset of samples additionally receives
outlier noise. All randomness comes from numpy's PCG64 generator, so equal
seeds reproduce results bit for bit.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import dual, quat

RNG_ALGORITHM = "pcg64"
NUM_CONTROLS = 5


@dataclass
class PoseTrajectory:
    """Ordered rigid poses: rotations (n, 4) unit, translations (n, 3)."""

    rotations: np.ndarray
    translations: np.ndarray

    def __post_init__(self):
        self.rotations = np.asarray(self.rotations, dtype=np.float64)
        self.translations = np.asarray(self.translations, dtype=np.float64)
        if (
            self.rotations.ndim != 2
            or self.rotations.shape[1] != 4
            or self.translations.shape != (len(self.rotations), 3)
        ):
            raise ValueError("expected rotations (n, 4) and translations (n, 3)")

    def __len__(self):
        return len(self.rotations)

    def to_dq(self):
        """Unit dual quaternion form, (n, 8)."""
        return dual.from_pose(self.rotations, self.translations)

    @classmethod
    def from_dq(cls, dqs):
        rotations, translations = dual.to_pose(dqs)
        return cls(rotations, translations)


@dataclass
class SplineSpec:
    """Five control poses plus sampling settings for the generator."""

    control_axes: np.ndarray          # (5, 3) unit vectors
    control_angles: np.ndarray        # (5,) radians in [0, 2 pi]
    control_translations: np.ndarray  # (5, 3) points
    sample_count: int = 500
    seed: Optional[int] = None        # provenance when drawn randomly

    def __post_init__(self):
        self.control_axes = np.asarray(self.control_axes, dtype=np.float64)
        self.control_angles = np.asarray(self.control_angles, dtype=np.float64)
        self.control_translations = np.asarray(
            self.control_translations, dtype=np.float64
        )
        if self.control_axes.shape != (NUM_CONTROLS, 3):
            raise ValueError(f"need exactly {NUM_CONTROLS} control axes")
        if self.control_angles.shape != (NUM_CONTROLS,):
            raise ValueError(f"need exactly {NUM_CONTROLS} control angles")
        if self.control_translations.shape != (NUM_CONTROLS, 3):
            raise ValueError(f"need exactly {NUM_CONTROLS} control translations")
        if np.any(np.abs(np.linalg.norm(self.control_axes, axis=1) - 1.0) > 1e-9):
            raise ValueError("control axes must have unit length")
        if self.sample_count < 2:
            raise ValueError("sample_count must be >= 2")

    @classmethod
    def random(cls, seed, sample_count=500):
        """Draw control poses from a seeded generator (axes uniform on the
        sphere, angles uniform in [0, 2 pi], translations uniform in [0,1]^3)."""
        rng = np.random.default_rng(seed)
        axes = rng.normal(size=(NUM_CONTROLS, 3))
        axes /= np.linalg.norm(axes, axis=1, keepdims=True)
        angles = rng.uniform(0.0, 2.0 * np.pi, NUM_CONTROLS)
        translations = rng.uniform(0.0, 1.0, (NUM_CONTROLS, 3))
        return cls(axes, angles, translations, sample_count=sample_count, seed=seed)


@dataclass
class NoiseSpec:
    """Uniform base noise plus seeded outlier contamination."""

    sigma: float = 0.02
    outlier_fraction: float = 0.05
    outlier_sigma: float = 0.2
    seed: int = 0
    renormalize_axis: bool = True     # normalize the axis after perturbing it
    outlier_mode: str = "add"         # "add" on top of base noise, or "replace"

    def __post_init__(self):
        if not 0.0 <= self.outlier_fraction <= 1.0:
            raise ValueError("outlier_fraction must be in [0, 1]")
        if self.sigma < 0.0 or self.outlier_sigma < 0.0:
            raise ValueError("noise widths must be nonnegative")
        if self.outlier_mode not in ("add", "replace"):
            raise ValueError("outlier_mode must be 'add' or 'replace'")


def generate_spline_trajectory(spec):
    """Sample the spline through the control poses at sample_count uniform
    parameters; interpolated axes are re-normalized before building the
    rotation quaternions."""
    knots = np.arange(NUM_CONTROLS, dtype=np.float64)
    params = np.linspace(0.0, knots[-1], spec.sample_count)
    axes = CubicSpline(knots, spec.control_axes, bc_type="natural")(params)
    angles = CubicSpline(knots, spec.control_angles, bc_type="natural")(params)
    translations = CubicSpline(
        knots, spec.control_translations, bc_type="natural"
    )(params)
    axes = _normalize_axes(axes)
    return PoseTrajectory(quat.from_axis_angle(axes, angles), translations)


def _normalize_axes(axes):
    norms = np.linalg.norm(axes, axis=-1)
    safe = np.where(norms > 1e-12, norms, 1.0)
    axes = axes / safe[..., None]
    return np.where((norms > 1e-12)[..., None], axes, [1.0, 0.0, 0.0])


def add_noise(traj, spec):
    """Perturb a trajectory; returns (noisy trajectory, outlier indices).

    Draw order (fixed for reproducibility): angle noise, axis noise,
    translation noise, outlier index permutation, outlier angle/axis/
    translation noise. The outlier count is outlier_fraction * n rounded
    to the nearest integer, chosen without replacement.
    """
    rng = np.random.default_rng(spec.seed)
    n = len(traj)
    axis, angle = quat.to_axis_angle(traj.rotations)

    s = spec.sigma
    d_angle = rng.uniform(-s, s, n)
    d_axis = rng.uniform(-s, s, (n, 3))
    d_trans = rng.uniform(-s, s, (n, 3))

    count = int(np.rint(spec.outlier_fraction * n))
    outliers = np.sort(rng.permutation(n)[:count])
    so = spec.outlier_sigma
    o_angle = rng.uniform(-so, so, count)
    o_axis = rng.uniform(-so, so, (count, 3))
    o_trans = rng.uniform(-so, so, (count, 3))

    if spec.outlier_mode == "replace" and count:
        d_angle[outliers] = 0.0
        d_axis[outliers] = 0.0
        d_trans[outliers] = 0.0
    d_angle[outliers] += o_angle
    d_axis[outliers] += o_axis
    d_trans[outliers] += o_trans

    angle = angle + d_angle
    axis = axis + d_axis
    if spec.renormalize_axis:
        axis = _normalize_axes(axis)
    return (
        PoseTrajectory(quat.from_axis_angle(axis, angle), traj.translations + d_trans),
        outliers,
    )


@dataclass
class ErrorReport:
    """Per-sample errors of an estimate against ground truth.

    angle_deg: rotation angle between the orientations (degrees);
    axis_deg: angle between the canonical rotation axes (degrees);
    trans: Euclidean translation distance.
    """

    angle_deg: np.ndarray
    axis_deg: np.ndarray
    trans: np.ndarray

    def channels(self):
        return {"angle_deg": self.angle_deg, "axis_deg": self.axis_deg,
                "trans": self.trans}

    def summary(self):
        out = {}
        for name, values in self.channels().items():
            out[name] = {
                "median": float(np.median(values)),
                "mean": float(np.mean(values)),
                "std": float(np.std(values)),
                "q25": float(np.percentile(values, 25)),
                "q75": float(np.percentile(values, 75)),
            }
        return out


def evaluate(estimate, ground_truth):
    """Per-sample error channels between two equal-length trajectories.

    Rotation errors use the absolute quaternion inner product, so the
    antipodal representatives q and -q score identically.
    """
    if len(estimate) != len(ground_truth):
        raise ValueError(
            f"trajectory lengths differ: {len(estimate)} vs {len(ground_truth)}"
        )
    dot = np.abs(np.sum(estimate.rotations * ground_truth.rotations, axis=1))
    angle_deg = np.degrees(2.0 * np.arccos(np.clip(dot, 0.0, 1.0)))

    est_axis, _ = quat.to_axis_angle(estimate.rotations)
    gt_axis, _ = quat.to_axis_angle(ground_truth.rotations)
    axis_dot = np.abs(np.sum(est_axis * gt_axis, axis=1))
    axis_deg = np.degrees(np.arccos(np.clip(axis_dot, 0.0, 1.0)))

    trans = np.linalg.norm(estimate.translations - ground_truth.translations, axis=1)
    return ErrorReport(angle_deg=angle_deg, axis_deg=axis_deg, trans=trans)


def kalman_1d(values, process_var, meas_var):
    """Causal constant-position Kalman filter on scalar signals.

    values may be (n,) or (n, d); all columns share the gain sequence.
    Initialized at the first measurement with variance meas_var. Returns
    (filtered, gains) with gains[k] the update gain used at step k.
    """
    if process_var <= 0.0 or meas_var <= 0.0:
        raise ValueError("covariances must be positive")
    z = np.asarray(values, dtype=np.float64)
    out = np.empty_like(z)
    gains = np.empty(len(z))
    x = z[0].copy() if z.ndim > 1 else z[0]
    p = meas_var
    out[0] = x
    gains[0] = 1.0
    for k in range(1, len(z)):
        p = p + process_var
        g = p / (p + meas_var)
        x = x + g * (z[k] - x)
        p = (1.0 - g) * p
        out[k] = x
        gains[k] = g
    return out, gains


def kalman_baseline(traj, proc_meas_rot=(0.5, 2.0), proc_meas_trans=(0.2, 1.0)):
    """Per-component constant-position Kalman smoothing of a pose stream.

    Quaternion measurements are hemisphere-aligned to the running state
    before each update and the state is re-normalized afterwards; the
    translation components are filtered independently. Causal: only past
    samples influence each output. An approximate reproduction of a stock
    linear Kalman smoother, not a tuned motion model.
    """
    q_rot, r_rot = proc_meas_rot
    q_tr, r_tr = proc_meas_trans
    if min(q_rot, r_rot, q_tr, r_tr) <= 0.0:
        raise ValueError("covariances must be positive")

    n = len(traj)
    rot = np.empty((n, 4))
    x = traj.rotations[0].copy()
    p = r_rot
    rot[0] = x
    for k in range(1, n):
        z = traj.rotations[k]
        if np.dot(z, x) < 0.0:
            z = -z
        p = p + q_rot
        g = p / (p + r_rot)
        x = x + g * (z - x)
        p = (1.0 - g) * p
        x = x / np.linalg.norm(x)
        rot[k] = x

    trans, _ = kalman_1d(traj.translations, q_tr, r_tr)
    return PoseTrajectory(rot, trans)
