"""Robust principal-component local regression on tangent-space windows.

weighted_pca fits the dominant principal line of a weighted point set;
irls_wpca wraps it in an iteratively-reweighted loop that suppresses
outliers; filter_trajectory slides the fit over a pose sequence, mapping
each window into the tangent space at its center, projecting the center
onto the fitted line and mapping back.
"""

from typing import NamedTuple

import numpy as np

from . import manifold
from ._backend import core as _k

DEFAULT_DELTA = 1e-6
DEFAULT_IRLS_ITERS = 5


class PrincipalLine(NamedTuple):
    mean: np.ndarray       # weighted centroid, (D,)
    direction: np.ndarray  # unit vector, canonical sign, (D,)
    degenerate: bool       # True when the point set has zero spread


def _check_weights(w, k):
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (k,):
        raise ValueError(f"expected {k} weights, got shape {w.shape}")
    if np.any(w < 0.0):
        raise ValueError("weights must be nonnegative")
    if not np.any(w > 0.0):
        raise ValueError("weights must not all be zero")
    return w


def _project(pts, mean, direction):
    # orthogonal projection onto the line mean + span(direction)
    t = np.einsum("...kd,...d->...k", pts - mean[..., None, :], direction)
    return mean[..., None, :] + t[..., None] * direction[..., None, :]


def weighted_pca(points, weights):
    """Weighted principal line of a K x D point set.

    The direction is the dominant eigenvector of the weighted covariance
    C = sum_i w_i (x_i - mu)(x_i - mu)^T / (2 sum w) around the weighted
    mean mu; projections are the orthogonal projections of the inputs onto
    the fitted line. A zero-spread set is flagged degenerate and gets the
    fixed direction (1, 0, ..., 0).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("weighted_pca needs at least 2 points of shape (K, D)")
    weights = _check_weights(weights, points.shape[0])
    mean, direction, degenerate = _k.weighted_line_fit(points[None], weights[None])
    line = PrincipalLine(mean[0], direction[0], bool(degenerate[0]))
    return line, _project(points, line.mean, line.direction)


def gaussian_prior(points, center, metric):
    """Gaussian prior weights exp(-(x-c)^T D (x-c) / 2) in (0, 1].

    `metric` is the positive semi-definite form D: a scalar (isotropic
    multiple of the identity), a diagonal, or a full matrix.
    """
    points = np.asarray(points, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    diff = points - center
    metric = np.asarray(metric, dtype=np.float64)
    if metric.ndim == 0:
        if metric < 0.0:
            raise ValueError("metric must be positive semi-definite")
        quad = metric * np.sum(diff * diff, axis=-1)
    elif metric.ndim == 1:
        if np.any(metric < 0.0):
            raise ValueError("metric must be positive semi-definite")
        quad = np.sum(diff * diff * metric, axis=-1)
    else:
        if np.any(np.linalg.eigvalsh((metric + metric.T) / 2.0) < -1e-12):
            raise ValueError("metric must be positive semi-definite")
        quad = np.einsum("...d,de,...e->...", diff, metric, diff)
    return np.exp(-0.5 * quad)


def _irls_fit(pts, w0, fits, delta):
    """Shared batched fit loop: pts (n, K, D), w0 (n, K), `fits` rounds.

    Each round fits the weighted line, then re-derives per-point weights
    from the residual distances (w = 1/max(delta, |r|)), dampens them by
    the prior and renormalizes. Returns the last fit and its projections.
    """
    w = w0
    for i in range(fits):
        mean, direction, degenerate = _k.weighted_line_fit(pts, w)
        proj = _project(pts, mean, direction)
        if i + 1 < fits:
            residuals = np.linalg.norm(pts - proj, axis=-1)
            w = 1.0 / np.maximum(delta, residuals)
            w = w * w0
            w = w / np.linalg.norm(w, axis=-1, keepdims=True)
    return mean, direction, degenerate, proj


def irls_wpca(points, prior_weights, iterations=DEFAULT_IRLS_ITERS, delta=DEFAULT_DELTA):
    """Outlier-robust weighted PCA line fit (IRLS around weighted_pca)."""
    if iterations < 1:
        raise ValueError("irls_wpca needs at least one iteration")
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("irls_wpca needs at least 2 points of shape (K, D)")
    w0 = _check_weights(prior_weights, points.shape[0])
    mean, direction, degenerate, proj = _irls_fit(
        points[None], w0[None], iterations, delta
    )
    return PrincipalLine(mean[0], direction[0], bool(degenerate[0])), proj[0]


def weighted_least_squares(x, y, weights):
    """Generalized least squares: beta = (X^T W X)^-1 X^T W Y."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = _check_weights(weights, x.shape[0])
    xw = x * w[:, None]
    return np.linalg.solve(x.T @ xw, xw.T @ y)


# ---------------------------------------------------------------------------
# the sliding-window pose filter
# ---------------------------------------------------------------------------

def _window_indices(n, window):
    half = window // 2
    offsets = np.arange(-half, half + 1)
    raw = np.arange(n)[:, None] + offsets[None, :]
    valid = (raw >= 0) & (raw < n)
    return np.clip(raw, 0, n - 1), valid, offsets


def _prior_matrix(pts, valid, offsets, method, prior, bandwidth, window):
    if method == "pca":
        return valid.astype(np.float64)
    if prior == "index":
        h = bandwidth if bandwidth is not None else (window - 1) / 4.0
        w0 = np.exp(-0.5 * (offsets / h) ** 2)
        return w0[None, :] * valid
    if prior == "tangent":
        if bandwidth is None:
            raise ValueError("tangent prior requires an explicit bandwidth")
        center = pts[:, pts.shape[1] // 2, :]
        dist = np.linalg.norm(pts - center[:, None, :], axis=-1)
        return np.exp(-0.5 * (dist / bandwidth) ** 2) * valid
    raise ValueError(f"unknown prior mode {prior!r}")


def _filter_points(pts, valid, offsets, method, prior, bandwidth, window,
                   irls_iters, delta):
    w0 = _prior_matrix(pts, valid, offsets, method, prior, bandwidth, window)
    fits = irls_iters if method == "irls" else 1
    mean, direction, _, proj = _irls_fit(pts, w0, fits, delta)
    return proj[:, pts.shape[1] // 2, :]


def filter_trajectory(poses, window, space="dq", method="irls",
                      irls_iters=DEFAULT_IRLS_ITERS, delta=DEFAULT_DELTA,
                      prior="index", bandwidth=None):
    """Principal-component local regression over an ordered pose sequence.

    poses: (n, 8) unit dual quaternions for space="dq", or a
    (rotations (n, 4), translations (n, 3)) pair for space="split", where
    rotations are smoothed on the quaternion manifold and translations in
    plain Euclidean space, independently.

    window must be odd and >= 3; windows are truncated at the sequence
    boundaries (the center stays put). method is one of "pca" (uniform
    window weights, single fit), "wpca" (Gaussian prior weights) or "irls"
    (prior-damped reweighting, `irls_iters` rounds).
    """
    if int(window) != window or window < 3 or window % 2 == 0:
        raise ValueError("window size must be an odd integer >= 3")
    window = int(window)
    if method not in ("pca", "wpca", "irls"):
        raise ValueError(f"unknown method {method!r}")
    if method == "irls" and irls_iters < 1:
        raise ValueError("irls needs at least one iteration")

    def smooth_manifold(points):
        n = points.shape[0]
        idx, valid, offsets = _window_indices(n, window)
        tangents = _k.window_tangents(points, idx)
        proj = _filter_points(tangents, valid, offsets, method, prior,
                              bandwidth, window, irls_iters, delta)
        return manifold.exp_at(points, proj)

    def smooth_euclidean(points):
        n = points.shape[0]
        idx, valid, offsets = _window_indices(n, window)
        return _filter_points(points[idx], valid, offsets, method, prior,
                              bandwidth, window, irls_iters, delta)

    if space == "dq":
        poses = np.asarray(poses, dtype=np.float64)
        if poses.ndim != 2 or poses.shape[1] != 8:
            raise ValueError("space='dq' expects poses of shape (n, 8)")
        return smooth_manifold(poses)
    if space == "split":
        rotations, translations = poses
        rotations = np.asarray(rotations, dtype=np.float64)
        translations = np.asarray(translations, dtype=np.float64)
        if rotations.shape[-1] != 4 or translations.shape[-1] != 3:
            raise ValueError(
                "space='split' expects (rotations (n, 4), translations (n, 3))"
            )
        return smooth_manifold(rotations), smooth_euclidean(translations)
    raise ValueError(f"unknown space {space!r}")
