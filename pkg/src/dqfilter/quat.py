"""Quaternion algebra and the rotation exp/log maps.

Quaternions are float64 arrays of shape (..., 4) in scalar-first order
(w, x, y, z); the Hamilton product is used throughout. Unit quaternions
encode rotations with the half-angle convention r = [cos(t/2), sin(t/2) v],
so q and -q describe the same rotation.
"""

import numpy as np

from ._backend import core as _k

UNIT_TOL = 1e-9


def identity(shape=()):
    """Identity quaternion(s) of shape (*shape, 4)."""
    out = np.zeros(tuple(shape) + (4,), dtype=np.float64)
    out[..., 0] = 1.0
    return out


def quat_mul(a, b):
    """Hamilton product a * b (non-commutative)."""
    return _k.quat_mul(a, b)


def quat_conjugate(q):
    """Conjugate: negated vector part."""
    return _k.quat_conj(q)


def quat_norm(q):
    return np.linalg.norm(np.asarray(q, dtype=np.float64), axis=-1)


def quat_normalize(q):
    """Rescale to unit norm (cheap stabilizer after long product chains)."""
    q = np.asarray(q, dtype=np.float64)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def from_axis_angle(axis, angle):
    """Unit quaternion for a rotation by `angle` around the unit 3-vector `axis`."""
    axis = np.asarray(axis, dtype=np.float64)
    angle = np.asarray(angle, dtype=np.float64)
    n = np.linalg.norm(axis, axis=-1)
    if np.any(np.abs(n - 1.0) > UNIT_TOL):
        raise ValueError("rotation axis must have unit length")
    half = 0.5 * angle
    out = np.empty(np.broadcast_shapes(angle.shape, axis.shape[:-1]) + (4,), np.float64)
    out[..., 0] = np.cos(half)
    out[..., 1:] = np.sin(half)[..., None] * axis
    return out


def to_axis_angle(q):
    """Canonical (axis, angle) of a unit quaternion: angle in [0, pi].

    The identity rotation has no axis; (1, 0, 0) is returned for it.
    """
    q = np.asarray(q, dtype=np.float64)
    q = np.where(q[..., 0:1] < 0.0, -q, q)
    vec = q[..., 1:]
    n = np.linalg.norm(vec, axis=-1)
    angle = 2.0 * np.arctan2(n, q[..., 0])
    safe = np.where(n > 0.0, n, 1.0)
    axis = vec / safe[..., None]
    axis = np.where((n > 0.0)[..., None], axis, [1.0, 0.0, 0.0])
    return axis, angle


def rotate_point(r, u):
    """Rotate point(s) u by unit quaternion(s) r via the sandwich map."""
    return _k.quat_rotate(r, u)


def quat_exp(t):
    """Exponential at the identity: pure quaternion [0, phi v] -> [cos phi, sin phi v]."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t[..., 0]) > UNIT_TOL):
        raise ValueError("quat_exp expects a pure quaternion (zero scalar part)")
    return _k.quat_exp(t)


def quat_log(r):
    """Logarithm at the identity, principal branch with phi in [0, pi/2].

    The input is canonicalized to the nonnegative-scalar hemisphere first,
    so quat_exp(quat_log(r)) reproduces r up to overall sign.
    """
    return _k.quat_log(r)
