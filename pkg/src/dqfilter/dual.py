"""Dual numbers, dual quaternions and the rigid-displacement exp/log maps.

A dual quaternion is stored as a float64 array of shape (..., 8): the real
quaternion part in slots 0..3 and the dual part in slots 4..7, both
scalar-first. Unit dual quaternions (|r| = 1 and <r, s> = 0) encode rigid
displacements as Q = r + eps * (1/2) t r for rotation r and translation t.

Dual numbers are arrays of shape (..., 2) holding (real, dual) parts.
"""

from typing import NamedTuple

import numpy as np

from ._backend import core as _k
from .quat import quat_conjugate, quat_mul

UNIT_TOL = 1e-9
PURE_TOL = 1e-9


class Screw(NamedTuple):
    """Chasles decomposition of a displacement.

    direction: unit 3-vector of the screw axis; moment: axis moment p x v
    for points p on the axis; angle: rotation about the axis in [0, pi];
    pitch: translation distance along the axis.
    """

    direction: np.ndarray
    moment: np.ndarray
    angle: np.ndarray
    pitch: np.ndarray


# ---------------------------------------------------------------------------
# dual numbers
# ---------------------------------------------------------------------------

def dual(re, du=0.0):
    """Pack (real, dual) parts into a dual number array."""
    return np.stack(np.broadcast_arrays(np.asarray(re, np.float64),
                                        np.asarray(du, np.float64)), axis=-1)


def dual_mul(a, b):
    """Product with eps^2 = 0: (ar + eps ad)(br + eps bd) = ar br + eps(ar bd + ad br)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.stack(
        [a[..., 0] * b[..., 0], a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]],
        axis=-1,
    )


def dual_conjugate(z):
    """Dual conjugate r - eps s."""
    z = np.asarray(z, dtype=np.float64)
    return np.stack([z[..., 0], -z[..., 1]], axis=-1)


def dual_sin(phi):
    """sin on dual numbers: sin(p) + eps pd cos(p)."""
    phi = np.asarray(phi, dtype=np.float64)
    p, pd = phi[..., 0], phi[..., 1]
    return np.stack([np.sin(p), pd * np.cos(p)], axis=-1)


def dual_cos(phi):
    """cos on dual numbers: cos(p) - eps pd sin(p)."""
    phi = np.asarray(phi, dtype=np.float64)
    p, pd = phi[..., 0], phi[..., 1]
    return np.stack([np.cos(p), -pd * np.sin(p)], axis=-1)


# ---------------------------------------------------------------------------
# dual quaternions
# ---------------------------------------------------------------------------

def dq_identity(shape=()):
    out = np.zeros(tuple(shape) + (8,), dtype=np.float64)
    out[..., 0] = 1.0
    return out


def dq_mul(a, b):
    """Dual quaternion product (eps commutes with i, j, k)."""
    return _k.dq_mul(a, b)


def dq_quaternion_conjugate(q):
    """(r, s) -> (r~, s~); inverts unit elements."""
    return _k.dq_conj(q)


def dq_dual_conjugate(q):
    """(r, s) -> (r, -s)."""
    q = np.asarray(q, dtype=np.float64).copy()
    q[..., 4:] = -q[..., 4:]
    return q


def dq_combined_conjugate(q):
    """(r, s) -> (r~, -s~); used by the point displacement sandwich."""
    out = _k.dq_conj(q)
    out[..., 4:] = -out[..., 4:]
    return out


def unit_violation(q):
    """Deviations from the two unit constraints, (| |r|-1 |, |<r,s>| * 2)."""
    q = np.asarray(q, dtype=np.float64)
    r, s = q[..., :4], q[..., 4:]
    norm_err = np.abs(np.linalg.norm(r, axis=-1) - 1.0)
    ortho_err = 2.0 * np.abs(np.sum(r * s, axis=-1))
    return norm_err, ortho_err


def dq_project(q):
    """Nearest unit dual quaternion: normalize r, remove the s-component along r."""
    q = np.asarray(q, dtype=np.float64)
    r, s = q[..., :4], q[..., 4:]
    r = r / np.linalg.norm(r, axis=-1, keepdims=True)
    s = s - np.sum(r * s, axis=-1, keepdims=True) * r
    return np.concatenate([r, s], axis=-1)


def from_pose(rotation, translation):
    """Unit dual quaternion Q = r + eps (1/2) t r for pose (r, t)."""
    rotation = np.asarray(rotation, dtype=np.float64)
    translation = np.asarray(translation, dtype=np.float64)
    t = np.zeros(translation.shape[:-1] + (4,), dtype=np.float64)
    t[..., 1:] = translation
    dual_part = 0.5 * quat_mul(t, rotation)
    rotation, dual_part = np.broadcast_arrays(rotation, dual_part)
    return np.concatenate([rotation, dual_part], axis=-1)


def to_pose(q, tol=1e-6):
    """Invert from_pose: (rotation, translation) with t = 2 vec(s r~)."""
    q = np.asarray(q, dtype=np.float64)
    norm_err, ortho_err = unit_violation(q)
    if np.any(norm_err > tol) or np.any(ortho_err > tol):
        raise ValueError("dual quaternion violates the unit constraints")
    return q[..., :4].copy(), _k.dq_translation(q)


def transform_point(q, u):
    """Apply the displacement to point(s) u: Q P combined_conj(Q) = r u r~ + t."""
    return _k.dq_transform(q, u)


def to_screw(q):
    """Screw parameters of a unit dual quaternion (canonical hemisphere).

    Pure translations (sin(angle/2) < 1e-7) return angle 0, pitch |t|,
    direction t/|t| ((1,0,0) for the identity) and zero moment.
    """
    angle, pitch, direction, moment = _k.dq_to_screw(q)
    return Screw(direction=direction, moment=moment, angle=angle, pitch=pitch)


def from_screw(screw):
    """Unit dual quaternion of a screw displacement.

    Expands [cos(H/2), sin(H/2) V] with dual angle H = angle + eps pitch and
    dual axis V = direction + eps moment via the dual trigonometric rules.
    """
    direction = np.asarray(screw.direction, dtype=np.float64)
    if np.any(np.abs(np.linalg.norm(direction, axis=-1) - 1.0) > UNIT_TOL):
        raise ValueError("screw direction must have unit length")
    return _k.dq_from_screw(screw.angle, screw.pitch, direction, screw.moment)


def dq_exp(t):
    """Exponential at the identity for pure dual quaternions.

    Restricted to purely-dual tangents it is exactly affine:
    dq_exp(eps a) = 1 + eps a.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t[..., 0]) > PURE_TOL) or np.any(np.abs(t[..., 4]) > PURE_TOL):
        raise ValueError("dq_exp expects a pure dual quaternion (zero scalar parts)")
    return _k.dq_exp(t)


def dq_log(q):
    """Logarithm at the identity, principal branch.

    Equals the dual-number product V * (H/2) of the screw axis and half the
    dual angle; the input is canonicalized to the nonnegative-scalar
    hemisphere, so dq_exp(dq_log(Q)) reproduces Q up to overall sign.
    """
    return _k.dq_log(q)


def to_matrix(q):
    """4x4 homogeneous matrix of the displacement."""
    q = np.asarray(q, dtype=np.float64)
    r = q[..., :4]
    w, x, y, z = r[..., 0], r[..., 1], r[..., 2], r[..., 3]
    m = np.zeros(q.shape[:-1] + (4, 4), dtype=np.float64)
    m[..., 0, 0] = 1.0 - 2.0 * (y * y + z * z)
    m[..., 0, 1] = 2.0 * (x * y - w * z)
    m[..., 0, 2] = 2.0 * (x * z + w * y)
    m[..., 1, 0] = 2.0 * (x * y + w * z)
    m[..., 1, 1] = 1.0 - 2.0 * (x * x + z * z)
    m[..., 1, 2] = 2.0 * (y * z - w * x)
    m[..., 2, 0] = 2.0 * (x * z - w * y)
    m[..., 2, 1] = 2.0 * (y * z + w * x)
    m[..., 2, 2] = 1.0 - 2.0 * (x * x + y * y)
    m[..., :3, 3] = _k.dq_translation(q)
    m[..., 3, 3] = 1.0
    return m
