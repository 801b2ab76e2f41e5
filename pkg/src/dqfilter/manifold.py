"""Exp/log maps at arbitrary base points via parallel transport.

Works on both pose manifolds, dispatching on the trailing dimension:
unit quaternions (..., 4) and unit dual quaternions (..., 8). The maps at
a base point x are pulled back to the identity through the group action,

    exp_x(s) = x exp(x^-1 s),    log_x(q) = x log(x^-1 q),

so tangent vectors are kept in ambient coordinates at their base point and
x^-1 * coords is pure. Inverses of unit elements are conjugates.
"""

import numpy as np

from ._backend import core as _k

PURE_TOL = 1e-9


def _ops(obj):
    d = np.asarray(obj).shape[-1]
    if d == 4:
        return _k.quat_mul, _k.quat_conj, _k.quat_exp, _k.quat_log
    if d == 8:
        return _k.dq_mul, _k.dq_conj, _k.dq_exp, _k.dq_log
    raise ValueError(f"manifold points must have 4 or 8 coordinates, got {d}")


def log_at(x, q):
    """Tangent vector at x pointing to q (hemisphere-aligned internally)."""
    mul, conj, _, log = _ops(x)
    return mul(x, log(mul(conj(x), q)))


def exp_at(x, s):
    """Map a tangent vector with base x back onto the manifold.

    Raises if x^-1 s has scalar part(s) beyond tolerance, which is the
    symptom of a tangent taken at a different base point.
    """
    mul, conj, exp, _ = _ops(x)
    rel = mul(conj(x), np.asarray(s, dtype=np.float64))
    scalars = rel[..., 0::4] if rel.shape[-1] == 8 else rel[..., 0:1]
    if np.any(np.abs(scalars) > PURE_TOL):
        raise ValueError("tangent vector is not based at x")
    rel = rel.copy()
    if rel.shape[-1] == 8:
        rel[..., 0] = 0.0
        rel[..., 4] = 0.0
    else:
        rel[..., 0] = 0.0
    return mul(x, exp(rel))


def hemisphere_align(reference, q):
    """Return q or -q, whichever real part points with the reference.

    Decided by the 4-D inner product of the (real) quaternion parts; the
    full-width product breaks exact ties.
    """
    reference = np.asarray(reference, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    dot = np.sum(reference[..., :4] * q[..., :4], axis=-1)
    tie = dot == 0.0
    if np.any(tie):
        full = np.sum(reference * q, axis=-1)
        dot = np.where(tie, full, dot)
    return np.where((dot < 0.0)[..., None], -q, q)


def geodesic_distance(x, q):
    """Length of the geodesic from x to q (tangent norm at the identity).

    Computed as |log(x^-1 q)|, which makes the distance exactly invariant
    under left translation and symmetric; it vanishes iff x = +-q.
    """
    mul, conj, _, log = _ops(x)
    return np.linalg.norm(log(mul(conj(x), q)), axis=-1)
