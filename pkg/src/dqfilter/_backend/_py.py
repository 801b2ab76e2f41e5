"""NumPy fallback backend: vectorized versions of the hot kernels.

Layouts (float64, scalar-first):
  quaternion       (..., 4)  = (w, x, y, z)
  dual quaternion  (..., 8)  = (rw, rx, ry, rz, sw, sx, sy, sz)

All maps take and return plain ndarrays; hemisphere canonicalization
(nonnegative leading scalar) happens inside the log maps.
"""

import numpy as np

_SMALL = 1e-4      # switch to Taylor forms of the trig coefficient functions
_TINY_SIN = 1e-8   # sin(phi) underflow guard in the quaternion log


def _sinc(x):
    # sin(x)/x, smooth through 0
    x = np.asarray(x)
    small = x < _SMALL
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def _g2(x):
    # (x cos x - sin x) / x^3, smooth through 0 (limit -1/3)
    x = np.asarray(x)
    small = x < _SMALL
    safe = np.where(small, 1.0, x)
    return np.where(
        small,
        -1.0 / 3.0 + x * x / 30.0,
        (safe * np.cos(safe) - np.sin(safe)) / (safe * safe * safe),
    )


# ---------------------------------------------------------------------------
# quaternions
# ---------------------------------------------------------------------------

def quat_mul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def quat_conj(q):
    q = np.asarray(q, dtype=np.float64)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def quat_exp(t):
    """exp of a pure quaternion (0, v): [cos|v|, sinc(|v|) v]."""
    t = np.asarray(t, dtype=np.float64)
    vec = t[..., 1:]
    phi = np.linalg.norm(vec, axis=-1)
    out = np.empty(t.shape, dtype=np.float64)
    out[..., 0] = np.cos(phi)
    out[..., 1:] = _sinc(phi)[..., None] * vec
    return out


def quat_log(r):
    """Principal log of a unit quaternion: [0, phi v], phi in [0, pi/2]."""
    r = np.asarray(r, dtype=np.float64)
    r = np.where(r[..., 0:1] < 0.0, -r, r)
    w = r[..., 0]
    vec = r[..., 1:]
    n = np.linalg.norm(vec, axis=-1)
    phi = np.arctan2(n, w)
    small = n < _TINY_SIN
    # phi/sin(phi) -> 1 + phi^2/6 as sin(phi) -> 0
    factor = np.where(small, 1.0 + phi * phi / 6.0, phi / np.where(small, 1.0, n))
    out = np.zeros(r.shape, dtype=np.float64)
    out[..., 1:] = factor[..., None] * vec
    return out


def quat_rotate(r, u):
    """Rotate 3-vectors u by unit quaternions r via the sandwich r p r~."""
    r = np.asarray(r, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    p = np.zeros(u.shape[:-1] + (4,), dtype=np.float64)
    p[..., 1:] = u
    return quat_mul(quat_mul(r, p), quat_conj(r))[..., 1:]


# ---------------------------------------------------------------------------
# dual quaternions
# ---------------------------------------------------------------------------

def dq_mul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ar, ad = a[..., :4], a[..., 4:]
    br, bd = b[..., :4], b[..., 4:]
    return np.concatenate(
        [quat_mul(ar, br), quat_mul(ar, bd) + quat_mul(ad, br)], axis=-1
    )


def dq_conj(q):
    """Componentwise quaternion conjugate (the inverse for unit elements)."""
    q = np.asarray(q, dtype=np.float64)
    out = q.copy()
    out[..., 1:4] = -out[..., 1:4]
    out[..., 5:8] = -out[..., 5:8]
    return out


def dq_exp(t):
    """exp of a pure dual quaternion (0, a, 0, b).

    With w = |a|, c = <a, b>:
      real = [cos w, sinc(w) a]
      dual = [-c sinc(w), sinc(w) b + g2(w) c a]
    which is the closed screw form with all coefficients smooth at w = 0.
    """
    t = np.asarray(t, dtype=np.float64)
    a = t[..., 1:4]
    b = t[..., 5:8]
    w = np.linalg.norm(a, axis=-1)
    c = np.sum(a * b, axis=-1)
    s1 = _sinc(w)
    s2 = _g2(w)
    out = np.empty(t.shape, dtype=np.float64)
    out[..., 0] = np.cos(w)
    out[..., 1:4] = s1[..., None] * a
    out[..., 4] = -c * s1
    out[..., 5:8] = s1[..., None] * b + (s2 * c)[..., None] * a
    return out


def dq_log(q):
    """Principal log of a unit dual quaternion (exact inverse of dq_exp)."""
    q = np.asarray(q, dtype=np.float64)
    q = np.where(q[..., 0:1] < 0.0, -q, q)
    wr = q[..., 0]
    vr = q[..., 1:4]
    wd = q[..., 4]
    vd = q[..., 5:8]
    n = np.linalg.norm(vr, axis=-1)
    phi = np.arctan2(n, wr)
    small = n < _TINY_SIN
    factor = np.where(small, 1.0 + phi * phi / 6.0, phi / np.where(small, 1.0, n))
    a = factor[..., None] * vr
    s1 = _sinc(phi)              # >= 2/pi on the canonical hemisphere
    s2 = _g2(phi)
    c = -wd / s1
    b = (vd - (s2 * c)[..., None] * a) / s1[..., None]
    out = np.zeros(q.shape, dtype=np.float64)
    out[..., 1:4] = a
    out[..., 5:8] = b
    return out


def dq_transform(q, u):
    """Displace 3-vectors u via the dual sandwich Q P conj_combined(Q)."""
    q = np.asarray(q, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    p = np.zeros(u.shape[:-1] + (8,), dtype=np.float64)
    p[..., 0] = 1.0
    p[..., 5:8] = u
    cc = dq_conj(q)
    cc[..., 4:] = -cc[..., 4:]   # combined (quaternion + dual) conjugate
    return dq_mul(dq_mul(q, p), cc)[..., 5:8]


def dq_translation(q):
    """Translation vector t = 2 vec(s r~) of a unit dual quaternion."""
    q = np.asarray(q, dtype=np.float64)
    return 2.0 * quat_mul(q[..., 4:], quat_conj(q[..., :4]))[..., 1:]


def dq_to_screw(q, eps=1e-7):
    """Screw parameters (angle, pitch, direction, moment) of a unit DQ.

    Below sin(theta/2) < eps the axis is undefined and the displacement is
    treated as a pure translation: angle 0, pitch |t|, direction t/|t|
    (x-axis for the identity), zero moment.
    """
    q = np.asarray(q, dtype=np.float64)
    q = np.where(q[..., 0:1] < 0.0, -q, q)
    wr = q[..., 0]
    vr = q[..., 1:4]
    n = np.linalg.norm(vr, axis=-1)
    t = dq_translation(q)

    rotational = n >= eps
    safe_n = np.where(rotational, n, 1.0)
    angle = np.where(rotational, 2.0 * np.arctan2(n, wr), 0.0)
    direction = vr / safe_n[..., None]
    pitch = np.sum(t * direction, axis=-1)
    # moment = (t x v + cot(theta/2) v x (t x v)) / 2, cot = wr/n
    txv = np.cross(t, direction)
    moment = 0.5 * (txv + (wr / safe_n)[..., None] * np.cross(direction, txv))

    tn = np.linalg.norm(t, axis=-1)
    has_t = tn > 0.0
    fallback_dir = np.where(
        has_t[..., None], t / np.where(has_t, tn, 1.0)[..., None], 0.0
    )
    fallback_dir[..., 0] = np.where(has_t, fallback_dir[..., 0], 1.0)

    rot = rotational[..., None]
    direction = np.where(rot, direction, fallback_dir)
    moment = np.where(rot, moment, 0.0)
    pitch = np.where(rotational, pitch, tn)
    return angle, pitch, direction, moment


def dq_from_screw(angle, pitch, direction, moment):
    angle = np.asarray(angle, dtype=np.float64)
    pitch = np.asarray(pitch, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    moment = np.asarray(moment, dtype=np.float64)
    shape = np.broadcast_shapes(
        angle.shape, pitch.shape, direction.shape[:-1], moment.shape[:-1]
    )
    h = np.broadcast_to(0.5 * angle, shape)
    hp = np.broadcast_to(0.5 * pitch, shape)
    direction = np.broadcast_to(direction, shape + (3,))
    moment = np.broadcast_to(moment, shape + (3,))
    c = np.cos(h)
    s = np.sin(h)
    out = np.empty(shape + (8,), dtype=np.float64)
    out[..., 0] = c
    out[..., 1:4] = s[..., None] * direction
    out[..., 4] = -hp * s
    out[..., 5:8] = s[..., None] * moment + (hp * c)[..., None] * direction
    return out


# ---------------------------------------------------------------------------
# windowed filter kernels
# ---------------------------------------------------------------------------

def window_tangents(points, idx):
    """Transported log maps of pose windows.

    points: (n, d) unit elements, d in {4, 8}; idx: (n, K) gather indices.
    Row i of the result holds x_i * log(x_i^-1 x_k) for each k in idx[i].
    """
    points = np.asarray(points, dtype=np.float64)
    idx = np.asarray(idx)
    d = points.shape[-1]
    base = points[:, None, :]
    gathered = points[idx]
    if d == 4:
        rel = quat_mul(quat_conj(base), gathered)
        return quat_mul(base, quat_log(rel))
    rel = dq_mul(dq_conj(base), gathered)
    return dq_mul(base, dq_log(rel))


def weighted_line_fit(pts, w):
    """Weighted principal line per window.

    pts: (n, K, D), w: (n, K) nonnegative with positive sum per row.
    Returns (mean (n, D), direction (n, D) unit with canonical sign,
    degenerate (n,) bool). Degenerate windows (zero spread) get the fixed
    direction e0.
    """
    pts = np.asarray(pts, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    sw = np.sum(w, axis=1)
    mean = np.einsum("nk,nkd->nd", w, pts) / sw[:, None]
    centered = pts - mean[:, None, :]
    cov = np.einsum("nk,nkd,nke->nde", w, centered, centered)
    cov /= (2.0 * sw)[:, None, None]
    evals, evecs = np.linalg.eigh(cov)
    direction = evecs[..., -1]
    degenerate = evals[..., -1] <= 1e-30
    if np.any(degenerate):
        e0 = np.zeros(pts.shape[-1])
        e0[0] = 1.0
        direction = np.where(degenerate[:, None], e0, direction)
    return mean, _canonical_sign(direction), degenerate


def _canonical_sign(direction):
    # flip so the first component with |v_i| > 1e-9 is positive
    significant = np.abs(direction) > 1e-9
    first = np.argmax(significant, axis=-1)
    lead = np.take_along_axis(direction, first[..., None], axis=-1)[..., 0]
    return np.where((lead < 0.0)[..., None], -direction, direction)
