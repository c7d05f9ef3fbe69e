"""Small fixed-size vector and quaternion helpers.

Everything operates on plain tuples so the per-sample interaction step stays
allocation-light.  Conventions used across the package:

* right-handed world frame, x east, y north, z up;
* a yaw of 0 faces +x, positive yaw turns counter-clockwise (towards +y);
* quaternions are (w, x, y, z) and rotate the local frame whose forward
  axis is +x and whose up axis is +z.
"""

from __future__ import annotations

import math

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]


def add(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def norm(a: Vec3) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def dist(a: Vec3, b: Vec3) -> float:
    dx, dy, dz = a[0] - b[0], a[1] - b[1], a[2] - b[2]
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def dist_xy(a: Vec3, b: Vec3) -> float:
    dx, dy = a[0] - b[0], a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)


def normalize(a: Vec3) -> Vec3:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def lerp(a: Vec3, b: Vec3, t: float) -> Vec3:
    return (
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    )


def angle_between(a: Vec3, b: Vec3) -> float:
    """Angle in radians between two nonzero vectors."""
    c = dot(a, b) / (norm(a) * norm(b))
    return math.acos(max(-1.0, min(1.0, c)))


def rot_z(p: Vec3, yaw: float) -> Vec3:
    """Rotate about the world up axis."""
    c, s = math.cos(yaw), math.sin(yaw)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1], p[2])


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


def ease_in_out(u: float) -> float:
    """Smoothstep easing on [0, 1]."""
    u = max(0.0, min(1.0, u))
    return u * u * (3.0 - 2.0 * u)


# -- quaternions ---------------------------------------------------------


def quat_mul(a: Quat, b: Quat) -> Quat:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_rotate(q: Quat, v: Vec3) -> Vec3:
    w, x, y, z = q
    # v' = v + 2*r x (r x v + w*v), r = (x, y, z)
    cx = y * v[2] - z * v[1] + w * v[0]
    cy = z * v[0] - x * v[2] + w * v[1]
    cz = x * v[1] - y * v[0] + w * v[2]
    return (
        v[0] + 2.0 * (y * cz - z * cy),
        v[1] + 2.0 * (z * cx - x * cz),
        v[2] + 2.0 * (x * cy - y * cx),
    )


def quat_conj(q: Quat) -> Quat:
    return (q[0], -q[1], -q[2], -q[3])


def quat_norm(q: Quat) -> float:
    return math.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2)


def quat_from_yaw_pitch(yaw: float, pitch: float) -> Quat:
    """Orientation looking along yaw, then pitched down by ``pitch``.

    Built as Rz(yaw) * Ry(pitch); positive pitch tips the forward axis
    below the horizon.
    """
    cy, sy = math.cos(yaw * 0.5), math.sin(yaw * 0.5)
    cp, sp = math.cos(pitch * 0.5), math.sin(pitch * 0.5)
    qz = (cy, 0.0, 0.0, sy)
    qy = (cp, 0.0, sp, 0.0)
    return quat_mul(qz, qy)


def look_at_quat(origin: Vec3, target: Vec3) -> Quat:
    """Orientation whose forward axis points from origin to target."""
    d = sub(target, origin)
    yaw = math.atan2(d[1], d[0])
    pitch = math.atan2(-d[2], math.hypot(d[0], d[1]))
    return quat_from_yaw_pitch(yaw, pitch)


def segment_distance(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> float:
    """Minimum distance between segments p1-q1 and p2-q2."""
    d1 = sub(q1, p1)
    d2 = sub(q2, p2)
    r = sub(p1, p2)
    a = dot(d1, d1)
    e = dot(d2, d2)
    f = dot(d2, r)
    if a == 0.0 and e == 0.0:
        return norm(r)
    if a == 0.0:
        s, t = 0.0, max(0.0, min(1.0, f / e))
    else:
        c = dot(d1, r)
        if e == 0.0:
            t, s = 0.0, max(0.0, min(1.0, -c / a))
        else:
            b = dot(d1, d2)
            denom = a * e - b * b
            s = max(0.0, min(1.0, (b * f - c * e) / denom)) if denom != 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = max(0.0, min(1.0, -c / a))
            elif t > 1.0:
                t = 1.0
                s = max(0.0, min(1.0, (b - c) / a))
    cp1 = add(p1, scale(d1, s))
    cp2 = add(p2, scale(d2, t))
    return dist(cp1, cp2)


def ray_hits_vertical_cylinder(
    origin: Vec3,
    direction: Vec3,
    center_xy: tuple[float, float],
    radius: float,
    z_min: float,
    z_max: float,
) -> float | None:
    """First positive ray parameter hitting a vertical cylinder, else None.

    The cylinder axis is the vertical line through ``center_xy`` between
    ``z_min`` and ``z_max``.  ``direction`` need not be unit length; the
    returned parameter is in units of its length.
    """
    ox, oy = origin[0] - center_xy[0], origin[1] - center_xy[1]
    dx, dy = direction[0], direction[1]
    a = dx * dx + dy * dy
    b = 2.0 * (ox * dx + oy * dy)
    c = ox * ox + oy * oy - radius * radius
    if a == 0.0:
        # vertical ray: inside the disc or not
        if c > 0.0:
            return None
        if direction[2] == 0.0:
            return 0.0 if z_min <= origin[2] <= z_max else None
        t_lo = (z_min - origin[2]) / direction[2]
        t_hi = (z_max - origin[2]) / direction[2]
        t = min(x for x in (t_lo, t_hi) if x >= 0.0) if max(t_lo, t_hi) >= 0.0 else None
        return t
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    for t in ((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)):
        if t >= 0.0:
            z = origin[2] + direction[2] * t
            if z_min <= z <= z_max:
                return t
    return None
