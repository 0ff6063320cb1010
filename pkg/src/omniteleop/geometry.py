"""3-vector and unit-quaternion algebra shared by every module.

Quaternions are scalar-first [w, x, y, z] throughout. All functions are
pure and allocate new values; nothing here holds state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

NORMALIZE_EPS = 1e-6


class DegenerateDirection(ValueError):
    """Raised when a direction is requested from a (near-)zero vector."""


@dataclass(frozen=True)
class Vec3:
    """Cartesian 3-vector in meters (or unitless when used as a direction)."""

    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def hadamard(self, other: "Vec3") -> "Vec3":
        """Elementwise product (used for per-axis scaling factors)."""
        return Vec3(self.x * other.x, self.y * other.y, self.z * other.z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ZERO3 = Vec3(0.0, 0.0, 0.0)


def normalize(v: Vec3) -> Vec3:
    """Unit vector along v.

    Raises DegenerateDirection when ``norm(v) <= NORMALIZE_EPS`` — callers
    that must not drop commands (spherical mode) catch this and hold.
    """
    n = v.norm()
    if n <= NORMALIZE_EPS:
        raise DegenerateDirection(f"cannot normalize vector of norm {n!r}")
    return Vec3(v.x / n, v.y / n, v.z / n)


@dataclass(frozen=True)
class UnitQuat:
    """Unit quaternion, scalar-first [w, x, y, z].

    Construct through the factories or the algebra below; every operation
    here returns a quaternion renormalized to |norm - 1| <= 1e-9.
    """

    w: float
    x: float
    y: float
    z: float

    @staticmethod
    def identity() -> "UnitQuat":
        return UnitQuat(1.0, 0.0, 0.0, 0.0)

    @staticmethod
    def from_axis_angle(axis: Vec3, angle: float) -> "UnitQuat":
        u = normalize(axis)
        half = 0.5 * angle
        s = math.sin(half)
        return UnitQuat(math.cos(half), u.x * s, u.y * s, u.z * s)

    def norm(self) -> float:
        return math.sqrt(
            self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
        )

    def normalized(self) -> "UnitQuat":
        n = self.norm()
        if n <= NORMALIZE_EPS or not math.isfinite(n):
            raise DegenerateDirection(f"cannot normalize quaternion of norm {n!r}")
        return UnitQuat(self.w / n, self.x / n, self.y / n, self.z / n)

    def dot(self, other: "UnitQuat") -> float:
        return (
            self.w * other.w
            + self.x * other.x
            + self.y * other.y
            + self.z * other.z
        )

    def is_finite(self) -> bool:
        return all(
            math.isfinite(c) for c in (self.w, self.x, self.y, self.z)
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)


def quat_mul(a: UnitQuat, b: UnitQuat) -> UnitQuat:
    """Hamilton product a ∘ b, renormalized."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    return UnitQuat(w, x, y, z).normalized()


def quat_conj(q: UnitQuat) -> UnitQuat:
    """Conjugate; for a unit quaternion this is the inverse rotation."""
    return UnitQuat(q.w, -q.x, -q.y, -q.z)


def quat_error_angle(a: UnitQuat, b: UnitQuat) -> float:
    """Angle in radians of the rotation taking a to b, in [0, pi].

    Sign-invariant: q and -q describe the same rotation.
    """
    return 2.0 * math.acos(min(1.0, abs(a.dot(b))))


def canonicalized(q: UnitQuat) -> UnitQuat:
    """Hemisphere-canonical form (w >= 0). Applied at wire boundaries only."""
    if q.w < 0.0:
        return UnitQuat(-q.w, -q.x, -q.y, -q.z)
    return q


def slerp(a: UnitQuat, b: UnitQuat, t: float) -> UnitQuat:
    """Shortest-arc spherical interpolation from a (t=0) to b (t=1).

    b is sign-corrected so the 4D dot product with a is non-negative.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"slerp parameter t={t!r} outside [0, 1]")
    dot = a.dot(b)
    bw, bx, by, bz = b.w, b.x, b.y, b.z
    if dot < 0.0:
        dot = -dot
        bw, bx, by, bz = -bw, -bx, -by, -bz
    if dot > 1.0 - 1e-12:
        # Nearly parallel: linear blend is within renormalization error.
        q = UnitQuat(
            a.w + t * (bw - a.w),
            a.x + t * (bx - a.x),
            a.y + t * (by - a.y),
            a.z + t * (bz - a.z),
        )
        return q.normalized()
    theta = math.acos(min(1.0, dot))
    sin_theta = math.sin(theta)
    ca = math.sin((1.0 - t) * theta) / sin_theta
    cb = math.sin(t * theta) / sin_theta
    return UnitQuat(
        ca * a.w + cb * bw,
        ca * a.x + cb * bx,
        ca * a.y + cb * by,
        ca * a.z + cb * bz,
    ).normalized()


@dataclass(frozen=True)
class Pose:
    """Position plus orientation; the unit everything in the pipeline moves."""

    position: Vec3
    orientation: UnitQuat
