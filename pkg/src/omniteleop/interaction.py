"""Hand-to-robot command mapping for the four interaction modes.

Every operation here is a pure function from (state, operator frame) to a
pose command, so the session loop can replay streams deterministically.
Position arithmetic sticks to primitive add/multiply shapes on purpose:
the test suite holds line-by-line reference renderings of the spherical
and cartesian updates and demands exact float equality against them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

from .geometry import Pose, UnitQuat, Vec3, normalize
from .plant import PoseCommand


@dataclass(frozen=True)
class OperatorFrame:
    """One timestamped operator sample: hand pose, shoulder, knuckle values."""

    t: float
    hand: Pose
    shoulder: Vec3
    knuckles: tuple[float, ...]


def frame_to_dict(frame: OperatorFrame) -> dict[str, Any]:
    """Plain-JSON form of a frame; exact float round-trip via frame_from_dict."""
    return {
        "t": frame.t,
        "hand_pos": [frame.hand.position.x, frame.hand.position.y, frame.hand.position.z],
        "hand_quat": [
            frame.hand.orientation.w,
            frame.hand.orientation.x,
            frame.hand.orientation.y,
            frame.hand.orientation.z,
        ],
        "shoulder_pos": [frame.shoulder.x, frame.shoulder.y, frame.shoulder.z],
        "knuckles": list(frame.knuckles),
    }


def frame_from_dict(d: Mapping[str, Any]) -> OperatorFrame:
    hp = d["hand_pos"]
    hq = d["hand_quat"]
    sp = d["shoulder_pos"]
    return OperatorFrame(
        t=float(d["t"]),
        hand=Pose(
            Vec3(float(hp[0]), float(hp[1]), float(hp[2])),
            UnitQuat(float(hq[0]), float(hq[1]), float(hq[2]), float(hq[3])),
        ),
        shoulder=Vec3(float(sp[0]), float(sp[1]), float(sp[2])),
        knuckles=tuple(float(k) for k in d["knuckles"]),
    )


@dataclass(frozen=True)
class OperationState:
    """Anchors captured on entering relative-mapping mode.

    ``k`` scales hand displacement per axis; each component must sit in
    [0, 1] so a smaller value trades workspace for precision.
    """

    robot_anchor: Pose
    hand_anchor_pos: Vec3
    k: Vec3

    def __post_init__(self) -> None:
        for axis in ("x", "y", "z"):
            ki = getattr(self.k, axis)
            if not 0.0 <= ki <= 1.0:
                raise ValueError(f"scaling k.{axis}={ki!r} outside [0, 1]")


@dataclass(frozen=True)
class LockState:
    locked: Pose


@dataclass(frozen=True)
class SphericalState:
    """Radial distance plus the zone geometry that ratchets it."""

    r: float
    r_min: float = 0.5
    r_max: float = 5.0
    d_min: float = 0.25
    d_max: float = 0.45
    delta_r: float = 0.01

    def __post_init__(self) -> None:
        if not 0.0 < self.r_min <= self.r <= self.r_max:
            raise ValueError(f"need 0 < r_min <= r <= r_max, got {self}")
        if not 0.0 < self.d_min < self.d_max:
            raise ValueError(f"need 0 < d_min < d_max, got {self}")
        if not self.delta_r > 0.0:
            raise ValueError("delta_r must be > 0")


@dataclass(frozen=True)
class SphericalConfig:
    """Zone parameters used to seed a SphericalState on mode entry."""

    r_min: float = 0.5
    r_max: float = 5.0
    d_min: float = 0.25
    d_max: float = 0.45
    delta_r: float = 0.01

    def __post_init__(self) -> None:
        if not 0.0 < self.r_min <= self.r_max:
            raise ValueError(f"need 0 < r_min <= r_max, got {self}")
        if not 0.0 < self.d_min < self.d_max:
            raise ValueError(f"need 0 < d_min < d_max, got {self}")
        if not self.delta_r > 0.0:
            raise ValueError("delta_r must be > 0")


@dataclass(frozen=True)
class CartesianState:
    """Virtual-joystick geometry; carries no evolving quantity."""

    origin_offset: Vec3 = field(default_factory=lambda: Vec3(0.3, 0.0, 0.0))
    d_threshold: float = 0.15
    delta_d: float = 0.02

    def __post_init__(self) -> None:
        if not self.d_threshold > 0.0:
            raise ValueError("d_threshold must be > 0")
        if not self.delta_d > 0.0:
            raise ValueError("delta_d must be > 0")


@dataclass(frozen=True)
class HeightOverride:
    """Optional direct hand-height-to-altitude mapping, applied last."""

    enabled: bool = False
    z_offset: float = 0.0


def operation_enter(robot: Pose, frame: OperatorFrame, k: Vec3) -> OperationState:
    """Capture robot pose and hand position as anchors for relative mapping."""
    return OperationState(robot_anchor=robot, hand_anchor_pos=frame.hand.position, k=k)


def operation_update(s: OperationState, frame: OperatorFrame) -> PoseCommand:
    """Anchor-relative position mapping; hand attitude passes through as-is."""
    disp = frame.hand.position - s.hand_anchor_pos
    position = s.robot_anchor.position + s.k.hadamard(disp)
    return PoseCommand(position, frame.hand.orientation)


def lock_enter(robot: Pose) -> LockState:
    return LockState(locked=robot)


def lock_update(s: LockState) -> PoseCommand:
    """Constant command: the pose captured at lock time, whatever arrives."""
    return PoseCommand(s.locked.position, s.locked.orientation)


def spherical_enter(robot: Pose, frame: OperatorFrame, cfg: SphericalConfig) -> SphericalState:
    """Seed r from the robot's actual shoulder distance so entry causes no jump."""
    r0 = (robot.position - frame.shoulder).norm()
    r = max(min(r0, cfg.r_max), cfg.r_min)
    return SphericalState(
        r=r,
        r_min=cfg.r_min,
        r_max=cfg.r_max,
        d_min=cfg.d_min,
        d_max=cfg.d_max,
        delta_r=cfg.delta_r,
    )


def spherical_update(
    s: SphericalState, frame: OperatorFrame
) -> tuple[PoseCommand, SphericalState]:
    """Polar-axis position update.

    The shoulder-to-hand direction sets where the robot sits; the hand's
    distance from the shoulder ratchets the radius by delta_r per call when
    it leaves the [d_min, d_max] band (strict comparisons), clamped to
    [r_min, r_max]. Hand at the shoulder raises DegenerateDirection; the
    caller is expected to hold its previous command.
    """
    d = frame.hand.position - frame.shoulder
    d_pol = normalize(d)
    dist = d.norm()
    r = s.r
    if dist < s.d_min:
        r = r - s.delta_r
    elif dist > s.d_max:
        r = r + s.delta_r
    r = max(min(r, s.r_max), s.r_min)
    position = frame.shoulder + r * d_pol
    return PoseCommand(position, frame.hand.orientation), replace(s, r=r)


def cartesian_update(
    s: CartesianState, robot_pos: Vec3, frame: OperatorFrame
) -> PoseCommand:
    """Virtual-joystick update around p_J = shoulder + origin_offset.

    Hand outside the stop sphere moves the command delta_d along the
    joystick deflection from the robot's current position; inside it the
    command is the robot position itself, so the robot halts in place.
    """
    p_j = frame.shoulder + s.origin_offset
    d = frame.hand.position - p_j
    dist = d.norm()
    if dist > s.d_threshold:
        position = robot_pos + s.delta_d * normalize(d)
    else:
        position = robot_pos
    return PoseCommand(position, frame.hand.orientation)


def apply_height_override(
    cmd: PoseCommand, frame: OperatorFrame, h: HeightOverride
) -> PoseCommand:
    """Replace command z with hand z + offset when enabled; else pass through."""
    if not h.enabled:
        return cmd
    p = cmd.position
    return PoseCommand(
        Vec3(p.x, p.y, frame.hand.position.z + h.z_offset), cmd.orientation
    )
