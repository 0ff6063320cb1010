"""Mode-switch state machine and operator feedback.

Owns which interaction mode is active, performs anchor capture on entry,
dispatches the per-tick update, and applies the optional height override
last. Transitions are allowed between every pair of modes; a gesture that
names the active mode is a no-op so anchors are never silently recaptured
mid-hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional

from .geometry import DegenerateDirection, Pose, Vec3
from .gestures import ModeSwitchEvent
from .interaction import (
    CartesianState,
    HeightOverride,
    LockState,
    OperationState,
    OperatorFrame,
    SphericalConfig,
    SphericalState,
    apply_height_override,
    cartesian_update,
    lock_enter,
    lock_update,
    operation_enter,
    operation_update,
    spherical_enter,
    spherical_update,
)
from .plant import PoseCommand


class ModeId(Enum):
    OPERATION = "operation"
    LOCKING = "locking"
    SPHERICAL = "spherical"
    CARTESIAN = "cartesian"


MODE_LABELS: Mapping[ModeId, str] = {
    ModeId.OPERATION: "Operation",
    ModeId.LOCKING: "Locking",
    ModeId.SPHERICAL: "Spherical",
    ModeId.CARTESIAN: "Cartesian",
}

DEFAULT_MODE_MAP: Mapping[str, ModeId] = {
    "fist": ModeId.LOCKING,
    "open": ModeId.OPERATION,
    "point": ModeId.SPHERICAL,
    "two": ModeId.CARTESIAN,
}

DEFAULT_COLORS: Mapping[ModeId, tuple[int, int, int]] = {
    ModeId.OPERATION: (0, 200, 83),
    ModeId.LOCKING: (229, 57, 53),
    ModeId.SPHERICAL: (30, 136, 229),
    ModeId.CARTESIAN: (251, 140, 0),
}


@dataclass(frozen=True)
class FeedbackState:
    """What the operator display shows: mode text plus its unique color."""

    mode_name: str
    color: tuple[int, int, int]


@dataclass(frozen=True)
class InteractionParams:
    """Every knob the supervisor needs to enter and update modes."""

    k: Vec3 = field(default_factory=lambda: Vec3(1.0, 1.0, 1.0))
    spherical: SphericalConfig = field(default_factory=SphericalConfig)
    cartesian: CartesianState = field(default_factory=CartesianState)
    height: HeightOverride = field(default_factory=HeightOverride)
    mode_map: Mapping[str, ModeId] = field(default_factory=lambda: dict(DEFAULT_MODE_MAP))
    colors: Mapping[ModeId, tuple[int, int, int]] = field(
        default_factory=lambda: dict(DEFAULT_COLORS)
    )

    def __post_init__(self) -> None:
        for axis in ("x", "y", "z"):
            ki = getattr(self.k, axis)
            if not 0.0 <= ki <= 1.0:
                raise ValueError(f"scaling k.{axis}={ki!r} outside [0, 1]")
        if len(set(map(tuple, self.colors.values()))) != len(self.colors):
            raise ValueError("mode colors must be pairwise distinct")


@dataclass(frozen=True)
class ModeState:
    """Active mode, its sub-state, and the plumbing shared across ticks."""

    active: ModeId
    params: InteractionParams
    operation: Optional[OperationState] = None
    lock: Optional[LockState] = None
    spherical: Optional[SphericalState] = None
    cartesian: Optional[CartesianState] = None
    last_command: Optional[PoseCommand] = None


def supervisor_init(
    robot: Pose, frame: OperatorFrame, params: Optional[InteractionParams] = None
) -> ModeState:
    """Start in relative-mapping mode with anchors at the given poses."""
    p = params if params is not None else InteractionParams()
    return ModeState(
        active=ModeId.OPERATION,
        params=p,
        operation=operation_enter(robot, frame, p.k),
    )


def _enter(ms: ModeState, target: ModeId, robot: Pose, frame: OperatorFrame) -> ModeState:
    p = ms.params
    if target is ModeId.OPERATION:
        return replace(ms, active=target, operation=operation_enter(robot, frame, p.k))
    if target is ModeId.LOCKING:
        return replace(ms, active=target, lock=lock_enter(robot))
    if target is ModeId.SPHERICAL:
        return replace(ms, active=target, spherical=spherical_enter(robot, frame, p.spherical))
    return replace(ms, active=target, cartesian=p.cartesian)


def supervisor_step(
    ms: ModeState,
    ev: Optional[ModeSwitchEvent],
    robot: Pose,
    frame: OperatorFrame,
) -> tuple[ModeState, PoseCommand]:
    """One tick: maybe transition, then update the active mode.

    An event naming an unknown gesture or the already-active mode changes
    nothing. Anchors are captured exactly here on a real transition. A
    degenerate frame (hand on the shoulder in polar mode) holds the
    previous command verbatim rather than dropping the tick.
    """
    if ev is not None:
        target = ms.params.mode_map.get(ev.gesture)
        if target is not None and target is not ms.active:
            ms = _enter(ms, target, robot, frame)
    try:
        if ms.active is ModeId.OPERATION:
            cmd = operation_update(ms.operation, frame)
        elif ms.active is ModeId.LOCKING:
            cmd = lock_update(ms.lock)
        elif ms.active is ModeId.SPHERICAL:
            cmd, sph = spherical_update(ms.spherical, frame)
            ms = replace(ms, spherical=sph)
        else:
            cmd = cartesian_update(ms.cartesian, robot.position, frame)
    except DegenerateDirection:
        if ms.last_command is not None:
            return ms, ms.last_command
        cmd = PoseCommand(robot.position, robot.orientation)
    cmd = apply_height_override(cmd, frame, ms.params.height)
    ms = replace(ms, last_command=cmd)
    return ms, cmd


def feedback_of(ms: ModeState) -> FeedbackState:
    return FeedbackState(
        mode_name=MODE_LABELS[ms.active], color=tuple(ms.params.colors[ms.active])
    )
