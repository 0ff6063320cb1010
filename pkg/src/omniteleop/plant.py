"""First-order closed-loop robot model.

The flight controller is abstracted away: position converges to the
target exponentially per axis, attitude decays toward the target along
the geodesic. Both use the exact discretization, so the step is stable
for any dt and two half-steps compose to one full step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Pose, UnitQuat, Vec3, slerp


class NonPositiveDt(ValueError):
    """Raised when a plant step is requested with dt <= 0."""


@dataclass(frozen=True)
class PoseCommand:
    """Target position and orientation handed to the plant."""

    position: Vec3
    orientation: UnitQuat


@dataclass(frozen=True)
class RobotState:
    """Simulated robot pose plus its convergence time constants.

    t_p holds one positive time constant per position axis, in seconds;
    t_q is the attitude time constant in seconds.
    """

    pose: Pose
    t_p: Vec3
    t_q: float

    def __post_init__(self) -> None:
        if not (self.t_p.x > 0 and self.t_p.y > 0 and self.t_p.z > 0):
            raise ValueError(f"position time constants must be positive, got {self.t_p}")
        if not self.t_q > 0:
            raise ValueError(f"attitude time constant must be positive, got {self.t_q}")


def step_plant(state: RobotState, cmd: PoseCommand, dt: float) -> RobotState:
    """Advance the robot by dt seconds under a held command.

    Position: p <- p_c + (p - p_c) * exp(-dt/t_p), per axis.
    Attitude: slerp toward the target by fraction 1 - exp(-dt/t_q).

    The per-step error factors lie in (0, 1), so the state never
    overshoots regardless of dt.
    """
    if not dt > 0.0:
        raise NonPositiveDt(f"dt must be positive, got {dt!r}")
    p = state.pose.position
    pc = cmd.position
    fx = math.exp(-dt / state.t_p.x)
    fy = math.exp(-dt / state.t_p.y)
    fz = math.exp(-dt / state.t_p.z)
    position = Vec3(
        pc.x + (p.x - pc.x) * fx,
        pc.y + (p.y - pc.y) * fy,
        pc.z + (p.z - pc.z) * fz,
    )
    alpha = 1.0 - math.exp(-dt / state.t_q)
    orientation = slerp(state.pose.orientation, cmd.orientation, alpha)
    return RobotState(Pose(position, orientation), state.t_p, state.t_q)
