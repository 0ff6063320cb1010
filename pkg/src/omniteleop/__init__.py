"""Deterministic teleoperation engine for a 6-DoF omnidirectional aerial robot.

Hand pose and glove input map to robot pose commands under four switchable
interaction modes; a first-order plant simulates the closed-loop vehicle;
sessions run live behind a network gateway or replay byte-identically from
recorded logs.
"""

from .config import ConfigError, EngineConfig, GatewayConfig, PlantConfig, SessionConfig, load_config
from .geometry import DegenerateDirection, Pose, UnitQuat, Vec3
from .gestures import (
    FingerState,
    GestureConfig,
    HoldTracker,
    InvalidThresholds,
    ModeSwitchEvent,
    recognize_gesture,
    update_hold,
)
from .interaction import (
    CartesianState,
    HeightOverride,
    LockState,
    OperationState,
    OperatorFrame,
    SphericalConfig,
    SphericalState,
)
from .plant import NonPositiveDt, PoseCommand, RobotState, step_plant
from .session import (
    EmptyLog,
    LiveSource,
    LogRecord,
    ReplaySource,
    SessionCore,
    compute_metrics,
    run_session,
)
from .supervisor import (
    FeedbackState,
    InteractionParams,
    ModeId,
    ModeState,
    feedback_of,
    supervisor_init,
    supervisor_step,
)

__version__ = "0.1.0"

__all__ = [
    "CartesianState",
    "ConfigError",
    "DegenerateDirection",
    "EmptyLog",
    "EngineConfig",
    "FeedbackState",
    "FingerState",
    "GatewayConfig",
    "GestureConfig",
    "HeightOverride",
    "HoldTracker",
    "InteractionParams",
    "InvalidThresholds",
    "LiveSource",
    "LockState",
    "LogRecord",
    "ModeId",
    "ModeState",
    "ModeSwitchEvent",
    "NonPositiveDt",
    "OperationState",
    "OperatorFrame",
    "PlantConfig",
    "Pose",
    "PoseCommand",
    "ReplaySource",
    "RobotState",
    "SessionConfig",
    "SessionCore",
    "SphericalConfig",
    "SphericalState",
    "UnitQuat",
    "Vec3",
    "compute_metrics",
    "feedback_of",
    "load_config",
    "recognize_gesture",
    "run_session",
    "step_plant",
    "supervisor_init",
    "supervisor_step",
    "update_hold",
]
