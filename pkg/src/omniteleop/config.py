"""Engine configuration: defaults, JSON loading, merging, validation.

One JSON document configures everything. Unknown keys are rejected with
their dotted path so typos fail loudly at load time instead of silently
running with defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .geometry import UnitQuat, Vec3
from .gestures import GestureConfig, InvalidThresholds, pattern_from_string
from .interaction import CartesianState, HeightOverride, SphericalConfig
from .supervisor import InteractionParams, ModeId


class ConfigError(ValueError):
    """Configuration rejected: unknown key, bad type, or broken invariant."""


DEFAULTS: dict[str, Any] = {
    "session": {
        "tick_rate": 100.0,
        "latency": 0.4,
        "record_path": None,
        "seed": 0,
        "max_gap": 1.0,
    },
    "plant": {
        "t_p": [0.8, 0.8, 0.8],
        "t_q": 0.8,
        "start_pos": [0.0, 0.0, 1.0],
        "start_quat": [1.0, 0.0, 0.0, 0.0],
    },
    "interaction": {
        "k": [1.0, 1.0, 1.0],
        "height_override": {"enabled": False, "z_offset": 0.0},
        "spherical": {
            "r_min": 0.5,
            "r_max": 5.0,
            "d_min": 0.25,
            "d_max": 0.45,
            "delta_r": 0.01,
        },
        "cartesian": {
            "origin_offset": [0.3, 0.0, 0.0],
            "d_threshold": 0.15,
            "delta_d": 0.02,
        },
    },
    "gestures": {
        "contract_thresh": [0.7, 0.7, 0.7, 0.7, 0.7],
        "extend_thresh": [0.3, 0.3, 0.3, 0.3, 0.3],
        "hold_duration": 1.0,
        "channel_map": [[0], [1], [2], [3], [4]],
        "patterns": {
            "fist": "CCCCC",
            "open": "EEEEE",
            "point": "CECCC",
            "two": "CEECC",
            "three": "CEEEC",
        },
        "mode_map": {
            "fist": "locking",
            "open": "operation",
            "point": "spherical",
            "two": "cartesian",
        },
    },
    "feedback": {
        "colors": {
            "operation": [0, 200, 83],
            "locking": [229, 57, 53],
            "spherical": [30, 136, 229],
            "cartesian": [251, 140, 0],
        },
    },
    "gateway": {
        "listen": "127.0.0.1:47700",
        "stream_listen": "127.0.0.1:47701",
        "queue_limit": 64,
    },
}

# Sections whose keys are user-chosen names, replaced rather than merged.
_FREEFORM = {"gestures.patterns", "gestures.mode_map", "feedback.colors"}


@dataclass(frozen=True)
class SessionConfig:
    tick_rate: float = 100.0
    latency: float = 0.4
    record_path: Optional[str] = None
    seed: int = 0
    max_gap: float = 1.0

    def __post_init__(self) -> None:
        if not self.tick_rate > 0.0:
            raise ConfigError("session.tick_rate must be > 0")
        if self.latency < 0.0:
            raise ConfigError("session.latency must be >= 0")
        if not self.max_gap > 0.0:
            raise ConfigError("session.max_gap must be > 0")


@dataclass(frozen=True)
class PlantConfig:
    t_p: Vec3 = field(default_factory=lambda: Vec3(0.8, 0.8, 0.8))
    t_q: float = 0.8
    start_pos: Vec3 = field(default_factory=lambda: Vec3(0.0, 0.0, 1.0))
    start_quat: UnitQuat = field(default_factory=UnitQuat.identity)


@dataclass(frozen=True)
class GatewayConfig:
    listen: str = "127.0.0.1:47700"
    stream_listen: str = "127.0.0.1:47701"
    queue_limit: int = 64

    def __post_init__(self) -> None:
        if self.queue_limit < 1:
            raise ConfigError("gateway.queue_limit must be >= 1")


@dataclass(frozen=True)
class EngineConfig:
    session: SessionConfig = field(default_factory=SessionConfig)
    plant: PlantConfig = field(default_factory=PlantConfig)
    params: InteractionParams = field(default_factory=InteractionParams)
    gestures: GestureConfig = field(default_factory=GestureConfig)
    gateway: GatewayConfig = field(default_factory=GatewayConfig)


def _merge(base: Mapping[str, Any], user: Mapping[str, Any], path: str = "") -> dict:
    out = dict(base)
    for key, val in user.items():
        dotted = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key: {dotted!r}")
        if (
            isinstance(base[key], dict)
            and dotted not in _FREEFORM
        ):
            if not isinstance(val, dict):
                raise ConfigError(f"config key {dotted!r} must be an object")
            out[key] = _merge(base[key], val, f"{dotted}.")
        else:
            out[key] = val
    return out


def _vec3(v: Any, where: str) -> Vec3:
    try:
        x, y, z = (float(c) for c in v)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where} must be 3 numbers") from e
    return Vec3(x, y, z)


def _quat(v: Any, where: str) -> UnitQuat:
    try:
        w, x, y, z = (float(c) for c in v)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where} must be 4 numbers (w, x, y, z)") from e
    try:
        return UnitQuat(w, x, y, z).normalized()
    except ValueError as e:
        raise ConfigError(f"{where} is not normalizable") from e


def _five(v: Any, where: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(c) for c in v)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where} must be numbers") from e
    if len(vals) != 5:
        raise ConfigError(f"{where} must have exactly 5 entries")
    return vals


def config_from_dict(user: Mapping[str, Any]) -> EngineConfig:
    """Merge a partial raw mapping over the defaults and build typed config."""
    d = _merge(DEFAULTS, user)
    try:
        sess = SessionConfig(
            tick_rate=float(d["session"]["tick_rate"]),
            latency=float(d["session"]["latency"]),
            record_path=d["session"]["record_path"],
            seed=int(d["session"]["seed"]),
            max_gap=float(d["session"]["max_gap"]),
        )
        plant = PlantConfig(
            t_p=_vec3(d["plant"]["t_p"], "plant.t_p"),
            t_q=float(d["plant"]["t_q"]),
            start_pos=_vec3(d["plant"]["start_pos"], "plant.start_pos"),
            start_quat=_quat(d["plant"]["start_quat"], "plant.start_quat"),
        )
        inter = d["interaction"]
        mode_map = {}
        for gesture, mode_name in d["gestures"]["mode_map"].items():
            try:
                mode_map[str(gesture)] = ModeId(str(mode_name))
            except ValueError as e:
                raise ConfigError(
                    f"gestures.mode_map[{gesture!r}]: unknown mode {mode_name!r}"
                ) from e
        colors = {}
        for mode_name, rgb in d["feedback"]["colors"].items():
            try:
                mode = ModeId(str(mode_name))
            except ValueError as e:
                raise ConfigError(f"feedback.colors: unknown mode {mode_name!r}") from e
            vals = tuple(int(c) for c in rgb)
            if len(vals) != 3 or any(not 0 <= c <= 255 for c in vals):
                raise ConfigError(f"feedback.colors[{mode_name!r}] must be RGB 0..255")
            colors[mode] = vals
        if set(colors) != set(ModeId):
            raise ConfigError("feedback.colors must name all four modes")
        params = InteractionParams(
            k=_vec3(inter["k"], "interaction.k"),
            spherical=SphericalConfig(
                r_min=float(inter["spherical"]["r_min"]),
                r_max=float(inter["spherical"]["r_max"]),
                d_min=float(inter["spherical"]["d_min"]),
                d_max=float(inter["spherical"]["d_max"]),
                delta_r=float(inter["spherical"]["delta_r"]),
            ),
            cartesian=CartesianState(
                origin_offset=_vec3(
                    inter["cartesian"]["origin_offset"], "interaction.cartesian.origin_offset"
                ),
                d_threshold=float(inter["cartesian"]["d_threshold"]),
                delta_d=float(inter["cartesian"]["delta_d"]),
            ),
            height=HeightOverride(
                enabled=bool(inter["height_override"]["enabled"]),
                z_offset=float(inter["height_override"]["z_offset"]),
            ),
            mode_map=mode_map,
            colors=colors,
        )
        g = d["gestures"]
        gestures = GestureConfig(
            contract_thresh=_five(g["contract_thresh"], "gestures.contract_thresh"),
            extend_thresh=_five(g["extend_thresh"], "gestures.extend_thresh"),
            patterns={
                str(name): pattern_from_string(str(pat))
                for name, pat in g["patterns"].items()
            },
            hold_duration=float(g["hold_duration"]),
            channel_map=tuple(
                tuple(int(i) for i in group) for group in g["channel_map"]
            ),
        )
        for gesture in mode_map:
            if gesture not in gestures.patterns:
                raise ConfigError(
                    f"gestures.mode_map names {gesture!r} but no such pattern exists"
                )
        gw = GatewayConfig(
            listen=str(d["gateway"]["listen"]),
            stream_listen=str(d["gateway"]["stream_listen"]),
            queue_limit=int(d["gateway"]["queue_limit"]),
        )
    except ConfigError:
        raise
    except (InvalidThresholds, ValueError, TypeError, KeyError) as e:
        raise ConfigError(str(e)) from e
    return EngineConfig(session=sess, plant=plant, params=params, gestures=gestures, gateway=gw)


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> EngineConfig:
    """Load a JSON config file (or pure defaults), then apply overrides.

    `overrides` is a partial nested mapping, merged last; the CLI uses it
    for flags like --rate and --latency.
    """
    user: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as f:
                user = json.load(f)
        except OSError as e:
            raise ConfigError(f"cannot read config file {path!r}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path!r} is not valid JSON: {e}") from e
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a JSON object")
    if overrides:
        user = _merge(_merge(DEFAULTS, user), overrides)
    return config_from_dict(user)


def parse_addr(addr: str) -> tuple[str, int]:
    """Split 'host:port' with a numeric port; raises ConfigError."""
    host, sep, port = addr.rpartition(":")
    if not sep or not host:
        raise ConfigError(f"address {addr!r} must look like host:port")
    try:
        p = int(port)
    except ValueError as e:
        raise ConfigError(f"address {addr!r} has a non-numeric port") from e
    if not 0 <= p <= 65535:
        raise ConfigError(f"address {addr!r} port out of range")
    return host, p
