"""Deterministic fixed-timestep loop: frames in, commands and logs out.

The session clock is anchored at the first frame's timestamp t0. Tick n
consumes the newest frame stamped at or before cutoff = t0 + n*dt
(latest-wins); physically the tick happens at t0 + latency + n*dt, so the
configured latency acts as a pure transport delay on operator input.
Results depend only on frame timestamps and tick index, never on the wall
clock, which is what makes recorded runs replayable byte for byte.
"""

from __future__ import annotations

import json
import queue
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .config import EngineConfig, SessionConfig  # noqa: F401  (re-export)
from .geometry import Pose, quat_error_angle
from .gestures import HoldTracker, recognize_gesture, update_hold
from .interaction import OperatorFrame, frame_from_dict, frame_to_dict
from .plant import PoseCommand, RobotState, step_plant
from .supervisor import ModeId, ModeState, supervisor_init, supervisor_step


class EmptyLog(ValueError):
    """Metrics asked of a log with no records."""


@dataclass(frozen=True)
class LogRecord:
    tick: int
    frame: OperatorFrame
    mode: ModeId
    command: PoseCommand
    robot: Pose


def record_to_json(rec: LogRecord) -> str:
    """One JSON line; field order fixed, floats at full round-trip precision."""
    doc = {
        "tick": rec.tick,
        "frame": frame_to_dict(rec.frame),
        "mode": rec.mode.value,
        "command": {
            "position": [rec.command.position.x, rec.command.position.y, rec.command.position.z],
            "orientation": [
                rec.command.orientation.w,
                rec.command.orientation.x,
                rec.command.orientation.y,
                rec.command.orientation.z,
            ],
        },
        "robot": {
            "position": [rec.robot.position.x, rec.robot.position.y, rec.robot.position.z],
            "orientation": [
                rec.robot.orientation.w,
                rec.robot.orientation.x,
                rec.robot.orientation.y,
                rec.robot.orientation.z,
            ],
        },
    }
    return json.dumps(doc, separators=(",", ":"))


def record_from_json(line: str) -> LogRecord:
    d = json.loads(line)
    from .geometry import UnitQuat, Vec3  # local import keeps header tidy

    def pose(obj: Mapping[str, Any]) -> Pose:
        p = obj["position"]
        q = obj["orientation"]
        return Pose(
            Vec3(float(p[0]), float(p[1]), float(p[2])),
            UnitQuat(float(q[0]), float(q[1]), float(q[2]), float(q[3])),
        )

    cmd = pose(d["command"])
    return LogRecord(
        tick=int(d["tick"]),
        frame=frame_from_dict(d["frame"]),
        mode=ModeId(d["mode"]),
        command=PoseCommand(cmd.position, cmd.orientation),
        robot=pose(d["robot"]),
    )


def frames_to_jsonl(frames: Iterable[OperatorFrame]) -> str:
    return "".join(json.dumps(frame_to_dict(f), separators=(",", ":")) + "\n" for f in frames)


def frames_from_jsonl(text: str) -> list[OperatorFrame]:
    return [frame_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


class ReplaySource:
    """Feeds a pre-recorded frame list; exhausted once delivered."""

    def __init__(self, frames: Iterable[OperatorFrame]):
        self._frames: list[OperatorFrame] = list(frames)
        self._delivered = False

    def poll(self) -> list[OperatorFrame]:
        if self._delivered:
            return []
        self._delivered = True
        out = self._frames
        self._frames = []
        return out

    def exhausted(self) -> bool:
        return self._delivered


class LiveSource:
    """Thread-safe boundary queue the gateway feeds; the loop drains it."""

    def __init__(self, maxsize: int = 1024):
        self._q: "queue.Queue[OperatorFrame]" = queue.Queue(maxsize=maxsize)
        self._closed = False
        self.overflow = 0

    def push(self, frame: OperatorFrame) -> bool:
        try:
            self._q.put_nowait(frame)
            return True
        except queue.Full:
            self.overflow += 1
            return False

    def close(self) -> None:
        self._closed = True

    def poll(self) -> list[OperatorFrame]:
        out = []
        while True:
            try:
                out.append(self._q.get_nowait())
            except queue.Empty:
                return out

    def exhausted(self) -> bool:
        return self._closed and self._q.empty()


def _frame_finite(f: OperatorFrame) -> bool:
    import math

    return (
        math.isfinite(f.t)
        and f.hand.position.is_finite()
        and f.hand.orientation.is_finite()
        and f.shoulder.is_finite()
        and all(math.isfinite(k) for k in f.knuckles)
    )


class SessionCore:
    """The single-threaded engine state; owns every mutable value.

    offer() admits frames (monotone by timestamp, latest kept); step()
    advances exactly one tick. run_session drives this; the mission
    rehearsal in the test suite drives it directly, closed loop.
    """

    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.dt = 1.0 / cfg.session.tick_rate
        self.latency = cfg.session.latency
        self.max_gap = cfg.session.max_gap
        self.tick = 0
        self.t_first: Optional[float] = None
        self.t_last = float("-inf")
        self.pending: deque[OperatorFrame] = deque()
        self.current: Optional[OperatorFrame] = None
        self.robot = RobotState(
            Pose(cfg.plant.start_pos, cfg.plant.start_quat), cfg.plant.t_p, cfg.plant.t_q
        )
        self.ms: Optional[ModeState] = None
        self.tracker = HoldTracker()
        self.gap_flag = False
        self._gap_active = False
        self.dropped = 0

    def cutoff(self) -> float:
        assert self.t_first is not None
        return self.t_first + self.tick * self.dt

    def offer(self, frame: OperatorFrame) -> bool:
        """Admit a frame; non-finite or out-of-order (older) frames are dropped."""
        if not _frame_finite(frame):
            self.dropped += 1
            return False
        if frame.t < self.t_last:
            self.dropped += 1
            return False
        if self.t_first is None:
            self.t_first = frame.t
        self.t_last = frame.t
        self.pending.append(frame)
        return True

    def can_step(self) -> bool:
        return self.t_first is not None

    def has_input_left(self) -> bool:
        """True while un-consumed stream time remains at the current tick."""
        return self.t_first is not None and (
            bool(self.pending) or self.cutoff() <= self.t_last
        )

    def step(self) -> LogRecord:
        cutoff = self.cutoff()
        while self.pending and self.pending[0].t <= cutoff:
            self.current = self.pending.popleft()
        frame = self.current
        assert frame is not None, "step() before any frame became visible"

        in_gap = cutoff - frame.t > self.max_gap
        if in_gap and self.ms is not None and self.ms.last_command is not None:
            if not self._gap_active:
                self._gap_active = True
                self.gap_flag = True
                self.tracker = HoldTracker()  # a stale gesture must not ripen
            cmd = self.ms.last_command
        else:
            self._gap_active = False
            if self.ms is None:
                self.ms = supervisor_init(self.robot.pose, frame, self.cfg.params)
            gesture = recognize_gesture(frame.knuckles, self.cfg.gestures)
            # hold time advances on frame timestamps: a stalled stream is
            # not evidence the gesture is still being held
            self.tracker, ev = update_hold(
                self.tracker, frame.t, gesture, self.cfg.gestures.hold_duration
            )
            self.ms, cmd = supervisor_step(self.ms, ev, self.robot.pose, frame)

        self.robot = step_plant(self.robot, cmd, self.dt)
        rec = LogRecord(
            tick=self.tick, frame=frame, mode=self.ms.active, command=cmd, robot=self.robot.pose
        )
        self.tick += 1
        return rec


def run_session(
    cfg: EngineConfig,
    source: Any,
    sink: Optional[Callable[[LogRecord], None]] = None,
    *,
    max_ticks: Optional[int] = None,
    pace: bool = False,
    on_tick: Optional[Callable[[SessionCore, LogRecord], None]] = None,
) -> dict[str, Any]:
    """Drive a SessionCore from a frame source until it runs dry.

    Unpaced (replay) runs stop when the source is exhausted and the clock
    has swept past the last frame. Paced (live) runs tick at wall rate and
    stop only on max_ticks or source close. Returns a summary dict.
    """
    core = SessionCore(cfg)
    outcome = "source_exhausted"
    deadline: Optional[float] = None
    while True:
        if max_ticks is not None and core.tick >= max_ticks:
            outcome = "max_ticks"
            break
        for f in source.poll():
            core.offer(f)
        if not core.can_step():
            if source.exhausted():
                break  # empty source: clean stop, empty log
            time.sleep(0.0005)
            continue
        if not core.has_input_left() and not pace:
            if source.exhausted():
                break
            time.sleep(0.0005)
            continue
        rec = core.step()
        if sink is not None:
            sink(rec)
        if on_tick is not None:
            on_tick(core, rec)
        if pace:
            now = time.monotonic()
            deadline = now + core.dt if deadline is None else deadline + core.dt
            if deadline > now:
                time.sleep(deadline - now)
    return {
        "ticks": core.tick,
        "outcome": outcome,
        "gap": core.gap_flag,
        "dropped": core.dropped,
    }


def compute_metrics(
    records: Sequence[LogRecord], tick_rate: float, latency: float
) -> dict[str, Any]:
    """Tracking errors plus the transport delay estimated from the log itself.

    Position/attitude error compare the robot against its command per tick.
    The lag estimate cross-correlates the operator's hand trajectory
    (sampled at the time each tick physically happened, cutoff + latency)
    with the command trajectory, mean-removed and summed over the three
    axes; the peak shift is the delay the pipeline actually imposed.
    """
    if not records:
        raise EmptyLog("no records")
    dt = 1.0 / tick_rate
    n = len(records)

    cmd = np.array([r.command.position.as_tuple() for r in records])
    robot = np.array([r.robot.position.as_tuple() for r in records])
    pos_err = np.linalg.norm(robot - cmd, axis=1)
    att_err = np.array(
        [quat_error_angle(r.robot.orientation, r.command.orientation) for r in records]
    )

    # Zero-order-hold reconstruction of the hand stream in tick time.
    t0 = records[0].frame.t
    seen: dict[float, tuple[float, float, float]] = {}
    for r in records:
        seen[r.frame.t] = r.frame.hand.position.as_tuple()
    ft = np.array(sorted(seen))
    fpos = np.array([seen[t] for t in np.asarray(ft)])
    sample_times = t0 + np.arange(n) * dt + latency
    idx = np.searchsorted(ft, sample_times, side="right") - 1
    idx = np.clip(idx, 0, len(ft) - 1)
    hand = fpos[idx]

    hand0 = hand - hand.mean(axis=0)
    cmd0 = cmd - cmd.mean(axis=0)
    corr = np.zeros(n)
    for axis in range(3):
        full = np.correlate(cmd0[:, axis], hand0[:, axis], mode="full")
        corr += full[n - 1 :]
    lag_ticks = int(np.argmax(corr))

    return {
        "ticks": n,
        "pos_err_max": float(pos_err.max()),
        "pos_err_mean": float(pos_err.mean()),
        "att_err_max": float(att_err.max()),
        "att_err_mean": float(att_err.mean()),
        "lag_ticks": lag_ticks,
        "lag_seconds": lag_ticks * dt,
    }
