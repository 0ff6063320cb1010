"""Finger classification, five-finger pattern matching, and hold debounce.

Knuckle stretch values arrive unitless (0 = fully extended feel, 1 = fully
contracted, but the scale is glove-dependent and set by the thresholds).
Everything here is pure; the session loop owns the HoldTracker value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Optional, Sequence


class FingerState(Enum):
    CONTRACTED = "contracted"
    EXTENDED = "extended"
    INDETERMINATE = "indeterminate"


class InvalidThresholds(ValueError):
    """Gesture configuration rejected at load time."""


Pattern = tuple[FingerState, ...]

_PATTERN_CHARS = {"C": FingerState.CONTRACTED, "E": FingerState.EXTENDED}


def pattern_from_string(s: str) -> Pattern:
    """Parse a 5-letter pattern, one letter per finger, thumb first.

    'C' = contracted, 'E' = extended. Indeterminate is not expressible:
    a pattern must pin every finger.
    """
    if len(s) != 5 or any(c not in _PATTERN_CHARS for c in s):
        raise InvalidThresholds(f"pattern must be 5 letters from {{C,E}}, got {s!r}")
    return tuple(_PATTERN_CHARS[c] for c in s)


DEFAULT_PATTERNS: Mapping[str, Pattern] = {
    "fist": pattern_from_string("CCCCC"),
    "open": pattern_from_string("EEEEE"),
    "point": pattern_from_string("CECCC"),
    "two": pattern_from_string("CEECC"),
    "three": pattern_from_string("CEEEC"),
}

# One aggregate per finger; identity map for gloves reporting 5 channels.
DEFAULT_CHANNEL_MAP: tuple[tuple[int, ...], ...] = ((0,), (1,), (2,), (3,), (4,))


@dataclass(frozen=True)
class GestureConfig:
    contract_thresh: tuple[float, float, float, float, float] = (0.7,) * 5
    extend_thresh: tuple[float, float, float, float, float] = (0.3,) * 5
    patterns: Mapping[str, Pattern] = None  # type: ignore[assignment]
    hold_duration: float = 1.0
    channel_map: tuple[tuple[int, ...], ...] = DEFAULT_CHANNEL_MAP

    def __post_init__(self) -> None:
        if self.patterns is None:
            object.__setattr__(self, "patterns", dict(DEFAULT_PATTERNS))
        if len(self.contract_thresh) != 5 or len(self.extend_thresh) != 5:
            raise InvalidThresholds("need exactly 5 thresholds per side")
        for i, (c, e) in enumerate(zip(self.contract_thresh, self.extend_thresh)):
            if not e < c:
                raise InvalidThresholds(
                    f"finger {i}: extend threshold {e!r} must be < contract {c!r}"
                )
        if not self.hold_duration > 0.0:
            raise InvalidThresholds("hold_duration must be > 0")
        if len(self.channel_map) != 5 or any(len(ch) == 0 for ch in self.channel_map):
            raise InvalidThresholds("channel_map needs 5 non-empty index groups")
        seen: dict[Pattern, str] = {}
        for name, pat in self.patterns.items():
            if len(pat) != 5 or any(f is FingerState.INDETERMINATE for f in pat):
                raise InvalidThresholds(f"pattern {name!r} must pin all 5 fingers")
            if pat in seen:
                raise InvalidThresholds(
                    f"patterns {seen[pat]!r} and {name!r} are identical"
                )
            seen[pat] = name


@dataclass(frozen=True)
class ModeSwitchEvent:
    """A gesture survived the hold duration at stream time t."""

    gesture: str
    t: float


@dataclass(frozen=True)
class HoldTracker:
    """Debounce state: which gesture is being held, since when, fired yet."""

    candidate: Optional[str] = None
    since: float = 0.0
    fired: bool = False


def classify_finger(stretch: float, contract_thresh: float, extend_thresh: float) -> FingerState:
    """Three-way threshold with a dead band; NaN lands in the dead band too."""
    if stretch > contract_thresh:
        return FingerState.CONTRACTED
    if stretch < extend_thresh:
        return FingerState.EXTENDED
    return FingerState.INDETERMINATE


def finger_aggregates(
    knuckles: Sequence[float], channel_map: Sequence[Sequence[int]]
) -> tuple[float, ...]:
    """Reduce raw knuckle channels to one stretch value per finger.

    Averages each finger's configured channels. A finger whose channels are
    all missing from the frame aggregates to NaN, which classifies as
    indeterminate and therefore never matches a pattern; short frames
    degrade to "no gesture" instead of erroring.
    """
    out = []
    for channels in channel_map:
        vals = [knuckles[i] for i in channels if 0 <= i < len(knuckles)]
        out.append(sum(vals) / len(vals) if vals else math.nan)
    return tuple(out)


def recognize_gesture(knuckles: Sequence[float], cfg: GestureConfig) -> Optional[str]:
    """Classify five aggregated fingers and match against the pattern table.

    Any indeterminate finger blocks matching. Returns the gesture name or
    None; the table is injective so the match is unique.
    """
    stretches = finger_aggregates(knuckles, cfg.channel_map)
    states = tuple(
        classify_finger(s, c, e)
        for s, c, e in zip(stretches, cfg.contract_thresh, cfg.extend_thresh)
    )
    if any(f is FingerState.INDETERMINATE for f in states):
        return None
    for name, pat in cfg.patterns.items():
        if pat == states:
            return name
    return None


def update_hold(
    tr: HoldTracker, now: float, gesture: Optional[str], hold: float
) -> tuple[HoldTracker, Optional[ModeSwitchEvent]]:
    """Advance the debounce clock one observation.

    Emits exactly one event per maximal run of a constant gesture, at the
    first observation where the run has lasted >= hold seconds. Any change
    of gesture (including to none) restarts the clock.
    """
    if gesture != tr.candidate:
        return HoldTracker(candidate=gesture, since=now, fired=False), None
    if gesture is not None and not tr.fired and now - tr.since >= hold:
        return replace(tr, fired=True), ModeSwitchEvent(gesture=gesture, t=now)
    return tr, None
