"""Network boundary: datagram frame input, newline-delimited state stream.

One JSON wire schema serves both inputs: a UDP datagram carries one frame
document; a TCP stream client receives one state document per tick and may
send frame documents itself (so a cockpit can be the input device). All
decode failures are counted and dropped; nothing a peer sends can take the
session loop down.
"""

from __future__ import annotations

import json
import math
import queue
import socket
import threading
from dataclasses import dataclass
from typing import Any, Optional

from .config import EngineConfig, parse_addr
from .geometry import Pose, UnitQuat, Vec3, canonicalized
from .interaction import OperatorFrame
from .session import LiveSource, LogRecord, SessionCore
from .supervisor import MODE_LABELS, feedback_of

SCHEMA_VERSION = 1


class MalformedFrame(ValueError):
    """Payload is not a well-formed frame document."""


class VersionMismatch(ValueError):
    """Payload declares a schema version this engine does not speak."""


@dataclass(frozen=True)
class InputFrameMsg:
    """Wire form of one operator frame, scalar-first quaternion."""

    schema_version: int
    t: float
    hand_pos: tuple[float, float, float]
    hand_quat: tuple[float, float, float, float]
    shoulder_pos: tuple[float, float, float]
    knuckles: tuple[float, ...]


def _floats(v: Any, n: Optional[int], where: str) -> tuple[float, ...]:
    if not isinstance(v, (list, tuple)):
        raise MalformedFrame(f"{where} must be an array")
    try:
        vals = tuple(float(c) for c in v)
    except (TypeError, ValueError) as e:
        raise MalformedFrame(f"{where} must hold numbers") from e
    if n is not None and len(vals) != n:
        raise MalformedFrame(f"{where} must have {n} entries, got {len(vals)}")
    if not all(math.isfinite(c) for c in vals):
        raise MalformedFrame(f"{where} must be finite")
    return vals


def decode_input(data: bytes) -> InputFrameMsg:
    """Parse one frame document; MalformedFrame / VersionMismatch on refusal."""
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedFrame(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedFrame("frame document must be a JSON object")
    # Version first: an incompatible sender should be diagnosed as such even
    # when its documents carry none of the fields we expect.
    try:
        version = int(doc["schema_version"])
    except KeyError as e:
        raise MalformedFrame("missing field 'schema_version'") from e
    except (TypeError, ValueError) as e:
        raise MalformedFrame(str(e)) from e
    if version != SCHEMA_VERSION:
        raise VersionMismatch(f"schema_version {version}, expected {SCHEMA_VERSION}")
    try:
        t = float(doc["t"])
        hand_pos = _floats(doc["hand_pos"], 3, "hand_pos")
        hand_quat = _floats(doc["hand_quat"], 4, "hand_quat")
        shoulder_pos = _floats(doc["shoulder_pos"], 3, "shoulder_pos")
        knuckles = _floats(doc["knuckles"], None, "knuckles")
    except KeyError as e:
        raise MalformedFrame(f"missing field {e.args[0]!r}") from e
    except (TypeError, ValueError) as e:
        raise MalformedFrame(str(e)) from e
    if not math.isfinite(t):
        raise MalformedFrame("t must be finite")
    norm = math.sqrt(sum(c * c for c in hand_quat))
    if not math.isfinite(norm) or norm <= 1e-6:
        raise MalformedFrame(f"hand_quat norm {norm!r} not normalizable")
    return InputFrameMsg(
        schema_version=version,
        t=t,
        hand_pos=hand_pos,
        hand_quat=hand_quat,
        shoulder_pos=shoulder_pos,
        knuckles=knuckles,
    )


def encode_input(msg: InputFrameMsg) -> bytes:
    doc = {
        "schema_version": msg.schema_version,
        "t": msg.t,
        "hand_pos": list(msg.hand_pos),
        "hand_quat": list(msg.hand_quat),
        "shoulder_pos": list(msg.shoulder_pos),
        "knuckles": list(msg.knuckles),
    }
    return json.dumps(doc, separators=(",", ":")).encode()


def msg_to_frame(msg: InputFrameMsg) -> OperatorFrame:
    """Build the engine-side frame: quaternion renormalized, w >= 0."""
    w, x, y, z = msg.hand_quat
    q = canonicalized(UnitQuat(w, x, y, z).normalized())
    return OperatorFrame(
        t=msg.t,
        hand=Pose(Vec3(*msg.hand_pos), q),
        shoulder=Vec3(*msg.shoulder_pos),
        knuckles=msg.knuckles,
    )


def frame_to_msg(frame: OperatorFrame) -> InputFrameMsg:
    return InputFrameMsg(
        schema_version=SCHEMA_VERSION,
        t=frame.t,
        hand_pos=frame.hand.position.as_tuple(),
        hand_quat=frame.hand.orientation.as_tuple(),
        shoulder_pos=frame.shoulder.as_tuple(),
        knuckles=tuple(frame.knuckles),
    )


def encode_state(core: SessionCore, rec: LogRecord) -> bytes:
    """One state document per tick: poses, feedback, zone geometry."""
    ms = core.ms
    fb = feedback_of(ms)
    params = core.cfg.params
    p_j = rec.frame.shoulder + params.cartesian.origin_offset
    sph = ms.spherical
    doc = {
        "type": "state",
        "schema_version": SCHEMA_VERSION,
        "tick": rec.tick,
        "robot": {
            "position": list(rec.robot.position.as_tuple()),
            "orientation": list(rec.robot.orientation.as_tuple()),
        },
        "command": {
            "position": list(rec.command.position.as_tuple()),
            "orientation": list(rec.command.orientation.as_tuple()),
        },
        "hand": {
            "position": list(rec.frame.hand.position.as_tuple()),
            "orientation": list(rec.frame.hand.orientation.as_tuple()),
        },
        "shoulder": list(rec.frame.shoulder.as_tuple()),
        "mode_name": fb.mode_name,
        "color": list(fb.color),
        "zones": {
            "r": sph.r if sph is not None else None,
            "r_min": params.spherical.r_min,
            "r_max": params.spherical.r_max,
            "d_min": params.spherical.d_min,
            "d_max": params.spherical.d_max,
            "p_j": list(p_j.as_tuple()),
            "d_threshold": params.cartesian.d_threshold,
        },
    }
    return json.dumps(doc, separators=(",", ":")).encode() + b"\n"


class _Subscriber:
    def __init__(self, sock: socket.socket, limit: int):
        self.sock = sock
        self.q: "queue.Queue[bytes]" = queue.Queue(maxsize=limit)
        self.alive = True
        self.skipped = 0


class GatewayServer:
    """UDP frame input plus TCP state broadcast, feeding one LiveSource.

    Receive threads push decoded frames into the source; a writer thread
    per subscriber drains its bounded queue so a slow client only skips
    messages, never stalls the session loop.
    """

    def __init__(self, cfg: EngineConfig, source: LiveSource, *, stream: bool = True):
        self.cfg = cfg
        self.source = source
        self.malformed = 0
        self.version_mismatch = 0
        self._stream_enabled = stream
        self._subs: list[_Subscriber] = []
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._udp: Optional[socket.socket] = None
        self._tcp: Optional[socket.socket] = None
        self.udp_addr: Optional[tuple[str, int]] = None
        self.stream_addr: Optional[tuple[str, int]] = None

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        host, port = parse_addr(self.cfg.gateway.listen)
        self._udp = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._udp.bind((host, port))
        self._udp.settimeout(0.2)
        self.udp_addr = self._udp.getsockname()[:2]
        self._spawn(self._udp_loop)
        if self._stream_enabled:
            shost, sport = parse_addr(self.cfg.gateway.stream_listen)
            self._tcp = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self._tcp.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self._tcp.bind((shost, sport))
            self._tcp.listen(8)
            self._tcp.settimeout(0.2)
            self.stream_addr = self._tcp.getsockname()[:2]
            self._spawn(self._accept_loop)

    def stop(self) -> None:
        self._stop.set()
        for sock in (self._udp, self._tcp):
            if sock is not None:
                try:
                    sock.close()
                except OSError:
                    pass
        with self._lock:
            subs = list(self._subs)
        for sub in subs:
            sub.alive = False
            try:
                sub.sock.close()
            except OSError:
                pass
        for th in self._threads:
            th.join(timeout=2.0)

    def _spawn(self, target, *args) -> None:
        th = threading.Thread(target=target, args=args, daemon=True)
        th.start()
        self._threads.append(th)

    # -- input paths ----------------------------------------------------------

    def _ingest(self, payload: bytes) -> None:
        try:
            msg = decode_input(payload)
        except VersionMismatch:
            self.version_mismatch += 1
            return
        except MalformedFrame:
            self.malformed += 1
            return
        self.source.push(msg_to_frame(msg))

    def _udp_loop(self) -> None:
        while not self._stop.is_set():
            try:
                payload, _ = self._udp.recvfrom(65536)
            except socket.timeout:
                continue
            except OSError:
                return
            self._ingest(payload)

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                conn, _ = self._tcp.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            sub = _Subscriber(conn, self.cfg.gateway.queue_limit)
            with self._lock:
                self._subs.append(sub)
            self._spawn(self._client_rx, sub)
            self._spawn(self._client_tx, sub)

    def _client_rx(self, sub: _Subscriber) -> None:
        buf = b""
        sock = sub.sock
        sock.settimeout(0.2)
        while not self._stop.is_set() and sub.alive:
            try:
                chunk = sock.recv(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            if not chunk:
                break
            buf += chunk
            while b"\n" in buf:
                line, buf = buf.split(b"\n", 1)
                if line.strip():
                    self._ingest(line)
        self._drop(sub)

    def _client_tx(self, sub: _Subscriber) -> None:
        while not self._stop.is_set() and sub.alive:
            try:
                payload = sub.q.get(timeout=0.2)
            except queue.Empty:
                continue
            try:
                sub.sock.sendall(payload)
            except OSError:
                break
        self._drop(sub)

    def _drop(self, sub: _Subscriber) -> None:
        sub.alive = False
        try:
            sub.sock.close()
        except OSError:
            pass
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)

    # -- output path ----------------------------------------------------------

    def on_tick(self, core: SessionCore, rec: LogRecord) -> None:
        """Session-loop callback; never blocks, slow clients skip messages."""
        if not self._stream_enabled:
            return
        payload = encode_state(core, rec)
        with self._lock:
            subs = list(self._subs)
        for sub in subs:
            try:
                sub.q.put_nowait(payload)
            except queue.Full:
                sub.skipped += 1
