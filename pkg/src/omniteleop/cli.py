"""Command line entry points: sim, replay, record, check-config."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Optional

from .config import ConfigError, EngineConfig, load_config
from .session import (
    LiveSource,
    ReplaySource,
    compute_metrics,
    frames_from_jsonl,
    record_to_json,
    run_session,
)

ENV_LISTEN = "OMNITELEOP_LISTEN"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omniteleop",
        description="Deterministic teleoperation engine and simulator "
        "for a six-degree-of-freedom aerial robot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--rate", type=float, help="tick rate override, Hz")
        p.add_argument("--latency", type=float, help="input transport delay override, s")

    sim = sub.add_parser("sim", help="run the live gateway and session loop")
    common(sim)
    sim.add_argument("--listen", help="datagram input address host:port")
    sim.add_argument("--stream-listen", help="cockpit stream address host:port")
    sim.add_argument("--headless", action="store_true", help="datagram input only, no cockpit stream")
    sim.add_argument("--max-ticks", type=int, help="stop after this many ticks")
    sim.add_argument("--record", metavar="PATH", help="capture incoming frames to a JSON Lines file")

    replay = sub.add_parser("replay", help="re-run a recorded frame log deterministically")
    common(replay)
    replay.add_argument("log", help="frames file (JSON Lines) to replay")
    replay.add_argument("--out", metavar="PATH", help="write the per-tick session log here")

    record = sub.add_parser("record", help="capture incoming frames without running the engine")
    common(record)
    record.add_argument("out", help="frames file (JSON Lines) to write")
    record.add_argument("--listen", help="datagram input address host:port")
    record.add_argument("--max-frames", type=int, help="stop after this many frames")
    record.add_argument("--duration", type=float, help="stop after this many seconds")

    check = sub.add_parser("check-config", help="validate a config file and exit")
    check.add_argument("file", help="JSON config file to validate")
    return parser


def _load(args: argparse.Namespace) -> EngineConfig:
    overrides: dict[str, Any] = {}
    if getattr(args, "rate", None) is not None:
        overrides.setdefault("session", {})["tick_rate"] = args.rate
    if getattr(args, "latency", None) is not None:
        overrides.setdefault("session", {})["latency"] = args.latency
    listen = getattr(args, "listen", None) or os.environ.get(ENV_LISTEN)
    if listen:
        overrides.setdefault("gateway", {})["listen"] = listen
    if getattr(args, "stream_listen", None):
        overrides.setdefault("gateway", {})["stream_listen"] = args.stream_listen
    if getattr(args, "record", None):
        overrides.setdefault("session", {})["record_path"] = args.record
    return load_config(getattr(args, "config", None), overrides or None)


def _cmd_sim(args: argparse.Namespace) -> int:
    from .gateway import GatewayServer

    cfg = _load(args)
    source = LiveSource()
    server = GatewayServer(cfg, source, stream=not args.headless)
    server.start()
    print(
        json.dumps(
            {
                "listening": {
                    "datagram": list(server.udp_addr),
                    "stream": list(server.stream_addr) if server.stream_addr else None,
                }
            }
        ),
        flush=True,
    )
    recorder = None
    sink = None
    if cfg.session.record_path:
        recorder = open(cfg.session.record_path, "w", encoding="utf-8")
        from .session import frames_to_jsonl

        seen_t = set()

        def sink(rec):  # capture each frame once, as it is first used
            if rec.frame.t not in seen_t:
                seen_t.add(rec.frame.t)
                recorder.write(frames_to_jsonl([rec.frame]))
                recorder.flush()

    try:
        summary = run_session(
            cfg,
            source,
            sink,
            max_ticks=args.max_ticks,
            pace=True,
            on_tick=server.on_tick,
        )
    except KeyboardInterrupt:
        summary = {"ticks": None, "outcome": "interrupted"}
    finally:
        server.stop()
        if recorder:
            recorder.close()
    summary["malformed"] = server.malformed
    summary["version_mismatch"] = server.version_mismatch
    print(json.dumps(summary), flush=True)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    cfg = _load(args)
    try:
        with open(args.log, "r", encoding="utf-8") as f:
            frames = frames_from_jsonl(f.read())
    except OSError as e:
        print(f"error: cannot read {args.log!r}: {e}", file=sys.stderr)
        return 1
    records = []
    out = open(args.out, "w", encoding="utf-8") if args.out else None

    def sink(rec):
        records.append(rec)
        if out:
            out.write(record_to_json(rec) + "\n")

    summary = run_session(cfg, ReplaySource(frames), sink)
    if out:
        out.close()
    if records:
        summary["metrics"] = compute_metrics(
            records, tick_rate=cfg.session.tick_rate, latency=cfg.session.latency
        )
    print(json.dumps(summary), flush=True)
    return 0


def _cmd_record(args: argparse.Namespace) -> int:
    from .gateway import GatewayServer
    from .session import frames_to_jsonl

    cfg = _load(args)
    source = LiveSource()
    server = GatewayServer(cfg, source, stream=False)
    server.start()
    print(json.dumps({"listening": {"datagram": list(server.udp_addr)}}), flush=True)
    n = 0
    deadline = time.monotonic() + args.duration if args.duration else None
    try:
        with open(args.out, "w", encoding="utf-8") as f:
            while True:
                for frame in source.poll():
                    f.write(frames_to_jsonl([frame]))
                    n += 1
                    if args.max_frames and n >= args.max_frames:
                        raise StopIteration
                f.flush()
                if deadline and time.monotonic() >= deadline:
                    break
                time.sleep(0.005)
    except (StopIteration, KeyboardInterrupt):
        pass
    finally:
        server.stop()
    print(json.dumps({"frames": n}), flush=True)
    return 0


def _cmd_check_config(args: argparse.Namespace) -> int:
    load_config(args.file)
    print("ok")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sim":
            return _cmd_sim(args)
        if args.command == "replay":
            return _cmd_replay(args)
        if args.command == "record":
            return _cmd_record(args)
        return _cmd_check_config(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
