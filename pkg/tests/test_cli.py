import json
import math
import subprocess
import sys

import pytest

from omniteleop.cli import main
from omniteleop.geometry import UnitQuat, Vec3
from omniteleop.interaction import OperatorFrame
from omniteleop.session import frames_to_jsonl


def run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "omniteleop.cli", *args],
        capture_output=True,
        text=True,
        timeout=60,
        **kw,
    )


@pytest.fixture()
def frames_file(tmp_path):
    frames = []
    for i in range(200):
        t = i * 0.01
        frames.append(
            OperatorFrame(
                t=t,
                hand=Pose_like(0.3 + 0.1 * math.sin(t), 0.0, 1.4),
                shoulder=Vec3(0.0, 0.0, 1.4),
                knuckles=(0.5, 0.5, 0.5, 0.5, 0.5),
            )
        )
    path = tmp_path / "frames.jsonl"
    path.write_text(frames_to_jsonl(frames))
    return path


def Pose_like(x, y, z):
    from omniteleop.geometry import Pose

    return Pose(Vec3(x, y, z), UnitQuat.identity())


def test_check_config_defaults(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"session": {"tick_rate": 50.0}}))
    res = run_cli(["check-config", str(path)])
    assert res.returncode == 0
    assert "ok" in res.stdout


def test_check_config_rejects_bad_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"session": {"tick_rate": 0}}))
    res = run_cli(["check-config", str(path)])
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_check_config_unknown_key(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"sesion": {"tick_rate": 50.0}}))
    res = run_cli(["check-config", str(path)])
    assert res.returncode == 2
    assert "sesion" in res.stderr


def test_negative_latency_rejected(frames_file):
    res = run_cli(["replay", str(frames_file), "--latency", "-1"])
    assert res.returncode == 2
    assert "config error" in res.stderr


def test_replay_prints_summary_and_metrics(frames_file):
    res = run_cli(["replay", str(frames_file), "--latency", "0"])
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["ticks"] == 200
    assert doc["outcome"] == "source_exhausted"
    assert "pos_err_mean" in doc["metrics"]


def test_replay_twice_byte_identical(frames_file, tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    r1 = run_cli(["replay", str(frames_file), "--out", str(out1)])
    r2 = run_cli(["replay", str(frames_file), "--out", str(out2)])
    assert r1.returncode == 0 and r2.returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert len(out1.read_bytes()) > 0


def test_main_entrypoint_in_process(frames_file, capsys):
    code = main(["replay", str(frames_file)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ticks"] == 200


def test_sim_headless_smoke(frames_file, tmp_path):
    """sim binds ephemeral ports, announces them, and exits at --max-ticks."""
    record = tmp_path / "rec.jsonl"
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "omniteleop.cli",
            "sim",
            "--headless",
            "--listen",
            "127.0.0.1:0",
            "--stream-listen",
            "127.0.0.1:0",
            "--max-ticks",
            "40",
            "--rate",
            "200",
            "--record",
            str(record),
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        banner = proc.stdout.readline()
        info = json.loads(banner)
        host, port = info["listening"]["datagram"]

        import socket
        import time

        sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        deadline = time.monotonic() + 20
        i = 0
        while proc.poll() is None and time.monotonic() < deadline:
            doc = {
                "schema_version": 1,
                "t": i * 0.005,
                "hand_pos": [0.3, 0.0, 1.4],
                "hand_quat": [1.0, 0.0, 0.0, 0.0],
                "shoulder_pos": [0.0, 0.0, 1.4],
                "knuckles": [0.5] * 5,
            }
            sock.sendto(json.dumps(doc).encode(), (host, port))
            i += 1
            time.sleep(0.005)
        sock.close()
        out, err = proc.communicate(timeout=20)
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.communicate()
    assert proc.returncode == 0, err
    summary = json.loads(out.strip().splitlines()[-1])
    assert summary["ticks"] == 40
    assert record.exists()
    assert len(record.read_text().splitlines()) >= 1
