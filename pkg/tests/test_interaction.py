import math
import random

import pytest

from alg_reference import cartesian_reference, spherical_reference
from omniteleop.geometry import DegenerateDirection, Pose, UnitQuat, Vec3
from omniteleop.interaction import (
    CartesianState,
    HeightOverride,
    LockState,
    OperatorFrame,
    SphericalConfig,
    SphericalState,
    apply_height_override,
    cartesian_update,
    frame_from_dict,
    frame_to_dict,
    lock_enter,
    lock_update,
    operation_enter,
    operation_update,
    spherical_enter,
    spherical_update,
)

IDENT = UnitQuat.identity()
ONES = Vec3(1.0, 1.0, 1.0)


def make_frame(hand_pos, shoulder=Vec3(0, 0, 1.4), quat=IDENT, t=0.0):
    return OperatorFrame(t=t, hand=Pose(hand_pos, quat), shoulder=shoulder, knuckles=(0.0,) * 5)


def random_quat(rng):
    axis = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1) + 1e-3)
    return UnitQuat.from_axis_angle(axis, rng.uniform(0.1, 3.0))


# --- relative-mapping mode -------------------------------------------------


def test_operation_enter_captures_anchors():
    robot = Pose(Vec3(1, 2, 1), IDENT)
    frame = make_frame(Vec3(0, 0, 1))
    s = operation_enter(robot, frame, ONES)
    assert s.robot_anchor == robot
    assert s.hand_anchor_pos == Vec3(0, 0, 1)


def test_operation_gain_range_enforced():
    robot = Pose(Vec3(0, 0, 0), IDENT)
    frame = make_frame(Vec3(0, 0, 1))
    operation_enter(robot, frame, ONES)
    with pytest.raises(ValueError):
        operation_enter(robot, frame, Vec3(1.5, 0, 0))
    with pytest.raises(ValueError):
        operation_enter(robot, frame, Vec3(0.5, -0.1, 0.5))


def test_operation_hand_unmoved_holds_anchor():
    robot = Pose(Vec3(3, -1, 2), IDENT)
    frame = make_frame(Vec3(0.2, 0.1, 1.3))
    s = operation_enter(robot, frame, ONES)
    cmd = operation_update(s, frame)
    assert cmd.position == robot.position


def test_operation_unit_gain_displacement():
    robot = Pose(Vec3(1, 2, 1), IDENT)
    s = operation_enter(robot, make_frame(Vec3(0, 0, 1)), ONES)
    cmd = operation_update(s, make_frame(Vec3(0.1, 0, 1.2)))
    assert cmd.position.x == pytest.approx(1.1, abs=1e-12)
    assert cmd.position.y == pytest.approx(2.0, abs=1e-12)
    assert cmd.position.z == pytest.approx(1.2, abs=1e-12)


def test_operation_half_gain_scales_displacement():
    robot = Pose(Vec3(0, 0, 0), IDENT)
    s = operation_enter(robot, make_frame(Vec3(0, 0, 1)), Vec3(0.5, 0.5, 0.5))
    cmd = operation_update(s, make_frame(Vec3(0.2, -0.2, 1.0)))
    assert cmd.position.x == pytest.approx(0.1, abs=1e-12)
    assert cmd.position.y == pytest.approx(-0.1, abs=1e-12)
    assert cmd.position.z == pytest.approx(0.0, abs=1e-12)


def test_operation_orientation_passes_through_exactly():
    rng = random.Random(31)
    s = operation_enter(Pose(Vec3(0, 0, 0), IDENT), make_frame(Vec3(0, 0, 1)), ONES)
    for _ in range(20):
        q = random_quat(rng)
        cmd = operation_update(s, make_frame(Vec3(0.1, 0.2, 1.1), quat=q))
        assert cmd.orientation == q


def test_operation_zero_gain_freezes_position_not_attitude():
    q = UnitQuat.from_axis_angle(Vec3(0, 0, 1), 1.0)
    s = operation_enter(Pose(Vec3(2, 2, 2), IDENT), make_frame(Vec3(0, 0, 1)), Vec3(0, 0, 0))
    cmd = operation_update(s, make_frame(Vec3(5, -5, 9), quat=q))
    assert cmd.position == Vec3(2, 2, 2)
    assert cmd.orientation == q


def test_operation_affine_per_axis_slope():
    # Position must be affine in hand position with slope k_i on each axis.
    rng = random.Random(32)
    k = Vec3(0.7, 0.3, 1.0)
    s = operation_enter(Pose(Vec3(1, 1, 1), IDENT), make_frame(Vec3(0, 0, 1)), k)
    for _ in range(50):
        h = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 2))
        step = Vec3(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        a = operation_update(s, make_frame(h)).position
        b = operation_update(s, make_frame(h + step)).position
        assert b.x - a.x == pytest.approx(k.x * step.x, abs=1e-9)
        assert b.y - a.y == pytest.approx(k.y * step.y, abs=1e-9)
        assert b.z - a.z == pytest.approx(k.z * step.z, abs=1e-9)


# --- pose hold -------------------------------------------------------------


def test_lock_constant_over_arbitrary_frames():
    rng = random.Random(33)
    locked = Pose(Vec3(1.5, -0.5, 2.0), UnitQuat.from_axis_angle(Vec3(1, 1, 0), 0.7))
    s = lock_enter(locked)
    for i in range(1000):
        frame = make_frame(
            Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)),
            quat=random_quat(rng),
            t=i * 0.01,
        )
        del frame  # the hold ignores input entirely
        cmd = lock_update(s)
        assert cmd.position == locked.position
        assert cmd.orientation == locked.orientation


def test_lock_reenter_takes_new_anchor():
    s1 = lock_enter(Pose(Vec3(1, 0, 0), IDENT))
    s2 = lock_enter(Pose(Vec3(0, 1, 0), IDENT))
    assert lock_update(s1).position == Vec3(1, 0, 0)
    assert lock_update(s2).position == Vec3(0, 1, 0)


def test_lock_orientation_stays_unit():
    q = UnitQuat.from_axis_angle(Vec3(0.3, 0.4, 0.5), 2.0)
    s = lock_enter(Pose(Vec3(0, 0, 1), q))
    assert abs(lock_update(s).orientation.norm() - 1.0) <= 1e-9


# --- polar-axis mode -------------------------------------------------------


def test_spherical_enter_seeds_radius_from_robot():
    cfg = SphericalConfig(r_min=0.5, r_max=5.0)
    frame = make_frame(Vec3(0.3, 0, 1.4), shoulder=Vec3(0, 0, 1.4))
    s = spherical_enter(Pose(Vec3(2.0, 0, 1.4), IDENT), frame, cfg)
    assert s.r == pytest.approx(2.0, abs=1e-12)
    near = spherical_enter(Pose(Vec3(0.2, 0, 1.4), IDENT), frame, cfg)
    assert near.r == 0.5
    far = spherical_enter(Pose(Vec3(7.0, 0, 1.4), IDENT), frame, cfg)
    assert far.r == 5.0


def test_spherical_stop_band_keeps_radius():
    s = SphericalState(r=1.3, d_min=0.25, d_max=0.45)
    frame = make_frame(Vec3(0.35, 0, 1.4), shoulder=Vec3(0, 0, 1.4))
    cmd, s2 = spherical_update(s, frame)
    assert s2.r == 1.3
    assert cmd.position.x == pytest.approx(1.3, abs=1e-12)
    assert cmd.position.y == 0.0
    assert cmd.position.z == pytest.approx(1.4, abs=1e-12)


def test_spherical_extend_ratchets_radius():
    s = SphericalState(r=1.0, d_max=0.45, delta_r=0.01)
    frame = make_frame(Vec3(0.5, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    cmd, s2 = spherical_update(s, frame)
    assert s2.r == pytest.approx(1.01, abs=1e-12)
    assert cmd.position.x == pytest.approx(1.01, abs=1e-12)
    assert cmd.position.z == pytest.approx(1.0, abs=1e-12)


def test_spherical_contract_ratchets_radius_down():
    s = SphericalState(r=1.0, d_min=0.25, delta_r=0.01)
    frame = make_frame(Vec3(0.1, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    _, s2 = spherical_update(s, frame)
    assert s2.r == pytest.approx(0.99, abs=1e-12)


def test_spherical_radius_clamps_at_limits():
    s = SphericalState(r=5.0, r_max=5.0, d_max=0.45)
    frame = make_frame(Vec3(0.6, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    _, s2 = spherical_update(s, frame)
    assert s2.r == 5.0
    s = SphericalState(r=0.5, r_min=0.5, d_min=0.25)
    frame = make_frame(Vec3(0.05, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    _, s2 = spherical_update(s, frame)
    assert s2.r == 0.5


def test_spherical_band_boundaries_do_not_ratchet():
    # Hand exactly at d_min or d_max sits inside the stop band (strict tests).
    s = SphericalState(r=1.0, d_min=0.25, d_max=0.45)
    at_min = make_frame(Vec3(0.25, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    _, s2 = spherical_update(s, at_min)
    assert s2.r == 1.0
    at_max = make_frame(Vec3(0.45, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    _, s3 = spherical_update(s, at_max)
    assert s3.r == 1.0


def test_spherical_hand_at_shoulder_raises():
    s = SphericalState(r=1.0)
    frame = make_frame(Vec3(0, 0, 1.4), shoulder=Vec3(0, 0, 1.4))
    with pytest.raises(DegenerateDirection):
        spherical_update(s, frame)


def test_spherical_orientation_passes_through():
    q = UnitQuat.from_axis_angle(Vec3(1, 0, 0), 0.5)
    s = SphericalState(r=1.0)
    cmd, _ = spherical_update(s, make_frame(Vec3(0.3, 0.1, 1.6), quat=q))
    assert cmd.orientation == q


def test_spherical_command_on_polar_ray():
    rng = random.Random(34)
    for _ in range(50):
        s = SphericalState(r=rng.uniform(0.5, 5.0))
        shoulder = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(1, 2))
        for _ in range(100):
            hand = shoulder + Vec3(
                rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)
            )
            if (hand - shoulder).norm() < 1e-3:
                continue
            cmd, s = spherical_update(s, make_frame(hand, shoulder=shoulder))
            axis = hand - shoulder
            arm = cmd.position - shoulder
            assert arm.cross(axis).norm() <= 1e-9
            assert arm.dot(axis) >= 0.0
            assert s.r_min <= s.r <= s.r_max


def test_spherical_matches_reference_exactly():
    rng = random.Random(35)
    s = SphericalState(r=2.0)
    r_ref = 2.0
    shoulder = Vec3(0.1, -0.2, 1.5)
    for _ in range(2000):
        hand = shoulder + Vec3(
            rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)
        )
        if (hand - shoulder).norm() < 1e-3:
            continue
        cmd, s = spherical_update(s, make_frame(hand, shoulder=shoulder))
        (px, py, pz), r_ref = spherical_reference(
            r_ref,
            hand.as_tuple(),
            shoulder.as_tuple(),
            s.r_min,
            s.r_max,
            s.d_min,
            s.d_max,
            s.delta_r,
        )
        assert cmd.position.x == px
        assert cmd.position.y == py
        assert cmd.position.z == pz
        assert s.r == r_ref


# --- virtual-joystick mode -------------------------------------------------


def test_cartesian_origin_offset_from_shoulder():
    # Hand exactly at the joystick origin: zero deflection, command holds.
    s = CartesianState()
    frame = make_frame(Vec3(0.3, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    cmd = cartesian_update(s, Vec3(2, 0, 1), frame)
    assert cmd.position == Vec3(2, 0, 1)


def test_cartesian_known_step():
    s = CartesianState(d_threshold=0.15, delta_d=0.02)
    frame = make_frame(Vec3(0.7, 0.3, 1.0), shoulder=Vec3(0.0, 0.0, 1.0))
    cmd = cartesian_update(s, Vec3(2, 0, 1), frame)
    # deflection [0.4, 0.3, 0] has norm 0.5; unit vector [0.8, 0.6, 0]
    assert cmd.position.x == pytest.approx(2.016, abs=1e-12)
    assert cmd.position.y == pytest.approx(0.012, abs=1e-12)
    assert cmd.position.z == pytest.approx(1.0, abs=1e-12)


def test_cartesian_boundary_is_stop():
    # Dyadic values so the deflection norm equals d_threshold bit-exactly.
    s = CartesianState(origin_offset=Vec3(0.25, 0, 0), d_threshold=0.125, delta_d=0.02)
    frame = make_frame(Vec3(0.375, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    cmd = cartesian_update(s, Vec3(2, 0, 1), frame)
    assert cmd.position == Vec3(2, 0, 1)
    beyond = make_frame(Vec3(0.375 + 1e-12, 0, 1.0), shoulder=Vec3(0, 0, 1.0))
    assert cartesian_update(s, Vec3(2, 0, 1), beyond).position != Vec3(2, 0, 1)


def test_cartesian_step_norm_zero_or_delta():
    rng = random.Random(36)
    s = CartesianState(d_threshold=0.15, delta_d=0.02)
    shoulder = Vec3(0, 0, 1.0)
    robot = Vec3(1.5, 0.5, 1.2)
    for _ in range(500):
        hand = Vec3(rng.uniform(-0.3, 0.9), rng.uniform(-0.6, 0.6), rng.uniform(0.4, 1.6))
        frame = make_frame(hand, shoulder=shoulder)
        cmd = cartesian_update(s, robot, frame)
        step = (cmd.position - robot).norm()
        dist = (hand - (shoulder + s.origin_offset)).norm()
        if dist > s.d_threshold:
            assert step == pytest.approx(s.delta_d, abs=1e-12)
        else:
            assert cmd.position == robot


def test_cartesian_matches_reference_exactly():
    rng = random.Random(37)
    s = CartesianState()
    shoulder = Vec3(-0.1, 0.2, 1.3)
    robot = Vec3(2.0, -1.0, 1.5)
    for _ in range(2000):
        hand = Vec3(rng.uniform(-0.5, 1.1), rng.uniform(-0.8, 0.8), rng.uniform(0.5, 2.1))
        cmd = cartesian_update(s, robot, make_frame(hand, shoulder=shoulder))
        px, py, pz = cartesian_reference(
            robot.as_tuple(),
            hand.as_tuple(),
            shoulder.as_tuple(),
            s.origin_offset.as_tuple(),
            s.d_threshold,
            s.delta_d,
        )
        assert cmd.position.x == px
        assert cmd.position.y == py
        assert cmd.position.z == pz
        robot = cmd.position


def test_cartesian_orientation_passes_through():
    q = UnitQuat.from_axis_angle(Vec3(0, 1, 0), 1.2)
    s = CartesianState()
    cmd = cartesian_update(s, Vec3(0, 0, 0), make_frame(Vec3(1, 0, 1), quat=q))
    assert cmd.orientation == q


# --- height override and frame serialization --------------------------------


def test_height_override_disabled_is_identity():
    from omniteleop.plant import PoseCommand

    cmd = PoseCommand(Vec3(1, 2, 3), IDENT)
    out = apply_height_override(cmd, make_frame(Vec3(0, 0, 9.9)), HeightOverride())
    assert out == cmd


def test_height_override_replaces_z_only():
    from omniteleop.plant import PoseCommand

    q = UnitQuat.from_axis_angle(Vec3(0, 0, 1), 0.3)
    cmd = PoseCommand(Vec3(1, 2, 3), q)
    frame = make_frame(Vec3(0, 0, 1.2))
    out = apply_height_override(cmd, frame, HeightOverride(enabled=True, z_offset=0.0))
    assert out.position == Vec3(1, 2, 1.2)
    assert out.orientation == q
    shifted = apply_height_override(
        cmd, make_frame(Vec3(0, 0, 1.5)), HeightOverride(enabled=True, z_offset=-0.3)
    )
    assert shifted.position.z == pytest.approx(1.2, abs=1e-12)


def test_frame_dict_round_trip_exact():
    rng = random.Random(38)
    for _ in range(20):
        frame = OperatorFrame(
            t=rng.uniform(0, 100),
            hand=Pose(
                Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 3)),
                random_quat(rng),
            ),
            shoulder=Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(1, 2)),
            knuckles=tuple(rng.uniform(0, 1) for _ in range(5)),
        )
        assert frame_from_dict(frame_to_dict(frame)) == frame


def test_state_invariants_rejected():
    with pytest.raises(ValueError):
        SphericalState(r=0.1, r_min=0.5, r_max=5.0)
    with pytest.raises(ValueError):
        SphericalState(r=1.0, d_min=0.5, d_max=0.3)
    with pytest.raises(ValueError):
        SphericalState(r=1.0, delta_r=0.0)
    with pytest.raises(ValueError):
        CartesianState(d_threshold=0.0)
    with pytest.raises(ValueError):
        CartesianState(delta_d=-0.01)
