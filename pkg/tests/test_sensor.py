import math

import pytest

from gce.rng import SplitMix64
from gce.sensor import (
    DropReason,
    HeadPose,
    ObservedHand,
    SensorModel,
    TrackerState,
    in_frustum,
    observe,
)
from tests.test_hands import hand, Side

HEAD = HeadPose(pos=(0.0, 0.0, 1.6), quat=(1.0, 0.0, 0.0, 0.0))  # facing +x
MODEL = SensorModel()


def at(x, y=0.0, z=1.6, side=Side.RIGHT):
    return hand(side=side, palm=(x, y, z))


class TestFrustum:
    def test_center_of_envelope(self):
        assert in_frustum(MODEL, HEAD, (0.4, 0.0, 1.6))

    def test_too_shallow(self):
        assert not in_frustum(MODEL, HEAD, (0.05, 0.0, 1.6))

    def test_too_deep(self):
        assert not in_frustum(MODEL, HEAD, (0.9, 0.0, 1.6))

    def test_beyond_half_angle_horizontal(self):
        # 76 degrees off-axis with a 150 degree FOV (half angle 75)
        x = 0.4
        y = x * math.tan(math.radians(76))
        assert not in_frustum(MODEL, HEAD, (x, y, 1.6))
        y = x * math.tan(math.radians(74))
        assert in_frustum(MODEL, HEAD, (x, y, 1.6))

    def test_vertical_half_angle(self):
        x = 0.4
        z = 1.6 + x * math.tan(math.radians(61))
        assert not in_frustum(MODEL, HEAD, (x, 0.0, z))

    def test_model_validation(self):
        with pytest.raises(ValueError):
            SensorModel(min_depth_m=0.5, max_depth_m=0.2)
        with pytest.raises(ValueError):
            SensorModel(fov_h_deg=200)


class TestObserve:
    def test_identity_inside_envelope(self):
        left = at(0.4, 0.1, 1.4, Side.LEFT)
        right = at(0.4, -0.1, 1.4, Side.RIGHT)
        ol, orr, _ = observe(MODEL, HEAD, left, right)
        assert ol.tracked and orr.tracked
        assert ol.frame == left and orr.frame == right

    def test_out_of_zone_depth(self):
        ol, orr, _ = observe(MODEL, HEAD, None, at(0.9))
        assert not orr.tracked
        assert orr.drop_reason is DropReason.OUT_OF_ZONE

    def test_out_of_fov(self):
        ol, orr, _ = observe(MODEL, HEAD, None, at(0.3, 0.0, 2.6))
        assert orr.drop_reason is DropReason.OUT_OF_FOV

    def test_absent_hands_pass_through(self):
        ol, orr, _ = observe(MODEL, HEAD, None, None)
        assert ol == ObservedHand.absent()
        assert orr.frame is None and orr.drop_reason is None

    def test_occlusion_drops_farther_hand(self):
        near = at(0.4, 0.0, 1.6, Side.RIGHT)
        far = at(0.7, 0.01, 1.6, Side.LEFT)  # same ray, behind
        ol, orr, _ = observe(MODEL, HEAD, far, near)
        assert orr.tracked
        assert not ol.tracked and ol.drop_reason is DropReason.OCCLUDED

    def test_occlusion_asymmetric(self):
        near = at(0.4, 0.0, 1.6, Side.RIGHT)
        far = at(0.7, 0.01, 1.6, Side.LEFT)
        ol, orr, _ = observe(MODEL, HEAD, far, near)
        occluded = [o for o in (ol, orr) if o.drop_reason is DropReason.OCCLUDED]
        assert len(occluded) == 1

    def test_side_by_side_not_occluded(self):
        ol, orr, _ = observe(
            MODEL, HEAD, at(0.4, 0.15, 1.5, Side.LEFT), at(0.4, -0.15, 1.5, Side.RIGHT)
        )
        assert ol.tracked and orr.tracked


class TestLatch:
    def test_drop_latches_for_n_frames(self):
        state = TrackerState()
        # frame 1: geometric drop
        _, orr, state = observe(MODEL, HEAD, None, at(0.9), None, state)
        assert orr.drop_reason is DropReason.OUT_OF_ZONE
        # geometry recovers but the latch holds for 3 more frames
        for _ in range(MODEL.dropout_latch_frames):
            _, orr, state = observe(MODEL, HEAD, None, at(0.4), None, state)
            assert not orr.tracked
            assert orr.drop_reason is DropReason.OUT_OF_ZONE
        _, orr, state = observe(MODEL, HEAD, None, at(0.4), None, state)
        assert orr.tracked

    def test_relapse_rearms_latch(self):
        state = TrackerState()
        _, _, state = observe(MODEL, HEAD, None, at(0.9), None, state)
        _, _, state = observe(MODEL, HEAD, None, at(0.4), None, state)
        _, orr, state = observe(MODEL, HEAD, None, at(0.9), None, state)
        assert state.right_latch == MODEL.dropout_latch_frames

    def test_absence_preserves_latch(self):
        state = TrackerState()
        _, _, state = observe(MODEL, HEAD, None, at(0.9), None, state)
        latch = state.right_latch
        _, _, state = observe(MODEL, HEAD, None, None, None, state)
        assert state.right_latch == latch


class TestJitter:
    def test_zero_noise_identity(self):
        frame = at(0.4)
        rng = SplitMix64(42)
        _, orr, _ = observe(MODEL, HEAD, None, frame, rng)
        assert orr.frame == frame

    def test_seeded_jitter_deterministic(self):
        model = SensorModel(jitter_std_m=0.002)
        frame = at(0.4)
        a = observe(model, HEAD, None, frame, SplitMix64(7))[1].frame
        b = observe(model, HEAD, None, frame, SplitMix64(7))[1].frame
        c = observe(model, HEAD, None, frame, SplitMix64(8))[1].frame
        assert a == b
        assert a != c
        assert a != frame

    def test_jitter_only_positions(self):
        model = SensorModel(jitter_std_m=0.002)
        frame = at(0.4)
        out = observe(model, HEAD, None, frame, SplitMix64(7))[1].frame
        assert out.palm_normal == frame.palm_normal
        assert [f.curl for f in out.fingers] == [f.curl for f in frame.fingers]

    def test_no_fabrication(self):
        model = SensorModel(jitter_std_m=0.01)
        ol, orr, _ = observe(model, HEAD, None, None, SplitMix64(1))
        assert ol.frame is None and orr.frame is None


class TestDeterminism:
    def test_identical_inputs_identical_outputs(self):
        left = at(0.4, 0.1, 1.5, Side.LEFT)
        right = at(0.6, 0.11, 1.5, Side.RIGHT)
        model = SensorModel(jitter_std_m=0.001)
        a = observe(model, HEAD, left, right, SplitMix64(3), TrackerState())
        b = observe(model, HEAD, left, right, SplitMix64(3), TrackerState())
        assert a == b
