import math
import random

import pytest

from gce.hands import (
    GESTURE_CATALOG,
    BimanualRelation,
    Finger,
    HandFrame,
    MalformedFrame,
    Posture,
    PostureConfig,
    PostureState,
    Side,
    TimestampSkew,
    bimanual_relation,
    classify_posture,
    grab_point,
    hold_timer,
    pinch_point,
)

CFG = PostureConfig()
FWD = (1.0, 0.0, 0.0)


def hand(
    side=Side.RIGHT,
    palm=(0.4, 0.0, 1.2),
    normal=(0.0, 0.0, -1.0),
    direction=(1.0, 0.0, 0.0),
    tips=None,
    curls=(0.5, 0.5, 0.5, 0.5, 0.5),
    t_ms=0,
) -> HandFrame:
    if tips is None:
        tips = tuple(
            (palm[0] + 0.04 * math.cos(a), palm[1] + 0.04 * math.sin(a), palm[2] + 0.05)
            for a in [2 * math.pi * i / 5 for i in range(5)]
        )
    fingers = tuple(Finger(tip=tips[i], curl=curls[i]) for i in range(5))
    return HandFrame(side, palm, normal, direction, fingers, t_ms)


def pinch_hand(distance: float, t_ms=0, palm=(0.4, 0.0, 1.2)) -> HandFrame:
    thumb = (palm[0], palm[1] - distance / 2, palm[2] + 0.05)
    index = (palm[0], palm[1] + distance / 2, palm[2] + 0.05)
    rest = [(palm[0], palm[1], palm[2] + 0.02 * i) for i in (1, 2, 3)]
    return hand(
        palm=palm,
        tips=(thumb, index, *rest),
        curls=(0.5, 0.5, 0.5, 0.5, 0.5),
        t_ms=t_ms,
    )


def fist_hand(t_ms=0, palm=(0.4, 0.0, 1.2)) -> HandFrame:
    tips = tuple(
        (palm[0] + 0.035 * math.cos(a), palm[1] + 0.035 * math.sin(a), palm[2])
        for a in [2 * math.pi * i / 5 for i in range(5)]
    )
    return hand(palm=palm, tips=tips, curls=(0.8, 0.8, 0.8, 0.8, 0.8), t_ms=t_ms)


def point_hand(aim=(1.0, 0.0, 0.0), t_ms=0, palm=(0.4, 0.0, 1.2)) -> HandFrame:
    n = math.sqrt(sum(c * c for c in aim))
    aim = tuple(c / n for c in aim)
    tips = (
        (palm[0], palm[1] - 0.03, palm[2]),
        (palm[0] + aim[0] * 0.1, palm[1] + aim[1] * 0.1, palm[2] + aim[2] * 0.1),
        (palm[0], palm[1] + 0.01, palm[2]),
        (palm[0], palm[1] + 0.02, palm[2]),
        (palm[0], palm[1] + 0.03, palm[2]),
    )
    return hand(palm=palm, direction=aim, tips=tips, curls=(0.4, 0.0, 0.8, 0.8, 0.8), t_ms=t_ms)


def stop_hand(t_ms=0, palm=(0.4, 0.0, 1.2), normal=FWD) -> HandFrame:
    return hand(palm=palm, normal=normal, curls=(0.0,) * 5, t_ms=t_ms)


def classify_seq(frames, cfg=CFG, forward=FWD) -> PostureState:
    state = PostureState()
    for f in frames:
        state = classify_posture(f, state, cfg, forward)
    return state


class TestClassification:
    def test_pinch_engages_at_20mm(self):
        state = classify_seq([pinch_hand(0.020, t) for t in (0, 11)])
        assert state.posture is Posture.PINCH
        assert state.pinch_point is not None

    def test_pinch_hysteresis_holds_at_30mm(self):
        frames = [pinch_hand(0.020, 0), pinch_hand(0.020, 11), pinch_hand(0.030, 22)]
        assert classify_seq(frames).posture is Posture.PINCH

    def test_pinch_releases_at_36mm(self):
        frames = [pinch_hand(0.020, 0), pinch_hand(0.020, 11), pinch_hand(0.036, 22)]
        assert classify_seq(frames).posture is Posture.NONE

    def test_open_stop(self):
        state = classify_seq([stop_hand(0), stop_hand(11)])
        assert state.posture is Posture.OPEN_STOP

    def test_open_needs_forward_normal(self):
        frames = [stop_hand(t, normal=(0.0, 0.0, 1.0)) for t in (0, 11)]
        assert classify_seq(frames).posture is Posture.NONE

    def test_grab(self):
        state = classify_seq([fist_hand(0), fist_hand(11)])
        assert state.posture is Posture.GRAB
        assert state.grab_point is not None

    def test_grab_hysteresis(self):
        loosening = hand(curls=(0.1, 0.6, 0.6, 0.6, 0.6), t_ms=22)
        frames = [fist_hand(0), fist_hand(11), loosening]
        assert classify_seq(frames).posture is Posture.GRAB  # mean 0.6 > release 0.5

    def test_point_forward(self):
        state = classify_seq([point_hand(t_ms=t) for t in (0, 11)])
        assert state.posture is Posture.POINT

    def test_index_up(self):
        frames = [point_hand(aim=(0.1, 0.0, 1.0), t_ms=t) for t in (0, 11)]
        assert classify_seq(frames).posture is Posture.INDEX_UP

    def test_pinch_beats_grab(self):
        # curled fingers with touching thumb+index: grasp family resolves to pinch
        palm = (0.4, 0.0, 1.2)
        tips = (
            (0.4, 0.0, 1.25),
            (0.4, 0.0, 1.25),
            (0.41, 0.0, 1.2),
            (0.42, 0.0, 1.2),
            (0.43, 0.0, 1.2),
        )
        frames = [
            hand(palm=palm, tips=tips, curls=(0.8,) * 5, t_ms=t) for t in (0, 11)
        ]
        assert classify_seq(frames).posture is Posture.PINCH

    def test_debounce_needs_two_frames(self):
        assert classify_seq([fist_hand(0)]).posture is Posture.NONE

    def test_since_ms_from_first_pending_frame(self):
        state = classify_seq([stop_hand(100), stop_hand(111), stop_hand(122)])
        assert state.since_ms == 100

    def test_malformed_normal_rejected(self):
        bad = hand(normal=(0.0, 0.0, -2.0))
        with pytest.raises(MalformedFrame):
            classify_posture(bad, PostureState(), CFG, FWD)

    def test_nan_rejected(self):
        bad = hand(palm=(float("nan"), 0.0, 1.0))
        with pytest.raises(MalformedFrame):
            classify_posture(bad, PostureState(), CFG, FWD)

    def test_deterministic(self):
        f = pinch_hand(0.02, 0)
        s = PostureState()
        assert classify_posture(f, s, CFG, FWD) == classify_posture(f, s, CFG, FWD)

    def test_points_follow_hand(self):
        state = classify_seq([pinch_hand(0.02, 0), pinch_hand(0.02, 11)])
        f = pinch_hand(0.02, 22, palm=(0.5, 0.1, 1.3))
        state = classify_posture(f, state, CFG, FWD)
        assert state.pinch_point == pinch_point(f)

    def test_single_posture_always(self):
        rng = random.Random(5)
        for _ in range(300):
            curls = tuple(rng.random() for _ in range(5))
            f = hand(curls=curls, t_ms=0)
            state = classify_seq([f, hand(curls=curls, t_ms=11)])
            assert isinstance(state.posture, Posture)


class TestHysteresisProperty:
    def test_monotone_ramp_single_release(self):
        # 1000 randomized monotone widening ramps: exactly one pinch->none
        # transition, never pinch->none->pinch
        for seed in range(1000):
            rng = random.Random(seed)
            distances = [0.015, 0.015]
            d = 0.015
            for _ in range(rng.randint(5, 25)):
                d += rng.uniform(0.0, 0.01)
                distances.append(d)
            state = PostureState()
            seen = []
            for i, dist in enumerate(distances):
                state = classify_posture(pinch_hand(dist, i * 11), state, CFG, FWD)
                seen.append(state.posture)
            assert seen[1] is Posture.PINCH
            transitions = [
                (a, b) for a, b in zip(seen, seen[1:]) if a is not b
            ]
            assert all(
                (a, b) == (Posture.NONE, Posture.PINCH)
                or (a, b) == (Posture.PINCH, Posture.NONE)
                for a, b in transitions
            )
            releases = sum(1 for a, b in transitions if b is Posture.NONE)
            assert releases <= 1
            engages = sum(1 for a, b in transitions if b is Posture.PINCH)
            assert engages == 1  # no re-engage after release on a widening ramp


class TestMirrorSymmetry:
    def mirror(self, f: HandFrame) -> HandFrame:
        def m(p):
            return (p[0], -p[1], p[2])

        return HandFrame(
            side=Side.LEFT if f.side is Side.RIGHT else Side.RIGHT,
            palm_pos=m(f.palm_pos),
            palm_normal=m(f.palm_normal),
            palm_dir=m(f.palm_dir),
            fingers=tuple(Finger(tip=m(fg.tip), curl=fg.curl) for fg in f.fingers),
            t_ms=f.t_ms,
        )

    def test_posture_class_preserved(self):
        cases = [
            [pinch_hand(0.02, 0), pinch_hand(0.02, 11)],
            [fist_hand(0), fist_hand(11)],
            [point_hand(aim=(1.0, 0.3, 0.0), t_ms=0), point_hand(aim=(1.0, 0.3, 0.0), t_ms=11)],
            [point_hand(aim=(0.1, 0.2, 1.0), t_ms=0), point_hand(aim=(0.1, 0.2, 1.0), t_ms=11)],
            [stop_hand(0), stop_hand(11)],
        ]
        for frames in cases:
            direct = classify_seq(frames).posture
            mirrored = classify_seq([self.mirror(f) for f in frames]).posture
            assert direct is mirrored


class TestBimanual:
    def facing_pair(self, sep=0.2, dot=-1.0):
        up = (0.0, 0.0, 1.0)
        left = hand(Side.LEFT, palm=(0.4, 0.0, 1.2 + sep / 2), normal=(0.0, 0.0, -1.0))
        angle = math.acos(max(-1.0, min(1.0, -dot)))
        ny = math.sin(angle)
        nz = math.cos(angle)
        right = hand(Side.RIGHT, palm=(0.4, 0.0, 1.2 - sep / 2), normal=(0.0, ny, nz))
        return left, right

    def test_antiparallel_facing(self):
        l, r = self.facing_pair()
        rel = bimanual_relation(l, r)
        assert rel.palms_facing
        assert rel.vertical_stacked
        assert abs(rel.separation_m - 0.2) < 1e-9

    def test_threshold_dot(self):
        l, r = self.facing_pair(dot=-0.85)
        assert bimanual_relation(l, r).palms_facing
        l, r = self.facing_pair(dot=-0.75)
        assert not bimanual_relation(l, r).palms_facing

    def test_parallel_rays_not_crossed(self):
        left = point_hand(aim=(0.0, 0.0, 1.0), palm=(0.4, 0.15, 1.2))
        right = point_hand(aim=(0.0, 0.0, 1.0), palm=(0.4, -0.15, 1.2))
        left = HandFrame(Side.LEFT, left.palm_pos, left.palm_normal, left.palm_dir,
                         left.fingers, left.t_ms)
        assert not bimanual_relation(left, right).indices_crossed

    def test_crossed_indices(self):
        def up_hand(side, y, tilt_y):
            palm = (0.4, y, 1.2)
            d = tilt_y
            n = math.sqrt(d * d + 1.0)
            aim = (0.0, d / n, 1.0 / n)
            f = point_hand(aim=aim, palm=palm)
            return HandFrame(side, palm, f.palm_normal, f.palm_dir, f.fingers, f.t_ms)

        left = up_hand(Side.LEFT, 0.05, -0.45)
        right = up_hand(Side.RIGHT, -0.05, 0.45)
        assert bimanual_relation(left, right).indices_crossed

    def test_timestamp_skew(self):
        l, r = self.facing_pair()
        r = HandFrame(r.side, r.palm_pos, r.palm_normal, r.palm_dir, r.fingers, 50)
        with pytest.raises(TimestampSkew):
            bimanual_relation(l, r)


class TestHoldTimer:
    def test_exact_hold(self):
        state = PostureState(posture=Posture.OPEN_STOP, since_ms=0)
        assert hold_timer(state, Posture.OPEN_STOP, 1500, 1500)

    def test_too_short(self):
        state = PostureState(posture=Posture.OPEN_STOP, since_ms=0)
        assert not hold_timer(state, Posture.OPEN_STOP, 1500, 1000)

    def test_wrong_posture(self):
        state = PostureState(posture=Posture.GRAB, since_ms=0)
        assert not hold_timer(state, Posture.OPEN_STOP, 1500, 5000)


class TestCatalog:
    def test_eleven_features(self):
        assert len(GESTURE_CATALOG) == 11
        assert len({g.feature for g in GESTURE_CATALOG}) == 11

    def test_comfort_codes_are_metadata(self):
        codes = {c for g in GESTURE_CATALOG for c in g.comfort_codes}
        assert codes == {"1c", "2c", "3u", "5c", "9c", "10c", "11u", "12u"}
