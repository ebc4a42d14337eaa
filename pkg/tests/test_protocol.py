import math
import random

import pytest

from conftest import random_similarity
from swarmform.geometry import smallest_enclosing_circle, similar
from swarmform.ordering import is_guided
from swarmform.pattern import pattern_info
from swarmform.protocol import (APF, FBC1, FBC2, TERMINATION, BitSource, analyse, apf_move, classify_phase,
                                compute, fbc1_move, fbc2_move, termination_move)
from swarmform.trajectory import Arc, Line, Radial
from swarmform.workloads import multiplicity_pattern, random_points, symmetric_config


def local(P, i):
    """Snapshot of P seen from robot i with an identity frame."""
    x, y = P[i]
    return [(p[0] - x, p[1] - y) for p in P]


def bits(*values):
    it = iter(values)
    return BitSource(lambda: next(it))


# ---------------------------------------------------------------- classification

def test_formed_pattern_is_termination_and_still():
    F = random_points(random.Random(1), 7)
    assert classify_phase(F, F) == TERMINATION
    for i in range(7):
        assert compute(local(F, i), F).empty


def test_symmetric_configuration_is_fbc1():
    rng = random.Random(2)
    P = symmetric_config(rng, 9)
    while len({round(math.hypot(*p), 9) for p in P}) < 2:
        P = symmetric_config(rng, 9)
    assert classify_phase(P, random_points(rng, 9)) == FBC1


def fbc2_config(rng, n=7):
    """Random (P, F) whose closest robot is not yet at half the next radius."""
    while True:
        P, F = random_points(rng, n), random_points(rng, n)
        if analyse(P, F).kind == "descend":
            return P, F


def test_generic_configuration_is_fbc2():
    P, F = fbc2_config(random.Random(3))
    assert not is_guided(P, F)
    assert classify_phase(P, F) == FBC2


def test_selected_robot_stage_reported_as_fbc1():
    # r_1 already at half the next radius but off the guided angle
    P = [(0.2 * math.cos(1.0), 0.2 * math.sin(1.0)), (0.5, 0.0),
         (1, 0.3), (-0.9, 0.43), (0.1, -1), (-0.3, 0.95), (0.6, 0.8)]
    F = [(0, 0), (0.8, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (0.7, 0.7), (-0.6, -0.8)]
    plan = analyse(P, F)
    assert plan.phase == FBC1 and plan.kind == "selected" and plan.elected == 0


def guided_config():
    P = [(0.5, 0.0), (0.15 * math.cos(0.02), 0.15 * math.sin(0.02)),
         (1, 0.3), (-0.9, 0.43), (0.1, -1), (-0.3, 0.95), (0.6, 0.8)]
    F = [(0, 0), (0.8, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (0.7, 0.7), (-0.6, -0.8)]
    return P, F


def test_guided_configuration_is_apf():
    P, F = guided_config()
    assert is_guided(P, F)
    assert classify_phase(P, F) == APF
    # the guided robot r_1 has nothing to do in this phase: fbc2 yields nothing
    assert fbc2_move(P, F, 1).empty


def test_apf_moves_keep_sec_and_use_circle_paths():
    P, F = guided_config()
    c0 = smallest_enclosing_circle(P)
    moved = 0
    for i in range(len(P)):
        t = apf_move(P, F, i)
        if t.empty:
            continue
        moved += 1
        for s in t.segments:
            assert isinstance(s, (Arc, Radial))
            if isinstance(s, Arc):
                assert math.dist(s.center, c0.center) < 1e-9
        for q in t.sample(32):
            Q = P[:]
            Q[i] = q
            c = smallest_enclosing_circle(Q)
            assert math.dist(c.center, c0.center) < 1e-9 and c.radius == pytest.approx(c0.radius, rel=1e-9)
    assert moved >= 1


# ---------------------------------------------------------------- termination

def displaced_f1(seed):
    F = random_points(random.Random(seed), 7)
    info = pattern_info(F)
    f1 = info.canon.f1
    c = smallest_enclosing_circle(F).center
    P = F[:]
    P[f1] = (c[0] + 0.5 * (F[f1][0] - c[0]) + 0.01, c[1] + 0.5 * (F[f1][1] - c[1]))
    return P, F, f1


def test_only_r1_displaced_moves_straight_to_f1():
    P, F, f1 = displaced_f1(4)
    assert classify_phase(P, F) == TERMINATION
    t = termination_move(P, F, f1)
    assert len(t.segments) == 1 and isinstance(t.segments[0], Line)
    assert math.dist(t.destination, F[f1]) < 1e-9
    assert all(termination_move(P, F, i).empty for i in range(7) if i != f1)
    Q = P[:]
    Q[f1] = t.destination
    assert similar(Q, F) is not None


def test_satellite_robots_merge_onto_multiplicity_points():
    rng = random.Random(5)
    for _ in range(10):
        F = multiplicity_pattern(rng, 8)
        info = pattern_info(F)
        c = smallest_enclosing_circle(F).center
        P = list(info.tilde)
        f1 = info.canon.f1
        P[f1] = (c[0] + 0.5 * (P[f1][0] - c[0]), c[1] + 0.5 * (P[f1][1] - c[1]))
        assert classify_phase(P, F) == TERMINATION
        sup = set(info.support)
        movers = [i for i in range(8) if not termination_move(P, F, i).empty]
        assert movers
        for i in movers:
            t = termination_move(P, F, i)
            (seg,) = t.segments
            assert isinstance(seg, Line)
            # a satellite ends exactly on a support point of the pattern
            if i != f1:
                assert P[i] not in sup
                assert min(math.dist(t.destination, x) for x in sup) < 1e-12


def test_pattern_formed_with_multiplicity_is_still():
    F = multiplicity_pattern(random.Random(6), 9)
    assert analyse(F, F).kind == "formed"
    assert all(compute(local(F, i), F).empty for i in range(9))


# ---------------------------------------------------------------- FBC1

def six_equiangular(r0, r3):
    """Equiangular set around the origin: robots at 0 and 180 degrees have
    radii r0 and r3, the other four radius 2 (they fix the SEC)."""
    rad = [r0, 2, 2, r3, 2, 2]
    return [(r * math.cos(math.pi * j / 3), r * math.sin(math.pi * j / 3)) for j, r in enumerate(rad)]


F6 = [(0.1, 0.9), (1.0, 0.2), (-0.7, 0.6), (0.3, -1.0), (-0.8, -0.5), (0.45, 0.35)]


def test_walk_toward_and_away():
    P = six_equiangular(1, 1)
    assert classify_phase(P, F6) == FBC1
    t = fbc1_move(P, F6, 0, bits(1))
    (seg,) = t.segments
    assert isinstance(seg, Radial)
    assert math.hypot(*t.destination) == pytest.approx(7 / 8)
    t = fbc1_move(P, F6, 0, bits(0))
    assert math.hypot(*t.destination) == pytest.approx(1 + 1 / 7)
    assert fbc1_move(P, F6, 1, bits(0)).empty


def test_elected_robot_arcs_theta_over_8():
    P = six_equiangular(0.8, 1)
    assert classify_phase(P, F6) == FBC1
    t = fbc1_move(P, F6, 0, bits(1))
    (seg,) = t.segments
    assert isinstance(seg, Arc)
    assert seg.radius == pytest.approx(0.8) and math.dist(seg.center, (0, 0)) < 1e-12
    assert abs(seg.sweep) == pytest.approx((math.pi / 3) / 8)
    assert fbc1_move(P, F6, 3, bits(1)).empty


def test_farther_robot_stays():
    P = six_equiangular(1, 1.2)
    assert fbc1_move(P, F6, 3, bits(1)).empty


# ---------------------------------------------------------------- FBC2

def test_fbc2_descends_to_half_second_radius():
    rng = random.Random(7)
    for _ in range(5):
        P, F = fbc2_config(rng)
        c = smallest_enclosing_circle(P)
        movers = [(i, fbc2_move(P, F, i)) for i in range(7)]
        movers = [(i, t) for i, t in movers if not t.empty]
        assert len(movers) == 1
        i, t = movers[0]
        (seg,) = t.segments
        assert isinstance(seg, Radial)
        rads = sorted(math.dist(p, c.center) for j, p in enumerate(P) if j != i)
        end = math.dist(t.destination, c.center)
        assert end <= rads[0] / 2 * (1 + 1e-9)
        # straight toward the center
        u = (P[i][0] - c.center[0], P[i][1] - c.center[1])
        v = (t.destination[0] - c.center[0], t.destination[1] - c.center[1])
        assert abs(u[0] * v[1] - u[1] * v[0]) < 1e-9 * (math.hypot(*u) * math.hypot(*v))


def test_fbc2_stops_at_planted_regular_point():
    """Pull the closest robot of an equiangular set outward along its ray from
    c(P); the descent must stop exactly where the set was regular."""
    rng = random.Random(8)
    hits = 0
    for _ in range(400):
        n = 7
        rad = [rng.uniform(0.5, 2.5) for _ in range(n)]
        P = [(r * math.cos(2 * math.pi * j / n), r * math.sin(2 * math.pi * j / n)) for j, r in enumerate(rad)]
        c = smallest_enclosing_circle(P).center
        k = min(range(n), key=lambda j: math.dist(P[j], c))
        q = P[k]
        f = rng.uniform(1.05, 1.8)
        P[k] = (c[0] + f * (q[0] - c[0]), c[1] + f * (q[1] - c[1]))
        rest = P[:k] + P[k + 1:]
        if smallest_enclosing_circle(P) != smallest_enclosing_circle(rest + [q]):
            continue
        # the sweep ends at half the second smallest radius
        if math.dist(q, c) <= min(math.dist(p, c) for p in rest) / 2 * 1.01:
            continue
        F = random_points(rng, n)
        if analyse(P, F).phase != FBC2:
            continue
        t = fbc2_move(P, F, k)
        if t.empty:  # another robot is r_1
            continue
        assert math.dist(t.destination, q) < 1e-7
        hits += 1
        if hits == 10:
            break
    assert hits == 10


def test_fbc2_passes_other_periodic_points():
    """A string of period three (not equiangular nor biangular) is no stop."""
    rng = random.Random(9)
    hits = 0
    gaps = [0.5, 1.2, math.pi - 1.7] * 2
    angs = [sum(gaps[:j]) for j in range(6)]
    for _ in range(400):
        rad = [rng.uniform(0.5, 2.5) for _ in range(6)]
        P = [(r * math.cos(a), r * math.sin(a)) for a, r in zip(angs, rad)]
        c = smallest_enclosing_circle(P).center
        k = min(range(6), key=lambda j: math.dist(P[j], c))
        q = P[k]
        f = rng.uniform(1.05, 1.8)
        P[k] = (c[0] + f * (q[0] - c[0]), c[1] + f * (q[1] - c[1]))
        rest = P[:k] + P[k + 1:]
        if smallest_enclosing_circle(P) != smallest_enclosing_circle(rest + [q]):
            continue
        if math.dist(q, c) <= min(math.dist(p, c) for p in rest) / 2 * 1.01:
            continue
        F = random_points(rng, 6)
        if analyse(P, F).phase != FBC2:
            continue
        t = fbc2_move(P, F, k)
        if t.empty:
            continue
        assert math.dist(t.destination, q) > 1e-3
        hits += 1
        if hits == 10:
            break
    assert hits == 10


# ---------------------------------------------------------------- compute

def _outcomes(snap, F):
    return [compute(snap, F, BitSource(lambda b=b: b)) for b in (0, 1)]


def _same_traj(a, b, eps):
    if a.empty or b.empty:
        return a.empty and b.empty
    return abs(a.length - b.length) <= eps and all(math.dist(p, q) <= eps for p, q in zip(a.sample(8), b.sample(8)))


def _compare(snap, F, T):
    """Outcomes over both bit values agree as a set once mapped by T: a bit
    that breaks a mirror tie may mean the other side in a reflected frame."""
    a = [t.transform(T) for t in _outcomes(snap, F)]
    b = _outcomes([T.apply(p) for p in snap], [T.apply(p) for p in F])
    eps = 1e-9 * max(math.hypot(*p) for p in snap) * T.scale
    assert (_same_traj(a[0], b[0], eps) and _same_traj(a[1], b[1], eps)) or \
        (_same_traj(a[0], b[1], eps) and _same_traj(a[1], b[0], eps))


def test_frame_equivariance_on_constructed_snapshots():
    rng = random.Random(9)
    cases = [guided_config(), displaced_f1(10)[:2], (six_equiangular(1, 1), F6), (six_equiangular(0.8, 1), F6)]
    cases += [fbc2_config(rng) for _ in range(3)]
    for P, F in cases:
        for i in range(len(P)):
            T = random_similarity(rng)
            T = T._replace(translation=(0.0, 0.0))
            _compare(local(P, i), local(F, 0), T)


def test_deterministic_phases_draw_no_bits():
    P, F = guided_config()
    cases = [(P, F), displaced_f1(11)[:2], fbc2_config(random.Random(1))]
    for P, F in cases:
        assert classify_phase(P, F) != FBC1
        for i in range(len(P)):
            src = BitSource(lambda: 1)
            compute(local(P, i), F, src)
            assert src.used == 0


def test_walk_draws_one_bit():
    P = six_equiangular(1, 1)
    src = BitSource(lambda: 0)
    compute(local(P, 0), F6, src)
    assert src.used == 1
