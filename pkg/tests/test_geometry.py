import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import random_similarity, regular_polygon
from swarmform.geometry import (CCW, CW, DegenerateAngle, EmptySet, NotASubset, SizeMismatch, angle,
                                center_of_regularity, holds_sec, rotate, same_circle, similar,
                                smallest_enclosing_circle, weber_point)
from swarmform.oracles import sec_brute, similar_brute, weber_cost, weber_grid
from swarmform.workloads import random_points

coord = st.floats(-100, 100, allow_nan=False)
point_sets = st.lists(st.tuples(coord, coord), min_size=1, max_size=15, unique=True)


# ---------------------------------------------------------------- SEC

def test_sec_singleton_and_pair():
    c = smallest_enclosing_circle([(0, 0)])
    assert c.center == (0.0, 0.0) and c.radius == 0.0
    c = smallest_enclosing_circle([(-1, 0), (1, 0)])
    assert math.dist(c.center, (0, 0)) < 1e-15 and c.radius == pytest.approx(1.0, abs=1e-15)


def test_sec_empty():
    with pytest.raises(EmptySet):
        smallest_enclosing_circle([])


def test_sec_matches_brute_force():
    rng = random.Random(5)
    for _ in range(150):
        P = random_points(rng, rng.randint(2, 20))
        got = smallest_enclosing_circle(P)
        c, r = sec_brute(P)
        assert abs(got.radius - r) <= 1e-9 * r
        assert math.dist(got.center, c) <= 1e-9 * r


@given(point_sets)
def test_sec_contains_all(P):
    c = smallest_enclosing_circle(P)
    assert all(math.dist(c.center, p) <= c.radius * (1 + 1e-9) + 1e-9 for p in P)


@given(point_sets, st.floats(0, 0.99), st.floats(0, 2 * math.pi))
def test_sec_idempotent_under_interior_point(P, f, a):
    c = smallest_enclosing_circle(P)
    q = (c.center[0] + f * c.radius * math.cos(a), c.center[1] + f * c.radius * math.sin(a))
    c2 = smallest_enclosing_circle(P + [q])
    assert c2 == c


@given(st.integers(0, 10 ** 6))
def test_sec_similarity_equivariant(seed):
    rng = random.Random(seed)
    P = random_points(rng, rng.randint(2, 15))
    T = random_similarity(rng)
    c = smallest_enclosing_circle(P)
    c2 = smallest_enclosing_circle([T.apply(p) for p in P])
    assert abs(c2.radius - T.scale * c.radius) <= 1e-9 * c2.radius
    assert math.dist(c2.center, T.apply(c.center)) <= 1e-9 * c2.radius


# ---------------------------------------------------------------- angles

def test_angle_examples():
    assert angle((1, 0), (0, 0), (1, 0), CCW) == 0.0
    assert angle((1, 0), (0, 0), (0, 1), CCW) == pytest.approx(math.pi / 2)
    assert angle((1, 0), (0, 0), (0, 1), CW) == pytest.approx(3 * math.pi / 2)


def test_angle_degenerate():
    with pytest.raises(DegenerateAngle):
        angle((0, 0), (0, 0), (1, 0))
    with pytest.raises(DegenerateAngle):
        angle((1, 0), (0, 0), (0, 0))


@given(st.tuples(coord, coord), st.tuples(coord, coord), st.tuples(coord, coord))
def test_angle_orientation_reversal(u, v, w):
    if u == v or w == v:
        return
    a = angle(u, v, w, CCW)
    b = angle(u, v, w, CW)
    assert 0 <= a < 2 * math.pi and 0 <= b < 2 * math.pi
    if 1e-12 < a < 2 * math.pi - 1e-12:
        assert a + b == pytest.approx(2 * math.pi, abs=1e-9)


# ---------------------------------------------------------------- holds_sec

def _holds_brute(sub, P):
    c0 = smallest_enclosing_circle(P)
    for k in range(1, len(sub) + 1):
        for B in itertools.combinations(sub, k):
            rest = [p for p in P if p not in B]
            if not rest or not same_circle(c0, smallest_enclosing_circle(rest)):
                return True
    return False


def test_holds_sec_examples():
    tri = regular_polygon(3)
    assert holds_sec([tri[0]], tri)
    inner = (0.1, 0.05)
    assert not holds_sec([inner], tri + [inner])


def test_holds_sec_not_subset():
    with pytest.raises(NotASubset):
        holds_sec([(5, 5)], regular_polygon(4))


def test_holds_sec_matches_subset_enumeration():
    rng = random.Random(9)
    for _ in range(60):
        P = random_points(rng, 10)
        sub = rng.sample(P, rng.randint(1, 4))
        assert holds_sec(sub, P) == _holds_brute(sub, P)


@given(st.integers(0, 10 ** 6))
def test_interior_point_never_holds(seed):
    rng = random.Random(seed)
    P = random_points(rng, 8)
    c = smallest_enclosing_circle(P)
    a, f = rng.uniform(0, 2 * math.pi), rng.uniform(0, 0.95)
    q = (c.center[0] + f * c.radius * math.cos(a), c.center[1] + f * c.radius * math.sin(a))
    assert not holds_sec([q], P + [q])


# ---------------------------------------------------------------- similarity

def test_similar_identity_and_mirror():
    A = random_points(random.Random(1), 7)
    T = similar(A, A)
    assert T is not None and T.scale == pytest.approx(1) and not T.reflect
    M = [(-x, y) for x, y in A]
    T = similar(A, M)
    assert T is not None and T.reflect


def test_similar_rejects_moved_vertex():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    moved = [(0, 0), (1, 0), (1.1, 1), (0, 1)]
    assert similar(sq, moved) is None
    assert not similar_brute(sq, moved)


def test_similar_size_mismatch():
    with pytest.raises(SizeMismatch):
        similar([(0, 0)], [(0, 0), (1, 1)])


@given(st.integers(0, 10 ** 6), st.booleans())
def test_similar_agrees_with_brute_force(seed, perturb):
    rng = random.Random(seed)
    A = random_points(rng, rng.randint(2, 9))
    T = random_similarity(rng)
    B = [T.apply(p) for p in A]
    rng.shuffle(B)
    if perturb:
        j = rng.randrange(len(B))
        B[j] = (B[j][0] + 0.05 * T.scale, B[j][1])
    assert (similar(A, B) is not None) == similar_brute(A, B)


@given(st.integers(0, 10 ** 6))
def test_similar_is_reflexive_symmetric_and_invariant(seed):
    rng = random.Random(seed)
    A = random_points(rng, rng.randint(3, 10))
    S = random_similarity(rng)
    B = [S.apply(p) for p in A]
    T = similar(A, B)
    assert T is not None and similar(B, A) is not None and similar(A, A) is not None
    mapped = [T.apply(p) for p in A]
    scale = max(math.dist(p, q) for p in B for q in B)
    assert all(min(math.dist(m, b) for b in B) <= 1e-8 * scale for m in mapped)
    inv = T.inverse()
    assert all(math.dist(inv.apply(T.apply(p)), p) <= 1e-9 * (1 + math.hypot(*p)) for p in A)


# ---------------------------------------------------------------- Weber point

def test_weber_examples():
    assert weber_point([(2.5, -1)]) == (2.5, -1.0)
    c = weber_point(regular_polygon(5, 2.0, (1, -3)))
    assert math.dist(c, (1, -3)) < 1e-9


def test_weber_matches_grid_oracle():
    rng = random.Random(11)
    for _ in range(40):
        P = random_points(rng, 7)
        got, ref = weber_point(P), weber_grid(P)
        assert math.dist(got, ref) < 1e-6 or weber_cost(P, got) <= weber_cost(P, ref) + 1e-12


@given(st.integers(0, 10 ** 6))
def test_weber_radial_invariance(seed):
    rng = random.Random(seed)
    P = random_points(rng, rng.randint(4, 9))
    w = weber_point(P)
    j = rng.randrange(len(P))
    d = math.dist(P[j], w)
    if d < 1e-6:
        return
    f = rng.uniform(0.2, 3.0)
    Q = P[:]
    Q[j] = (w[0] + (P[j][0] - w[0]) * f, w[1] + (P[j][1] - w[1]) * f)
    assert math.dist(weber_point(Q), w) < 1e-7


# ---------------------------------------------------------------- center of regularity

def test_center_of_regularity_equiangular():
    c = (3, 4)
    P = [(c[0] + r * math.cos(a), c[1] + r * math.sin(a))
         for r, a in zip((1, 2, 0.5, 1.5), (0, math.pi / 2, math.pi, 3 * math.pi / 2))]
    got = center_of_regularity(P)
    assert got is not None and math.dist(got, c) < 1e-9


def _biangular(alpha, radii, c=(0.0, 0.0), k=3):
    beta = 2 * math.pi / k - alpha
    pts, a = [], 0.0
    for j in range(2 * k):
        pts.append((c[0] + radii[j] * math.cos(a), c[1] + radii[j] * math.sin(a)))
        a += alpha if j % 2 == 0 else beta
    return pts


def test_center_of_regularity_biangular():
    P = _biangular(0.5, [1, 1.3, 0.8, 1.1, 1.2, 0.9])
    got = center_of_regularity(P)
    assert got is not None and math.dist(got, (0, 0)) < 1e-9


def test_center_of_regularity_perturbed():
    P = _biangular(0.5, [1, 1.3, 0.8, 1.1, 1.2, 0.9])
    P[2] = rotate(P[2], math.radians(5))
    assert center_of_regularity(P) is None
