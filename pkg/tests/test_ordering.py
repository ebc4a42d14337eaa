import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import random_similarity, regular_polygon, same_points
from swarmform.geometry import CCW, CW, angle, smallest_enclosing_circle
from swarmform.ordering import (NotAReferenceRobot, NotOrdered, align_pattern, canonical_pattern,
                                is_guided, is_ordered, partial_order, symmetricity, view_sequence)
from swarmform.workloads import random_points, symmetric_config

SQUARE = [(1, 1), (-1, 1), (-1, -1), (1, -1)]


def test_square_views():
    v = view_sequence(SQUARE, (1, 1), CCW)
    assert [a for _, a in v.sequence] == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2])
    # distances are normalized by the SEC radius
    assert all(d == pytest.approx(1.0) for d, _ in v.sequence)
    assert same_points(view_sequence(SQUARE, (1, 1), CW).sequence, v.sequence)


def test_view_requires_reference_robot():
    P = [(0.1, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]
    with pytest.raises(NotAReferenceRobot):
        view_sequence(P, (1, 0), CCW)


def test_view_matches_independent_recomputation():
    rng = random.Random(3)
    for _ in range(30):
        P = random_points(rng, 6)
        c = smallest_enclosing_circle(P)
        dist = [math.dist(p, c.center) / c.radius for p in P]
        rm = P[min(range(6), key=dist.__getitem__)]
        for o in (CCW, CW):
            # robots on one circle share a distance level
            want = sorted((round(d, 9), 0.0 if p == rm else angle(rm, c.center, p, o)) for d, p in zip(dist, P))
            got = view_sequence(P, rm, o).sequence
            assert len(got) == len(want)
            for (d1, a1), (d2, a2) in zip(got, want):
                assert d1 == pytest.approx(d2, abs=1e-8) and a1 == pytest.approx(a2, abs=1e-9)


def test_pentagon_symmetricity():
    res = partial_order(regular_polygon(5, 2.0, (1, 1)))
    assert res.symmetricity == 5 and len(res.classes) == 1 and not res.total
    assert not is_ordered(regular_polygon(5))


def test_center_robot_gives_symmetricity_one():
    assert symmetricity(regular_polygon(4) + [(0.0, 0.0)]) == 1


def test_generic_points_are_totally_ordered():
    rng = random.Random(17)
    for _ in range(20):
        P = random_points(rng, 7)
        res = partial_order(P)
        assert res.total and res.symmetricity == 1
        assert all(len(c) == 1 for c in res.classes) and len(res.classes) == 7
        assert is_ordered(P)


def test_two_robot_swap_symmetric():
    assert not is_ordered([(-1, 0), (1, 0)])


def test_square_symmetricity():
    assert symmetricity(SQUARE) == 4


def test_chiral_three_fold_symmetricity():
    seed = [(1.0, 0.0), (0.6 * math.cos(0.4), 0.6 * math.sin(0.4))]
    P = [(math.cos(t) * x - math.sin(t) * y, math.sin(t) * x + math.cos(t) * y)
         for t in (0, 2 * math.pi / 3, 4 * math.pi / 3) for x, y in seed]
    res = partial_order(P)
    assert res.symmetricity == 3
    assert sorted(len(c) for c in res.classes) == [3, 3]


@given(st.integers(0, 10 ** 6), st.integers(5, 12))
def test_symmetricity_divides_n(seed, n):
    P = symmetric_config(random.Random(seed), n)
    assert n % symmetricity(P) == 0


@given(st.integers(0, 10 ** 6))
def test_partial_order_is_similarity_invariant(seed):
    rng = random.Random(seed)
    P = random_points(rng, rng.randint(3, 9)) if seed % 2 else symmetric_config(rng, rng.choice([6, 8, 9]))
    T = random_similarity(rng)
    a, b = partial_order(P), partial_order([T.apply(p) for p in P])
    assert a.symmetricity == b.symmetricity and a.total == b.total
    sizes = lambda r: [len(c) for c in r.classes]
    assert sizes(a) == sizes(b)
    idx = {p: i for i, p in enumerate(P)}
    img = {T.apply(p): i for i, p in enumerate(P)}
    ca = [sorted(idx[p] for p in c) for c in a.classes]
    cb = [sorted(img[p] for p in c) for c in b.classes]
    assert ca == cb


def test_view_sequences_swap_under_reflection():
    rng = random.Random(2)
    P = random_points(rng, 6)
    M = [(-x, y) for x, y in P]
    c = smallest_enclosing_circle(P)
    rm = min(P, key=lambda p: math.dist(p, c.center))
    a = view_sequence(P, rm, CCW).sequence
    b = view_sequence(M, (-rm[0], rm[1]), CW).sequence
    assert same_points(a, b)


# ---------------------------------------------------------------- alignment

def _shared_half_line(P, F):
    res = partial_order(P)
    c = smallest_enclosing_circle(P)
    r2 = res.classes[1][0]
    cp = canonical_pattern(F)
    A = align_pattern(P, F)
    f2 = A[cp.f2]
    return c, r2, f2, A


def test_align_pattern_properties():
    rng = random.Random(4)
    for _ in range(20):
        P, F = random_points(rng, 7), random_points(rng, 7)
        c, r2, f2, A = _shared_half_line(P, F)
        cA = smallest_enclosing_circle(A)
        assert math.dist(cA.center, c.center) < 1e-9 * c.radius
        assert cA.radius == pytest.approx(c.radius, rel=1e-9)
        a = angle(r2, c.center, f2)
        assert min(a, 2 * math.pi - a) < 1e-9


def test_align_pattern_input_frame_independent():
    rng = random.Random(8)
    for _ in range(20):
        P, F = random_points(rng, 8), random_points(rng, 8)
        T = random_similarity(rng)
        A = align_pattern(P, F)
        B = align_pattern(P, [T.apply(f) for f in F])
        assert same_points(sorted(A), sorted(B))
        assert same_points(align_pattern(P, A), A)


def test_align_pattern_symmetric_pattern_any_labelling():
    # a pattern with a reflection axis: every labelling gives the same points
    P = random_points(random.Random(12), 6)
    F = [(0, 1), (0.7, 0.2), (-0.7, 0.2), (0.4, -0.8), (-0.4, -0.8), (0, -0.1)]
    ref = sorted(align_pattern(P, F))
    rng = random.Random(1)
    for _ in range(10):
        G = F[:]
        rng.shuffle(G)
        assert same_points(sorted(align_pattern(P, G)), ref)


def test_align_requires_order():
    with pytest.raises(NotOrdered):
        align_pattern(regular_polygon(5), random_points(random.Random(1), 5))


# ---------------------------------------------------------------- guided

def _guided_config(k):
    """r_2 at radius 0.5 on the positive x axis, r_1 at radius k * 0.5 a small angle away."""
    P = [(0.5, 0.0), (0.5 * k * math.cos(0.02), 0.5 * k * math.sin(0.02)),
         (1, 0.3), (-0.9, 0.43), (0.1, -1), (-0.3, 0.95), (0.6, 0.8)]
    c = smallest_enclosing_circle(P)
    # the pattern's f_2 sits on a larger circle and alone on it
    F = [(0, 0), (0.8, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (0.7, 0.7), (-0.6, -0.8)]
    return P, F, c


def test_is_guided_examples():
    P, F, _ = _guided_config(0.3)
    assert is_guided(P, F)
    P, F, _ = _guided_config(0.6)
    assert not is_guided(P, F)
    assert not is_guided(regular_polygon(5), regular_polygon(5, phase=0.1))
