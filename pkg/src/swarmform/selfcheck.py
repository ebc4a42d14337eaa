"""Reduced oracle suites run by `swarmform check`."""
from __future__ import annotations

import math
import random

from .ceb import construct_ceb_set, detect_shifted
from .geometry import similar, smallest_enclosing_circle, weber_point
from .oracles import sec_brute, similar_brute, weber_cost, weber_grid
from .workloads import motif_config, random_points, shifted_config

DEFAULT_COUNTS = {"sec": 300, "weber": 30, "similarity": 60, "ceb": 150, "shifted": 150}


def check_sec(rng, count):
    for _ in range(count):
        P = random_points(rng, rng.randint(1, 25))
        got = smallest_enclosing_circle(P)
        _, r = sec_brute(P)
        if abs(got.radius - r) > 1e-9 * max(r, 1e-12) or not all(got.contains(p, 1e-9) for p in P):
            return f"radius {got.radius!r} vs brute force {r!r}"
    return None


def check_weber(rng, count):
    for _ in range(count):
        P = random_points(rng, rng.randint(3, 9))
        got = weber_point(P)
        ref = weber_grid(P)
        # a flat optimum may leave the point loose; the cost must still match
        if math.dist(got, ref) > 1e-6 and weber_cost(P, got) > weber_cost(P, ref) + 1e-12:
            return f"{got} vs grid {ref}"
    return None


def check_similarity(rng, count):
    for i in range(count):
        A = random_points(rng, rng.randint(2, 12))
        t, k, refl = rng.uniform(0, 2 * math.pi), rng.uniform(0.1, 10), rng.random() < 0.5
        B = []
        for x, y in A:
            y = -y if refl else y
            B.append((k * (x * math.cos(t) - y * math.sin(t)) + 3, k * (x * math.sin(t) + y * math.cos(t)) - 1))
        rng.shuffle(B)
        if i % 2:
            j = rng.randrange(len(B))
            B[j] = (B[j][0] + 0.05 * k, B[j][1])
        if (similar(A, B) is not None) != similar_brute(A, B):
            return f"disagreement on a {len(A)}-point pair"
    return None


def check_ceb(rng, count):
    for _ in range(count):
        P = motif_config(rng)
        cs = construct_ceb_set(P)
        if cs is None or not cs.members:
            return f"no CEB-set for a {len(P)}-robot rotated motif"
        Q = P[:]
        rng.shuffle(Q)
        cs2 = construct_ceb_set(Q)
        if cs2 is None or set(cs2.members) != set(cs.members):
            return "CEB-set depends on input order"
    return None


def check_shifted(rng, count):
    for _ in range(count):
        P, s, sh = shifted_config(rng)
        got = detect_shifted(P)
        if got is None or got.shifted is None or got.shifted.robot != s:
            return "planted robot not recovered"
        if abs(got.shifted.shift_angle - sh) > 1e-7:
            return f"shift angle {got.shifted.shift_angle} vs {sh}"
    return None


CHECKS = {"sec": check_sec, "weber": check_weber, "similarity": check_similarity,
          "ceb": check_ceb, "shifted": check_shifted}


def run_checks(seed: int = 1, counts: dict | None = None, out=print) -> bool:
    counts = {**DEFAULT_COUNTS, **(counts or {})}
    ok = True
    for name, fn in CHECKS.items():
        try:
            err = fn(random.Random(f"{seed}:{name}"), counts[name])
        except Exception as e:  # a crash is a failure of that oracle
            err = f"{type(e).__name__}: {e}"
        out(f"{name}: {'ok' if err is None else 'FAIL ' + err}")
        ok &= err is None
    return ok
