"""Random configuration generators shared by the self-check, tests and scripts."""
from __future__ import annotations

import math
import random

from .geometry import norm_angle, rotate
from .ceb import construct_ceb_set, theta_positive


def random_points(rng: random.Random, n: int, spread: float = 1.0):
    return [(rng.uniform(-spread, spread), rng.uniform(-spread, spread)) for _ in range(n)]


def motif_config(rng: random.Random, n_range=(5, 24)):
    """k >= 2 rotated copies of a random motif around a random center."""
    lo, hi = n_range
    while True:
        k, m = rng.randint(2, 6), rng.randint(1, 4)
        if lo <= k * m <= hi:
            break
    mot = [(rng.uniform(0.2, 1.0), rng.uniform(0, 2 * math.pi / k)) for _ in range(m)]
    c = (rng.uniform(-3, 3), rng.uniform(-3, 3))
    return [(c[0] + r * math.cos(a + 2 * math.pi * j / k), c[1] + r * math.sin(a + 2 * math.pi * j / k))
            for j in range(k) for r, a in mot]


def symmetric_config(rng: random.Random, n: int):
    """k-fold rotationally symmetric configuration of n robots around the origin."""
    k = rng.choice([k for k in range(2, n + 1) if n % k == 0])
    mot = [(rng.uniform(0.3, 1.0), rng.uniform(0, 2 * math.pi / k)) for _ in range(n // k)]
    return [(r * math.cos(a + 2 * math.pi * j / k), r * math.sin(a + 2 * math.pi * j / k))
            for j in range(k) for r, a in mot]


def shifted_config(rng: random.Random, max_frac: float = 0.5):
    """Shift one closest CEB member of a motif configuration.

    The orientation reduces the robot's smallest angle to the others.
    Returns (P, shifted_robot, shift_angle)."""
    while True:
        P = motif_config(rng)
        cs = construct_ceb_set(P)
        if cs is not None:
            break
    c = cs.center
    dmin = min(math.dist(q, c) for q in cs.members)
    s = rng.choice([q for q in cs.members if math.dist(q, c) <= dmin * (1 + 1e-9)])
    if rng.random() < 0.5:
        f = rng.uniform(0.3, 0.9)
        s2 = (c[0] + (s[0] - c[0]) * f, c[1] + (s[1] - c[1]) * f)
        P = [s2 if p == s else p for p in P]
        s = s2
    angs = [norm_angle(math.atan2(p[1] - c[1], p[0] - c[0])) for p in P if math.dist(p, c) > 1e-12]
    th = theta_positive(angs)
    sh = rng.uniform(0.01, max_frac) * th
    a_s = math.atan2(s[1] - c[1], s[0] - c[0])
    rel = [norm_angle(a - a_s) for a in angs]
    rel = [a for a in rel if 1e-12 < a < 2 * math.pi - 1e-12]
    sgn = 1.0 if min(rel) <= 2 * math.pi - max(rel) else -1.0
    s3 = rotate(s, sgn * sh, c)
    return [s3 if p == s else p for p in P], s3, sh


def multiplicity_pattern(rng: random.Random, n: int):
    """Random pattern of n points with one double and one triple point."""
    sup = random_points(rng, n - 3)
    return sup + [sup[0], sup[1], sup[1]]


def phase_snapshots(count: int, phases, seed: int = 0, n_range=(5, 9), stride: int = 3,
                    max_runs: int = 400, max_events: int = 20000, symmetric: bool = False):
    """Configurations met during seeded simulations, grouped by phase.

    Every `stride`-th configuration change in a wanted phase is kept until
    each phase holds `count` of them (or `max_runs` simulations were used).
    Odd runs use patterns with multiplicity points. With `symmetric` the
    runs start from rotationally symmetric configurations. Returns
    {phase: [(positions, pattern)]}."""
    from .simulator import run
    out = {ph: [] for ph in phases}
    seen = dict.fromkeys(phases, 0)
    for k in range(max_runs):
        rng = random.Random(f"{seed}:{k}")
        n = rng.randint(*n_range)
        init = symmetric_config(rng, n) if symmetric else random_points(rng, n)
        F = multiplicity_pattern(rng, n) if k % 2 and n >= 6 else random_points(rng, n)

        def watch(w, rec):
            got = out.get(w.phase)
            if got is None or len(got) >= count or rec["kind"] not in ("move-progress", "move-end"):
                return
            seen[w.phase] += 1
            if seen[w.phase] % stride == 0:
                got.append((list(w.positions), F))

        run(init, F, "async", seed=k, max_events=max_events, observer=watch)
        if all(len(v) >= count for v in out.values()):
            break
    return out
