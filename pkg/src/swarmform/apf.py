"""Moves of the almost-pattern-formation phase.

Everything is computed in the frame fixed by the guided configuration:
radii normalized by C(P), angles psi measured from the ray of r_2 in the
orientation of the minimal view. Sub-procedures are tried in a fixed
order and the first one that applies decides who moves; all other robots
stay put. Each call plans a single step, so the whole procedure is
re-evaluated at every activation.
"""
from __future__ import annotations

import math

from .geometry import CCW, CW, TWO_PI, norm_angle
from .ordering import guided_angle
from .trajectory import EMPTY, arc_to, radial_to

EPS_R = 1e-8
EPS_A = 1e-8


class Frame:
    def __init__(self, pol, res, cp):
        self.pol = pol
        self.r1, self.r2 = res.sequence[0], res.sequence[1]
        _, o = res.frames[0]
        self.sgn = 1.0 if o == CCW else -1.0
        phi2 = pol.phi[self.r2]
        self.phi2 = phi2
        n = len(pol.points)
        self.rho = [pol.raw[i] for i in range(n)]
        self.psi = []
        for i in range(n):
            a = norm_angle(self.sgn * (pol.phi[i] - phi2))
            if a > TWO_PI - EPS_A:
                a = 0.0
            self.psi.append(a)
        self.psi[self.r2] = 0.0
        self.robots = [i for i in range(n) if i != self.r1]
        self.alpha = guided_angle(pol, res)
        self.L = TWO_PI - 2 * self.alpha
        # target points without f_1
        self.tidx = [k for k in range(len(cp.points)) if k != cp.f1]
        pts = [cp.points[k] for k in self.tidx]
        self.targets = []
        for x, y in pts:
            a = norm_angle(math.atan2(y, x))
            if a > TWO_PI - EPS_A:
                a = 0.0
            self.targets.append((math.hypot(x, y), a))
        levels = sorted({round(r, 12) for r, _ in self.targets}, reverse=True)
        circles = []
        for r in levels:
            if circles and circles[-1] - r <= EPS_R:
                continue
            circles.append(r)
        self.circles = circles
        self.counts = [sum(1 for r, _ in self.targets if abs(r - R) <= EPS_R) for R in circles]

    # -- helpers
    def on(self, i, j) -> bool:
        return abs(self.rho[i] - self.circles[j]) <= EPS_R

    def on_circle(self, j):
        return [i for i in self.robots if self.on(i, j)]

    def circle_of(self, i):
        for j in range(len(self.circles)):
            if self.on(i, j):
                return j
        return None

    def key(self, i):
        return (round(self.rho[i], 9), self.psi[i])

    def shares_level(self, i) -> bool:
        return any(k != i and abs(self.rho[k] - self.rho[i]) <= EPS_R for k in range(len(self.rho)))

    def level_below(self, r):
        lv = [self.rho[k] for k in range(len(self.rho)) if self.rho[k] < r - EPS_R]
        return max(lv) if lv else 0.0

    def level_above(self, r):
        lv = [self.rho[k] for k in range(len(self.rho)) if self.rho[k] > r + EPS_R]
        return min(lv) if lv else 1.0

    # -- trajectories
    def radial(self, i, rho):
        pol = self.pol
        return radial_to(pol.center, pol.points[i], rho * pol.radius)

    def arc(self, i, psi_t):
        """Arc on the robot's own circle to angle psi_t without crossing psi=0."""
        pol = self.pol
        up = psi_t > self.psi[i]
        o = CCW if (up == (self.sgn > 0)) else CW
        return arc_to(pol.center, pol.points[i], self.phi2 + self.sgn * psi_t, o)


def _sec_clamp(fr: Frame, i, psi_t):
    """Limit a move on C(P) so the remaining gaps stay at most pi."""
    others = [fr.psi[k] for k in fr.robots if k != i and fr.on(k, 0)]
    if not others:
        return psi_t
    a = fr.psi[i]
    nxt = min(norm_angle(b - a) for b in others)
    prv = min(norm_angle(a - b) for b in others)
    if nxt == 0.0:
        nxt = TWO_PI
    if prv == 0.0:
        prv = TWO_PI
    lo, hi = nxt - math.pi, math.pi - prv
    delta = psi_t - a
    if lo > hi:
        return a
    return a + min(max(delta, min(lo, 0.0)), max(hi, 0.0))


def _arc_move(fr: Frame, i, psi_t):
    """Arc toward psi_t, halting halfway to a robot in the way, SEC-safe."""
    a = fr.psi[i]
    if abs(psi_t - a) <= EPS_A:
        return EMPTY
    if psi_t > a:
        lo, hi = a, psi_t + EPS_A
    else:
        lo, hi = psi_t - EPS_A, a
    block = [fr.psi[k] for k in fr.robots
             if k != i and abs(fr.rho[k] - fr.rho[i]) <= EPS_R and lo < fr.psi[k] < hi]
    if block:
        b = min(block) if psi_t > a else max(block)
        psi_t = (a + b) / 2
    if fr.on(i, 0):
        psi_t = _sec_clamp(fr, i, psi_t)
    if abs(psi_t - a) <= EPS_A * 1e-3:
        return EMPTY
    return fr.arc(i, psi_t)


def apf_moves(pol, res, cp) -> dict:
    fr = Frame(pol, res, cp)
    m = len(fr.circles)
    complete = all(len(fr.on_circle(j)) == fr.counts[j] for j in range(m)) and all(
        fr.circle_of(i) is not None for i in fr.robots)
    fixed = True
    if fr.counts[0] == 2:
        c1 = fr.on_circle(0)
        t = sorted(a for r, a in fr.targets if abs(r - fr.circles[0]) <= EPS_R)
        got = sorted(fr.psi[i] for i in c1)
        fixed = len(c1) == 2 and all(abs(g - x) <= EPS_A for g, x in zip(got, t))

    if not (complete and fixed):
        nulls = [i for i in fr.robots if i != fr.r2 and fr.psi[i] == 0.0]
        if nulls:
            return {i: _unnull(fr, i) for i in nulls}

    if not fixed:
        return _fix_enclosing(fr)

    for j in range(m):
        mv = _clean_exterior(fr, j)
        if mv is not None:
            return mv
        if len(fr.on_circle(j)) < fr.counts[j]:
            return _locate(fr, j)
        if len(fr.on_circle(j)) > fr.counts[j]:
            return _remove(fr, j)
    return _rotate(fr)


def _unnull(fr: Frame, i):
    same = [fr.psi[k] for k in fr.robots if k != i and abs(fr.rho[k] - fr.rho[i]) <= EPS_R and fr.psi[k] > 0]
    nxt = min(same) if same else math.pi
    tgt = min(nxt / 2, math.pi / 2)
    if fr.on(i, 0):
        tgt = _sec_clamp(fr, i, tgt)
    if tgt <= 0.0:
        return EMPTY
    return fr.arc(i, tgt)


def _fix_enclosing(fr: Frame) -> dict:
    c1 = sorted(fr.on_circle(0), key=lambda i: fr.psi[i])
    t_lo, t_hi = sorted(a for r, a in fr.targets if abs(r - fr.circles[0]) <= EPS_R)
    if len(c1) <= 2:
        inner = [i for i in fr.robots if not fr.on(i, 0)]
        r = max(inner, key=fr.key)
        if fr.shares_level(r):
            return {r: fr.radial(r, (fr.rho[r] + fr.level_above(fr.rho[r])) / 2)}
        a = min(fr.psi[i] for i in c1)
        if fr.psi[r] < a:
            return {r: fr.radial(r, 1.0)}
        return {r: fr.arc(r, a / 2)}
    lo, hi = c1[0], c1[-1]
    if abs(fr.psi[lo] - t_lo) <= EPS_A and abs(fr.psi[hi] - t_hi) <= EPS_A:
        r = c1[1]
        floor = max(fr.circles[1] if len(fr.circles) > 1 else 0.0, fr.level_below(1.0))
        return {r: fr.radial(r, (1.0 + floor) / 2)}
    k = len(c1) - 2
    dest = {lo: t_lo, hi: t_hi}
    for j, i in enumerate(c1[1:-1], start=1):
        dest[i] = t_lo + j * (t_hi - t_lo) / (k + 1)
    return {i: _arc_move(fr, i, d) for i, d in dest.items()}


def _clean_exterior(fr: Frame, j):
    if j == 0:
        return None
    Rj, Rprev = fr.circles[j], fr.circles[j - 1]
    ext = [i for i in fr.robots if Rj + EPS_R < fr.rho[i] < Rprev - EPS_R]
    if not ext:
        return None
    r = min(ext, key=fr.key)
    if fr.shares_level(r):
        floor = max(Rj, fr.level_below(fr.rho[r]))
        return {r: fr.radial(r, (fr.rho[r] + floor) / 2)}
    on = fr.on_circle(j)
    a = max((fr.psi[i] for i in on), default=0.0)
    upper = fr.L if j == len(fr.circles) - 1 else TWO_PI
    if a < fr.psi[r] < upper:
        return {r: fr.radial(r, Rj)}
    return {r: fr.arc(r, (a + upper) / 2)}


def _locate(fr: Frame, j) -> dict:
    Rj = fr.circles[j]
    inner = [i for i in fr.robots if fr.rho[i] < Rj - EPS_R]
    r = max(inner, key=fr.key)
    if fr.shares_level(r):
        return {r: fr.radial(r, (fr.rho[r] + min(Rj, fr.level_above(fr.rho[r]))) / 2)}
    on = fr.on_circle(j)
    a = min((fr.psi[i] for i in on), default=TWO_PI)
    if j == len(fr.circles) - 1:
        a = min(a, fr.L)
    if fr.psi[r] < a:
        return {r: fr.radial(r, Rj)}
    return {r: fr.arc(r, a / 2)}


def _remove(fr: Frame, j) -> dict:
    Rj = fr.circles[j]
    on = sorted(fr.on_circle(j), key=lambda i: fr.psi[i])
    below = fr.circles[j + 1] if j + 1 < len(fr.circles) else 0.0
    if j > 0:
        r = next(i for i in on if i != fr.r2)
        floor = max(below, fr.level_below(Rj))
        return {r: fr.radial(r, (Rj + floor) / 2)}
    m1 = fr.counts[0]
    k = len(on) - m1
    extras, main = on[:k], on[k:]
    dest = {}
    for t, i in enumerate(main):
        dest[i] = (2 * t + 1) * math.pi / m1
    for t, i in enumerate(extras, start=1):
        dest[i] = t * math.pi / (m1 * (k + 1))
    if all(abs(fr.psi[i] - dest[i]) <= EPS_A for i in main):
        r = on[0]
        floor = max(below, fr.level_below(Rj))
        return {r: fr.radial(r, (Rj + floor) / 2)}
    return {i: _arc_move(fr, i, d) for i, d in dest.items()}


def _rotate(fr: Frame) -> dict:
    """Match robots and targets circle by circle in increasing angle."""
    robots = sorted(fr.robots, key=lambda i: (fr.circle_of(i), fr.psi[i]))
    targets = []
    for R in fr.circles:
        on = [t for t, (r, _) in enumerate(fr.targets) if abs(r - R) <= EPS_R]
        targets.extend(sorted(on, key=lambda t: fr.targets[t][1]))
    return {i: _arc_move(fr, i, fr.targets[t][1]) for i, t in zip(robots, targets)}
