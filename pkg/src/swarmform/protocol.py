"""The robots' compute function: phase classification and phase moves."""
from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .apf import apf_moves
from .ceb import ceb_polar, detect_polar, theta_positive
from .geometry import (CCW, TOL, TWO_PI, Tolerance, ang_dist, holds_sec, match_multiset,
                       norm_angle, weber_point)
from .ordering import Polar, guided_polar, order_polar
from .pattern import (GatheringExcluded, PatternInfo, pattern_info,  # noqa: F401
                      preprocess_pattern)
from .trajectory import EMPTY, Trajectory, arc_to, line_to, radial_to

TERMINATION = "Termination"
APF = "AlmostPatternFormation"
FBC1 = "FBC1"
FBC2 = "FBC2"

EPS = 1e-8  # normalized length / angle slack for configuration tests


class BitSource:
    """Hands out random bits; draws are counted."""

    def __init__(self, fn: Optional[Callable[[], int]] = None):
        self.fn = fn
        self.used = 0

    def draw(self) -> int:
        if self.fn is None:
            raise RuntimeError("no random bits available")
        self.used += 1
        return int(self.fn()) & 1


class Plan:
    def __init__(self, phase, kind, moves=None, chooser=None, elected=None):
        self.phase = phase
        self.kind = kind
        self._moves = moves or {}
        self.chooser = chooser
        self.elected = elected

    @property
    def moves(self) -> dict:
        if callable(self._moves):
            self._moves = self._moves()
        return self._moves

    def move(self, me: int, bits: BitSource) -> Trajectory:
        if self.chooser is not None:
            return self.chooser(me, bits)
        return self.moves.get(me, EMPTY)


# ---------------------------------------------------------------- alignment helpers

def _unit(pol: Polar, i):
    c, R = pol.center, pol.radius
    p = pol.points[i]
    return ((p[0] - c[0]) / R, (p[1] - c[1]) / R)


def _map(u, rot, refl):
    x, y = u
    if refl:
        y = -y
    c, s = math.cos(rot), math.sin(rot)
    return (c * x - s * y, s * x + c * y)


def _to_world(pol: Polar, v):
    return (pol.center[0] + pol.radius * v[0], pol.center[1] + pol.radius * v[1])


def _rotations(anchor, targets, eps=EPS):
    """(rotation, reflect) pairs mapping the canonical anchor onto a target
    of the same radius."""
    ra = math.hypot(*anchor)
    out = []
    for refl in (False, True):
        a = _map(anchor, 0.0, refl)
        aa = math.atan2(a[1], a[0])
        for t in targets:
            if abs(math.hypot(*t) - ra) <= eps:
                out.append((math.atan2(t[1], t[0]) - aa, refl))
    return out


def _formed(pol: Polar, info: PatternInfo) -> bool:
    if len(pol.points) != len(info.support):
        return False
    sup = info.canon_support
    if not hasattr(info, "_sup_radii"):
        info._sup_radii = sorted(math.hypot(*p) for p in sup)
    if any(abs(a - b) > 1e-7 for a, b in zip(sorted(pol.raw), info._sup_radii)):
        return False
    us = [_unit(pol, i) for i in range(len(pol.points))]
    anchor = max(sup, key=lambda p: math.hypot(*p))
    if math.hypot(*anchor) == 0.0:
        return False
    for rot, refl in _rotations(anchor, us):
        if match_multiset([_map(p, rot, refl) for p in sup], us, 1e-7):
            return True
    return False


# ---------------------------------------------------------------- termination

def _closest_f(info: PatternInfo):
    if not hasattr(info, "_closest_f"):
        pts = info.canon.points
        free = [j for j in range(len(pts)) if not holds_sec([pts[j]], pts)]
        low = min(info.levels[j] for j in free)
        info._closest_f = sorted({info.parent[j] for j in free if info.levels[j] == low})
    return info._closest_f


def _seg_dist(u, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = dx * dx + dy * dy
    t = 0.0 if L == 0.0 else min(1.0, max(0.0, ((u[0] - a[0]) * dx + (u[1] - a[1]) * dy) / L))
    return math.hypot(u[0] - a[0] - t * dx, u[1] - a[1] - t * dy)


def _sat_info(info: PatternInfo):
    """Satellites of each multiplicity point and the deepest chord dip (fraction of radius)."""
    if not hasattr(info, "_sats"):
        sup = info.canon_support
        sats = {}
        for j, k in enumerate(info.parent):
            p = info.canon.points[j]
            if p != sup[k]:
                sats.setdefault(k, []).append(p)
        dip = 0.0
        for k, ss in sats.items():
            r = math.hypot(*sup[k])
            for q in ss:
                dip = max(dip, 1.0 - math.sqrt(max(r * r - (math.dist(q, sup[k]) / 2) ** 2, 0.0)) / r)
        info._sats = (sats, dip)
    return info._sats


def _termination(pol: Polar, info: PatternInfo) -> Optional[Plan]:
    n = len(pol.points)
    raw = pol.raw
    order = sorted(range(n), key=raw.__getitem__)
    r1 = order[0]
    if n < 2 or raw[order[1]] - raw[r1] <= EPS:
        return None
    others = order[1:]
    us = {i: _unit(pol, i) for i in range(n)}
    sup = info.canon_support
    sup_r = [math.hypot(*p) for p in sup]
    sats, dip = _sat_info(info)
    best = None
    for f in _closest_f(info):
        gm = list(info.mult)
        gm[f] -= 1
        live = [k for k in range(len(sup)) if gm[k] > 0]
        lv = [sup_r[k] for k in live]
        # cheap filter: every robot on a needed circle or on a merge chord just inside it
        if any(not any(-dip * r - EPS <= raw[i] - r <= EPS for r in lv) for i in others):
            continue
        single = [k for k in live if gm[k] == 1] or live
        ka = max(single, key=sup_r.__getitem__)
        for rot, refl in _rotations(sup[ka], [us[i] for i in others]):
            got = _check_term(us, others, sup, sats, live, f, rot, refl)
            if got is None:
                continue
            tf = _map(sup[f], rot, refl)
            dist = math.dist(tf, us[r1])
            if best is None or dist < best[0] - 1e-12:
                best = (dist, f, rot, refl, got)
    if best is None:
        return None
    _, f, rot, refl, (merging, covered) = best

    def target(k):
        # land exactly on a robot already there, so merged robots coincide
        if k in covered:
            return pol.points[covered[k]]
        return _to_world(pol, _map(sup[k], rot, refl))

    moves = {i: line_to(pol.points[i], target(k)) for i, k in merging.items()}
    if not moves:
        moves[r1] = line_to(pol.points[r1], target(f))
    return Plan(TERMINATION, "terminate", moves=moves, elected=r1)


def _check_term(us, others, sup, sats, live, f, rot, refl):
    """Robots other than r_1 sit on needed points of F or on the chord from a
    satellite to its multiplicity point; every needed point except r_1's own
    destination f holds a robot exactly. Returns ({merging robot: point},
    {point: a robot on it})."""
    mapped = {k: _map(sup[k], rot, refl) for k in live}
    chords = {k: [_map(q, rot, refl) for q in sats[k]] for k in live if k in sats}
    covered = {}
    merging = {}
    for i in others:
        u = us[i]
        hit = next((k for k, v in mapped.items()
                    if abs(v[0] - u[0]) <= 1e-7 and abs(v[1] - u[1]) <= 1e-7), None)
        if hit is not None:
            j = covered.get(hit)
            if j is None:
                covered[hit] = i
                continue
            # two distinct robots near one point: the farther one is still merging
            if math.dist(u, mapped[hit]) < math.dist(us[j], mapped[hit]):
                covered[hit], i = i, j
            merging[i] = hit
            continue
        ok = next((k for k, qs in chords.items() if any(_seg_dist(u, mapped[k], q) <= 1e-7 for q in qs)), None)
        if ok is None:
            return None
        merging[i] = ok
    if not set(live) - {f} <= covered.keys():
        return None
    return merging, covered


# ---------------------------------------------------------------- selected stage

def _selected(pol: Polar) -> Optional[int]:
    raw = pol.raw
    order = sorted(range(len(raw)), key=raw.__getitem__)
    r1, r2 = order[0], order[1]
    if raw[r1] <= raw[r2] / 2 * (1 + 1e-9) + 1e-12 and raw[r2] - raw[r1] > EPS:
        return r1
    return None


def _second_level(pol: Polar, r1, r_f2):
    raw = pol.raw
    rho2 = min(raw[i] for i in range(len(raw)) if i != r1)
    cands = [i for i in range(len(raw)) if i != r1 and raw[i] - rho2 <= EPS]
    if rho2 > r_f2 + EPS:
        free = [i for i in cands if not holds_sec([pol.points[i]], pol.points)]
        cands = free or cands
    return rho2, cands


def _selected_plan(pol: Polar, info: PatternInfo, r1: int) -> Plan:
    cp = info.canon
    raw = pol.raw
    rho2, cands = _second_level(pol, r1, cp.r_f2)
    target = min(rho2, cp.r_f2) / 2
    c = pol.center
    p1 = pol.points[r1]
    if raw[r1] > target + EPS:
        return Plan(FBC1, "selected", moves={r1: radial_to(c, p1, target * pol.radius)}, elected=r1)
    # stay well inside the angular gap between candidates so the nearest
    # candidate cannot change while r_1 turns
    ca = sorted(pol.phi[i] for i in cands)
    gap = min((norm_angle(ca[(k + 1) % len(ca)] - ca[k]) for k in range(len(ca))), default=TWO_PI)
    if len(ca) == 1:
        gap = TWO_PI
    at_center = raw[r1] <= EPS
    phi1 = pol.phi[r1]
    dists = sorted((ang_dist(phi1, pol.phi[i]), i) for i in cands)
    tie = len(dists) > 1 and dists[1][0] - dists[0][0] <= EPS
    alpha = None if at_center else dists[0][0]
    # turning down to exactly m_F/4 makes the configuration guided only at
    # the end of the move; smaller targets are used only to break ties
    quarter = cp.m_f / 4
    a_star = min(cp.m_f, gap) / 4
    if alpha is not None and alpha > quarter + EPS:
        a_star = quarter
    elif alpha is not None and not tie and alpha > EPS and (rho2 > cp.r_f2 + EPS or abs(alpha - a_star) <= EPS):
        a_star = alpha

    def pick(bits):
        if at_center:
            return sorted(cands, key=lambda i: pol.phi[i])[0], None
        if len(dists) > 1 and dists[1][0] - dists[0][0] <= EPS:
            return dists[bits.draw()][1], None
        return dists[0][1], dists[0][0]

    if alpha is None or abs(alpha - a_star) > EPS:
        def rotate(me, bits):
            if me != r1:
                return EMPTY
            r2, _ = pick(bits)
            signed = norm_angle(phi1 - pol.phi[r2])
            if signed > math.pi:
                signed -= TWO_PI
            if at_center or abs(signed) <= EPS:
                side = 1.0 if bits.draw() else -1.0
            else:
                side = 1.0 if signed > 0 else -1.0
            goal = pol.phi[r2] + side * a_star
            if at_center:
                q = (c[0] + target * pol.radius * math.cos(goal), c[1] + target * pol.radius * math.sin(goal))
                return line_to(p1, q)
            delta = norm_angle(goal - phi1)
            o = CCW if delta <= math.pi else "cw"
            return arc_to(c, p1, goal, o)
        return Plan(FBC1, "selected", chooser=rotate, elected=r1)
    if rho2 > cp.r_f2 + EPS:
        r2 = dists[0][1]
        return Plan(FBC1, "selected", moves={r2: radial_to(c, pol.points[r2], cp.r_f2 * pol.radius)},
                    elected=r1)
    return Plan(FBC1, "selected", elected=r1)


# ---------------------------------------------------------------- election (FBC1)

def _radius_about(p, c):
    return math.dist(p, c)


def _partial_guard(pol: Polar, info: PatternInfo, Q):
    """Radius cap protecting a pattern that the robots outside Q nearly form.
    Returns (moves, cap) where moves is non-empty if retreat moves apply."""
    n = len(pol.points)
    qs = set(Q)
    nonq = [i for i in range(n) if i not in qs]
    us = [_unit(pol, i) for i in range(n)]
    tilde = info.canon.points
    if nonq:
        anchor_robot = max(nonq, key=lambda i: pol.raw[i])
        cands = []
        ra = pol.raw[anchor_robot]
        ua = us[anchor_robot]
        for t in tilde:
            if abs(math.hypot(*t) - ra) > EPS:
                continue
            for refl in (False, True):
                tt = _map(t, 0.0, refl)
                cands.append((math.atan2(ua[1], ua[0]) - math.atan2(tt[1], tt[0]), refl))
    else:
        cands = []
        for t in tilde:
            if math.hypot(*t) <= EPS:
                continue
            for refl in (False, True):
                tt = _map(t, 0.0, refl)
                for i in Q:
                    cands.append((pol.phi[i] - math.atan2(tt[1], tt[0]), refl))
    for rot, refl in cands:
        mapped = [_map(t, rot, refl) for t in tilde]
        used = [False] * len(mapped)
        ok = True
        for i in nonq:
            u = us[i]
            j = next((j for j, v in enumerate(mapped) if not used[j] and math.dist(u, v) <= 1e-7), None)
            if j is None:
                ok = False
                break
            used[j] = True
        if not ok:
            continue
        rest = [mapped[j] for j in range(len(mapped)) if not used[j]]
        paired = set()
        hits = 0
        for v in rest:
            rv = math.hypot(*v)
            if rv <= EPS:
                continue
            av = math.atan2(v[1], v[0])
            on = [i for i in Q if pol.raw[i] > EPS and ang_dist(pol.phi[i], av) <= EPS]
            if len(on) == 1 and on[0] not in paired:
                paired.add(on[0])
                hits += 1
        if hits < len(Q) - 1:
            continue
        radii = [math.hypot(*v) for v in rest]
        d1 = max(radii)
        inner = [r for r in radii if r < d1 - EPS]
        d2 = max(inner) if inner else d1
        d = (d1 + d2) / 2
        c = pol.center
        far = [i for i in Q if pol.raw[i] > d1 + EPS]
        if far:
            return {i: radial_to(c, pol.points[i], d1 * pol.radius) for i in far}, d
        mid = [i for i in Q if d + EPS < pol.raw[i] <= d1 + EPS]
        if mid:
            return {i: radial_to(c, pol.points[i], d * pol.radius) for i in mid}, d
        return {}, d
    return {}, None


def _nearest_side(angles, a, bits):
    """+1 (ccw) or -1 toward the angularly nearest other robot."""
    ccw = min((norm_angle(b - a) for b in angles if norm_angle(b - a) > EPS), default=math.pi)
    cw = min((norm_angle(a - b) for b in angles if norm_angle(a - b) > EPS), default=math.pi)
    if abs(ccw - cw) <= EPS:
        return 1.0 if bits.draw() else -1.0
    return 1.0 if ccw < cw else -1.0


def _election_plan(pol: Polar, info: PatternInfo, cs) -> Plan:
    n = len(pol.points)
    Q = cs.members
    c = cs.center
    R = pol.radius
    moves, cap = ({}, None) if cs.whole else _partial_guard(pol, info, Q)
    if moves:
        return Plan(FBC1, "guard", moves=moves)
    rad = {i: _radius_about(pol.points[i], c) / R for i in range(n)}
    qs = set(Q)
    d = min((rad[i] for i in range(n) if i not in qs), default=math.inf)
    elected = None
    for e in Q:
        others = [rad[q] for q in Q if q != e]
        if not others or rad[e] < 7 / 8 * min(others) * (1 - 1e-9):
            elected = e
            break
    angs = {i: math.atan2(pol.points[i][1] - c[1], pol.points[i][0] - c[0])
            for i in range(n) if rad[i] > EPS}
    if elected is not None:
        e = elected
        if _selected(pol) == e:
            # leave the selected range first, so the shift that follows can
            # never be mistaken for the selected robot's own moves
            up = 0.6 * min(rad[q] for q in Q if q != e)
            return Plan(FBC1, "lift", moves={e: radial_to(c, pol.points[e], up * R)}, elected=e)
        th = theta_positive([norm_angle(a) for a in angs.values()])

        def shift(me, bits):
            if me != e:
                return EMPTY
            side = _nearest_side([angs[i] for i in angs if i != e], angs[e], bits)
            return arc_to(c, pol.points[e], angs[e] + side * th / 8, CCW if side > 0 else "cw")
        return Plan(FBC1, "elect", chooser=shift, elected=e)
    low = min(rad[q] for q in Q)
    closest = {q for q in Q if rad[q] <= low * (1 + 1e-9)}

    def walk(me, bits):
        if me not in closest:
            return EMPTY
        r = rad[me]
        if bits.draw():
            new = r * 7 / 8
        else:
            step = r / 7 if d == math.inf else min((d - r) / 2, r / 7)
            new = r + step
        if cap is not None and new >= cap:
            return EMPTY
        return radial_to(c, pol.points[me], new * R)
    return Plan(FBC1, "walk", chooser=walk)


def _shift_state(pol: Polar, cs):
    """(theta of the corrected configuration, 'early' | 'quarter')."""
    info = cs.shifted
    c = cs.center
    s = pol.points.index(info.robot)
    pts = list(pol.points)
    pts[s] = info.corrected_position
    th = theta_positive([norm_angle(math.atan2(p[1] - c[1], p[0] - c[0])) for p in pts
                         if math.dist(p, c) > EPS * pol.radius])
    return th, ("early" if info.shift_angle < th / 4 - 1e-9 else "quarter")


def _outside(pol: Polar, cs):
    """Shifted robot index and the CEB members still farther from the centre."""
    s = pol.points.index(cs.shifted.robot)
    rs = math.dist(pol.points[s], cs.center)
    return s, rs, [q for q in cs.members if q != s and math.dist(pol.points[q], cs.center) > rs * (1 + 1e-9)]


def _joining(pol: Polar, cs) -> bool:
    """Members are still moving in to the shifted robot's circle."""
    S = _outside(pol, cs)[2]
    return bool(S) and abs(cs.shifted.shift_angle - _shift_state(pol, cs)[0] / 8) <= 1e-9


def _shift_plan(pol: Polar, pinfo: PatternInfo, cs, sel=None) -> Plan:
    info = cs.shifted
    n = len(pol.points)
    c = cs.center
    R = pol.radius
    s, rs, S = _outside(pol, cs)
    corr = info.corrected_position
    th = _shift_state(pol, cs)[0]
    eps = info.shift_angle
    sgn = 1.0 if info.shift_orientation == CCW else -1.0
    a_corr = math.atan2(corr[1] - c[1], corr[0] - c[0])

    def turn(k):
        goal = a_corr + sgn * th * k
        cur = math.atan2(pol.points[s][1] - c[1], pol.points[s][0] - c[0])
        o = CCW if norm_angle(goal - cur) <= math.pi else "cw"
        return {s: arc_to(c, pol.points[s], goal, o)}

    tol = 1e-9
    if sel is not None and sel == s and not _joining(pol, cs):
        return _selected_plan(pol, pinfo, sel)
    if abs(eps - th / 4) <= tol:
        others = [pol.raw[i] for i in range(n) if i != s]
        return Plan(FBC1, "descend", moves={s: radial_to(pol.center, pol.points[s], min(others) / 2 * R)},
                    elected=s)
    if S:
        if abs(eps - th / 8) <= tol:
            return Plan(FBC1, "join", moves={q: radial_to(c, pol.points[q], rs) for q in S}, elected=s)
        return Plan(FBC1, "shift", moves=turn(1 / 8), elected=s)
    return Plan(FBC1, "shift", moves=turn(1 / 4), elected=s)


# ---------------------------------------------------------------- FBC2

def _residual_batch(P):
    """Distance of each configuration's angle string (around its Weber point)
    to the nearest equiangular or biangular string. P has shape (T, n, 2)."""
    T, n, _ = P.shape
    x = P.mean(axis=1)
    for _ in range(150):
        d = np.linalg.norm(P - x[:, None, :], axis=2)
        d = np.maximum(d, 1e-12)
        w = 1.0 / d
        x = (P * w[:, :, None]).sum(axis=1) / w.sum(axis=1)[:, None]
    return _periodic_residual(P, x)


def _periodic_residual(P, x):
    T, n, _ = P.shape
    a = np.arctan2(P[:, :, 1] - x[:, None, 1], P[:, :, 0] - x[:, None, 0])
    a = np.sort(np.mod(a, TWO_PI), axis=1)
    g = np.diff(np.concatenate([a, a[:, :1] + TWO_PI], axis=1), axis=1)
    best = np.full(T, np.inf)
    for p in (1, 2):
        if n % p:
            continue
        r = np.max(np.abs(g - np.roll(g, -p, axis=1)), axis=1)
        best = np.minimum(best, r)
    return best


def _residual_exact(pts):
    w = weber_point(pts)
    P = np.array(pts)[None]
    return float(_periodic_residual(P, np.array([w]))[0])


def _first_regular(pol: Polar, r1: int, r_start: float, r_end: float, samples: int = 96):
    c = pol.center
    R = pol.radius
    u = (math.cos(pol.phi[r1]), math.sin(pol.phi[r1]))
    base = np.array(pol.points)
    ts = np.linspace(r_start, r_end, samples + 1)[1:]
    P = np.repeat(base[None], len(ts), axis=0)
    P[:, r1, 0] = c[0] + ts * R * u[0]
    P[:, r1, 1] = c[1] + ts * R * u[1]
    res = _residual_batch(P)
    prev = r_start

    def at(t):
        pts = list(pol.points)
        pts[r1] = (c[0] + t * R * u[0], c[1] + t * R * u[1])
        return _residual_exact(pts)

    for k, t in enumerate(ts):
        if res[k] < 0.05 and (k == 0 or res[k] <= res[k - 1]) and (k + 1 == len(ts) or res[k] <= res[k + 1]):
            lo = prev
            hi = ts[k + 1] if k + 1 < len(ts) else t
            a, b = (hi, lo) if hi < lo else (lo, hi)
            g = (math.sqrt(5) - 1) / 2
            x1, x2 = b - g * (b - a), a + g * (b - a)
            f1, f2 = at(x1), at(x2)
            for _ in range(80):
                if f1 < f2:
                    b, x2, f2 = x2, x1, f1
                    x1 = b - g * (b - a)
                    f1 = at(x1)
                else:
                    a, x1, f1 = x1, x2, f2
                    x2 = a + g * (b - a)
                    f2 = at(x2)
                if b - a < 1e-15:
                    break
            tm = (a + b) / 2
            if at(tm) < 1e-9:
                return tm
        prev = t
    return None


def _fbc2_plan(pol: Polar, res, info: PatternInfo) -> Plan:
    n = len(pol.points)
    seq = res.sequence
    r1 = next((i for i in seq if not holds_sec([pol.points[i]], pol.points)), seq[0])
    rho2 = min(pol.raw[i] for i in range(n) if i != r1)
    target = rho2 / 2

    def go(me, bits):
        if me != r1:
            return EMPTY
        stop = _first_regular(pol, r1, pol.raw[r1], target)
        t = target if stop is None else stop
        return radial_to(pol.center, pol.points[r1], t * pol.radius)
    return Plan(FBC2, "descend", chooser=go)


# ---------------------------------------------------------------- dispatch

def distinct(P, rel: float = 1e-9):
    """Points of P with near-coincident ones merged (first one kept)."""
    pts = [(float(x), float(y)) for x, y in P]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    span = max(math.hypot(p[0] - cx, p[1] - cy) for p in pts) or 1.0
    thr = (rel * span) ** 2
    out = []
    for p in pts:
        x, y = p
        for q in out:
            dx, dy = x - q[0], y - q[1]
            if dx * dx + dy * dy <= thr:
                break
        else:
            out.append(p)
    return out


def analyse(P, F, tol: Tolerance = TOL) -> Plan:
    pts = distinct(P)
    info = F if isinstance(F, PatternInfo) else pattern_info(F, tol)
    pol = Polar(pts, tol)
    if _formed(pol, info):
        return Plan(TERMINATION, "formed")
    term = _termination(pol, info)
    if term is not None:
        return term
    res = order_polar(pol)
    sel = _selected(pol)
    if sel is not None and res.total and res.sequence[0] == sel and guided_polar(pol, res, info.canon):
        # a shift still short of theta/4 belongs to an unfinished election
        # move; finishing it first keeps phase changes at rest points
        sh = detect_polar(pol)
        if sh is not None and _shift_state(pol, sh)[1] == "early" and (
                pol.points.index(sh.shifted.robot) != sel or _joining(pol, sh)):
            return _shift_plan(pol, info, sh)
        return Plan(APF, "apf", moves=lambda: apf_moves(pol, res, info.canon), elected=sel)
    cs = ceb_polar(pol)
    if cs is not None:
        plan = _election_plan(pol, info, cs)
        if plan.kind != "walk":
            return plan
        # a robot that already started its shift keeps priority over walkers
        sh = detect_polar(pol)
        return plan if sh is None else _shift_plan(pol, info, sh, sel)
    cs = detect_polar(pol)
    if cs is not None:
        return _shift_plan(pol, info, cs, sel)
    if sel is not None:
        return _selected_plan(pol, info, sel)
    return _fbc2_plan(pol, res, info)


def classify_phase(P, F, tol: Tolerance = TOL) -> str:
    return analyse(P, F, tol).phase


def compute(snapshot, F, bits: Optional[BitSource] = None, tol: Tolerance = TOL) -> Trajectory:
    """Trajectory of the robot sitting at the origin of `snapshot`."""
    return decide(snapshot, F, bits, tol)[0]


def decide(snapshot, F, bits: Optional[BitSource] = None, tol: Tolerance = TOL):
    """(trajectory, plan, own index) for the robot at the snapshot origin."""
    pts = distinct(snapshot)
    me = min(range(len(pts)), key=lambda i: pts[i][0] ** 2 + pts[i][1] ** 2)
    plan = analyse(pts, F, tol)
    return plan.move(me, bits if bits is not None else BitSource()), plan, me


def termination_move(P, F, me: int, tol: Tolerance = TOL) -> Trajectory:
    plan = analyse(P, F, tol)
    return plan.moves.get(me, EMPTY) if plan.phase == TERMINATION else EMPTY


def apf_move(P, F, me: int, tol: Tolerance = TOL) -> Trajectory:
    plan = analyse(P, F, tol)
    return plan.moves.get(me, EMPTY) if plan.phase == APF else EMPTY


def fbc1_move(P, F, me: int, bits: BitSource, tol: Tolerance = TOL) -> Trajectory:
    plan = analyse(P, F, tol)
    return plan.move(me, bits) if plan.phase == FBC1 else EMPTY


def fbc2_move(P, F, me: int, tol: Tolerance = TOL) -> Trajectory:
    plan = analyse(P, F, tol)
    return plan.move(me, BitSource()) if plan.phase == FBC2 else EMPTY
