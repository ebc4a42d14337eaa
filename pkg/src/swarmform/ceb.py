"""Strings of angles, regularity, CEB sets and shifted-robot detection."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import (CCW, CW, TOL, TWO_PI, Circle, GeometryError, Tolerance, gaps_around,
                       min_period, norm_angle, same_circle, smallest_enclosing_circle,
                       weber_point)
from .ordering import Polar, order_polar


class CenterCollision(GeometryError):
    pass


EQUI, BI = "equiangular", "biangular"


@dataclass
class AngleString:
    center: tuple
    start_robot: tuple
    orientation: str
    angles: list


@dataclass
class ShiftInfo:
    robot: tuple
    corrected_position: tuple
    shift_angle: float
    shift_orientation: str


@dataclass
class CebSet:
    members: list
    center: tuple
    kind: str
    shifted: Optional[ShiftInfo] = None
    whole: bool = False


def _eps(tol: Tolerance) -> float:
    return tol.eps_ang * 10


def string_of_angles(P, c, r, o: str = CCW, tol: Tolerance = TOL) -> AngleString:
    pts = [(float(x), float(y)) for x, y in P]
    r = (float(r[0]), float(r[1]))
    scale = max(math.dist(c, p) for p in pts) or 1.0
    angs = []
    start = None
    for p in pts:
        d = math.dist(c, p)
        if d <= tol.eps_len * scale:
            raise CenterCollision("robot coincides with the string center")
        a = math.atan2(p[1] - c[1], p[0] - c[0])
        if p == r:
            start = a
        angs.append(a)
    if start is None:
        raise ValueError("start robot not in configuration")
    sgn = 1.0 if o == CCW else -1.0
    rel = sorted(norm_angle(sgn * (a - start)) for a in angs)
    rel = [0.0 if x > TWO_PI - tol.eps_ang else x for x in rel]
    rel.sort()
    gaps = [rel[i + 1] - rel[i] for i in range(len(rel) - 1)] + [TWO_PI - rel[-1]]
    return AngleString(c, r, o, gaps)


def kind_of(angles, eps: float) -> Optional[str]:
    """Classify sorted ccw angles as equiangular, biangular or neither."""
    k = len(angles)
    if k == 0:
        return None
    if k == 1:
        return EQUI
    gaps = [angles[i + 1] - angles[i] for i in range(k - 1)]
    gaps.append(TWO_PI - angles[-1] + angles[0])
    unit = TWO_PI / k
    if all(abs(g - unit) <= eps for g in gaps):
        return EQUI
    if k % 2 == 0 and all(abs(gaps[i] - gaps[(i + 2) % k]) <= eps for i in range(k)):
        return BI
    return None


def _angles_about(pts, c, scale, tol):
    out = []
    for p in pts:
        dx, dy = p[0] - c[0], p[1] - c[1]
        if math.hypot(dx, dy) <= tol.eps_len * scale:
            return None
        out.append(norm_angle(math.atan2(dy, dx)))
    out.sort()
    return out


def theta(P, tol: Tolerance = TOL) -> float:
    pol = Polar(P, tol)
    angs = sorted(pol.phi[i] for i in range(len(pol.points)) if pol.level[i] > 0)
    return _min_gap(angs, positive=False, eps=tol.eps_ang)


def _min_gap(angs, positive: bool, eps: float) -> float:
    if len(angs) < 2:
        return TWO_PI
    gaps = [angs[i + 1] - angs[i] for i in range(len(angs) - 1)]
    gaps.append(TWO_PI - angs[-1] + angs[0])
    if positive:
        gaps = [g for g in gaps if g > eps]
        return min(gaps) if gaps else TWO_PI
    g = min(gaps)
    return 0.0 if g <= eps else g


def theta_positive(angs, tol: Tolerance = TOL) -> float:
    """Smallest nonzero angular gap; robots on a common ray are ignored."""
    return _min_gap(sorted(angs), positive=True, eps=tol.eps_ang)


# ---------------------------------------------------------------- regularity

def regular_polar(pol: Polar):
    pts = pol.points
    if len(pts) < 3:
        return None
    tol = pol.tol
    c = weber_point(pts, tol)
    g = gaps_around(pts, c, tol)
    if g is None:
        return None
    p = min_period(g[1], _eps(tol))
    if p < len(pts):
        return c, p
    return None


def is_regular(P, tol: Tolerance = TOL):
    return regular_polar(Polar(P, tol))


def sym_regular_polar(pol: Polar) -> bool:
    angs = sorted(pol.phi[i] for i in range(len(pol.points)) if pol.level[i] > 0)
    k = len(angs)
    if k == 0:
        return True
    gaps = [angs[i + 1] - angs[i] for i in range(k - 1)]
    gaps.append(TWO_PI - angs[-1] + angs[0])
    eps = _eps(pol.tol)
    for s in range(k):
        if all(abs(gaps[t] - gaps[(s - t) % k]) <= eps for t in range(k)):
            return True
    return False


def is_sym_regular(P, tol: Tolerance = TOL) -> bool:
    return sym_regular_polar(Polar(P, tol))


# ---------------------------------------------------------------- CEB sets

def ceb_polar(pol: Polar, reg="unset") -> Optional[CebSet]:
    """CEB set as indices into pol.points."""
    pts = pol.points
    n = len(pts)
    tol = pol.tol
    eps = _eps(tol)
    if reg == "unset":
        reg = regular_polar(pol)
    if reg is None and not sym_regular_polar(pol):
        return None
    if reg is not None and reg[1] <= 2:
        kind = EQUI if reg[1] == 1 else BI
        if n == 2 and reg[1] == 1:
            kind = EQUI
        return CebSet(list(range(n)), reg[0], kind, whole=True)
    res = order_polar(pol)
    on_circle = {i for i in range(n) if pol.level[i] >= 1.0 - tol.eps_len * 10}
    members = []
    best = None
    best_kind = None
    for cls in res.classes:
        trial = members + cls
        if on_circle.intersection(trial) and _holds_idx(pol, trial):
            continue
        members = trial
        if any(pol.level[i] == 0.0 for i in members):
            continue
        k = kind_of(sorted(pol.phi[i] for i in members), eps)
        if k is not None:
            best, best_kind = list(members), k
    if best is None:
        return None
    return CebSet(best, pol.center, best_kind, whole=len(best) == n)


def _holds_idx(pol: Polar, idx) -> bool:
    drop = set(idx)
    rest = [p for i, p in enumerate(pol.points) if i not in drop]
    if not rest:
        return True
    c = smallest_enclosing_circle(rest)
    return not same_circle(Circle(pol.center, pol.radius), c, pol.tol)


def _to_points(pol: Polar, cs: Optional[CebSet]) -> Optional[CebSet]:
    if cs is None:
        return None
    return CebSet([pol.points[i] for i in cs.members], cs.center, cs.kind, cs.shifted, cs.whole)


def construct_ceb_set(P, tol: Tolerance = TOL) -> Optional[CebSet]:
    pol = Polar(P, tol)
    return _to_points(pol, ceb_polar(pol))


# ---------------------------------------------------------------- shifted robots

def _equi_fill(others, k, eps):
    """Angle completing `others` (k-1 sorted angles) into an equiangular k-set."""
    if k < 2:
        return []
    unit = TWO_PI / k
    if k == 2:
        return [norm_angle(others[0] + math.pi)]
    m = len(others)
    gaps = [others[(i + 1) % m] - others[i] if i < m - 1 else TWO_PI - others[-1] + others[0]
            for i in range(m)]
    big = max(range(m), key=gaps.__getitem__)
    if abs(gaps[big] - 2 * unit) > eps:
        return []
    if any(abs(g - unit) > eps for i, g in enumerate(gaps) if i != big):
        return []
    return [norm_angle(others[big] + unit)]


def _bi_fill(others, k, eps):
    """Angles completing `others` into a biangular k-set (k even, k >= 4)."""
    if k < 4 or k % 2:
        return []
    m = len(others)
    gaps = [others[(i + 1) % m] - others[i] if i < m - 1 else TWO_PI - others[-1] + others[0]
            for i in range(m)]
    out = []
    for i in range(m):
        # slot between others[i] and others[i+1]
        e1 = gaps[(i + 1) % m]
        e2 = gaps[(i - 1) % m]
        if abs(gaps[i] - e1 - e2) > eps:
            continue
        seq = [e1, e2] + [gaps[(i + j) % m] for j in range(1, m)]
        if all(abs(seq[t] - seq[(t + 2) % k]) <= eps for t in range(k)):
            out.append(norm_angle(others[i] + e1))
    return out


def _check_shift(pol, s, x, c):
    """Build the corrected configuration and confirm its CEB set."""
    tol = pol.tol
    pts = pol.points
    p = pts[s]
    rad = math.dist(p, c)
    corr = (c[0] + rad * math.cos(x), c[1] + rad * math.sin(x))
    newpts = list(pts)
    newpts[s] = corr
    angs = []
    for q in newpts:
        d = math.dist(q, c)
        if d > tol.eps_len * pol.radius:
            angs.append(math.atan2(q[1] - c[1], q[0] - c[0]))
    th = theta_positive([norm_angle(a) for a in angs], tol)
    a_s = math.atan2(p[1] - c[1], p[0] - c[0])
    signed = norm_angle(a_s - x)
    if signed > math.pi:
        signed -= TWO_PI
    shift = abs(signed)
    if shift <= tol.eps_ang or shift > th / 2 + tol.eps_ang:
        return None
    # the shift must bring the robot angularly closer to its neighbors
    rest = [math.atan2(q[1] - c[1], q[0] - c[0]) for i, q in enumerate(pts)
            if i != s and math.dist(q, c) > tol.eps_len * pol.radius]
    if _min_sep(a_s, rest) >= _min_sep(x, rest) - tol.eps_ang:
        return None
    pol2 = Polar(newpts, tol)
    cs = ceb_polar(pol2)
    if cs is None or s not in cs.members:
        return None
    if math.dist(cs.center, c) > 1e-7 * pol.radius:
        return None
    cc = cs.center
    dmin = min(math.dist(pts[i] if i != s else corr, cc) for i in cs.members)
    if math.dist(corr, cc) > dmin * (1 + 1e-7):
        return None
    info = ShiftInfo(p, corr, shift, CCW if signed > 0 else CW)
    return CebSet(list(cs.members), cc, cs.kind, info, cs.whole)


def _min_sep(a, angs):
    return min((abs(norm_angle(b - a + math.pi) - math.pi) for b in angs), default=TWO_PI)


def _partial_candidates(pol: Polar, s: int):
    eps = 1e-7
    n = len(pol.points)
    order = sorted((i for i in range(n) if i != s), key=lambda i: pol.level[i])
    sizes = []
    for j in range(1, len(order) + 1):
        if j == len(order) or pol.level[order[j]] != pol.level[order[j - 1]]:
            sizes.append(j)
    xs = []
    for j in sizes:
        others = sorted(pol.phi[i] for i in order[:j] if pol.level[i] > 0)
        if len(others) != j:
            continue
        k = j + 1
        xs.extend(_equi_fill(others, k, eps))
        xs.extend(_bi_fill(others, k, eps))
    return xs


def _eighth_candidates(pol: Polar, s: int):
    """Angles x undoing a move of robot s by exactly theta/8 of the corrected
    configuration. Moving s back by t widens its gap on one side and narrows
    the other, so theta(t) = min(rest, near + t, far - t) and t = theta(t)/8
    has one solution per active term."""
    eps = 1e-7
    a_s = pol.phi[s]
    rest = sorted(pol.phi[i] for i in range(len(pol.points)) if i != s and pol.level[i] > 0)
    if len(rest) < 2:
        return []
    out = []
    for sgn in (1.0, -1.0):
        # gap to the nearest robot on the side s moves away from, and on the other
        near = min(norm_angle(sgn * (a_s - b)) for b in rest)
        far = min(norm_angle(sgn * (b - a_s)) for b in rest)
        # smallest positive gap not touching s (the gap s sits in is split)
        gaps = [norm_angle(rest[(i + 1) % len(rest)] - rest[i]) for i in range(len(rest))]
        g_other = min((g for g in gaps if eps < g and abs(g - near - far) > eps), default=TWO_PI)
        for t in (g_other / 8, near / 7, far / 9):
            if 0 < t and abs(t - min(g_other, near + t, far - t) / 8) <= eps * t + 1e-15:
                out.append(norm_angle(a_s + sgn * t))
    return out


def _fit_whole(pts, s, c0, n):
    """Fit a center making the others an equi/biangular n-set with one slot
    free; returns list of (center, free slot angle)."""
    others = [p for i, p in enumerate(pts) if i != s]
    O = np.array(others)
    ps = pts[s]
    a0 = np.arctan2(O[:, 1] - c0[1], O[:, 0] - c0[0])
    a_s = math.atan2(ps[1] - c0[1], ps[0] - c0[0])
    rel = np.mod(a0 - a_s, TWO_PI)
    # slot 0 is the free slot; neighbors of s by angle decide where it sits
    base_order = np.argsort(rel)
    out = []
    j = np.arange(1, n)
    for rot in (0, 1, -1):
        order = np.roll(base_order, rot)
        for bi in ((False, True) if n % 2 == 0 and n >= 4 else (False,)):
            if _phase_misfit(a0[order], j, n, bi) > FIT_GATE:
                continue
            sol = _gauss_newton(O[order], c0, n, bi)
            if sol is not None:
                out.append(sol)
    return out


FIT_GATE = 0.3  # rad; genuine shifted configurations stay well below this


def _phase_misfit(a, j, n, bi):
    """Max angular misfit of a to the slot string with only the phase fitted
    (each parity class separately for biangular strings)."""
    if not bi:
        groups = [(a - TWO_PI * j / n)]
    else:
        z = a - 2 * TWO_PI * (j // 2) / n
        groups = [z[j % 2 == 0], z[j % 2 == 1]]
    worst = 0.0
    for z in groups:
        if len(z) == 0:
            continue
        ph = np.angle(np.mean(np.exp(1j * z)))
        worst = max(worst, float(np.abs(np.mod(z - ph + math.pi, TWO_PI) - math.pi).max()))
    return worst


def _gauss_newton(O, c0, n, bi):
    m = len(O)
    j = np.arange(1, m + 1)
    cx, cy = c0
    a = np.arctan2(O[:, 1] - cy, O[:, 0] - cx)
    phi0 = float(np.angle(np.mean(np.exp(1j * (a - 2 * math.pi * j / n)))))
    alpha = 2 * math.pi / n
    prev = math.inf
    for it in range(30):
        dx, dy = O[:, 0] - cx, O[:, 1] - cy
        d2 = dx * dx + dy * dy
        a = np.arctan2(dy, dx)
        if bi:
            pred = phi0 + (j // 2) * (4 * math.pi / n) + (j % 2) * alpha
        else:
            pred = phi0 + j * (2 * math.pi / n)
        r = np.mod(a - pred + math.pi, TWO_PI) - math.pi
        err = float(np.max(np.abs(r)))
        # a genuine fit converges quadratically; give up on stalled ones
        if it >= 3 and err > 1e-3 and err > 0.5 * prev:
            return None
        prev = err
        cols = [dy / d2, -dx / d2, -np.ones(m)]
        if bi:
            cols.append(-(j % 2).astype(float))
        J = np.stack(cols, axis=1)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        cx += step[0]
        cy += step[1]
        phi0 += step[2]
        if bi:
            alpha += step[3]
        if np.max(np.abs(step)) < 1e-14:
            break
    if np.max(np.abs(r)) > 1e-8:
        return None
    if bi and not (0 < alpha < 4 * math.pi / n):
        return None
    return (float(cx), float(cy)), norm_angle(phi0)


def detect_polar(pol: Polar) -> Optional[CebSet]:
    pts = pol.points
    n = len(pts)
    if n < 3:
        return None
    pos = [i for i in range(n) if pol.level[i] > 0]
    if not pos:
        return None
    low = min(pol.level[i] for i in pos)
    for s in (i for i in pos if pol.level[i] == low):
        for x in _partial_candidates(pol, s) + _eighth_candidates(pol, s):
            cs = _check_shift(pol, s, x, pol.center)
            if cs is not None:
                return cs
    # the whole configuration, around a center other than c(P)
    w = weber_point(pts, pol.tol)
    dist = [math.dist(w, p) for p in pts]
    dmin = min(dist)
    if dmin <= pol.tol.eps_len * pol.radius:
        return None
    for s in range(n):
        if dist[s] > dmin * 1.2:
            continue
        for c, x in _fit_whole(pts, s, w, n):
            cs = _check_shift(pol, s, x, c)
            if cs is not None:
                return cs
    return None


def detect_shifted(P, tol: Tolerance = TOL) -> Optional[CebSet]:
    pol = Polar(P, tol)
    cs = detect_polar(pol)
    if cs is None:
        # no shifted robot: the plain CEB-set, if any
        cs = ceb_polar(pol)
    return _to_points(pol, cs)
