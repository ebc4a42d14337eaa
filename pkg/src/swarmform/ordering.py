"""View sequences, the view-based partial order and pattern alignment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import (CCW, CW, TOL, TWO_PI, GeometryError, Tolerance, holds_sec,
                       norm_angle, smallest_enclosing_circle)


class NotAReferenceRobot(GeometryError):
    pass


class NotOrdered(GeometryError):
    pass


@dataclass
class PolarView:
    origin_robot: tuple
    orientation: str
    sequence: list  # [(dist, ang)] sorted


@dataclass
class OrderingResult:
    classes: list  # list of lists of points, minimal class first
    total: bool
    symmetricity: int
    sequence: list = field(default_factory=list)  # points in the order of one minimal view
    frames: list = field(default_factory=list)  # minimal (reference point, orientation) pairs


class Polar:
    """Polar description of a point set around its SEC center.

    Radii are normalized by the SEC radius and snapped to shared levels so
    that robots on one circle compare equal exactly."""

    def __init__(self, points, tol: Tolerance = TOL, center=None, radius=None):
        self.points = [(float(x), float(y)) for x, y in points]
        self.tol = tol
        if center is None:
            circ = smallest_enclosing_circle(self.points)
            center, radius = circ.center, circ.radius
        self.center = center
        self.radius = radius if radius > 0 else 1.0
        cx, cy = center
        raw = []
        self.phi = []
        for x, y in self.points:
            dx, dy = x - cx, y - cy
            raw.append(math.hypot(dx, dy) / self.radius)
            self.phi.append(norm_angle(math.atan2(dy, dx)))
        self.level = snap_levels(raw, tol.eps_len * 10)
        self.raw = raw

    def at_center(self, i) -> bool:
        return self.level[i] == 0.0


def snap_levels(values, eps):
    """Map values to cluster representatives (the cluster minimum)."""
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0.0] * len(values)
    rep = None
    prev = None
    for i in order:
        v = values[i]
        if prev is None or v - prev > eps:
            rep = v
        prev = v
        out[i] = 0.0 if rep <= eps else rep
    return out


def _view(pol: Polar, m: int, o: str):
    eps = pol.tol.eps_ang
    pm = pol.phi[m]
    items = []
    for i in range(len(pol.points)):
        if pol.level[i] == 0.0:
            a = 0.0
        else:
            a = pol.phi[i] - pm if o == CCW else pm - pol.phi[i]
            a = norm_angle(a)
            if a > TWO_PI - eps or a < eps:
                a = 0.0
        items.append((pol.level[i], a, i))
    items.sort()
    return items


def _cmp_views(a, b, eps, eps_level: float = 0.0) -> int:
    # levels of one snapped set compare exactly; across sets pass eps_level
    for (la, xa, _), (lb, xb, _) in zip(a, b):
        if abs(la - lb) > eps_level:
            return -1 if la < lb else 1
        if abs(xa - xb) > eps:
            return -1 if xa < xb else 1
    return 0


def reference_robots(pol: Polar):
    lv = [l for l in pol.level if l > 0.0]
    if not lv:
        return []
    low = min(lv)
    return [i for i, l in enumerate(pol.level) if l == low]


def view_sequence(P, r_m, o: str, tol: Tolerance = TOL) -> PolarView:
    pol = Polar(P, tol)
    r_m = (float(r_m[0]), float(r_m[1]))
    M = reference_robots(pol)
    m = next((i for i in M if pol.points[i] == r_m), None)
    if m is None:
        raise NotAReferenceRobot("reference robot must be among the closest to the center")
    items = _view(pol, m, o)
    return PolarView(r_m, o, [(l, a) for l, a, _ in items])


def minimal_views(pol: Polar):
    """All (m, o, items) whose view sequence is minimal."""
    eps = pol.tol.eps_ang
    best = []
    for m in reference_robots(pol):
        for o in (CCW, CW):
            items = _view(pol, m, o)
            if not best:
                best = [(m, o, items)]
                continue
            c = _cmp_views(items, best[0][2], eps)
            if c < 0:
                best = [(m, o, items)]
            elif c == 0:
                best.append((m, o, items))
    return best


def order_polar(pol: Polar) -> OrderingResult:
    n = len(pol.points)
    views = minimal_views(pol)
    if not views:
        raise GeometryError("all robots at the center")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(n):
        a = views[0][2][k][2]
        for _, _, items in views[1:]:
            b = items[k][2]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    classes = []
    seen = {}
    for _, _, i in views[0][2]:
        r = find(i)
        if r not in seen:
            seen[r] = len(classes)
            classes.append([])
        classes[seen[r]].append(i)
    total = all(len(c) == 1 for c in classes)
    first = classes[0]
    sym = 1 if any(pol.level[i] == 0.0 for i in range(n)) else len(first)
    return OrderingResult(classes=classes, total=total, symmetricity=sym,
                          sequence=[i for _, _, i in views[0][2]],
                          frames=[(m, o) for m, o, _ in views])


def _as_points(res: OrderingResult, pol: Polar) -> OrderingResult:
    pts = pol.points
    return OrderingResult(
        classes=[[pts[i] for i in c] for c in res.classes],
        total=res.total, symmetricity=res.symmetricity,
        sequence=[pts[i] for i in res.sequence],
        frames=[(pts[m], o) for m, o in res.frames])


def partial_order(P, tol: Tolerance = TOL) -> OrderingResult:
    pol = Polar(P, tol)
    return _as_points(order_polar(pol), pol)


def is_ordered(P, tol: Tolerance = TOL) -> bool:
    return partial_order(P, tol).total


def symmetricity(P, tol: Tolerance = TOL) -> int:
    return partial_order(P, tol).symmetricity


# ---------------------------------------------------------------- patterns

@dataclass
class CanonicalPattern:
    """A distinct point set in its own normalized frame: SEC center at the
    origin, SEC radius 1, f_2 on the positive x axis, ordering orientation ccw."""
    points: list
    f1: int
    f2: int
    r_f2: float
    m_f: float  # smallest angle from f_2 to another point on its circle


def canonical_pattern(X, tol: Tolerance = TOL) -> CanonicalPattern:
    pol = Polar(X, tol)
    res = order_polar(pol)
    _, o = res.frames[0]
    seq = res.sequence
    pts = pol.points
    f1 = next((i for i in seq if not holds_sec([pts[i]], pts, tol)), seq[0])
    f2 = next(i for i in seq if i != f1)
    sgn = 1.0 if o == CCW else -1.0
    rot = pol.phi[f2]
    out = []
    for i in range(len(pts)):
        a = sgn * (pol.phi[i] - rot)
        r = pol.raw[i]
        out.append((r * math.cos(a), r * math.sin(a)))
    out[f2] = (pol.raw[f2], 0.0)
    lv = pol.level[f2]
    m_f = math.pi
    for i in range(len(pts)):
        if i != f2 and pol.level[i] == lv:
            d = abs(math.atan2(out[i][1], out[i][0]))
            m_f = min(m_f, d)
    return CanonicalPattern(out, f1, f2, pol.raw[f2], m_f)


def place_pattern(cp: CanonicalPattern, center, radius, phi2: float, o: str):
    """Map canonical pattern points into a frame where r_2 is at angle phi2
    around `center` and the configuration's orientation is `o`."""
    sgn = 1.0 if o == CCW else -1.0
    c, s = math.cos(phi2), math.sin(phi2)
    out = []
    for x, y in cp.points:
        y = sgn * y
        out.append((center[0] + radius * (c * x - s * y), center[1] + radius * (s * x + c * y)))
    return out


def _pattern_points(F):
    pts = [(float(x), float(y)) for x, y in F]
    if len(set(pts)) != len(pts):
        from .pattern import expand_pattern
        pts = expand_pattern(pts)[0]
    return pts


def align_pattern(P, F, tol: Tolerance = TOL):
    pol = Polar(P, tol)
    res = order_polar(pol)
    if not res.total:
        raise NotOrdered("configuration is not totally ordered")
    cp = canonical_pattern(_pattern_points(F), tol)
    r2 = res.sequence[1]
    _, o = res.frames[0]
    return place_pattern(cp, pol.center, pol.radius, pol.phi[r2], o)


def guided_angle(pol: Polar, res: OrderingResult) -> float:
    """ang(r_1, c(P), r_2) in the orientation of the minimal view."""
    r1, r2 = res.sequence[0], res.sequence[1]
    if pol.level[r1] == 0.0:
        return 0.0
    _, o = res.frames[0]
    a = pol.phi[r2] - pol.phi[r1] if o == CCW else pol.phi[r1] - pol.phi[r2]
    a = norm_angle(a)
    return 0.0 if a > TWO_PI - pol.tol.eps_ang else a


def guided_polar(pol: Polar, res: OrderingResult, cp: CanonicalPattern) -> bool:
    if not res.total or len(pol.points) < 2:
        return False
    r1, r2 = res.sequence[0], res.sequence[1]
    ok1 = pol.raw[r1] <= pol.raw[r2] / 2 + pol.tol.eps_len
    ok2 = pol.raw[r2] <= cp.r_f2 * (1 + pol.tol.eps_len)
    ok3 = 2 * guided_angle(pol, res) <= cp.m_f / 2 + 1e-8
    return ok1 and ok2 and ok3


def is_guided(P, F, tol: Tolerance = TOL) -> bool:
    pts = [(float(x), float(y)) for x, y in P]
    if len(pts) < 3:
        return False
    pol = Polar(pts, tol)
    res = order_polar(pol)
    return guided_polar(pol, res, canonical_pattern(_pattern_points(F), tol))
