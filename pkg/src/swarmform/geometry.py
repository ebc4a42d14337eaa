"""Planar primitives: enclosing circles, angles, similarity, Weber point."""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

TWO_PI = 2.0 * math.pi
CW, CCW = "cw", "ccw"

Point = tuple  # (x, y) floats


class GeometryError(ValueError):
    pass


class EmptySet(GeometryError):
    pass


class DegenerateAngle(GeometryError):
    pass


class NotASubset(GeometryError):
    pass


class SizeMismatch(GeometryError):
    pass


@dataclass(frozen=True)
class Tolerance:
    eps_len: float = 1e-9  # relative
    eps_ang: float = 1e-9  # radians

    def __post_init__(self):
        if not (0 < self.eps_len < 1e-3 and 0 < self.eps_ang < 1e-3):
            raise ValueError("tolerances must lie in (0, 1e-3)")


def default_tolerance() -> Tolerance:
    """Tolerance from SWARM_TOL if set, else the defaults."""
    raw = os.environ.get("SWARM_TOL")
    if raw:
        v = float(raw)
        return Tolerance(v, v)
    return Tolerance()


TOL = default_tolerance()


class Circle(NamedTuple):
    center: tuple
    radius: float

    def contains(self, p, eps: float = 1e-12) -> bool:
        return math.dist(self.center, p) <= self.radius * (1 + eps) + eps


class Similarity(NamedTuple):
    """x -> scale * R(rotation) * M(reflect) * x + translation."""
    scale: float
    rotation: float
    reflect: bool
    translation: tuple

    def apply(self, p):
        x, y = p
        if self.reflect:
            y = -y
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return (self.scale * (c * x - s * y) + self.translation[0],
                self.scale * (s * x + c * y) + self.translation[1])

    def inverse(self) -> "Similarity":
        # x = M R^-1 (y - t) / s
        rot = self.rotation if self.reflect else -self.rotation
        inv = Similarity(1.0 / self.scale, rot, self.reflect, (0.0, 0.0))
        t = inv.apply(self.translation)
        return Similarity(inv.scale, rot, self.reflect, (-t[0], -t[1]))


# ---------------------------------------------------------------- circles

def _circle2(a, b) -> Circle:
    c = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    return Circle(c, max(math.dist(c, a), math.dist(c, b)))


def _circle3(a, b, c) -> Optional[Circle]:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    q = (x, y)
    return Circle(q, max(math.dist(q, a), math.dist(q, b), math.dist(q, c)))


def _inside(circ: Optional[Circle], p) -> bool:
    return circ is not None and math.dist(circ.center, p) <= circ.radius * (1 + 1e-14)


def _welzl(pts: list) -> Circle:
    # randomized incremental construction; the caller shuffles
    circ = None
    for i, p in enumerate(pts):
        if circ is None or not _inside(circ, p):
            circ = _one_boundary(pts[: i + 1], p)
            # move-to-front: points forcing a rebuild are tried early next time
            pts.insert(0, pts.pop(i))
    return circ


def _one_boundary(pts, p) -> Circle:
    circ = Circle(p, 0.0)
    for i, q in enumerate(pts):
        if not _inside(circ, q):
            if circ.radius == 0.0:
                circ = _circle2(p, q)
            else:
                circ = _two_boundary(pts[: i + 1], p, q)
    return circ


def _two_boundary(pts, p, q) -> Circle:
    circ = _circle2(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in pts:
        if _inside(circ, r):
            continue
        cross = (qx - px) * (r[1] - py) - (qy - py) * (r[0] - px)
        c = _circle3(p, q, r)
        if c is None:
            continue
        k = (qx - px) * (c.center[1] - py) - (qy - py) * (c.center[0] - px)
        if cross > 0.0 and (left is None or k > (qx - px) * (left.center[1] - py) - (qy - py) * (left.center[0] - px)):
            left = c
        elif cross < 0.0 and (right is None or k < (qx - px) * (right.center[1] - py) - (qy - py) * (right.center[0] - px)):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left.radius <= right.radius else right


def _canonical(circ: Circle, pts: Sequence) -> Circle:
    """Rebuild the circle from a canonical choice of boundary points so
    that the result only depends on the point set, not the visiting order."""
    r = circ.radius
    if r == 0.0:
        return circ
    band = r * 1e-10
    bnd = sorted({p for p in pts if math.dist(circ.center, p) >= r - band})
    if len(bnd) > 6:
        return circ
    for i in range(len(bnd)):
        for j in range(i + 1, len(bnd)):
            c = _circle2(bnd[i], bnd[j])
            if abs(c.radius - r) <= band and all(math.dist(c.center, p) <= c.radius + band for p in bnd):
                return c
    for i in range(len(bnd)):
        for j in range(i + 1, len(bnd)):
            for k in range(j + 1, len(bnd)):
                c = _circle3(bnd[i], bnd[j], bnd[k])
                if c is not None and abs(c.radius - r) <= band and all(
                        math.dist(c.center, p) <= c.radius + band for p in bnd):
                    return c
    return circ


def smallest_enclosing_circle(points) -> Circle:
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise EmptySet("smallest enclosing circle of an empty set")
    uniq = list(dict.fromkeys(pts))
    if len(uniq) == 1:
        return Circle(uniq[0], 0.0)
    work = sorted(uniq)
    random.Random(len(work)).shuffle(work)
    return _canonical(_welzl(work), uniq)


def holds_sec(subset, points, tol: Tolerance = TOL) -> bool:
    """True iff removing some nonempty part of `subset` changes C(points).

    Removing more points can only shrink the circle, so it is enough to
    remove the whole subset."""
    pts = list(dict.fromkeys((float(x), float(y)) for x, y in points))
    sub = set((float(x), float(y)) for x, y in subset)
    if not sub <= set(pts):
        raise NotASubset("subset is not contained in points")
    if not sub:
        return False
    rest = [p for p in pts if p not in sub]
    if not rest:
        return True
    c0 = smallest_enclosing_circle(pts)
    # interior points never support the circle
    if all(math.dist(p, c0.center) < c0.radius * (1 - 1e-6) for p in sub):
        return False
    c1 = smallest_enclosing_circle(rest)
    return not same_circle(c0, c1, tol)


def same_circle(a: Circle, b: Circle, tol: Tolerance = TOL) -> bool:
    s = tol.eps_len * max(a.radius, b.radius, 1e-300)
    return abs(a.radius - b.radius) <= s and math.dist(a.center, b.center) <= s


# ---------------------------------------------------------------- angles

def norm_angle(a: float) -> float:
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a -= TWO_PI
    return a


def angle(u, v, w, orientation: str = CCW) -> float:
    """Angle swept from ray v->u to ray v->w in the given orientation."""
    if (u[0] == v[0] and u[1] == v[1]) or (w[0] == v[0] and w[1] == v[1]):
        raise DegenerateAngle("angle with a degenerate ray")
    a = math.atan2(w[1] - v[1], w[0] - v[0]) - math.atan2(u[1] - v[1], u[0] - v[0])
    if orientation == CW:
        a = -a
    return norm_angle(a)


def ang_dist(a: float, b: float) -> float:
    """Unsigned angular distance on the circle."""
    d = abs(norm_angle(a - b))
    return min(d, TWO_PI - d)


def rotate(p, t: float, about=(0.0, 0.0)):
    c, s = math.cos(t), math.sin(t)
    x, y = p[0] - about[0], p[1] - about[1]
    return (about[0] + c * x - s * y, about[1] + s * x + c * y)


# ---------------------------------------------------------------- Weber point

def weber_point(points, tol: Tolerance = TOL, max_iter: int = 2000):
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise EmptySet("Weber point of an empty set")
    n = len(pts)
    if n == 1:
        return pts[0]
    span = max(math.dist(pts[0], p) for p in pts) or 1.0
    # a member point is optimal iff the pull of the others is at most 1
    best = None
    for p in pts:
        gx = gy = 0.0
        dup = 0
        for q in pts:
            d = math.dist(p, q)
            if d == 0.0:
                dup += 1
                continue
            gx += (p[0] - q[0]) / d
            gy += (p[1] - q[1]) / d
        if math.hypot(gx, gy) <= dup + 1e-12:
            best = p
            break
    if best is not None:
        return best
    x = sum(p[0] for p in pts) / n
    y = sum(p[1] for p in pts) / n
    step_tol = tol.eps_len * span * 1e-3
    for _ in range(max_iter):
        wx = wy = ws = 0.0
        for p in pts:
            d = math.hypot(x - p[0], y - p[1])
            if d < 1e-14 * span:
                d = 1e-14 * span
            w = 1.0 / d
            wx += p[0] * w
            wy += p[1] * w
            ws += w
        nx, ny = wx / ws, wy / ws
        moved = math.hypot(nx - x, ny - y)
        x, y = nx, ny
        if moved < 1e-6 * span:
            break
    # Newton polish: the objective is smooth away from the inputs
    for _ in range(50):
        gx = gy = hxx = hxy = hyy = 0.0
        for p in pts:
            dx, dy = x - p[0], y - p[1]
            d = math.hypot(dx, dy)
            if d < 1e-13 * span:
                return (x, y)
            ux, uy = dx / d, dy / d
            gx += ux
            gy += uy
            hxx += (1 - ux * ux) / d
            hxy += -ux * uy / d
            hyy += (1 - uy * uy) / d
        det = hxx * hyy - hxy * hxy
        if det <= 0.0:
            break
        sx = (hyy * gx - hxy * gy) / det
        sy = (hxx * gy - hxy * gx) / det
        x, y = x - sx, y - sy
        if math.hypot(sx, sy) < step_tol * 1e-3:
            break
    return (x, y)


# ---------------------------------------------------------------- angle strings

def gaps_around(points, c, tol: Tolerance = TOL):
    """Sorted ccw angles of points around c and the consecutive gaps.
    Returns None if a point sits on c."""
    scale = max((math.dist(c, p) for p in points), default=0.0) or 1.0
    angs = []
    for p in points:
        dx, dy = p[0] - c[0], p[1] - c[1]
        if math.hypot(dx, dy) <= tol.eps_len * scale:
            return None
        angs.append(norm_angle(math.atan2(dy, dx)))
    angs.sort()
    k = len(angs)
    gaps = [angs[i + 1] - angs[i] for i in range(k - 1)]
    gaps.append(TWO_PI - angs[-1] + angs[0])
    return angs, gaps


def min_period(gaps, eps: float) -> int:
    """Smallest p dividing len(gaps) with gaps[i] == gaps[i+p] for all i."""
    n = len(gaps)
    for p in range(1, n + 1):
        if n % p:
            continue
        if all(abs(gaps[i] - gaps[(i + p) % n]) <= eps for i in range(n)):
            return p
    return n


def center_of_regularity(points, tol: Tolerance = TOL):
    pts = list(points)
    if len(pts) < 3:
        return None
    c = weber_point(pts, tol)
    g = gaps_around(pts, c, tol)
    if g is None:
        return None
    if min_period(g[1], tol.eps_ang * 10) < len(pts):
        return c
    return None


# ---------------------------------------------------------------- similarity

def _normalize(pts):
    n = len(pts)
    cx = sum(p[0] for p in pts) / n
    cy = sum(p[1] for p in pts) / n
    rms = math.sqrt(sum((p[0] - cx) ** 2 + (p[1] - cy) ** 2 for p in pts) / n)
    return (cx, cy), rms


def match_multiset(A, B, eps: float) -> bool:
    """Greedy one-to-one matching of A onto B within eps."""
    used = [False] * len(B)
    for a in A:
        hit = -1
        for j, b in enumerate(B):
            if not used[j] and abs(a[0] - b[0]) <= eps and abs(a[1] - b[1]) <= eps:
                hit = j
                break
        if hit < 0:
            return False
        used[hit] = True
    return True


def similar(A, B, tol: Tolerance = TOL) -> Optional[Similarity]:
    A = [(float(x), float(y)) for x, y in A]
    B = [(float(x), float(y)) for x, y in B]
    if len(A) != len(B):
        raise SizeMismatch(f"sizes differ: {len(A)} vs {len(B)}")
    if not A:
        return Similarity(1.0, 0.0, False, (0.0, 0.0))
    ca, ra = _normalize(A)
    cb, rb = _normalize(B)
    if ra == 0.0 or rb == 0.0:
        if ra == 0.0 and rb == 0.0:
            return Similarity(1.0, 0.0, False, (cb[0] - ca[0], cb[1] - ca[1]))
        return None
    An = [((p[0] - ca[0]) / ra, (p[1] - ca[1]) / ra) for p in A]
    Bn = [((p[0] - cb[0]) / rb, (p[1] - cb[1]) / rb) for p in B]
    eps = max(tol.eps_len, 1e-12) * 10
    anchor = max(An, key=lambda p: p[0] * p[0] + p[1] * p[1])
    ra0 = math.hypot(*anchor)
    for reflect in (False, True):
        a0 = (anchor[0], -anchor[1]) if reflect else anchor
        for b in Bn:
            if abs(math.hypot(*b) - ra0) > eps * 4:
                continue
            rot = math.atan2(b[1], b[0]) - math.atan2(a0[1], a0[0])
            c, s = math.cos(rot), math.sin(rot)
            mapped = []
            for x, y in An:
                if reflect:
                    y = -y
                mapped.append((c * x - s * y, s * x + c * y))
            if match_multiset(mapped, Bn, eps):
                k = rb / ra
                t0 = Similarity(k, rot, reflect, (0.0, 0.0)).apply(ca)
                return Similarity(k, rot, reflect, (cb[0] - t0[0], cb[1] - t0[1]))
    return None


def similarity_residual(A, B) -> float:
    """Smallest max matching error between normalized A and B over the
    anchor alignments tried by `similar`; inf if sizes differ."""
    A = [(float(x), float(y)) for x, y in A]
    B = [(float(x), float(y)) for x, y in B]
    if len(A) != len(B) or not A:
        return math.inf if len(A) != len(B) else 0.0
    ca, ra = _normalize(A)
    cb, rb = _normalize(B)
    if ra == 0.0 or rb == 0.0:
        return 0.0 if ra == rb else math.inf
    An = [((p[0] - ca[0]) / ra, (p[1] - ca[1]) / ra) for p in A]
    Bn = [((p[0] - cb[0]) / rb, (p[1] - cb[1]) / rb) for p in B]
    anchor = max(An, key=lambda p: p[0] * p[0] + p[1] * p[1])
    best = math.inf
    for reflect in (False, True):
        a0 = (anchor[0], -anchor[1]) if reflect else anchor
        for b in Bn:
            rot = math.atan2(b[1], b[0]) - math.atan2(a0[1], a0[0])
            c, s = math.cos(rot), math.sin(rot)
            used = [False] * len(Bn)
            worst = 0.0
            for x, y in An:
                if reflect:
                    y = -y
                m = (c * x - s * y, s * x + c * y)
                j = min((j for j in range(len(Bn)) if not used[j]), key=lambda j: math.dist(m, Bn[j]))
                used[j] = True
                worst = max(worst, math.dist(m, Bn[j]))
                if worst >= best:
                    break
            best = min(best, worst)
    return best
