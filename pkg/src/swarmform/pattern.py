"""Pattern preprocessing: multiplicity expansion and a cached canonical form."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .geometry import (TOL, GeometryError, Tolerance,
                       smallest_enclosing_circle)
from .ordering import (CanonicalPattern, Polar, _cmp_views, canonical_pattern,
                       minimal_views)


class GatheringExcluded(GeometryError):
    pass


class UnsupportedPattern(GeometryError):
    pass


def min_pair_distance(pts) -> float:
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, math.dist(pts[i], pts[j]))
    return best


def _expand(support, mult, center, d, sgn):
    pts, parent = [], []
    for k, p in enumerate(support):
        pts.append(p)
        parent.append(k)
        m = mult[p]
        if m == 1:
            continue
        rho = math.dist(p, center)
        base = math.atan2(p[1] - center[1], p[0] - center[0])
        for i in range(1, m):
            h = d / (4 * i)
            if h < 2 * rho:
                beta = 2 * math.asin(h / (2 * rho))
            else:
                beta = math.pi / (2 * i)
            a = base + sgn * beta
            pts.append((center[0] + rho * math.cos(a), center[1] + rho * math.sin(a)))
            parent.append(k)
    return pts, parent


def _signature(pts, tol):
    pol = Polar(pts, tol)
    return minimal_views(pol)[0][2]


def expand_pattern(F, tol: Tolerance = TOL):
    """Return (F_tilde, d, support, parent) where parent[j] indexes support."""
    pts = [(float(x), float(y)) for x, y in F]
    mult = Counter(pts)
    support = list(dict.fromkeys(pts))
    if len(support) == 1:
        if len(pts) > 1:
            raise GatheringExcluded("gathering pattern (a single point of multiplicity n)")
        return pts, math.inf, support, [0]
    d = min_pair_distance(support)
    if all(m == 1 for m in mult.values()):
        return support, d, support, list(range(len(support)))
    circ = smallest_enclosing_circle(support)
    for p, m in mult.items():
        if m > 1 and math.dist(p, circ.center) <= tol.eps_len * circ.radius:
            raise UnsupportedPattern("multiplicity point at the center of the pattern")
    a = _expand(support, mult, circ.center, d, 1.0)
    b = _expand(support, mult, circ.center, d, -1.0)
    c = _cmp_views(_signature(b[0], tol), _signature(a[0], tol), tol.eps_ang, tol.eps_len * 10)
    pts_t, parent = b if c < 0 else a
    return pts_t, d, support, parent


@dataclass
class PatternInfo:
    n: int
    support: list  # distinct points, given frame
    mult: list  # multiplicity of each support point
    tilde: list  # expanded points, given frame
    parent: list  # tilde index -> support index
    d: float
    canon: CanonicalPattern  # canonical form of tilde
    canon_support: list  # support points in the canonical frame
    levels: list  # canonical radii of tilde points (snapped)


@lru_cache(maxsize=256)
def _pattern_info(key: tuple, tol: Tolerance) -> PatternInfo:
    pts = list(key)
    tilde, d, support, parent = expand_pattern(pts, tol)
    cnt = Counter(pts)
    canon = canonical_pattern(tilde, tol)
    # each support point precedes its satellites in the expanded list
    canon_support = [canon.points[parent.index(k)] for k in range(len(support))]
    pol = Polar(canon.points, tol, center=(0.0, 0.0), radius=1.0)
    return PatternInfo(len(pts), support, [cnt[p] for p in support], tilde, parent, d,
                       canon, canon_support, pol.level)


def pattern_info(F, tol: Tolerance = TOL) -> PatternInfo:
    key = tuple((float(x), float(y)) for x, y in F)
    return _pattern_info(key, tol)


def preprocess_pattern(F, tol: Tolerance = TOL):
    tilde, d, _, _ = expand_pattern(F, tol)
    return tilde, d
