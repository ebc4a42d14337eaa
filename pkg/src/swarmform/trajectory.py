"""Robot paths: radial segments, straight lines and circular arcs."""
from __future__ import annotations

import math
from typing import NamedTuple

from .geometry import CCW, CW, Similarity, norm_angle


class Radial(NamedTuple):
    start: tuple
    end: tuple


class Line(NamedTuple):
    start: tuple
    end: tuple


class Arc(NamedTuple):
    center: tuple
    radius: float
    start_angle: float
    end_angle: float
    orientation: str

    @property
    def sweep(self) -> float:
        if self.orientation == CCW:
            return norm_angle(self.end_angle - self.start_angle)
        return -norm_angle(self.start_angle - self.end_angle)

    @property
    def start(self):
        return _on(self.center, self.radius, self.start_angle)

    @property
    def end(self):
        return _on(self.center, self.radius, self.end_angle)


def _on(c, r, a):
    return (c[0] + r * math.cos(a), c[1] + r * math.sin(a))


def seg_length(s) -> float:
    if isinstance(s, Arc):
        return s.radius * abs(s.sweep)
    return math.dist(s.start, s.end)


def seg_point(s, t: float):
    """Point at arc length t along the segment."""
    L = seg_length(s)
    if L == 0.0 or t >= L:
        return s.end
    if isinstance(s, Arc):
        return _on(s.center, s.radius, s.start_angle + s.sweep * (t / L))
    f = t / L
    return (s.start[0] + f * (s.end[0] - s.start[0]), s.start[1] + f * (s.end[1] - s.start[1]))


def seg_transform(s, T: Similarity):
    if isinstance(s, Arc):
        c = T.apply(s.center)
        if T.reflect:
            a0, a1 = -s.start_angle + T.rotation, -s.end_angle + T.rotation
            o = CW if s.orientation == CCW else CCW
        else:
            a0, a1 = s.start_angle + T.rotation, s.end_angle + T.rotation
            o = s.orientation
        return Arc(c, s.radius * T.scale, norm_angle(a0), norm_angle(a1), o)
    return type(s)(T.apply(s.start), T.apply(s.end))


class Trajectory:
    def __init__(self, segments=()):
        self.segments = [s for s in segments if seg_length(s) > 0.0]
        self.lengths = [seg_length(s) for s in self.segments]
        self.length = sum(self.lengths)

    @property
    def empty(self) -> bool:
        return not self.segments

    @property
    def destination(self):
        return self.segments[-1].end if self.segments else None

    def point_at(self, t: float):
        for s, L in zip(self.segments, self.lengths):
            if t < L:
                return seg_point(s, t)
            t -= L
        return self.segments[-1].end

    def transform(self, T: Similarity) -> "Trajectory":
        return Trajectory([seg_transform(s, T) for s in self.segments])

    def sample(self, k: int = 16):
        return [self.point_at(self.length * i / k) for i in range(k + 1)]

    def __repr__(self):
        return f"Trajectory({self.segments!r})"


EMPTY = Trajectory()


def radial_to(center, p, radius) -> Trajectory:
    d = math.dist(center, p)
    if d == 0.0:
        return EMPTY
    f = radius / d
    q = (center[0] + (p[0] - center[0]) * f, center[1] + (p[1] - center[1]) * f)
    return Trajectory([Radial(p, q)])


def arc_to(center, p, target_angle: float, orientation: str) -> Trajectory:
    r = math.dist(center, p)
    a0 = math.atan2(p[1] - center[1], p[0] - center[0])
    return Trajectory([Arc(center, r, norm_angle(a0), norm_angle(target_angle), orientation)])


def line_to(p, q) -> Trajectory:
    return Trajectory([Line(p, q)])
