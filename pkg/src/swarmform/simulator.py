"""ASYNC execution engine: LCM state machines driven by an adversary policy."""
from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .geometry import TOL, SizeMismatch, Similarity, Tolerance, similar, similarity_residual
from .pattern import pattern_info
from .protocol import FBC1, BitSource, analyse, decide
from .trajectory import EMPTY, Trajectory

IDLE, LOOKED, MOVING = "idle", "looked", "moving"
FORMED, BUDGET = "Formed", "BudgetExceeded"
POLICIES = ("round-robin", "lockstep", "async", "stutter")

MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def mix(seed: int, *keys: int) -> int:
    h = splitmix64(seed & MASK)
    for k in keys:
        h = splitmix64(h ^ (k & MASK))
    return h


def draw_bit(seed: int, robot: int, cycle: int) -> int:
    """Deterministic fair bit for a robot's cycle."""
    return mix(seed, 0xB17, robot, cycle) >> 63


class ConfigError(ValueError):
    pass


@dataclass
class Policy:
    name: str = "async"
    delta: float = 0.01  # fraction of the initial SEC radius
    fairness: Optional[int] = None  # default 64 n

    def __post_init__(self):
        if self.name not in POLICIES:
            raise ConfigError(f"unknown policy {self.name!r}; choose from {', '.join(POLICIES)}")
        if not self.delta > 0:
            raise ConfigError("delta must be positive")


@dataclass
class Robot:
    pos: tuple
    state: str = IDLE
    snapshot: Optional[list] = None
    frame: Optional[Similarity] = None
    traj: Trajectory = EMPTY
    progress: float = 0.0
    cycle: int = 0
    last_done: int = 0  # event index of the last completed cycle
    bits: int = 0


@dataclass
class World:
    robots: list
    F: list
    delta: float
    tol: Tolerance = TOL
    event: int = 0
    bits: int = 0
    phase: Optional[str] = None
    plan: object = None
    _key: Optional[tuple] = None
    aware: list = field(default_factory=list)  # (event, robot) computes that saw themselves elected

    @property
    def positions(self):
        return [r.pos for r in self.robots]

    def classify(self):
        key = tuple(self.positions)
        if key != self._key:
            self.plan = analyse(key, self.F, self.tol)
            self.phase = self.plan.phase
            self._key = key
        return self.plan


def _random_frame(rng: random.Random, origin) -> Similarity:
    rot = rng.uniform(0.0, 2 * math.pi)
    refl = rng.random() < 0.5
    scale = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
    t0 = Similarity(scale, rot, refl, (0.0, 0.0)).apply(origin)
    return Similarity(scale, rot, refl, (-t0[0], -t0[1]))


def make_world(init, F, delta: float = 0.01, tol: Tolerance = TOL) -> World:
    init = [(float(x), float(y)) for x, y in init]
    F = [(float(x), float(y)) for x, y in F]
    if len(init) != len(F):
        raise ConfigError(f"size mismatch: configuration has {len(init)} robots, pattern has {len(F)} points")
    if len(init) < 5:
        raise ConfigError(f"need at least 5 robots, got {len(init)}")
    if len(set(init)) != len(init):
        raise ConfigError("initial configuration has coinciding robots")
    pattern_info(F, tol)  # raises on gathering / unsupported patterns
    from .geometry import smallest_enclosing_circle
    R = smallest_enclosing_circle(init).radius
    return World([Robot(p) for p in init], F, delta * R, tol)


class Scheduler:
    """Chooses the acting robot and the move cut for each event."""

    def __init__(self, policy: Policy, n: int, seed: int):
        self.p = policy
        self.n = n
        self.rng = random.Random(mix(seed, 0xAD7))
        self.bound = policy.fairness or 64 * n
        self.forced: Optional[int] = None
        self.cur = 0
        self.started = False
        self.stage = "look"
        self.begun = False

    def pick(self, w: World) -> int:
        rs = w.robots
        if self.forced is not None and rs[self.forced].state != IDLE:
            return self.forced
        self.forced = None
        name = self.p.name
        if name in ("async", "stutter"):
            late = [i for i, r in enumerate(rs) if w.event - r.last_done >= self.bound // 2]
            if late:
                self.forced = min(late, key=lambda i: rs[i].last_done)
                return self.forced
            if name == "stutter":
                busy = [i for i, r in enumerate(rs) if r.state == MOVING]
                calm = [i for i, r in enumerate(rs) if r.state != MOVING]
                if busy and (not calm or self.rng.random() < 0.1):
                    return self.rng.choice(busy)
                return self.rng.choice(calm)
            return self.rng.randrange(self.n)
        if name == "round-robin":
            if self.started and rs[self.cur].state == IDLE:
                self.cur = (self.cur + 1) % self.n
                self.started = False
            self.started = True
            return self.cur
        # lockstep: everyone looks, then everyone computes, then everyone moves
        for _ in range(3):
            want = {"look": IDLE, "compute": LOOKED, "move": MOVING}[self.stage]
            ready = [i for i, r in enumerate(rs) if r.state == want]
            if self.stage == "look" and len(ready) < self.n and not self.begun:
                ready = []
            if ready:
                self.begun = self.stage == "look"
                return ready[0]
            self.stage = {"look": "compute", "compute": "move", "move": "look"}[self.stage]
            self.begun = False
        return 0

    def propose(self, w: World, r: Robot) -> float:
        """The adversary's wish for the new progress along the trajectory."""
        L = r.traj.length
        if self.p.name in ("round-robin", "lockstep") or self.forced is not None:
            return L
        if self.rng.random() < 0.5:
            return L
        return r.progress + (L - r.progress) * self.rng.random()

    def cut(self, w: World, r: Robot) -> float:
        """New progress: the proposal, raised to the delta floor on a fresh
        move and quantized to 1e-12 of the path length."""
        L = r.traj.length
        new = self.propose(w, r)
        if r.progress == 0.0:
            new = max(new, min(w.delta, L))
        new = round(new / L, 12) * L if L > 0 else 0.0
        return min(new, L)


class Trace:
    def __init__(self, header: dict, path: Optional[str] = None):
        self.header = header
        self.events: list = []
        self._fh = open(path, "w") if path else None
        if self._fh:
            self._fh.write(json.dumps(header) + "\n")

    def add(self, rec: dict):
        self.events.append(rec)
        if self._fh:
            self._fh.write(json.dumps(rec) + "\n")

    def close(self):
        if self._fh:
            self._fh.close()
            self._fh = None

    def digest(self) -> str:
        h = hashlib.sha256(json.dumps(self.header, sort_keys=True).encode())
        for e in self.events:
            h.update(json.dumps(e, sort_keys=True).encode())
        return h.hexdigest()


def pattern_hash(F) -> str:
    s = ";".join(f"{x!r},{y!r}" for x, y in F)
    return hashlib.sha256(s.encode()).hexdigest()[:16]


def step(w: World, sched: Scheduler, seed: int, frame_rng: random.Random) -> dict:
    """Advance one sub-step of one robot; returns the trace record."""
    i = sched.pick(w)
    r = w.robots[i]
    used = 0
    if r.state == IDLE:
        r.frame = _random_frame(frame_rng, r.pos)
        r.snapshot = [r.frame.apply(p) for p in w.positions]
        r.state = LOOKED
        kind = "look"
    elif r.state == LOOKED:
        cyc = r.cycle
        src = BitSource(lambda: draw_bit(seed, i, cyc))
        traj, plan, me = decide(r.snapshot, w.F, src, w.tol)
        if plan.phase == FBC1 and plan.elected == me:
            w.aware.append((w.event, i))
        if src.used > 1:
            raise RuntimeError("more than one random bit drawn in a cycle")
        used = src.used
        r.bits += used
        w.bits += used
        r.snapshot = None
        # a tiny local path can round to zero length in world coordinates
        world = traj.transform(r.frame.inverse())
        if world.empty:
            _finish(w, r)
        else:
            r.traj = world
            r.progress = 0.0
            r.state = MOVING
        kind = "compute"
    else:
        new = sched.cut(w, r)
        r.progress = new
        if new >= r.traj.length:
            r.pos = r.traj.destination
            _finish(w, r)
            kind = "move-end"
        else:
            r.pos = r.traj.point_at(new)
            kind = "move-progress"
    w.event += 1
    w.classify()
    return {"event_index": w.event - 1, "robot": i, "kind": kind, "x": r.pos[0], "y": r.pos[1],
            "phase": w.phase, "bits_used": used}


def _finish(w: World, r: Robot):
    r.state = IDLE
    r.traj = EMPTY
    r.progress = 0.0
    r.frame = None
    r.cycle += 1
    r.last_done = w.event


def analyse_local(snapshot, F, bits: BitSource, tol: Tolerance) -> Trajectory:
    return decide(snapshot, F, bits, tol)[0]


def check_termination(w: World, F=None) -> bool:
    F = w.F if F is None else F
    if any(r.state != IDLE for r in w.robots):
        return False
    try:
        if similar(w.positions, F, w.tol) is None and similarity_residual(w.positions, F) > 1e-7:
            return False
    except SizeMismatch:
        return False
    for i, r in enumerate(w.robots):
        snap = [(p[0] - r.pos[0], p[1] - r.pos[1]) for p in w.positions]
        if not analyse_local(snap, F, BitSource(), w.tol).empty:
            return False
    return True


@dataclass
class RunResult:
    outcome: str
    trace: Trace
    world: World
    residual: float = math.inf

    @property
    def events(self):
        return self.world.event

    @property
    def bits(self):
        return self.world.bits


def run(init, F, policy: Policy | str = "async", seed: int = 0, max_events: int = 100000,
        trace_path: Optional[str] = None, observer: Optional[Callable] = None,
        tol: Tolerance = TOL) -> RunResult:
    if isinstance(policy, str):
        policy = Policy(policy)
    w = make_world(init, F, policy.delta, tol)
    n = len(w.robots)
    header = {"n": n, "seed": seed, "delta": policy.delta, "policy": policy.name,
              "pattern_hash": pattern_hash(w.F)}
    trace = Trace(header, trace_path)
    sched = Scheduler(policy, n, seed)
    frame_rng = random.Random(mix(seed, 0xF8A))
    w.classify()
    outcome = BUDGET
    try:
        while w.event < max_events:
            if w.plan.kind == "formed" and check_termination(w):
                outcome = FORMED
                break
            rec = step(w, sched, seed, frame_rng)
            trace.add(rec)
            if observer is not None:
                observer(w, rec)
        else:
            if w.plan.kind == "formed" and check_termination(w):
                outcome = FORMED
    finally:
        trace.close()
    res = similarity_residual(w.positions, w.F)
    return RunResult(outcome, trace, w, res)
