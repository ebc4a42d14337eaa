"""Acceptance checks: oracle agreement, CEB theorems, phase invariants and
end-to-end formation statistics. Each check returns a Result."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .ceb import construct_ceb_set, detect_shifted
from .geometry import TOL, Similarity, similar, similarity_residual, smallest_enclosing_circle, weber_point
from .oracles import sec_brute, weber_grid
from .pattern import GatheringExcluded, pattern_info
from .protocol import APF, FBC1, FBC2, TERMINATION, BitSource, analyse, compute
from .simulator import FORMED, MOVING, Policy, mix, run
from .workloads import (motif_config, multiplicity_pattern, phase_snapshots, random_points,
                        shifted_config, symmetric_config)

# phase changes allowed during an execution (self loops aside)
DAG = {(FBC2, FBC1), (FBC2, APF), (FBC1, APF), (FBC1, TERMINATION), (APF, TERMINATION)}


@dataclass
class AcceptanceConfig:
    seed: int = 0
    sec_sets: int = 1000
    sec_max_n: int = 25
    weber_sets: int = 100
    weber_max_n: int = 9
    ceb_configs: int = 1000
    shift_configs: int = 1000
    apf_runs: int = 200
    fbc1_runs: int = 200
    run_n: tuple = (5, 12)
    delta: float = 0.01
    election_events: int = 100_000
    e2e_ns: tuple = (5, 6, 7, 8, 10)
    e2e_runs: int = 100
    e2e_events: int = 1_000_000
    e2e_min_formed: int = 99
    mult_runs: int = 50
    mult_ns: tuple = (7, 9)
    mult_min_formed: int = 49
    snapshots: int = 500


@dataclass
class Result:
    ok: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)


class Monitor:
    """Observer collecting phase-transition, handoff and bit-use violations."""

    def __init__(self):
        self.runs = 0
        self.events = 0
        self.transitions = 0
        self.illegal: list = []
        self.handoff: list = []
        self.bits_bad: list = []
        self.computes = 0
        self.one_bit = 0
        self._prev = None
        self._tag = None

    def start(self, tag):
        self.runs += 1
        self._prev = None
        self._tag = tag

    def __call__(self, w, rec):
        self.events += 1
        ph = w.phase
        if self._prev is not None and ph != self._prev:
            self.transitions += 1
            if (self._prev, ph) not in DAG:
                self.illegal.append((self._tag, rec["event_index"], self._prev, ph))
            if any(r.state == MOVING for r in w.robots):
                self.handoff.append((self._tag, rec["event_index"], self._prev, ph))
        self._prev = ph
        if rec["kind"] == "compute":
            self.computes += 1
            self.one_bit += rec["bits_used"] == 1
            if rec["bits_used"] not in (0, 1):
                self.bits_bad.append((self._tag, rec["event_index"], rec["bits_used"]))


def _timed(fn):
    def wrapper(*a, **k):
        t = time.time()
        res = fn(*a, **k)
        res.seconds = time.time() - t
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------- geometry and CEB

@_timed
def geometry_oracles(cfg: AcceptanceConfig) -> Result:
    """SEC against pair/triple enumeration, Weber point against grid refinement."""
    rng = random.Random(mix(cfg.seed, 1))
    worst_sec = 0.0
    for _ in range(cfg.sec_sets):
        P = random_points(rng, rng.randint(2, cfg.sec_max_n))
        got = smallest_enclosing_circle(P)
        _, r = sec_brute(P)
        worst_sec = max(worst_sec, abs(got.radius - r) / r)
    worst_w = 0.0
    for _ in range(cfg.weber_sets):
        P = random_points(rng, rng.randint(3, cfg.weber_max_n))
        worst_w = max(worst_w, math.dist(weber_point(P), weber_grid(P)))
    ok = worst_sec <= 1e-9 and worst_w <= 1e-6
    return Result(ok, f"SEC worst rel. radius error {worst_sec:.1e} over {cfg.sec_sets} sets; "
                      f"Weber worst distance {worst_w:.1e} over {cfg.weber_sets} sets",
                  data={"sec": worst_sec, "weber": worst_w})


@_timed
def ceb_unique(cfg: AcceptanceConfig) -> Result:
    """Rotationally symmetric configurations have one non-empty CEB-set,
    unchanged by input order and by radial moves of its members."""
    rng = random.Random(mix(cfg.seed, 2))
    bad = []
    for k in range(cfg.ceb_configs):
        P = motif_config(rng, (5, 24))
        cs = construct_ceb_set(P)
        if cs is None or not cs.members:
            bad.append((k, "empty"))
            continue
        mem = set(cs.members)
        Q = P[:]
        rng.shuffle(Q)
        cs2 = construct_ceb_set(Q)
        if cs2 is None or set(cs2.members) != mem:
            bad.append((k, "order"))
            continue
        c = cs.center
        j = rng.choice(cs.members)
        rj = math.dist(j, c)
        if mem == set(P):
            f = rng.uniform(0.5, 0.95)
        else:
            dnon = min(math.dist(p, c) for p in P if p not in mem)
            f = rng.uniform(0.05, 0.95) * dnon / rj
        j2 = (c[0] + (j[0] - c[0]) * f, c[1] + (j[1] - c[1]) * f)
        R = [j2 if p == j else p for p in P]
        cs3 = construct_ceb_set(R)
        if cs3 is None or set(cs3.members) != (mem - {j}) | {j2}:
            bad.append((k, "radial"))
    return Result(not bad, f"{cfg.ceb_configs - len(bad)}/{cfg.ceb_configs} configurations pass"
                  + (f"; first failures {bad[:5]}" if bad else ""), data={"bad": bad})


@_timed
def shifted_unique(cfg: AcceptanceConfig) -> Result:
    """A planted shift of at most theta/2 is recovered with its angle."""
    rng = random.Random(mix(cfg.seed, 3))
    bad, worst = [], 0.0
    for k in range(cfg.shift_configs):
        P, s, sh = shifted_config(rng)
        got = detect_shifted(P)
        if got is None or got.shifted is None or got.shifted.robot != s:
            bad.append(k)
            continue
        worst = max(worst, abs(got.shifted.shift_angle - sh))
    ok = not bad and worst <= 1e-7
    return Result(ok, f"{cfg.shift_configs - len(bad)}/{cfg.shift_configs} recovered; "
                      f"worst angle error {worst:.1e} rad", data={"bad": bad, "worst": worst})


# ---------------------------------------------------------------- simulations

class _Stop(Exception):
    pass


def _pair(rng, n, mult=False):
    init = random_points(rng, n)
    F = multiplicity_pattern(rng, n) if mult else random_points(rng, n)
    return init, F


@_timed
def apf_keeps_circle(cfg: AcceptanceConfig, mon: Monitor) -> Result:
    """During the pattern-formation phase the enclosing circle never moves,
    and at its end all robots but r_1 sit on the pattern."""
    rng = random.Random(mix(cfg.seed, 4))
    bad, worst, formed, exits = [], 0.0, 0, 0
    for k in range(cfg.apf_runs):
        n = rng.randint(*cfg.run_n)
        init, F = _pair(rng, n)
        info = pattern_info(F)
        rest_F = [p for i, p in enumerate(info.tilde) if i != info.canon.f1]
        st = {"sec": None, "exit": None, "drift": 0.0}

        def watch(w, rec):
            mon(w, rec)
            if w.phase == APF:
                c = smallest_enclosing_circle(w.positions)
                if st["sec"] is None:
                    st["sec"] = c
                ref = st["sec"]
                d = max(math.dist(c.center, ref.center), abs(c.radius - ref.radius)) / ref.radius
                st["drift"] = max(st["drift"], d)
            elif st["sec"] is not None and st["exit"] is None:
                P = w.positions
                c = smallest_enclosing_circle(P).center
                r1 = min(range(len(P)), key=lambda i: math.dist(P[i], c))
                rest = [p for i, p in enumerate(P) if i != r1]
                st["exit"] = similar(rest, rest_F) is not None or similarity_residual(rest, rest_F) <= 1e-7

        mon.start(("apf", k))
        res = run(init, F, Policy("async", cfg.delta), seed=mix(cfg.seed, 4, k), max_events=cfg.e2e_events,
                  observer=watch)
        formed += res.outcome == FORMED
        worst = max(worst, st["drift"])
        if st["sec"] is None:
            continue  # formed without passing through the phase
        exits += 1
        if st["drift"] >= 1e-7 or not st["exit"]:
            bad.append((k, st["drift"], st["exit"]))
    ok = not bad and exits > 0
    return Result(ok, f"{exits} runs reached the phase, {len(bad)} violations; worst drift {worst:.1e}; "
                      f"{formed}/{cfg.apf_runs} formed", data={"bad": bad, "exits": exits})


@_timed
def election(cfg: AcceptanceConfig, mon: Monitor) -> Result:
    """From symmetric starts one robot becomes aware it is elected within the
    event limit, and the elected identity never changes."""
    rng = random.Random(mix(cfg.seed, 5))
    bad, firsts = [], []
    for k in range(cfg.fbc1_runs):
        n = rng.randint(*cfg.run_n)
        init = symmetric_config(rng, n)
        F = random_points(rng, n)
        st = {"seen_fbc1": False}

        def watch(w, rec):
            mon(w, rec)
            st["w"] = w
            st["seen_fbc1"] |= w.phase == FBC1
            if st["seen_fbc1"] and w.phase in (APF, TERMINATION) and w.aware:
                raise _Stop
            if w.event >= cfg.election_events and not w.aware:
                raise _Stop

        mon.start(("fbc1", k))
        try:
            res = run(init, F, Policy("async", cfg.delta), seed=mix(cfg.seed, 5, k),
                      max_events=cfg.election_events + 1, observer=watch)
            aware = res.world.aware
        except _Stop:
            aware = st["w"].aware
        ids = {i for _, i in aware}
        if not aware or len(ids) != 1 or aware[0][0] >= cfg.election_events:
            bad.append((k, sorted(ids), aware[0][0] if aware else None))
        else:
            firsts.append(aware[0][0])
    med = sorted(firsts)[len(firsts) // 2] if firsts else None
    return Result(not bad, f"{cfg.fbc1_runs - len(bad)}/{cfg.fbc1_runs} runs elect one robot; "
                           f"median first awareness at event {med}", data={"bad": bad})


def _stable(w) -> bool:
    """No robot is moving and no robot would move from the current positions."""
    if any(r.state == MOVING for r in w.robots):
        return False
    P = w.positions
    for i, p in enumerate(P):
        snap = [(q[0] - p[0], q[1] - p[1]) for q in P]
        if any(not compute(snap, w.F, BitSource(lambda b=b: b), w.tol).empty for b in (0, 1)):
            return False
    return True


@_timed
def end_to_end(cfg: AcceptanceConfig, mon: Monitor) -> Result:
    """Random starts and patterns under the stuttering asynchronous scheduler."""
    rows, ok, hard = [], True, []
    for n in cfg.e2e_ns:
        rng = random.Random(mix(cfg.seed, 6, n))
        formed, events = 0, []
        for k in range(cfg.e2e_runs):
            init, F = _pair(rng, n)
            mon.start(("e2e", n, k))
            res = run(init, F, Policy("stutter", cfg.delta), seed=mix(cfg.seed, 6, n, k),
                      max_events=cfg.e2e_events, observer=mon)
            if res.outcome == FORMED:
                formed += 1
                events.append(res.events)
            elif _stable(res.world):
                hard.append((n, k))
        ok &= formed >= cfg.e2e_min_formed
        med = sorted(events)[len(events) // 2] if events else None
        rows.append(f"n={n}: {formed}/{cfg.e2e_runs} (median {med} events)")
    ok &= not hard
    return Result(ok, "; ".join(rows) + (f"; stable failures {hard}" if hard else ""),
                  data={"hard": hard})


@_timed
def multiplicity(cfg: AcceptanceConfig, mon: Monitor) -> Result:
    """Patterns with a double and a triple point are formed with their
    multiplicities; a single-point pattern is refused."""
    rng = random.Random(mix(cfg.seed, 7))
    formed = 0
    for k in range(cfg.mult_runs):
        n = cfg.mult_ns[k % len(cfg.mult_ns)]
        init, F = _pair(rng, n, mult=True)
        mon.start(("mult", k))
        res = run(init, F, Policy("async", cfg.delta), seed=mix(cfg.seed, 7, k),
                  max_events=cfg.e2e_events, observer=mon)
        formed += res.outcome == FORMED and similar(res.world.positions, F) is not None
    try:
        run(random_points(rng, 7), [(0.3, 0.3)] * 7)
        refused = False
    except GatheringExcluded:
        refused = True
    ok = formed >= cfg.mult_min_formed and refused
    return Result(ok, f"{formed}/{cfg.mult_runs} formed with multiplicities; gathering "
                      + ("refused" if refused else "accepted"))


def phase_dag(mon: Monitor) -> Result:
    ok = mon.runs > 0 and not mon.illegal and not mon.handoff
    return Result(ok, f"{mon.runs} runs, {mon.events} events, {mon.transitions} phase changes; "
                      f"{len(mon.illegal)} outside the DAG, {len(mon.handoff)} during a move"
                      + (f"; first {(mon.illegal + mon.handoff)[:3]}" if not ok else ""))


def bit_accounting(mon: Monitor, extra: Monitor = None) -> Result:
    """Criterion 6 runs; `extra` (runs of criteria 4-7, which include the
    elections) is checked the same way and reported alongside."""
    ok = mon.computes > 0 and not mon.bits_bad
    detail = f"{mon.computes} computes, {mon.one_bit} drew one bit, {len(mon.bits_bad)} drew more"
    if extra is not None:
        ok &= not extra.bits_bad
        detail += (f" (all runs of criteria 4-7: {extra.computes} computes, {extra.one_bit} one bit, "
                   f"{len(extra.bits_bad)} more)")
    return Result(ok, detail)


# ---------------------------------------------------------------- equivariance

def _outcomes(snap, F, tol):
    return [compute(snap, F, BitSource(lambda b=b: b), tol) for b in (0, 1)]


def _traj_gap(a, b) -> float:
    if a.empty or b.empty:
        return 0.0 if a.empty and b.empty else math.inf
    return max([abs(a.length - b.length)] + [math.dist(p, q) for p, q in zip(a.sample(8), b.sample(8))])


def equivariance_gap(snap, F, T: Similarity, tol=None) -> float:
    """Largest disagreement, relative to the snapshot scale, between the
    outputs in a transformed frame and the transformed identity-frame outputs.
    Outcomes are compared as a set over the bit value, since a bit that picks
    a side may mean the other side in a reflected frame."""
    tol = tol or TOL
    a = [t.transform(T) for t in _outcomes(snap, F, tol)]
    b = _outcomes([T.apply(p) for p in snap], [T.apply(p) for p in F], tol)
    scale = max(math.hypot(*p) for p in snap) * T.scale
    gap = min(max(_traj_gap(a[0], b[0]), _traj_gap(a[1], b[1])),
              max(_traj_gap(a[0], b[1]), _traj_gap(a[1], b[0])))
    return gap / scale


def _random_linear(rng) -> Similarity:
    s = math.exp(rng.uniform(math.log(0.1), math.log(10)))
    t = rng.uniform(0, 2 * math.pi)
    return Similarity(s, t, rng.random() < 0.5, (0.0, 0.0))


def _mover(P, F, rng):
    """A robot that moves from P (bit 0), else a random one."""
    plan = analyse(P, F)
    order = list(range(len(P)))
    rng.shuffle(order)
    for i in order:
        if not plan.move(i, BitSource(lambda: 0)).empty:
            return i
    return order[0]


def fbc2_snapshots(count, seed):
    rng = random.Random(mix(seed, 10, 2))
    out = []
    while len(out) < count:
        n = rng.randint(5, 9)
        P, F = random_points(rng, n), random_points(rng, n)
        if analyse(P, F).phase == FBC2:
            out.append((P, F))
    return out


@_timed
def equivariance(cfg: AcceptanceConfig) -> Result:
    """compute() commutes with similarities of the observer's frame."""
    snaps = phase_snapshots(cfg.snapshots, [APF, TERMINATION, FBC1], seed=cfg.seed)
    snaps[FBC2] = fbc2_snapshots(cfg.snapshots, cfg.seed)
    short = cfg.snapshots - len(snaps[FBC1])
    if short > 0:
        snaps[FBC1] += phase_snapshots(short, [FBC1], seed=cfg.seed, symmetric=True)[FBC1]
    rng = random.Random(mix(cfg.seed, 10))
    rows, ok, worst_all = [], True, 0.0
    for ph in (FBC2, FBC1, APF, TERMINATION):
        got = snaps[ph]
        worst, bad = 0.0, 0
        for P, F in got:
            i = _mover(P, F, rng)
            snap = [(p[0] - P[i][0], p[1] - P[i][1]) for p in P]
            g = equivariance_gap(snap, F, _random_linear(rng))
            worst = max(worst, g)
            bad += g > 1e-9
        ok &= len(got) >= cfg.snapshots and bad == 0
        worst_all = max(worst_all, worst)
        rows.append(f"{ph} {len(got) - bad}/{len(got)}")
    return Result(ok, ", ".join(rows) + f"; worst relative gap {worst_all:.1e}")


# ---------------------------------------------------------------- driver

CRITERIA = {
    1: ("geometry oracles", lambda cfg, mon: geometry_oracles(cfg)),
    2: ("unique CEB-set", lambda cfg, mon: ceb_unique(cfg)),
    3: ("unique shifted robot", lambda cfg, mon: shifted_unique(cfg)),
    4: ("enclosing circle fixed while forming", apf_keeps_circle),
    5: ("election", election),
    6: ("end-to-end formation", end_to_end),
    7: ("multiplicity patterns", multiplicity),
    8: ("phase DAG and handoff", lambda cfg, mon: phase_dag(mon)),
    9: ("one bit per cycle", None),
    10: ("frame equivariance", lambda cfg, mon: equivariance(cfg)),
}


class Suite:
    """Runs criteria lazily and caches results. Criterion 8 watches the runs of
    criteria 4 to 7 and criterion 9 those of criterion 6."""

    def __init__(self, cfg: AcceptanceConfig = None):
        self.cfg = cfg or AcceptanceConfig()
        self.mon = Monitor()  # criteria 4-7
        self.bits = Monitor()  # criterion 6 only
        self.results: dict = {}

    def get(self, k: int) -> Result:
        if k in self.results:
            return self.results[k]
        if k == 8:
            for j in (4, 5, 6, 7):
                self.get(j)
            res = phase_dag(self.mon)
        elif k == 9:
            for j in (4, 5, 6, 7):
                self.get(j)
            res = bit_accounting(self.bits, self.mon)
        elif k == 6:
            res = end_to_end(self.cfg, _Tee(self.mon, self.bits))
        else:
            res = CRITERIA[k][1](self.cfg, self.mon)
        self.results[k] = res
        return res

    def line(self, k: int) -> str:
        r = self.results[k]
        return f"criterion {k} ({CRITERIA[k][0]}): {'PASS' if r.ok else 'FAIL'} [{r.seconds:.0f}s] {r.detail}"


class _Tee:
    def __init__(self, *mons):
        self.mons = mons

    def start(self, tag):
        for m in self.mons:
            m.start(tag)

    def __call__(self, w, rec):
        for m in self.mons:
            m(w, rec)
