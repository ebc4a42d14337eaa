"""Command line entry points: run, batch, check."""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from .geometry import GeometryError, default_tolerance
from .simulator import BUDGET, FORMED, POLICIES, ConfigError, Policy, mix, run
from .workloads import random_points

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2
_RANDOM = re.compile(r"random:n=(\d+)$")


class InputError(ValueError):
    pass


def parse_points(text: str, name: str = "<input>"):
    """Parse 'x y [multiplicity]' lines; '#' starts a comment."""
    pts = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        f = line.split()
        try:
            if len(f) not in (2, 3):
                raise ValueError
            x, y = float(f[0]), float(f[1])
            m = int(f[2]) if len(f) == 3 else 1
            if m < 1 or not all(map(lambda v: v == v and abs(v) != float("inf"), (x, y))):
                raise ValueError
        except ValueError:
            raise InputError(f"{name}:{no}: expected 'x y [multiplicity]', got {line!r}") from None
        pts.extend([(x, y)] * m)
    if not pts:
        raise InputError(f"{name}: no points")
    return pts


def load_points(spec: str, seed: int, salt: int):
    """A file path, or 'random:n=<int>' for uniform points in the unit square."""
    m = _RANDOM.match(spec)
    if m:
        return random_points(random.Random(mix(seed, salt)), int(m.group(1)))
    try:
        with open(spec) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {spec}: {e.strerror}") from None
    return parse_points(text, spec)


@dataclass
class RunConfig:
    pattern_file: str
    init_file: str
    seed: int = 0
    delta: float = 0.01
    policy: str = "async"
    max_events: int = 1_000_000
    trace_out: Optional[str] = None

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}; choose from {', '.join(POLICIES)}")
        if not self.delta > 0:
            raise ConfigError("delta must be positive")
        if self.max_events < 0:
            raise ConfigError("max-events must be non-negative")

    def dump(self, path: str):
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=1)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            return cls(**json.load(fh))

    def inputs(self):
        init = load_points(self.init_file, self.seed, 0x1417)
        F = load_points(self.pattern_file, self.seed, 0xF417)
        if len(init) < 5:
            raise ConfigError(f"need at least 5 robots, got {len(init)}")
        return init, F


def execute(cfg: RunConfig):
    init, F = cfg.inputs()
    return run(init, F, Policy(cfg.policy, cfg.delta), seed=cfg.seed, max_events=cfg.max_events,
               trace_path=cfg.trace_out, tol=default_tolerance())


def summary(res) -> str:
    word = "FORMED" if res.outcome == FORMED else "BUDGET_EXCEEDED"
    return f"{word} events={res.events} bits={res.bits} residual={res.residual:.3g}"


def cmd_run(cfg: RunConfig, out=print) -> int:
    try:
        res = execute(cfg)
    except (InputError, ConfigError, GeometryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out(summary(res))
    return EXIT_OK if res.outcome == FORMED else EXIT_BUDGET


def parse_n(text: str):
    out = []
    for part in text.split(","):
        a, _, b = part.strip().partition("-")
        try:
            lo, hi = int(a), int(b or a)
        except ValueError:
            raise InputError(f"bad --n value {text!r}; use e.g. 7 or 5-8 or 5,7,10") from None
        out.extend(range(lo, hi + 1))
    return out


def _trial(job):
    n, seed, pattern, policy, delta, max_events = job
    rng = random.Random(seed)
    init = random_points(rng, n)
    F = pattern if pattern is not None else random_points(rng, n)
    try:
        res = run(init, F, Policy(policy, delta), seed=seed, max_events=max_events, tol=default_tolerance())
    except (ConfigError, GeometryError) as e:
        return {"n": n, "seed": seed, "outcome": f"error: {e}", "events": 0, "bits": 0}
    return {"n": n, "seed": seed, "outcome": res.outcome, "events": res.events, "bits": res.bits}


def batch_table(ns, trials: int, seed: int, pattern=None, policy="async", delta=0.01,
                max_events=1_000_000, workers: Optional[int] = None):
    """Run `trials` simulations per n; returns (per-trial rows, per-n summary rows)."""
    jobs = [(n, mix(seed, n, i), pattern, policy, delta, max_events) for n in ns for i in range(trials)]
    workers = workers or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_trial, jobs))
    else:
        rows = [_trial(j) for j in jobs]
    table = []
    for n in ns:
        rs = [r for r in rows if r["n"] == n]
        if not rs:
            continue
        formed = [r for r in rs if r["outcome"] == FORMED]
        table.append({
            "n": n, "trials": len(rs), "formed": len(formed),
            "success": len(formed) / len(rs),
            "median_events": statistics.median(r["events"] for r in formed) if formed else None,
            "median_bits": statistics.median(r["bits"] for r in formed) if formed else None,
        })
    return rows, table


def cmd_batch(cfg: RunConfig, trials: int, ns, out=print) -> int:
    try:
        pattern = None
        if cfg.pattern_file:
            pattern = load_points(cfg.pattern_file, cfg.seed, 0xF417)
            ns = ns or [len(pattern)]
            if any(n != len(pattern) for n in ns):
                raise ConfigError(f"size mismatch: --n {ns} but pattern has {len(pattern)} points")
        if any(n < 5 for n in ns):
            raise ConfigError("every n must be at least 5")
    except (InputError, ConfigError, GeometryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    rows, table = batch_table(ns, trials, cfg.seed, pattern, cfg.policy, cfg.delta, cfg.max_events)
    out("n\ttrials\tformed\tsuccess\tmedian_events\tmedian_bits")
    for t in table:
        out("\t".join(str(t[k]) for k in ("n", "trials", "formed", "success", "median_events", "median_bits")))
    done = sum(t["formed"] for t in table)
    out(f"total\t{len(rows)}\t{done}\t{done / len(rows) if rows else 0.0}")
    errors = [r for r in rows if r["outcome"] not in (FORMED, BUDGET)]
    for r in errors:
        print(f"n={r['n']} seed={r['seed']}: {r['outcome']}", file=sys.stderr)
    return EXIT_OK


def cmd_check(out=print) -> int:
    from .selfcheck import run_checks
    return EXIT_OK if run_checks(out=out) else EXIT_CONFIG


def build_parser():
    p = argparse.ArgumentParser(prog="swarmform", description="Pattern formation simulator for oblivious robots.")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("run", "batch"):
        s = sub.add_parser(name)
        s.add_argument("--pattern", required=name == "run", help="pattern file or random:n=<int>")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--delta", type=float, default=0.01, help="minimum move, fraction of the SEC radius")
        s.add_argument("--policy", default="async", choices=POLICIES)
        s.add_argument("--max-events", type=int, default=1_000_000)
        if name == "run":
            s.add_argument("--init", required=True, help="initial configuration file or random:n=<int>")
            s.add_argument("--trace", help="write a JSON-lines trace here")
        else:
            s.add_argument("--trials", type=int, default=10)
            s.add_argument("--n", default=None, help="robot counts, e.g. 7 or 5-8 or 5,7,10")
    sub.add_parser("check")
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    if a.cmd == "check":
        return cmd_check()
    try:
        cfg = RunConfig(a.pattern or "", getattr(a, "init", "") or "", a.seed, a.delta, a.policy,
                        a.max_events, getattr(a, "trace", None))
        if a.cmd == "batch":
            ns = parse_n(a.n) if a.n else []
            if not ns and not a.pattern:
                raise InputError("batch needs --n or --pattern")
    except (InputError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if a.cmd == "run":
        return cmd_run(cfg)
    return cmd_batch(cfg, a.trials, ns)


if __name__ == "__main__":
    sys.exit(main())
