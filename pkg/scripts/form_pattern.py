"""Form one of the bundled patterns from a random start and report phases.

    python3 scripts/form_pattern.py                  # arrow pattern, 7 robots
    python3 scripts/form_pattern.py --pattern scripts/data/mult7.txt --seed 3
"""
import argparse
import os
import random
from collections import Counter

from swarmform.cli import parse_points
from swarmform.simulator import FORMED, Policy, run
from swarmform.workloads import random_points

HERE = os.path.dirname(os.path.abspath(__file__))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pattern", default=os.path.join(HERE, "data", "arrow7.txt"))
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--policy", default="async")
    ap.add_argument("--trace", default=None, help="write a JSON-lines trace here")
    args = ap.parse_args(argv)
    with open(args.pattern) as fh:
        F = parse_points(fh.read(), args.pattern)
    init = random_points(random.Random(args.seed), len(F))
    phases = Counter()
    first = {}

    def watch(w, rec):
        phases[w.phase] += 1
        first.setdefault(w.phase, rec["event_index"])

    res = run(init, F, Policy(args.policy), seed=args.seed, max_events=10 ** 6,
              trace_path=args.trace, observer=watch)
    print(f"{'formed' if res.outcome == FORMED else 'not formed'} after {res.events} events, "
          f"{res.bits} random bits, residual {res.residual:.2g}")
    for ph, k in sorted(first.items(), key=lambda kv: kv[1]):
        print(f"  {ph:<24} from event {k:>6}, {phases[ph]} events")
    return 0 if res.outcome == FORMED else 1


if __name__ == "__main__":
    raise SystemExit(main())
