"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py            # all criteria
    python3 scripts/run_acceptance.py 1 2 3      # a subset
"""
import argparse
import sys

from swarmform.acceptance import CRITERIA, AcceptanceConfig, Suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("criteria", nargs="*", type=int, help="criterion numbers (default: all)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    ks = args.criteria or sorted(CRITERIA)
    suite = Suite(AcceptanceConfig(seed=args.seed))
    ok = True
    for k in ks:
        ok &= suite.get(k).ok
        print(suite.line(k), flush=True)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
