"""Run the proposition campaigns and print one line per run."""

import argparse

from possfusion.propositions import (CLASS_LEVEL, class_level, luk_majority_failure,
                                     prop13_search, props_1_to_8)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bad = 0
    for rep in props_1_to_8(args.trials, args.seed):
        print(rep.line())
        bad += not rep.ok
    rep = prop13_search(args.trials, args.seed)
    print(rep.line())
    bad += not rep.ok
    print(f"Lukasiewicz majority failure reproduced: {luk_majority_failure()}")
    for prop in CLASS_LEVEL:
        for r in class_level(prop, args.trials, args.seed):
            print(r.line())
            bad += not r.ok
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
