"""Compare syntactic fusion against the pointwise semantic combination.

Sweeps random problems for every registry operator and reports the largest
deviation per operator.
"""

import argparse
import time

import numpy as np

from possfusion.fusion import distributions, fuse, semantic_fuse
from possfusion.operators import BUILTINS
from possfusion.possibilistic import PossibilisticBase, WeightedFormula, to_distribution
from possfusion.sampling import WEIGHT_GRID, random_formula, trial_rng


def problem(rng, atoms, max_formulas, max_bases):
    vocab = tuple("pqrstuvw"[:rng.randint(1, atoms)])
    return [PossibilisticBase(tuple(WeightedFormula(random_formula(rng, vocab), rng.choice(WEIGHT_GRID))
                                    for _ in range(rng.randint(0, max_formulas))), vocab)
            for _ in range(rng.randint(1, max_bases))]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=1000)
    ap.add_argument("--atoms", type=int, default=4)
    ap.add_argument("--formulas", type=int, default=4)
    ap.add_argument("--bases", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    worst = dict.fromkeys(BUILTINS, 0.0)
    t0 = time.perf_counter()
    for t in range(args.problems):
        bases = problem(trial_rng(args.seed, "sweep", t), args.atoms, args.formulas, args.bases)
        dists = distributions(bases)
        for name, op in BUILTINS.items():
            got = to_distribution(fuse(bases, op)).values
            dev = float(np.max(np.abs(got - semantic_fuse(dists, op).values)))
            worst[name] = max(worst[name], dev)
    for name, dev in worst.items():
        print(f"{name:10s} max |syntactic - semantic| = {dev:.3g}")
    print(f"{args.problems} problems in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
