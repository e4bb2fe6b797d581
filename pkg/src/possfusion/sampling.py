"""Seeded random generation of bases and formulas for property searches."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import logic
from .config import settings
from .logic import Atom, Formula, Not
from .possibilistic import PossibilisticBase, WeightedFormula, normalize

WEIGHT_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class RandomBaseSpec:
    atoms: int = 3
    max_formulas: int = 3
    weight_levels: tuple[float, ...] = WEIGHT_GRID
    base_count: int = 3
    trials: int = 500
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.atoms <= min(settings.max_vars, 26):
            raise ValueError("atom count out of range")
        if any(not 0.0 < w <= 1.0 for w in self.weight_levels):
            raise ValueError("weight levels must lie in (0, 1]")

    @property
    def vocabulary(self) -> tuple[str, ...]:
        return tuple("pqrstuvwxyzabcdefghijklmno"[:self.atoms])


def trial_rng(seed: int, tag: str, trial: int) -> random.Random:
    """Independent stream per trial so trials can be replayed in isolation."""
    return random.Random(f"{seed}/{tag}/{trial}")


def random_literal(rng: random.Random, vocab) -> Formula:
    a = Atom(rng.choice(vocab))
    return Not(a) if rng.random() < 0.5 else a


def random_clause(rng: random.Random, vocab, max_len: int = 2) -> Formula:
    names = rng.sample(list(vocab), rng.randint(1, min(max_len, len(vocab))))
    lits = [Not(Atom(n)) if rng.random() < 0.5 else Atom(n) for n in names]
    return logic.disjoin(lits)


def random_formula(rng: random.Random, vocab, depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return random_literal(rng, vocab)
    kind = rng.randrange(4)
    if kind == 0:
        return Not(random_formula(rng, vocab, depth - 1))
    left = random_formula(rng, vocab, depth - 1)
    right = random_formula(rng, vocab, depth - 1)
    return (logic.And, logic.Or, logic.Implies)[kind - 1](left, right)


def random_base(rng: random.Random, spec: RandomBaseSpec, consistent: bool = True,
                min_formulas: int = 1) -> PossibilisticBase:
    """Random clauses with grid weights; by default classically consistent."""
    vocab = spec.vocabulary
    while True:
        k = rng.randint(min_formulas, spec.max_formulas)
        items = tuple(WeightedFormula(random_clause(rng, vocab), rng.choice(spec.weight_levels))
                      for _ in range(k))
        base = PossibilisticBase(items, vocab)
        if not consistent or logic.is_consistent(base.star(), vocab):
            return base


def random_bases(rng: random.Random, spec: RandomBaseSpec, lo: int = 2,
                 hi: int | None = None, **kw) -> list[PossibilisticBase]:
    hi = spec.base_count if hi is None else hi
    return [random_base(rng, spec, **kw) for _ in range(rng.randint(lo, hi))]


def rewrite_equivalent(rng: random.Random, f: Formula) -> Formula:
    """A syntactically different but classically equivalent formula."""
    choice = rng.randrange(4)
    if choice == 0:
        return Not(Not(f))
    if choice == 1 and isinstance(f, (logic.Or, logic.And)):
        return type(f)(f.right, f.left)
    if choice == 2 and isinstance(f, logic.Or):
        return logic.Implies(Not(f.left), f.right)
    return logic.Or(f, logic.And(f, random_literal(rng, logic.vocabulary_of(f) or ("p",))))


def equivalent_variant(rng: random.Random, base: PossibilisticBase) -> PossibilisticBase:
    """A base stratified-equivalent to ``base``: normalized and/or rewritten."""
    if rng.random() < 0.5:
        base = normalize(base)
    items = tuple(WeightedFormula(rewrite_equivalent(rng, it.formula), it.weight)
                  if rng.random() < 0.5 else it for it in base.items)
    if rng.random() < 0.3 and items:
        # duplicating an item at a lower weight is subsumed
        it = rng.choice(items)
        low = [w for w in WEIGHT_GRID if w <= it.weight]
        items = items + (WeightedFormula(it.formula, rng.choice(low)),)
    return PossibilisticBase(items, base.vocabulary)
