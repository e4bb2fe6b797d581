"""Syntactic and semantic fusion of weighted bases."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import logic
from .config import settings
from .errors import ContractViolationError, ExplosionCapError
from .logic import Formula
from .operators import Operator, adaptive, contract_report, nary_apply
from .possibilistic import (Distribution, PossibilisticBase, WeightedFormula,
                            align, alpha_cut, to_distribution, union)


@dataclass(frozen=True)
class FusionProblem:
    bases: tuple[PossibilisticBase, ...]
    operator: Operator
    reliability: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(align(list(self.bases))))
        if self.reliability is not None:
            rel = tuple(float(x) for x in self.reliability)
            if len(rel) != len(self.bases):
                raise ValueError("one reliability degree per base is required")
            object.__setattr__(self, "reliability", rel)

    @property
    def vocabulary(self):
        return self.bases[0].vocabulary if self.bases else ()


@dataclass(frozen=True)
class FusedBase:
    """A fused base plus, per item, the (base index, item index) sources."""

    base: PossibilisticBase
    provenance: tuple[tuple[tuple[int, int], ...], ...]

    def __iter__(self):
        return zip(self.base.items, self.provenance)


def require_contract(op: Operator) -> None:
    report = contract_report(op)
    if not report.admissible:
        bad = [f"{k} at {v.witness}" for k, v in report.contract.items() if not v.holds]
        raise ContractViolationError(f"operator {op.name} fails " + ", ".join(bad))


def fuse2(b1: PossibilisticBase, b2: PossibilisticBase, op: Operator) -> FusedBase:
    """Two-source fusion: reweighted inputs plus pairwise disjunctions."""
    require_contract(op)
    b1, b2 = align([b1, b2])
    eps = settings.eps
    items, prov = [], []
    for i, (f, a) in enumerate(b1.items):
        items.append(WeightedFormula(f, 1.0 - op(1.0 - a, 1.0)))
        prov.append(((0, i),))
    for j, (g, b) in enumerate(b2.items):
        items.append(WeightedFormula(g, 1.0 - op(1.0, 1.0 - b)))
        prov.append(((1, j),))
    for i, (f, a) in enumerate(b1.items):
        for j, (g, b) in enumerate(b2.items):
            w = 1.0 - op(1.0 - a, 1.0 - b)
            if w > eps:
                items.append(WeightedFormula(logic.Or(f, g), w))
                prov.append(((0, i), (1, j)))
    return _finish(items, prov, b1.vocabulary)


def _finish(items, prov, vocabulary) -> FusedBase:
    eps = settings.eps
    keep = [k for k, it in enumerate(items) if it.weight > eps]
    return FusedBase(PossibilisticBase(tuple(items[k] for k in keep), vocabulary),
                     tuple(prov[k] for k in keep))


def fuse_n(problem: FusionProblem) -> FusedBase:
    """n-source fusion over every choice of at most one formula per source.

    A choice touching sources S yields the disjunction of the chosen formulas
    (in source order) weighted 1 - op(x_1..x_n), with x_i = 1 - alpha for a
    chosen formula and x_i = 1 for a source outside S.
    """
    op = problem.operator
    require_contract(op)
    bases = problem.bases
    if not bases:
        return FusedBase(PossibilisticBase((), ()), ())
    count = math.prod(len(b) + 1 for b in bases) - 1
    if count > settings.explosion_cap:
        raise ExplosionCapError(
            f"fusion would emit {count} items (cap {settings.explosion_cap})")
    eps = settings.eps
    options = [[None] + list(range(len(b))) for b in bases]
    items, prov = [], []
    for choice in itertools.product(*options):
        picked = [(i, j) for i, j in enumerate(choice) if j is not None]
        if not picked:
            continue
        xs = [1.0 if j is None else 1.0 - bases[i].items[j].weight
              for i, j in enumerate(choice)]
        w = 1.0 - nary_apply(op, xs)
        if w <= eps:
            continue
        f = logic.disjoin(bases[i].items[j].formula for i, j in picked)
        items.append(WeightedFormula(f, w))
        prov.append(tuple(picked))
    return _finish(items, prov, problem.vocabulary)


def fuse(bases: Sequence[PossibilisticBase], op: Operator) -> PossibilisticBase:
    """Shorthand for the base of ``fuse_n``."""
    return fuse_n(FusionProblem(tuple(bases), op)).base


def fold_fuse2(bases: Sequence[PossibilisticBase], op: Operator) -> PossibilisticBase:
    """Left fold of the two-source fusion (meaningful for associative op)."""
    acc = bases[0]
    for b in bases[1:]:
        acc = fuse2(acc, b, op).base
    return acc


def semantic_fuse(dists: Sequence[Distribution], op: Operator) -> Distribution:
    vocab = dists[0].vocabulary
    if any(d.vocabulary != vocab for d in dists):
        raise ValueError("distributions must share a vocabulary")
    cols = np.stack([d.values for d in dists], axis=1)
    return Distribution(vocab, np.array([nary_apply(op, row) for row in cols.tolist()]))


def classical_extraction(fused) -> list[Formula]:
    """Formulas of the fused base strictly above its inconsistency degree."""
    base = fused.base if isinstance(fused, FusedBase) else fused
    return alpha_cut(base, base.inc, strict=True)


def reinject(formulas: Sequence[Formula], vocabulary=None) -> PossibilisticBase:
    """Lift a classical base back to certainty 1 so it can be fused again."""
    return PossibilisticBase(tuple(WeightedFormula(f, 1.0) for f in formulas),
                             None if vocabulary is None else tuple(vocabulary))


def classical_merge(bases: Sequence[PossibilisticBase], op: Operator) -> list[Formula]:
    return classical_extraction(fuse(bases, op))


# --------------------------------------------------------------------------
# reliability

def discount(base: PossibilisticBase, lam: float) -> PossibilisticBase:
    """Cap every weight of the base at the reliability degree ``lam``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("reliability must lie in [0, 1]")
    items = tuple(WeightedFormula(f, lam if w >= lam else w) for f, w in base.items)
    return PossibilisticBase(items, base.vocabulary)


def weighted_min_fuse(bases: Sequence[PossibilisticBase],
                      lambdas: Sequence[float]) -> FusedBase:
    if len(bases) != len(lambdas):
        raise ValueError(f"{len(bases)} bases but {len(lambdas)} reliability degrees")
    bases = align(list(bases))
    eps = settings.eps
    items, prov = [], []
    for i, (b, lam) in enumerate(zip(bases, lambdas)):
        d = discount(b, lam)
        kept = [j for j, it in enumerate(b.items) if min(it.weight, lam) > eps]
        items.extend(d.items)
        prov.extend(((i, j),) for j in kept)
    vocab = bases[0].vocabulary if bases else ()
    return FusedBase(PossibilisticBase(tuple(items), vocab), tuple(prov))


def weighted_min_distribution(dists: Sequence[Distribution],
                              lambdas: Sequence[float]) -> Distribution:
    vals = np.min([np.maximum(d.values, 1.0 - lam) for d, lam in zip(dists, lambdas)], axis=0)
    return Distribution(dists[0].vocabulary, vals)


def adaptive_fuse(bases: Sequence[PossibilisticBase], d: Operator, r: Operator,
                  h: int | None = None) -> PossibilisticBase:
    """Fuse with the adaptive operator; h defaults to 1 iff Inc(union) = 1."""
    if h is None:
        h = 1 if union(*bases).inc >= 1.0 - settings.eps else 0
    return fuse(bases, adaptive(d, r, h))


# --------------------------------------------------------------------------
# prioritized sources

def dictator_refine(pi1: Distribution, pi2: Distribution) -> Distribution:
    """Refine the ranking of ``pi1`` by ``pi2`` (lexicographic order).

    The output uses evenly spaced levels in (0, 1], the best rank at 1; only
    the induced ordering is meaningful.
    """
    if pi1.vocabulary != pi2.vocabulary:
        raise ValueError("distributions must share a vocabulary")
    digits = max(0, int(round(-math.log10(settings.eps))))
    keys = [(round(a, digits), round(b, digits))
            for a, b in zip(pi1.values.tolist(), pi2.values.tolist())]
    ranks = {k: r for r, k in enumerate(sorted(set(keys)))}
    m = len(ranks)
    return Distribution(pi1.vocabulary, [(ranks[k] + 1) / m for k in keys])


def distributions(bases: Sequence[PossibilisticBase]) -> list[Distribution]:
    return [to_distribution(b) for b in align(list(bases))]
