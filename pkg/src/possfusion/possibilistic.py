"""Weighted bases, their possibility distributions and graded inference."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import logic
from .config import settings
from .logic import Formula, Vocabulary


def clamp_weight(w: float) -> float:
    """Validate a weight, absorbing float noise within eps of the bounds."""
    w = float(w)
    eps = settings.eps
    if not (-eps <= w <= 1 + eps):
        raise ValueError(f"weight {w} outside [0, 1]")
    return min(1.0, max(0.0, w))


@dataclass(frozen=True)
class WeightedFormula:
    formula: Formula
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "weight", clamp_weight(self.weight))

    def __iter__(self):
        yield self.formula
        yield self.weight

    def __str__(self):
        return f"{self.formula} : {self.weight:g}"


@dataclass(frozen=True)
class PossibilisticBase:
    """Finite multiset of weighted formulas over a fixed vocabulary.

    Items with weight <= eps are dropped on construction.  The vocabulary
    defaults to the sorted atoms of the items.
    """

    items: tuple[WeightedFormula, ...] = ()
    vocabulary: Vocabulary | None = None

    def __post_init__(self):
        items = []
        for it in self.items:
            if not isinstance(it, WeightedFormula):
                it = WeightedFormula(*it)
            if it.weight > settings.eps:
                items.append(it)
        object.__setattr__(self, "items", tuple(items))
        need = logic.vocabulary_of(*(it.formula for it in items))
        if self.vocabulary is None:
            vocab = need
        else:
            vocab = tuple(self.vocabulary)
            missing = set(need) - set(vocab)
            if missing:
                raise logic.UnknownAtomError(
                    f"atoms {sorted(missing)} not in vocabulary")
        object.__setattr__(self, "vocabulary", vocab)

    @classmethod
    def of(cls, pairs: Iterable, vocabulary: Sequence[str] | None = None):
        """Build from ``(formula, weight)`` pairs; formulas may be text."""
        items = []
        for f, w in pairs:
            if isinstance(f, str):
                f = logic.parse(f)
            items.append(WeightedFormula(f, w))
        return cls(tuple(items), None if vocabulary is None else tuple(vocabulary))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __str__(self):
        return "{" + "; ".join(f"({it.formula}, {it.weight:g})" for it in self.items) + "}"

    def star(self) -> list[Formula]:
        """The classical base: formulas with weights forgotten."""
        return [it.formula for it in self.items]

    def weights(self) -> list[float]:
        """Distinct weights, decreasing, merging values closer than eps."""
        ws: list[float] = []
        for w in sorted((it.weight for it in self.items), reverse=True):
            if not ws or ws[-1] - w > settings.eps:
                ws.append(w)
        return ws

    def with_vocabulary(self, vocabulary: Sequence[str]) -> PossibilisticBase:
        vocab = logic.merge_vocabularies(self.vocabulary, vocabulary)
        if vocab == self.vocabulary:
            return self
        return PossibilisticBase(self.items, vocab)

    # cached semantic helpers -------------------------------------------------

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(logic.model_mask(it.formula, self.vocabulary) for it in self.items)

    @cached_property
    def _ladder(self) -> list[tuple[float, int]]:
        """(weight, mask of the weight-cut) for each distinct weight, decreasing."""
        eps = settings.eps
        order = sorted(range(len(self.items)), key=lambda i: -self.items[i].weight)
        ladder = []
        m = logic.full_mask(len(self.vocabulary))
        k = 0
        for w in self.weights():
            while k < len(order) and self.items[order[k]].weight >= w - eps:
                m &= self.masks[order[k]]
                k += 1
            ladder.append((w, m))
        return ladder

    def cut_mask(self, alpha: float, strict: bool = False) -> int:
        eps = settings.eps
        m = logic.full_mask(len(self.vocabulary))
        for it, mask in zip(self.items, self.masks):
            if (it.weight > alpha + eps) if strict else (it.weight >= alpha - eps):
                m &= mask
        return m

    @cached_property
    def inc(self) -> float:
        for w, m in self._ladder:
            if m == 0:
                return w
        return 0.0


def union(*bases: PossibilisticBase) -> PossibilisticBase:
    """Multiset union over the union vocabulary."""
    vocab = logic.merge_vocabularies(*(b.vocabulary for b in bases))
    return PossibilisticBase(tuple(it for b in bases for it in b.items), vocab)


def align(bases: Sequence[PossibilisticBase]) -> list[PossibilisticBase]:
    """Extend every base to the union vocabulary."""
    vocab = logic.merge_vocabularies(*(b.vocabulary for b in bases))
    return [b if b.vocabulary == vocab else b.with_vocabulary(vocab) for b in bases]


# --------------------------------------------------------------------------
# distributions

@dataclass(frozen=True, eq=False)
class Distribution:
    """Possibility degrees indexed by interpretation number."""

    vocabulary: Vocabulary
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (1 << len(self.vocabulary),):
            raise ValueError("distribution must cover every interpretation")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, key) -> float:
        if isinstance(key, str):
            key = int(key, 2)
        elif isinstance(key, tuple):
            key = logic.interpretation_index(key)
        return float(self.values[key])

    def allclose(self, other: Distribution, atol: float | None = None) -> bool:
        atol = settings.eps if atol is None else atol
        return (self.vocabulary == other.vocabulary
                and bool(np.all(np.abs(self.values - other.values) <= atol)))

    def height(self) -> float:
        return float(self.values.max())


def mask_to_array(mask: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = mask.to_bytes((size + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:size].astype(bool)


def to_distribution(base: PossibilisticBase) -> Distribution:
    n = len(base.vocabulary)
    logic.check_cap(n)
    worst = np.zeros(1 << n)
    for it, mask in zip(base.items, base.masks):
        falsified = ~mask_to_array(mask, n)
        worst = np.where(falsified, np.maximum(worst, it.weight), worst)
    return Distribution(base.vocabulary, 1.0 - worst)


def possibility(pi: Distribution, f: Formula) -> float:
    sel = mask_to_array(logic.model_mask(f, pi.vocabulary), len(pi.vocabulary))
    return float(pi.values[sel].max()) if sel.any() else 0.0


def necessity(pi: Distribution, f: Formula) -> float:
    return 1.0 - possibility(pi, logic.Not(f))


# --------------------------------------------------------------------------
# syntactic inference

def alpha_cut(base: PossibilisticBase, alpha: float, strict: bool = False) -> list[Formula]:
    eps = settings.eps
    if strict:
        return [it.formula for it in base.items if it.weight > alpha + eps]
    return [it.formula for it in base.items if it.weight >= alpha - eps]


def inconsistency_degree(base: PossibilisticBase) -> float:
    return base.inc


def _entails_mask(premises: int, f: Formula, vocabulary: Vocabulary) -> bool:
    return premises & ~logic.model_mask(f, vocabulary) == 0


def _vocab_for(base: PossibilisticBase, f: Formula) -> PossibilisticBase:
    if logic.atoms(f) <= set(base.vocabulary):
        return base
    return base.with_vocabulary(logic.atoms(f))


def pi_entails(base: PossibilisticBase, f: Formula, alpha: float) -> bool:
    """Graded consequence: alpha above Inc and the alpha-cut entails f."""
    base = _vocab_for(base, f)
    if alpha <= base.inc + settings.eps:
        return False
    return _entails_mask(base.cut_mask(alpha), f, base.vocabulary)


def entailment_degree(base: PossibilisticBase, f: Formula) -> float:
    """Largest weight at which f is a graded consequence; 0 if none."""
    base = _vocab_for(base, f)
    if logic.is_tautology(f, base.vocabulary):
        return 1.0
    inc = base.inc
    for w, m in base._ladder:
        if w <= inc + settings.eps:
            break
        if _entails_mask(m, f, base.vocabulary):
            return w
    return 0.0


def _index_of(base: PossibilisticBase, item: WeightedFormula) -> int:
    eps = settings.eps
    for i, it in enumerate(base.items):
        if it.formula == item.formula and abs(it.weight - item.weight) <= eps:
            return i
    raise ValueError(f"{item} is not an item of the base")


def is_subsumed(base: PossibilisticBase, item, strict: bool = False) -> bool:
    item = item if isinstance(item, WeightedFormula) else WeightedFormula(*item)
    base = _vocab_for(base, item.formula)
    if strict:
        return _entails_mask(base.cut_mask(item.weight, strict=True),
                             item.formula, base.vocabulary)
    skip = _index_of(base, item)
    return _subsumed_at(base, skip)


def _subsumed_at(base: PossibilisticBase, skip: int) -> bool:
    eps = settings.eps
    alpha = base.items[skip].weight
    m = logic.full_mask(len(base.vocabulary))
    for i, (it, mask) in enumerate(zip(base.items, base.masks)):
        if i != skip and it.weight >= alpha - eps:
            m &= mask
    return m & ~base.masks[skip] == 0


def normalize(base: PossibilisticBase) -> PossibilisticBase:
    """Drop tautologies, merge duplicate formulas, remove subsumed items."""
    full = logic.full_mask(len(base.vocabulary))
    best: dict[Formula, float] = {}
    for it, mask in zip(base.items, base.masks):
        if mask == full:
            continue
        if it.weight > best.get(it.formula, -1.0):
            best[it.formula] = it.weight
    current = PossibilisticBase(tuple(WeightedFormula(f, w) for f, w in best.items()),
                                base.vocabulary)
    changed = True
    while changed:
        changed = False
        for i in range(len(current.items)):
            if _subsumed_at(current, i):
                current = PossibilisticBase(current.items[:i] + current.items[i + 1:],
                                            base.vocabulary)
                changed = True
                break
    return current


def base_equivalent(b1: PossibilisticBase, b2: PossibilisticBase) -> bool:
    """Stratified equivalence: classically equivalent cuts at every level."""
    vocab = logic.merge_vocabularies(b1.vocabulary, b2.vocabulary)
    b1, b2 = b1.with_vocabulary(vocab), b2.with_vocabulary(vocab)
    levels = sorted(set(b1.weights()) | set(b2.weights()) | {0.0})
    return all(b1.cut_mask(a) == b2.cut_mask(a) for a in levels)
