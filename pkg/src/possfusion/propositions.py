"""Instance checkers for the conditional fusion properties.

Each checker takes two bases and an operator and answers ``holds``,
``fails`` or ``guarded`` (precondition not met).  ``search`` runs a seeded
campaign and counts the three outcomes; ``class_level`` drives the
postulate checkers over every registry operator of a given class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import logic
from . import fixtures as fx
from .config import settings
from .fusion import adaptive_fuse, classical_extraction, fuse
from .operators import BUILTINS, Operator, builtin
from .possibilistic import (PossibilisticBase, WeightedFormula, alpha_cut,
                            entailment_degree, pi_entails, union)
from .postulates import check_Maj, random_search, self_power, test_family
from .sampling import (WEIGHT_GRID, RandomBaseSpec, random_base, random_literal,
                       trial_rng)

HOLDS, FAILS, GUARDED = "holds", "fails", "guarded"


@dataclass
class PropVerdict:
    prop: str
    status: str
    detail: str = ""


def _ok(prop, cond, detail=""):
    return PropVerdict(prop, HOLDS if cond else FAILS, "" if cond else detail)


def _guard(prop, why):
    return PropVerdict(prop, GUARDED, why)


def _eps():
    return settings.eps


def _both_consistent(b1, b2):
    return all(logic.is_consistent(b.star(), b.vocabulary) for b in (b1, b2))


def _common(b1, b2, seed=0):
    """Family members entailed by both bases, with their two degrees."""
    for f in test_family([b1, b2], seed):
        a, b = entailment_degree(b1, f), entailment_degree(b2, f)
        if a > _eps() and b > _eps():
            yield f, a, b


def _as_op(op):
    return builtin(op) if isinstance(op, str) else op


# --------------------------------------------------------------------------

def prop1(b1, b2, op) -> PropVerdict:
    """Conjunctive, consistent union: extraction is the conjunction of both."""
    op = _as_op(op)
    u = union(b1, b2)
    if not logic.is_consistent(u.star(), u.vocabulary):
        return _guard("1", "union inconsistent")
    got = classical_extraction(fuse([b1, b2], op))
    return _ok("1", logic.equivalent(got, u.star(), u.vocabulary), "extraction differs")


def prop2(b1, b2, op) -> PropVerdict:
    """Conjunctive, B1 infers B2: extraction is B1*."""
    op = _as_op(op)
    if not logic.is_consistent(b1.star(), b1.vocabulary):
        return _guard("2", "B1 inconsistent")
    if not all(pi_entails(b1, f, w) for f, w in b2.items):
        return _guard("2", "B1 does not infer B2")
    vocab = logic.merge_vocabularies(b1.vocabulary, b2.vocabulary)
    got = classical_extraction(fuse([b1, b2], op))
    return _ok("2", logic.equivalent(got, b1.star(), vocab), "extraction differs from B1*")


def prop3(b1, b2, op) -> PropVerdict:
    """Disjunctive, inconsistent union: each side loses an item."""
    op = _as_op(op)
    if not _both_consistent(b1, b2):
        return _guard("3", "a source is inconsistent")
    u = union(b1, b2)
    if logic.is_consistent(u.star(), u.vocabulary):
        return _guard("3", "union consistent")
    fused = fuse([b1, b2], op)
    lost = [any(not pi_entails(fused, f, w) for f, w in b.items) for b in (b1, b2)]
    return _ok("3", all(lost), "fusion infers a whole source")


def prop4(b1, b2, op) -> PropVerdict:
    """Regular disjunctive: extraction is B1* or B2*."""
    op = _as_op(op)
    if not _both_consistent(b1, b2):
        return _guard("4", "a source is inconsistent")
    vocab = logic.merge_vocabularies(b1.vocabulary, b2.vocabulary)
    got = classical_extraction(fuse([b1, b2], op))
    want = logic.Or(logic.conjoin(b1.star()), logic.conjoin(b2.star()))
    return _ok("4", logic.equivalent(got, [want], vocab), "extraction differs from B1* | B2*")


def prop5(b1, b2, op, seed=0, family=None) -> PropVerdict:
    """Idempotent: without outside help, the fused degree is at most max(a, b)."""
    op = _as_op(op)
    fused = fuse([b1, b2], op)
    vocab = fused.vocabulary
    applicable = False
    for f in test_family([b1, b2], seed) if family is None else family:
        for x, y in ((b1, b2), (b2, b1)):
            for alpha in x.weights():
                if not pi_entails(x, f, alpha):
                    continue
                for beta in y.weights():
                    if beta > alpha + _eps() or not pi_entails(y, f, beta):
                        continue
                    gamma = alpha_cut(x, alpha, strict=True) + alpha_cut(y, alpha, strict=True)
                    if logic.entails(gamma, f, vocab):
                        continue
                    applicable = True
                    deg = entailment_degree(fused, f)
                    if deg > alpha + _eps():
                        return PropVerdict("5", FAILS, f"{f}: {deg:.6g} > {alpha:.6g}")
    return PropVerdict("5", HOLDS) if applicable else _guard("5", "every pair helped by the strict cuts")


def _strengthened(prop, b1, b2, fused, seed):
    applicable = False
    for f, a, b in _common(b1, b2, seed):
        applicable = True
        g = entailment_degree(fused, f)
        need_one = max(a, b) >= 1.0 - _eps()
        if (need_one and g < 1.0 - _eps()) or (not need_one and g <= max(a, b) + _eps()):
            return PropVerdict(prop, FAILS, f"{f}: {g:.6g} vs {a:.6g}, {b:.6g}")
    return PropVerdict(prop, HOLDS) if applicable else _guard(prop, "no common consequence")


def prop6(b1, b2, op, seed=0) -> PropVerdict:
    """Reinforcement, consistent union: common conclusions get strictly stronger."""
    op = _as_op(op)
    u = union(b1, b2)
    if not logic.is_consistent(u.star(), u.vocabulary):
        return _guard("6", "union inconsistent")
    return _strengthened("6", b1, b2, fuse([b1, b2], op), seed)


def prop7(b1, b2, op, seed=0) -> PropVerdict:
    """Progressive reinforcement with preserved Inc < 1: as `prop6`."""
    op = _as_op(op)
    if not _both_consistent(b1, b2):
        return _guard("7", "a source is inconsistent")
    inc_u = union(b1, b2).inc
    fused = fuse([b1, b2], op)
    if inc_u >= 1.0 - _eps():
        return _guard("7", "Inc(union) = 1")
    if abs(fused.inc - inc_u) > _eps():
        return _guard("7", f"Inc not preserved ({inc_u:.6g} -> {fused.inc:.6g})")
    return _strengthened("7", b1, b2, fused, seed)


def prop8(b1, b2, d="max", r="prod", seed=0) -> PropVerdict:
    """Adaptive operator: common conclusions survive with a positive degree."""
    d, r = _as_op(d), _as_op(r)
    if not _both_consistent(b1, b2):
        return _guard("8", "a source is inconsistent")
    inc_u = union(b1, b2).inc
    fused = adaptive_fuse([b1, b2], d, r)
    if inc_u < 1.0 - _eps() and abs(fused.inc - inc_u) > _eps():
        return _guard("8", "Inc not preserved")
    applicable = False
    for f, _, _ in _common(b1, b2, seed):
        applicable = True
        if entailment_degree(fused, f) <= _eps():
            return PropVerdict("8", FAILS, f"{f} lost")
    return PropVerdict("8", HOLDS) if applicable else _guard("8", "no common consequence")


def averaging(b1, b2, op="amean", seed=0) -> PropVerdict:
    """Arithmetic mean, consistent union: degree at least the mean of the two."""
    op = _as_op(op)
    u = union(b1, b2)
    if not logic.is_consistent(u.star(), u.vocabulary):
        return _guard("avg", "union inconsistent")
    fused = fuse([b1, b2], op)
    applicable = False
    for f, a, b in _common(b1, b2, seed):
        applicable = True
        g = entailment_degree(fused, f)
        if g < (a + b) / 2.0 - _eps():
            return PropVerdict("avg", FAILS, f"{f}: {g:.6g} < {(a + b) / 2:.6g}")
    return PropVerdict("avg", HOLDS) if applicable else _guard("avg", "no common consequence")


def _stronger(g, w):
    # a certain item can only stay certain
    if w >= 1.0 - _eps():
        return g >= 1.0 - _eps()
    return g > w + _eps()


def prop13(b1, k, op, n_max=64) -> PropVerdict:
    """Progressive reinforcement: repeating K enough strengthens all of K."""
    op = _as_op(op)
    certain = alpha_cut(b1, 1.0)
    vocab = logic.merge_vocabularies(b1.vocabulary, k.vocabulary)
    if not logic.is_consistent(certain + k.star(), vocab):
        return _guard("13", "K contradicts certain formulas")
    for n in range(1, n_max + 1):
        fused = fuse([b1, self_power(k, op, n)], op)
        if all(_stronger(entailment_degree(fused, f), w) for f, w in k.items):
            return PropVerdict("13", HOLDS, f"n = {n}")
    return PropVerdict("13", FAILS, f"no n <= {n_max}")


# --------------------------------------------------------------------------
# problem generators

def _pair(rng, spec):
    return random_base(rng, spec), random_base(rng, spec)


def _entailed_pair(rng, spec):
    """B2 made of weakened consequences of B1 at no higher weight."""
    b1 = random_base(rng, spec)
    items = []
    for _ in range(rng.randint(1, spec.max_formulas)):
        f, w = rng.choice(b1.items)
        g = logic.Or(f, random_literal(rng, spec.vocabulary)) if rng.random() < 0.6 else f
        items.append(WeightedFormula(g, rng.choice([x for x in WEIGHT_GRID if x <= w])))
    return b1, PossibilisticBase(tuple(items), spec.vocabulary)


def _certain_conflict_pair(rng, spec):
    """Half the time, force a fully certain conflict on one literal."""
    b1, b2 = _pair(rng, spec)
    if rng.random() < 0.5:
        lit = random_literal(rng, spec.vocabulary)
        c1 = PossibilisticBase(b1.items + (WeightedFormula(lit, 1.0),), spec.vocabulary)
        c2 = PossibilisticBase(b2.items + (WeightedFormula(logic.Not(lit), 1.0),), spec.vocabulary)
        if _both_consistent(c1, c2):
            return c1, c2
    return b1, b2


def _shared_pair(rng, spec):
    """Both bases share one formula, so common conclusions exist."""
    b1, b2 = _pair(rng, spec)
    f, _ = rng.choice(b1.items)
    b2 = PossibilisticBase(b2.items + (WeightedFormula(f, rng.choice(WEIGHT_GRID)),), spec.vocabulary)
    if not logic.is_consistent(b2.star(), spec.vocabulary):
        return b1, PossibilisticBase(b2.items[-1:], spec.vocabulary)
    return b1, b2


@dataclass
class PropSpec:
    prop: str
    check: Callable
    classes: tuple[str, ...]
    sample: Callable = _pair
    guard_fixture: Callable | None = None


def _ops_for(classes):
    return [op for op in BUILTINS.values() if all(op.has(c) for c in classes)]


PROPS: dict[str, PropSpec] = {
    "1": PropSpec("1", prop1, ("conjunctive",), _shared_pair,
                  lambda: fx.min_p4()),
    "2": PropSpec("2", prop2, ("conjunctive",), _entailed_pair,
                  lambda: fx.max_p2_p6()),
    "3": PropSpec("3", prop3, ("disjunctive",), _pair,
                  lambda: fx.max_p2_p6()),
    "4": PropSpec("4", prop4, ("regular_disjunctive",), _pair,
                  lambda: (PossibilisticBase.of([("phi", .5), ("~phi", .5)]),
                           PossibilisticBase.of([("phi", .5)]))),
    "5": PropSpec("5", prop5, ("idempotent",), _shared_pair,
                  lambda: fx.example1()[:2] + ({"family": [logic.Atom("phi")]},)),
    "6": PropSpec("6", prop6, ("reinforcement",), _shared_pair,
                  lambda: fx.min_p7()),
    "7": PropSpec("7", prop7, ("reinforcement", "progressive"), _shared_pair,
                  lambda: fx.example2()[:2]),
}


@dataclass
class SearchReport:
    prop: str
    operator: str
    trials: int
    counts: dict[str, int] = field(default_factory=lambda: {HOLDS: 0, FAILS: 0, GUARDED: 0})
    first_violation: PropVerdict | None = None
    guard_fixture_fired: bool | None = None

    @property
    def ok(self) -> bool:
        return self.counts[FAILS] == 0 and self.guard_fixture_fired is not False

    def line(self) -> str:
        g = {None: "-", True: "fired", False: "MISSED"}[self.guard_fixture_fired]
        return (f"Prop {self.prop:4s} {self.operator:28s} applicable={self.counts[HOLDS] + self.counts[FAILS]:4d} "
                f"violations={self.counts[FAILS]} guarded={self.counts[GUARDED]:4d} guard-fixture={g}")


def search(prop: str, op, trials: int = 200, seed: int = 0,
           spec: RandomBaseSpec | None = None) -> SearchReport:
    """Seeded campaign of one conditional property for one operator."""
    spec = spec or RandomBaseSpec(trials=trials, seed=seed)
    extra = {}
    if prop == "8":
        d, r = op
        check = lambda b1, b2, seed: prop8(b1, b2, d, r, seed)  # noqa: E731
        sample, guard_fixture, name = _certain_conflict_pair, lambda: fx.example2()[:2], f"adaptive({d},{r})"
    elif prop == "avg":
        check = lambda b1, b2, seed: averaging(b1, b2, op, seed)  # noqa: E731
        sample, guard_fixture, name = _shared_pair, lambda: fx.min_p7(), _as_op(op).name
    else:
        p = PROPS[prop]
        op = _as_op(op)
        if p.check in (prop5, prop6, prop7):
            check = lambda b1, b2, seed, **kw: p.check(b1, b2, op, seed, **kw)  # noqa: E731
        else:
            check = lambda b1, b2, seed: p.check(b1, b2, op)  # noqa: E731
        sample, guard_fixture, name = p.sample, p.guard_fixture, op.name
    rep = SearchReport(prop, name, trials)
    for t in range(trials):
        rng = trial_rng(spec.seed, f"prop{prop}", t)
        b1, b2 = sample(rng, spec)
        v = check(b1, b2, seed=t)
        rep.counts[v.status] += 1
        if v.status == FAILS and rep.first_violation is None:
            v.detail = f"trial {t}: {v.detail}"
            rep.first_violation = v
    if guard_fixture is not None:
        b1, b2, *kw = guard_fixture()
        rep.guard_fixture_fired = check(b1, b2, seed=0, **(kw[0] if kw else {})).status == GUARDED
    return rep


def props_1_to_8(trials: int = 200, seed: int = 0) -> list[SearchReport]:
    reports = []
    for key, p in PROPS.items():
        for op in _ops_for(p.classes):
            reports.append(search(key, op, trials, seed))
    for d, r in itertools.product(("max", "psum", "dgmean"), ("prod",)):
        reports.append(search("8", (d, r), trials, seed))
    reports.append(search("avg", "amean", trials, seed))
    return reports


# --------------------------------------------------------------------------
# class-level results on postulates

CLASS_LEVEL = {
    "9": ((), ("P3",)),
    "10": (("idempotent",), ("Arb",)),
    "11": (("regular_disjunctive",), ("P1", "P4", "P5", "P7")),
    "12": (("conjunctive",), ("P2", "P6")),
    "14": (("reinforcement", "progressive"), ("P1", "P2", "P6", "P7", "Maj")),
    "15": (("amean",), ("P2", "P4", "P5", "P6", "Arb")),
}
CONDITIONED = {("14", "P1"), ("14", "P7"), ("14", "Maj")}


@dataclass
class ClassLevelResult:
    prop: str
    operator: str
    postulate: str
    status: str
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != "fails"

    def line(self) -> str:
        return f"Prop {self.prop:3s} {self.operator:10s} {self.postulate:4s} {self.status:15s} {self.detail}"


def class_level(prop: str, trials: int = 200, seed: int = 0) -> list[ClassLevelResult]:
    classes, posts = CLASS_LEVEL[prop]
    if classes == ("amean",):
        ops = [builtin("amean")]
    else:
        ops = _ops_for(classes)
    spec = RandomBaseSpec(trials=trials, seed=seed)
    out = []
    for op in ops:
        for p in posts:
            v = random_search(spec, p, op, conditioned=(prop, p) in CONDITIONED)
            out.append(ClassLevelResult(prop, op.name, p, v.status, v.detail))
    return out


def prop13_search(trials: int = 200, seed: int = 0, op="prod") -> SearchReport:
    op = _as_op(op)
    spec = RandomBaseSpec(trials=trials, seed=seed)
    rep = SearchReport("13", op.name, trials)
    for t in range(trials):
        rng = trial_rng(seed, "prop13", t)
        v = prop13(random_base(rng, spec), random_base(rng, spec), op)
        rep.counts[v.status] += 1
        if v.status == FAILS and rep.first_violation is None:
            rep.first_violation = v
    rep.guard_fixture_fired = prop13(fx.strong_conflict()[0], fx.strong_conflict()[1], op).status == GUARDED
    return rep


def luk_majority_failure() -> bool:
    """The non-progressive Lukasiewicz norm loses K under repetition."""
    b = fx.luk_maj()
    return check_Maj(list(b[:2]), b[2], "luk", conditioned=True).fails
