"""Binary combination operators on [0, 1] and their class membership.

An operator is admissible for fusion when ``1 (+) 1 = 1`` and it is monotone
in both arguments.  Class membership (conjunctive, reinforcement, ...) is
decided on a finite grid, with a witness reported for every violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from pathlib import Path
from typing import Callable, Sequence

from .config import settings
from .errors import ClassMismatchError, NaryUndefinedError, UnknownOperatorError

CLASSES = ("conjunctive", "disjunctive", "regular_disjunctive", "idempotent",
           "reinforcement", "progressive", "averaging")


@dataclass(frozen=True)
class Operator:
    name: str
    func: Callable[[float, float], float] = field(repr=False)
    associative: bool = True
    declared_classes: frozenset[str] = frozenset()
    nary_form: Callable[[Sequence[float]], float] | None = field(default=None, repr=False)
    levels: int | None = None  # grid resolution of table operators

    def __call__(self, a: float, b: float) -> float:
        return self.func(a, b)

    apply = __call__

    def has(self, cls: str) -> bool:
        return cls in self.declared_classes


def nary_apply(op: Operator, xs: Sequence[float]) -> float:
    """Combine a nonempty vector; a single value is returned unchanged."""
    xs = list(xs)
    if not xs:
        raise ValueError("nary_apply needs at least one value")
    if len(xs) == 1:
        return float(xs[0])
    if op.nary_form is not None:
        return float(op.nary_form(xs))
    if op.associative or len(xs) == 2:
        return float(reduce(op.func, xs))
    raise NaryUndefinedError(f"no n-ary form for non-associative operator {op.name}")


# --------------------------------------------------------------------------
# builtins


def _zero_reinf(a: float, b: float) -> float:
    if a >= 1.0:
        return b
    if b >= 1.0:
        return a
    return 0.0


def _gmean_n(xs):
    return math.prod(xs) ** (1.0 / len(xs))


def _dgmean_n(xs):
    return 1.0 - math.prod(1.0 - x for x in xs) ** (1.0 / len(xs))


def _frozen(*names):
    return frozenset(names)


BUILTINS: dict[str, Operator] = {
    op.name: op for op in [
        Operator("min", min, True, _frozen("conjunctive", "idempotent")),
        Operator("max", max, True,
                 _frozen("disjunctive", "regular_disjunctive", "idempotent")),
        Operator("prod", lambda a, b: a * b, True,
                 _frozen("conjunctive", "reinforcement", "progressive")),
        Operator("psum", lambda a, b: a + b - a * b, True,
                 _frozen("disjunctive", "regular_disjunctive")),
        # sqrt(a*1) != a, so the geometric average is not conjunctive
        Operator("gmean", lambda a, b: math.sqrt(a * b), False,
                 _frozen("idempotent", "averaging"), _gmean_n),
        Operator("dgmean", lambda a, b: 1.0 - math.sqrt((1.0 - a) * (1.0 - b)), False,
                 _frozen("disjunctive", "regular_disjunctive", "idempotent", "averaging"),
                 _dgmean_n),
        Operator("amean", lambda a, b: (a + b) / 2.0, False,
                 _frozen("idempotent", "averaging"), lambda xs: sum(xs) / len(xs)),
        Operator("luk", lambda a, b: max(0.0, a + b - 1.0), True,
                 _frozen("conjunctive", "reinforcement")),
        Operator("vac_disj", lambda a, b: 1.0, True, _frozen("disjunctive")),
        Operator("zero_reinf", _zero_reinf, True,
                 _frozen("conjunctive", "reinforcement")),
    ]
}


def builtin(name: str) -> Operator:
    try:
        return BUILTINS[name]
    except KeyError:
        raise UnknownOperatorError(
            f"unknown operator {name!r}; known: {', '.join(BUILTINS)}") from None


def adaptive(d: Operator, r: Operator, h: int) -> Operator:
    """Disjunctive behaviour when h = 1, reinforcement behaviour when h = 0."""
    if h not in (0, 1):
        raise ValueError("h must be 0 or 1")
    if not d.has("regular_disjunctive"):
        raise ClassMismatchError(f"{d.name} is not regular disjunctive")
    if not (r.has("reinforcement") and r.has("progressive")):
        raise ClassMismatchError(f"{r.name} is not a progressive reinforcement")

    def func(a, b):
        return max(min(h, d(a, b)), min(1 - h, r(a, b)))

    def nary(xs):
        return max(min(h, nary_apply(d, xs)), min(1 - h, nary_apply(r, xs)))

    chosen = d if h == 1 else r
    return Operator(f"adaptive({d.name},{r.name},h={h})", func, chosen.associative,
                    chosen.declared_classes, nary)


def from_table(levels: int, values: Sequence[float], name: str = "table") -> Operator:
    """Operator given by a (levels+1)^2 row-major grid, nearest-level lookup."""
    k = int(levels)
    if k < 2:
        raise ValueError("an operator table needs levels >= 2")
    if len(values) != (k + 1) ** 2:
        raise ValueError(f"expected {(k + 1) ** 2} values for levels={k}")
    rows = tuple(tuple(float(v) for v in values[i * (k + 1):(i + 1) * (k + 1)])
                 for i in range(k + 1))
    if any(not 0.0 <= v <= 1.0 for row in rows for v in row):
        raise ValueError("table values must lie in [0, 1]")

    def func(a, b):
        return rows[int(round(a * k))][int(round(b * k))]

    op = Operator(name, func, False)
    report = classify(op, 1.0 / k)
    declared = frozenset(c for c in CLASSES if report.verdicts[c].holds)
    return Operator(name, func, False, declared, levels=k)


def load_table(path) -> Operator:
    text = Path(path).read_text()
    tokens = text.split()
    if not tokens or not tokens[0].startswith("levels="):
        raise ValueError("operator table must start with 'levels=<k>'")
    levels = int(tokens[0].split("=", 1)[1])
    return from_table(levels, [float(t) for t in tokens[1:]], name=Path(path).stem)


# --------------------------------------------------------------------------
# grid classification


@dataclass(frozen=True)
class ClassVerdict:
    holds: bool
    witness: tuple[float, float] | None = None


@dataclass(frozen=True)
class OperatorClassReport:
    operator: str
    step: float
    verdicts: dict[str, ClassVerdict]
    contract: dict[str, ClassVerdict]

    @property
    def classes(self) -> frozenset[str]:
        return frozenset(c for c, v in self.verdicts.items() if v.holds)

    @property
    def admissible(self) -> bool:
        return all(v.holds for v in self.contract.values())

    def lines(self) -> list[str]:
        out = []
        for name, v in list(self.contract.items()) + list(self.verdicts.items()):
            mark = "yes" if v.holds else "no"
            wit = "" if v.witness is None else f"  (a={v.witness[0]:g}, b={v.witness[1]:g})"
            out.append(f"{name:20s} {mark}{wit}")
        return out


def _first(cells, bad):
    for a, b, v in cells:
        if bad(a, b, v):
            return ClassVerdict(False, (a, b))
    return ClassVerdict(True)


def classify(op: Operator, grid_step: float = 1 / 64) -> OperatorClassReport:
    if not 0.0 < grid_step <= 0.5:
        raise ValueError("grid_step must lie in (0, 0.5]")
    eps = settings.eps
    k = int(round(1.0 / grid_step))
    grid = [i / k for i in range(k + 1)]
    table = [[op(a, b) for b in grid] for a in grid]
    cells = [(grid[i], grid[j], table[i][j]) for i in range(k + 1) for j in range(k + 1)]
    edge = ([(a, 1.0, table[i][k]) for i, a in enumerate(grid)]
            + [(1.0, b, table[k][j]) for j, b in enumerate(grid)])
    interior = [(a, b, v) for a, b, v in cells if 0.0 < a < 1.0 and 0.0 < b < 1.0]

    def edge_other(a, b):
        return b if a == 1.0 else a

    v = {}
    v["conjunctive"] = _first(edge, lambda a, b, x: abs(x - edge_other(a, b)) > eps)
    v["disjunctive"] = _first(edge, lambda a, b, x: abs(x - 1.0) > eps)
    regular = _first([(a, b, x) for a, b, x in cells if a < 1.0 and b < 1.0],
                     lambda a, b, x: x >= 1.0 - eps)
    v["regular_disjunctive"] = v["disjunctive"] if not v["disjunctive"].holds else regular
    v["idempotent"] = _first([(a, a, table[i][i]) for i, a in enumerate(grid)],
                             lambda a, b, x: abs(x - a) > eps)
    v["reinforcement"] = _first(interior, lambda a, b, x: not x < min(a, b) - eps)
    nonzero = [(a, b, x) for a, b, x in cells if a > 0.0 and b > 0.0]
    v["progressive"] = (v["reinforcement"] if not v["reinforcement"].holds
                        else _first(nonzero, lambda a, b, x: x <= eps))
    bounded = _first(cells, lambda a, b, x: x > max(a, b) + eps or x < min(a, b) - eps)
    if bounded.holds:
        # the extremes themselves are excluded
        if (all(abs(x - min(a, b)) <= eps for a, b, x in cells)
                or all(abs(x - max(a, b)) <= eps for a, b, x in cells)):
            bounded = ClassVerdict(False)
    v["averaging"] = bounded

    contract = {"unit": ClassVerdict(abs(table[k][k] - 1.0) <= eps,
                                     None if abs(table[k][k] - 1.0) <= eps else (1.0, 1.0))}
    mono = ClassVerdict(True)
    for i in range(k + 1):
        for j in range(k + 1):
            if i < k and table[i + 1][j] < table[i][j] - eps:
                mono = ClassVerdict(False, (grid[i + 1], grid[j]))
                break
            if j < k and table[i][j + 1] < table[i][j] - eps:
                mono = ClassVerdict(False, (grid[i], grid[j + 1]))
                break
        if not mono.holds:
            break
    contract["monotone"] = mono
    return OperatorClassReport(op.name, grid_step, v, contract)


@lru_cache(maxsize=256)
def contract_report(op: Operator) -> OperatorClassReport:
    return classify(op, 1 / 64)


def weight_boost(op: Operator, alpha: float, beta: float) -> float:
    """Weight of (phi, alpha) fused with (phi, beta)."""
    return 1.0 - op(1.0 - alpha, 1.0 - beta)
