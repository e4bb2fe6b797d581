"""Checkers for the prioritized merging postulates and the Table-1 report.

Every checker returns a :class:`PostulateVerdict`.  A ``fails`` verdict
carries as witness the exact keyword arguments of the check, so
``replay(verdict)`` re-runs it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import kbio, logic
from .config import settings
from .fusion import fuse, fuse2
from .logic import Formula
from .operators import Operator, builtin
from .possibilistic import (PossibilisticBase, alpha_cut, base_equivalent,
                            entailment_degree, normalize, pi_entails, union)
from .sampling import (RandomBaseSpec, equivalent_variant, random_base, random_bases,
                       random_formula, trial_rng)

HOLDS, FAILS, NA = "holds", "fails", "not-applicable"
POSTULATES = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "Arb", "Maj")

FOOTNOTES = {
    "2": "Inc(B1 u ... u Bn) < 1",
    "3": "Inc(fusion) = Inc(B1 u B2) and Inc(B1 u B2) < 1",
    "4": "K does not contradict completely certain formulas",
}


@dataclass
class PostulateVerdict:
    postulate: str
    status: str
    operator: str
    witness: dict | None = None
    condition_notes: str = ""
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS


def _op(op) -> Operator:
    return builtin(op) if isinstance(op, str) else op


def _verdict(name, ok, op, args, notes="", detail=""):
    return PostulateVerdict(name, HOLDS if ok else FAILS, op.name,
                            None if ok else dict(args, op=op), notes, detail)


def _na(name, op, notes="", detail=""):
    return PostulateVerdict(name, NA, op.name, None, notes, detail)


def _eps():
    return settings.eps


def _consistent(base: PossibilisticBase) -> bool:
    return logic.is_consistent(base.star(), base.vocabulary)


def first_unentailed(left: PossibilisticBase, right: PossibilisticBase,
                     weighted: bool = True):
    """First item of ``right`` not inferred from ``left``, or None.

    Items of ``right`` at or below Inc(left) are drowned and skipped.  With
    ``weighted`` an item must be inferred at its own weight, otherwise at any
    positive degree.
    """
    inc = left.inc
    for it in right.items:
        if it.weight <= inc + _eps():
            continue
        if weighted:
            ok = pi_entails(left, it.formula, it.weight)
        else:
            ok = entailment_degree(left, it.formula) > _eps()
        if not ok:
            return it
    return None


def test_family(bases: Sequence[PossibilisticBase], seed: int = 0,
                extra: int = 6) -> list[Formula]:
    """Source formulas, their pairwise disjunctions, literals, random formulas."""
    vocab = logic.merge_vocabularies(*(b.vocabulary for b in bases))
    out: dict[Formula, None] = {}
    src = [f for b in bases for f in b.star()]
    for f in src:
        out[f] = None
    for f, g in itertools.combinations(src, 2):
        out[logic.Or(f, g)] = None
    for a in vocab:
        out[logic.Atom(a)] = None
        out[logic.Not(logic.Atom(a))] = None
    if vocab:
        rng = trial_rng(seed, "family", 0)
        for _ in range(extra):
            out[random_formula(rng, vocab, 3)] = None
    return list(out)


# --------------------------------------------------------------------------
# individual postulates

def check_P1(bases, op, conditioned: bool = False) -> PostulateVerdict:
    op, bases = _op(op), list(bases)
    notes = ""
    if conditioned:
        notes = "footnote 2: " + FOOTNOTES["2"]
        if union(*bases).inc >= 1.0 - _eps():
            return _na("P1", op, notes, "Inc(union) = 1")
    inc = fuse(bases, op).inc
    return _verdict("P1", inc < 1.0 - _eps(), op,
                    {"bases": bases, "conditioned": conditioned}, notes,
                    f"Inc(fusion) = {inc:.6g}")


def check_P2(bases, op, family=None, seed: int = 0) -> PostulateVerdict:
    op, bases = _op(op), list(bases)
    u = union(*bases)
    family = test_family(bases, seed) if family is None else list(family)
    notes = f"iff checked on a finite family of {len(family)} formulas"
    if not _consistent(u):
        return _na("P2", op, notes, "union inconsistent")
    fused = fuse(bases, op)
    for f in family:
        a = entailment_degree(fused, f) > _eps()
        b = entailment_degree(u, f) > _eps()
        if a != b:
            side = "fusion only" if a else "union only"
            return _verdict("P2", False, op, {"bases": bases, "family": [f]}, notes,
                            f"{f} entailed by {side}")
    return _verdict("P2", True, op, {}, notes)


def find_bijection(bases, bases2):
    if len(bases) != len(bases2):
        return None
    for perm in itertools.permutations(range(len(bases2))):
        if all(base_equivalent(b, bases2[j]) for b, j in zip(bases, perm)):
            return perm
    return None


def check_P3(bases, bases2, op, bijection=None) -> PostulateVerdict:
    op, bases, bases2 = _op(op), list(bases), list(bases2)
    if bijection is None:
        bijection = find_bijection(bases, bases2)
    elif not all(base_equivalent(b, bases2[j]) for b, j in zip(bases, bijection)):
        bijection = None
    if bijection is None:
        return _na("P3", op, detail="no bijection between equivalent bases")
    ok = base_equivalent(fuse(bases, op), fuse(bases2, op))
    return _verdict("P3", ok, op, {"bases": bases, "bases2": bases2}, "",
                    f"bijection {tuple(bijection)}")


def check_P4(b1, b2, op) -> PostulateVerdict:
    op = _op(op)
    if _consistent(union(b1, b2)):
        return _na("P4", op, detail="union consistent")
    fused = fuse([b1, b2], op)
    kept = []
    for name, b in (("B1", b1), ("B2", b2)):
        if all(pi_entails(fused, it.formula, it.weight) for it in b.items):
            kept.append(name)
    return _verdict("P4", not kept, op, {"b1": b1, "b2": b2}, "",
                    f"fusion infers all of {', '.join(kept)}" if kept else "")


def _p5p6(name, bases, bases2, op, left_is_joint, weighted):
    op, bases, bases2 = _op(op), list(bases), list(bases2)
    f1, f2 = fuse(bases, op), fuse(bases2, op)
    separate = union(f1, f2)
    notes = "item-wise at the item's weight" if weighted else "item-wise, positive degree"
    if not _consistent(separate):
        return _na(name, op, notes, "fused bases mutually inconsistent")
    joint = fuse(bases + bases2, op)
    left, right = (joint, separate) if left_is_joint else (separate, joint)
    miss = first_unentailed(left, right, weighted)
    args = {"bases": bases, "bases2": bases2, "op": op}
    if name == "P6":
        args["weighted"] = weighted
    return _verdict(name, miss is None, op, args, notes,
                    "" if miss is None else f"({miss.formula}, {miss.weight:.6g}) not inferred")


def check_P5(bases, bases2, op) -> PostulateVerdict:
    return _p5p6("P5", bases, bases2, op, left_is_joint=False, weighted=True)


def check_P6(bases, bases2, op, weighted: bool = False) -> PostulateVerdict:
    return _p5p6("P6", bases, bases2, op, left_is_joint=True, weighted=weighted)


def check_P7(b1, b2, op, family=None, conditioned: bool = False,
             seed: int = 0) -> PostulateVerdict:
    op = _op(op)
    fused = fuse([b1, b2], op)
    notes = ""
    if conditioned:
        notes = "footnote 3: " + FOOTNOTES["3"]
        u = union(b1, b2)
        if u.inc >= 1.0 - _eps() or abs(fused.inc - u.inc) > _eps():
            return _na("P7", op, notes, f"Inc(union) = {u.inc:.6g}, Inc(fusion) = {fused.inc:.6g}")
    family = test_family([b1, b2], seed) if family is None else list(family)
    for f in family:
        a, b = entailment_degree(b1, f), entailment_degree(b2, f)
        if a > _eps() and b > _eps() and entailment_degree(fused, f) <= _eps():
            return _verdict("P7", False, op, {"b1": b1, "b2": b2, "family": [f],
                                              "conditioned": conditioned},
                            notes, f"common consequence {f} lost")
    return _verdict("P7", True, op, {}, notes)


def self_power(k: PossibilisticBase, op: Operator, n: int) -> PossibilisticBase:
    """K combined with itself n times (left fold), normalized between steps."""
    acc = k
    for _ in range(n - 1):
        acc = normalize(fuse2(acc, k, op).base)
    return acc


def _powers(k, op, n_max):
    acc = k
    yield 1, acc
    for n in range(2, n_max + 1):
        acc = normalize(fuse2(acc, k, op).base)
        yield n, acc


def check_Arb(bases, k, op, n_max: int | None = None) -> PostulateVerdict:
    op, bases = _op(op), list(bases)
    n_max = settings.n_max if n_max is None else n_max
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    ref = fuse(bases + [k], op)
    prev = None
    for n, kn in _powers(k, op, n_max):
        if n == 1:
            prev = kn
            continue
        if not base_equivalent(fuse(bases + [kn], op), ref):
            return _verdict("Arb", False, op, {"bases": bases, "k": k, "n_max": n},
                            f"checked n = 2..{n}", f"differs at n = {n}")
        if op.associative and base_equivalent(kn, prev):
            break
        prev = kn
    return _verdict("Arb", True, op, {}, f"checked n = 2..{n_max}")


def check_Maj(bases, k, op, n_max: int | None = None,
              conditioned: bool = False) -> PostulateVerdict:
    op, bases = _op(op), list(bases)
    n_max = settings.n_max if n_max is None else n_max
    notes = ""
    if conditioned:
        notes = "footnote 4: " + FOOTNOTES["4"]
        certain = alpha_cut(union(*bases), 1.0) if bases else []
        vocab = logic.merge_vocabularies(k.vocabulary, *(b.vocabulary for b in bases))
        if not logic.is_consistent(certain + k.star(), vocab):
            return _na("Maj", op, notes, "K contradicts certain formulas")
    prev = None
    stalled = False
    for n, kn in _powers(k, op, n_max):
        fused = fuse(bases + [kn], op)
        if all(entailment_degree(fused, f) > _eps() for f in k.star()):
            return _verdict("Maj", True, op, {}, notes, f"K inferred at n = {n}")
        if prev is not None and op.associative and base_equivalent(kn, prev):
            stalled = True
            break
        prev = kn
    detail = ("K^n is stationary; no n works" if stalled
              else f"bounded-negative: no n <= {n_max}")
    return _verdict("Maj", False, op, {"bases": bases, "k": k, "n_max": n_max,
                                       "conditioned": conditioned}, notes, detail)


CHECKS: dict[str, Callable[..., PostulateVerdict]] = {
    "P1": check_P1, "P2": check_P2, "P3": check_P3, "P4": check_P4,
    "P5": check_P5, "P6": check_P6, "P7": check_P7, "Arb": check_Arb, "Maj": check_Maj,
}


def replay(verdict: PostulateVerdict) -> PostulateVerdict:
    if verdict.witness is None:
        raise ValueError("verdict has no witness")
    return CHECKS[verdict.postulate](**verdict.witness)


# --------------------------------------------------------------------------
# randomized search

# enough repetitions for two sources on the 0.1 grid
MAJ_SEARCH_N_MAX = 64


def sample_check(postulate: str, op: Operator, spec: RandomBaseSpec, trial: int,
                 conditioned: bool = False, n_max: int | None = None) -> PostulateVerdict:
    """Draw one problem shaped for ``postulate`` and check it."""
    rng = trial_rng(spec.seed, postulate, trial)
    if postulate == "P1":
        return check_P1(random_bases(rng, spec), op, conditioned)
    if postulate == "P2":
        return check_P2(random_bases(rng, spec), op, seed=trial)
    if postulate == "P3":
        bases = random_bases(rng, spec)
        variants = [equivalent_variant(rng, b) for b in bases]
        perm = list(range(len(bases)))
        rng.shuffle(perm)
        bases2 = [None] * len(bases)
        for i, j in enumerate(perm):
            bases2[j] = variants[i]
        return check_P3(bases, bases2, op, bijection=tuple(perm))
    if postulate == "P4":
        b1, b2 = random_bases(rng, spec, 2, 2)
        return check_P4(b1, b2, op)
    if postulate in ("P5", "P6"):
        bases = random_bases(rng, spec, 1, 2)
        bases2 = random_bases(rng, spec, 1, 2)
        return CHECKS[postulate](bases, bases2, op)
    if postulate == "P7":
        b1, b2 = random_bases(rng, spec, 2, 2)
        return check_P7(b1, b2, op, conditioned=conditioned, seed=trial)
    if postulate == "Arb":
        bases = random_bases(rng, spec, 0, 2)
        return check_Arb(bases, random_base(rng, spec), op, n_max or settings.n_max)
    if postulate == "Maj":
        bases = random_bases(rng, spec, 1, 2)
        return check_Maj(bases, random_base(rng, spec), op,
                         n_max or MAJ_SEARCH_N_MAX, conditioned)
    raise KeyError(postulate)


def random_search(spec: RandomBaseSpec, postulate: str, op, conditioned: bool = False,
                  n_max: int | None = None) -> PostulateVerdict:
    """First violation over ``spec.trials`` seeded samples, else holds-on-sample."""
    op = _op(op)
    applicable = 0
    notes = ""
    for trial in range(spec.trials):
        v = sample_check(postulate, op, spec, trial, conditioned, n_max)
        notes = notes or v.condition_notes
        if v.status == NA:
            continue
        applicable += 1
        if v.fails:
            v.detail = f"trial {trial}: {v.detail}"
            return v
    if applicable == 0:
        return _na(postulate, op, notes, f"no applicable sample in {spec.trials} trials")
    return PostulateVerdict(postulate, HOLDS, op.name, None, notes,
                            f"no violation in {applicable}/{spec.trials} applicable samples")


# --------------------------------------------------------------------------
# fixtures and Table 1

from . import fixtures as fx  # noqa: E402


def counterexamples() -> list[tuple[str, str, Callable[[], PostulateVerdict]]]:
    """(operator, postulate, run) for each documented counter-example."""
    return [
        ("max", "P2", lambda: check_P2(list(fx.max_p2_p6()), "max")),
        ("max", "P6", lambda: check_P6([fx.max_p2_p6()[0]], [fx.max_p2_p6()[1]], "max")),
        ("psum", "Arb", lambda: check_Arb([], fx.psum_arb(), "psum", 2)),
        ("min", "P4", lambda: check_P4(*fx.min_p4(), "min")),
        ("min", "P7", lambda: check_P7(*fx.min_p7(), "min")),
        ("prod", "P4", lambda: check_P4(*fx.prod_p4(), "prod")),
        ("prod", "P5", lambda: check_P5([fx.prod_p5_arb()[0]], [fx.prod_p5_arb()[1]], "prod")),
        ("prod", "Arb", lambda: check_Arb([fx.prod_p5_arb()[0]], fx.prod_p5_arb()[1], "prod", 2)),
        ("luk", "Maj", lambda: check_Maj(list(fx.luk_maj()[:2]), fx.luk_maj()[2], "luk",
                                         conditioned=True)),
        ("min", "Maj", lambda: check_Maj([fx.idempotent_maj()[0]], fx.idempotent_maj()[1], "min")),
        ("max", "Maj", lambda: check_Maj([fx.idempotent_maj()[0]], fx.idempotent_maj()[1], "max")),
    ]


TABLE1_OPERATORS = ("min", "max", "prod")
TABLE1_LABELS = {"min": "min", "max": "max", "prod": "Pro"}
TABLE1_CONDITIONS = {("min", "P1"): "2", ("prod", "P1"): "2",
                     ("prod", "P7"): "3", ("prod", "Maj"): "4"}
TABLE1_EXPECTED = {
    "min": (True, True, True, False, True, True, False, True, False),
    "max": (True, False, True, True, True, False, True, True, False),
    "prod": (True, True, True, False, False, True, True, False, True),
}


@dataclass
class TableCell:
    operator: str
    postulate: str
    status: str
    footnote: str | None
    verdicts: list[PostulateVerdict] = field(default_factory=list)

    @property
    def mark(self) -> str:
        base = {HOLDS: "✓", FAILS: "−"}.get(self.status, "n/a")
        return base + (self.footnote or "")

    @property
    def counterexample(self) -> PostulateVerdict | None:
        return next((v for v in self.verdicts if v.fails), None)


def _conditioned_check(postulate: str) -> bool:
    return postulate in ("P1", "P7", "Maj")


def table1_report(trials: int = 500, seed: int = 0, spec: RandomBaseSpec | None = None,
                  n_max: int | None = None) -> dict[str, dict[str, TableCell]]:
    """Fixtures plus random search per cell; ``n_max`` bounds Arb and Maj."""
    spec = spec or RandomBaseSpec(trials=trials, seed=seed)
    fixtures_by_cell: dict[tuple[str, str], list] = {}
    for opname, post, run in counterexamples():
        fixtures_by_cell.setdefault((opname, post), []).append(run)
    table: dict[str, dict[str, TableCell]] = {}
    for opname in TABLE1_OPERATORS:
        op = builtin(opname)
        row = {}
        for post in POSTULATES:
            foot = TABLE1_CONDITIONS.get((opname, post))
            verdicts = [run() for run in fixtures_by_cell.get((opname, post), [])]
            kw = {"conditioned": foot is not None} if _conditioned_check(post) else {}
            verdicts.append(random_search(spec, post, op, n_max=n_max, **kw))
            if any(v.fails for v in verdicts):
                status = FAILS
            elif any(v.holds for v in verdicts):
                status = HOLDS
            else:
                status = NA
            row[post] = TableCell(opname, post, status, foot, verdicts)
        table[opname] = row
    return table


def table_matches(table) -> bool:
    return all(
        [table[op][p].status == (HOLDS if exp else FAILS)
         for p, exp in zip(POSTULATES, TABLE1_EXPECTED[op])] == [True] * len(POSTULATES)
        for op in TABLE1_OPERATORS)


def render_table(table) -> str:
    width = 6
    lines = ["op    " + "".join(p.ljust(width) for p in POSTULATES)]
    for op in TABLE1_OPERATORS:
        cells = "".join(table[op][p].mark.ljust(width) for p in POSTULATES)
        lines.append(TABLE1_LABELS[op].ljust(6) + cells)
    lines.append("")
    for k, v in FOOTNOTES.items():
        lines.append(f"{k}: conditioned on {v}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# witness dumps

def dump_witness(verdict: PostulateVerdict, directory) -> Path:
    """Write witness bases as KB files plus a manifest; return the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest: dict = {"postulate": verdict.postulate, "operator": verdict.operator,
                      "status": verdict.status, "detail": verdict.detail,
                      "condition_notes": verdict.condition_notes, "args": {}}
    for key, val in (verdict.witness or {}).items():
        if isinstance(val, PossibilisticBase):
            name = f"{key}.kb"
            kbio.dump(val, directory / name)
            manifest["args"][key] = name
        elif isinstance(val, list) and val and isinstance(val[0], PossibilisticBase):
            names = []
            for i, b in enumerate(val):
                name = f"{key}_{i}.kb"
                kbio.dump(b, directory / name)
                names.append(name)
            manifest["args"][key] = names
        elif isinstance(val, list):
            manifest["args"][key] = [str(x) for x in val]
        elif isinstance(val, Operator):
            manifest["args"][key] = val.name
        else:
            manifest["args"][key] = val
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def table_records(table, witness_dir=None) -> list[dict]:
    """Structured key-value records, one per cell."""
    out = []
    for op in TABLE1_OPERATORS:
        for p in POSTULATES:
            cell = table[op][p]
            rec = {"operator": op, "postulate": p, "status": cell.status,
                   "conditional": cell.footnote is not None, "footnote": cell.footnote,
                   "witness": None}
            ce = cell.counterexample
            if ce is not None:
                rec["detail"] = ce.detail
                if witness_dir is not None:
                    rec["witness"] = str(dump_witness(ce, Path(witness_dir) / f"{op}_{p}"))
            out.append(rec)
    return out
