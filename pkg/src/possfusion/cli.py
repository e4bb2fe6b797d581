"""Command-line front end.

Exit codes: 0 success, 1 assertion mismatch, 2 parse or usage error,
3 size cap exceeded, 4 operator contract or class failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import kbio, logic
from .config import configured, settings
from .errors import (CapExceededError, ClassMismatchError, ContractViolationError,
                     FormulaSyntaxError, KBFormatError, NaryUndefinedError,
                     UnknownAtomError, UnknownOperatorError)
from .fusion import FusionProblem, classical_extraction, fuse_n, weighted_min_fuse
from .operators import adaptive, builtin, classify, load_table
from .possibilistic import (PossibilisticBase, align, entailment_degree, normalize,
                            pi_entails, union)
from .postulates import (POSTULATES, dump_witness, random_search, render_table,
                         table1_report, table_matches, table_records)
from .sampling import RandomBaseSpec


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    op: str | None = None
    op_table: str | None = None
    adaptive: tuple[str, str] | None = None
    h: int | None = None
    lambdas: list[float] | None = None
    normalize: bool = True
    fmt: str = "kb"
    seed: int = 0
    max_vars: int = 20
    n_max: int | None = None
    eps: float = 1e-9
    output: str | None = None

    def __post_init__(self):
        if self.max_vars <= 0 or (self.n_max is not None and self.n_max <= 0):
            raise ValueError("caps must be positive")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("--eps must lie in (0, 1)")


class UsageError(Exception):
    pass


def resolve_operator(cfg: RunConfig, default: str | None = "min"):
    if cfg.adaptive is not None:
        d, r = (builtin(x) for x in cfg.adaptive)
        return ("adaptive", d, r)
    if cfg.op_table is not None:
        return load_table(cfg.op_table)
    name = cfg.op or default
    if name is None:
        raise UsageError("an operator is required (--op or --op-table)")
    return builtin(name)


def _load_all(paths) -> list[PossibilisticBase]:
    if not paths:
        raise UsageError("at least one input KB is required")
    return align([kbio.load(p) for p in paths])


def _fuse(cfg: RunConfig, bases):
    """Fused base, raw items with provenance, and the operator label."""
    if cfg.lambdas is not None:
        if cfg.op not in (None, "min") or cfg.op_table or cfg.adaptive:
            raise UsageError("--lambda applies to min-based fusion only")
        if len(cfg.lambdas) != len(bases):
            raise UsageError(f"{len(bases)} inputs but {len(cfg.lambdas)} --lambda values")
        fused = weighted_min_fuse(bases, cfg.lambdas)
        return fused, "weighted-min"
    op = resolve_operator(cfg)
    if isinstance(op, tuple):
        _, d, r = op
        h = cfg.h
        if h is None:
            h = 1 if union(*bases).inc >= 1.0 - settings.eps else 0
        op = adaptive(d, r, h)
    return fuse_n(FusionProblem(tuple(bases), op)), op.name


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_merge(cfg: RunConfig) -> int:
    bases = _load_all(cfg.inputs)
    fused, opname = _fuse(cfg, bases)
    out = normalize(fused.base) if cfg.normalize else fused.base
    inc_u, inc_f = union(*bases).inc, fused.base.inc
    delta = classical_extraction(out)
    if cfg.fmt == "structured":
        source = {}
        for it, prov in fused:
            source.setdefault((it.formula, it.weight), prov)
        items = [{"formula": str(it.formula), "weight": it.weight,
                  "provenance": [list(p) for p in source.get((it.formula, it.weight), ())]}
                 for it in out.items]
        _emit(cfg, _json({"operator": opname, "vocabulary": list(out.vocabulary),
                          "normalized": cfg.normalize, "inc_union": inc_u,
                          "inc_fusion": inc_f, "extraction": [str(f) for f in delta],
                          "items": items}))
        return 0
    header = "\n".join([
        f"operator: {opname}",
        f"Inc(union) = {kbio.format_weight(inc_u)}",
        f"Inc(fusion) = {kbio.format_weight(inc_f)}",
        "extraction: " + ("; ".join(str(f) for f in delta) or "(empty)"),
    ])
    _emit(cfg, kbio.dumps(out, header))
    return 0


def cmd_query(cfg: RunConfig, formula: str, alpha: float | None) -> int:
    bases = _load_all(cfg.inputs)
    base = bases[0] if len(bases) == 1 else _fuse(cfg, bases)[0].base
    f = logic.parse(formula, base.vocabulary)
    if alpha is not None:
        ok = pi_entails(base, f, alpha)
        res = {"formula": str(f), "alpha": alpha, "entailed": ok}
        text = "yes\n" if ok else "no\n"
    else:
        deg = entailment_degree(base, f)
        res = {"formula": str(f), "degree": deg}
        text = kbio.format_weight(deg) + "\n"
    _emit(cfg, _json(res) if cfg.fmt == "structured" else text)
    return 0


def cmd_inc(cfg: RunConfig) -> int:
    bases = _load_all(cfg.inputs)
    rec = {"inputs": [b.inc for b in bases], "union": union(*bases).inc}
    if cfg.op or cfg.op_table or cfg.adaptive or cfg.lambdas:
        rec["fusion"] = _fuse(cfg, bases)[0].base.inc
    if cfg.fmt == "structured":
        _emit(cfg, _json(rec))
        return 0
    lines = [f"Inc({p}) = {kbio.format_weight(v)}" for p, v in zip(cfg.inputs, rec["inputs"])]
    lines.append(f"Inc(union) = {kbio.format_weight(rec['union'])}")
    if "fusion" in rec:
        lines.append(f"Inc(fusion) = {kbio.format_weight(rec['fusion'])}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_postulates(cfg: RunConfig, args) -> int:
    spec = RandomBaseSpec(trials=args.trials, seed=cfg.seed)
    if args.table1 or args.assert_table1:
        table = table1_report(spec=spec, n_max=cfg.n_max)
        match = table_matches(table)
        if cfg.fmt == "structured":
            _emit(cfg, _json({"cells": table_records(table, args.witness_dir),
                              "matches_expected": match, "seed": cfg.seed,
                              "trials": args.trials}))
        else:
            if args.witness_dir:
                table_records(table, args.witness_dir)
            _emit(cfg, render_table(table) + "\n"
                  + f"matches expected pattern: {'yes' if match else 'no'}\n")
        return 0 if match or not args.assert_table1 else 1
    if not args.check:
        raise UsageError("postulates needs --check <P> or --table1")
    op = resolve_operator(cfg)
    if isinstance(op, tuple):
        raise UsageError("--adaptive is not supported for postulate checks")
    v = random_search(spec, args.check, op, conditioned=args.conditioned, n_max=cfg.n_max)
    wpath = None
    if v.fails and args.witness_dir:
        wpath = str(dump_witness(v, args.witness_dir))
    if cfg.fmt == "structured":
        _emit(cfg, _json({"postulate": v.postulate, "operator": v.operator,
                          "status": v.status, "detail": v.detail,
                          "condition_notes": v.condition_notes, "witness": wpath}))
    else:
        lines = [f"{v.postulate} {v.operator}: {v.status}", f"  {v.detail}"]
        if v.condition_notes:
            lines.append(f"  {v.condition_notes}")
        if wpath:
            lines.append(f"  witness: {wpath}")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_classify(cfg: RunConfig, step: float) -> int:
    op = resolve_operator(cfg, default=None)
    if isinstance(op, tuple):
        raise UsageError("classify-op takes --op or --op-table")
    if step is None:
        step = 1.0 / op.levels if op.levels else 1 / 64
    rep = classify(op, step)
    if cfg.fmt == "structured":
        _emit(cfg, _json({"operator": rep.operator, "step": rep.step,
                          "admissible": rep.admissible,
                          "classes": {k: {"holds": v.holds, "witness": v.witness}
                                      for k, v in rep.verdicts.items()},
                          "contract": {k: {"holds": v.holds, "witness": v.witness}
                                       for k, v in rep.contract.items()}}))
    else:
        _emit(cfg, f"operator {rep.operator} (grid step {rep.step:g})\n"
              + "\n".join(rep.lines()) + "\n")
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", help="builtin operator name")
    common.add_argument("--op-table", help="operator table file ('levels=<k>' header)")
    common.add_argument("--adaptive", nargs=2, metavar=("D", "R"),
                        help="adaptive operator from a regular disjunctive D and reinforcement R")
    common.add_argument("--h", type=int, choices=(0, 1), help="override the adaptive switch")
    common.add_argument("--lambda", dest="lambdas", type=float, action="append",
                        help="reliability of the matching input (repeatable)")
    norm = common.add_mutually_exclusive_group()
    norm.add_argument("--normalize", dest="normalize", action="store_true", default=True)
    norm.add_argument("--raw", dest="normalize", action="store_false")
    common.add_argument("--format", dest="fmt", choices=("kb", "structured"), default="kb")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-vars", type=int, default=20)
    common.add_argument("--n-max", type=int)
    common.add_argument("--eps", type=float, default=1e-9)
    common.add_argument("-o", "--output")

    p = argparse.ArgumentParser(prog="possfusion", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("merge", parents=[common], help="fuse KB files")
    m.add_argument("inputs", nargs="+")
    q = sub.add_parser("query", parents=[common], help="entailment degree of a formula")
    q.add_argument("inputs", nargs="+")
    q.add_argument("-f", "--formula", required=True)
    q.add_argument("--alpha", type=float)
    i = sub.add_parser("inc", parents=[common], help="inconsistency degrees")
    i.add_argument("inputs", nargs="+")
    pp = sub.add_parser("postulates", parents=[common], help="postulate checks")
    pp.add_argument("--check", choices=POSTULATES)
    pp.add_argument("--conditioned", action="store_true",
                    help="apply the footnote precondition of P1, P7 or Maj")
    pp.add_argument("--table1", action="store_true")
    pp.add_argument("--assert-table1", action="store_true")
    pp.add_argument("--trials", type=int, default=500)
    pp.add_argument("--witness-dir")
    c = sub.add_parser("classify-op", parents=[common], help="grid class report")
    c.add_argument("--step", type=float,
                   help="grid step (default 1/64, or 1/levels for a table)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, getattr(args, "inputs", []), args.op, args.op_table,
                        tuple(args.adaptive) if args.adaptive else None, args.h,
                        args.lambdas, args.normalize, args.fmt, args.seed,
                        args.max_vars, args.n_max, args.eps, args.output)
        overrides = {"eps": cfg.eps, "max_vars": cfg.max_vars}
        if cfg.n_max is not None:
            overrides["n_max"] = cfg.n_max
        with configured(**overrides):
            if cfg.command == "merge":
                return cmd_merge(cfg)
            if cfg.command == "query":
                return cmd_query(cfg, args.formula, args.alpha)
            if cfg.command == "inc":
                return cmd_inc(cfg)
            if cfg.command == "postulates":
                return cmd_postulates(cfg, args)
            return cmd_classify(cfg, args.step)
    except (FormulaSyntaxError, KBFormatError, UnknownAtomError, UnknownOperatorError,
            UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ContractViolationError, ClassMismatchError, NaryUndefinedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
