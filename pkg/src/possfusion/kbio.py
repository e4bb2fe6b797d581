"""Text format for weighted bases: one ``<formula> : <weight>`` per line."""

from __future__ import annotations

import re
from pathlib import Path

from . import logic
from .errors import FormulaSyntaxError, KBFormatError, UnknownAtomError
from .possibilistic import PossibilisticBase, WeightedFormula

_WEIGHT_RE = re.compile(r"(?:0|1)(?:\.\d*)?|\.\d+")


def loads(text: str, vocabulary=None) -> PossibilisticBase:
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise KBFormatError("expected '<formula> : <weight>'", lineno)
        ftext, wtext = line.rsplit(":", 1)
        wtext = wtext.strip()
        if not _WEIGHT_RE.fullmatch(wtext) or not 0.0 <= float(wtext) <= 1.0:
            raise KBFormatError(f"weight {wtext!r} is not a decimal in [0, 1]", lineno)
        try:
            f = logic.parse(ftext, vocabulary)
        except (FormulaSyntaxError, UnknownAtomError) as exc:
            raise KBFormatError(str(exc), lineno) from exc
        items.append(WeightedFormula(f, float(wtext)))
    return PossibilisticBase(tuple(items), None if vocabulary is None else tuple(vocabulary))


def load(path, vocabulary=None) -> PossibilisticBase:
    return loads(Path(path).read_text(), vocabulary)


def format_weight(w: float) -> str:
    # fixed point, 12 decimals: keeps eps-level noise out and stays loadable
    text = f"{w:.12f}".rstrip("0").rstrip(".")
    return text or "0"


def dumps(base: PossibilisticBase, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(f"{it.formula} : {format_weight(it.weight)}" for it in base.items)
    return "\n".join(lines) + "\n"


def dump(base: PossibilisticBase, path, header: str | None = None) -> None:
    Path(path).write_text(dumps(base, header))
