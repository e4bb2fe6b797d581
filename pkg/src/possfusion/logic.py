"""Propositional formulas: AST, parser, printer and brute-force semantics.

Interpretations over a vocabulary ``(a_0, ..., a_{n-1})`` are numbered
``0 .. 2**n - 1``; atom ``a_k`` is true in interpretation ``i`` iff bit
``n-1-k`` of ``i`` is set, so the binary spelling of ``i`` lists the truth
values in vocabulary order (``"01"`` means a_0 false, a_1 true).

Model sets are carried as Python integers used as bitsets (bit ``i`` set iff
interpretation ``i`` is a model).  Every semantic question reduces to a few
bitwise operations on those masks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .config import settings
from .errors import CapExceededError, FormulaSyntaxError, UnknownAtomError

Vocabulary = tuple[str, ...]
Interpretation = tuple[bool, ...]

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
RESERVED = {"T", "F"}


class Formula:
    """Base class of the formula AST.  Nodes are immutable and hashable."""

    __slots__ = ()

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self) -> str:
        return to_text(self)


def _node(cls):
    """Frozen dataclass with a hash computed once from the children's hashes."""
    cls = dataclass(frozen=True, repr=False)(cls)

    def __hash__(self):
        return self._hash

    cls.__hash__ = __hash__
    cls.__repr__ = lambda self: f"{type(self).__name__}({to_text(self)!r})"
    return cls


@_node
class Atom(Formula):
    name: str
    _hash: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid atom name {self.name!r}")
        object.__setattr__(self, "_hash", hash(("Atom", self.name)))


@_node
class Top(Formula):
    _hash: int = field(init=False, compare=False, default=hash("Top"))


@_node
class Bottom(Formula):
    _hash: int = field(init=False, compare=False, default=hash("Bottom"))


@_node
class Not(Formula):
    arg: Formula
    _hash: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Not", self.arg)))


@_node
class And(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("And", self.left, self.right)))


@_node
class Or(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Or", self.left, self.right)))


@_node
class Implies(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Implies", self.left, self.right)))


TOP = Top()
BOTTOM = Bottom()


def atoms(f: Formula) -> frozenset[str]:
    return _atoms(f)


@lru_cache(maxsize=1 << 16)
def _atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Not):
        return _atoms(f.arg)
    return _atoms(f.left) | _atoms(f.right)


def disjoin(fs: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is Bottom."""
    fs = list(fs)
    return reduce(Or, fs) if fs else BOTTOM


def conjoin(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    return reduce(And, fs) if fs else TOP


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(->)|([~&|()])|([A-Za-z][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start + 1))
        pos = m.end()
    tokens.append(("", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect_end(self):
        if self.peek() != "":
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok, pos = self.peek(), self.pos()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.implication()
            if self.peek() != ")":
                raise FormulaSyntaxError("expected ')'", self.pos())
            self.take()
            return f
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOTTOM
        if tok and ATOM_RE.fullmatch(tok):
            self.take()
            return Atom(tok)
        if tok == "":
            raise FormulaSyntaxError("unexpected end of input", pos)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse(text: str, vocabulary: Sequence[str] | None = None) -> Formula:
    """Parse ``text``; positions in syntax errors are 1-based.

    If ``vocabulary`` is given, atoms outside it raise UnknownAtomError.
    """
    p = _Parser(text)
    f = p.implication()
    p.expect_end()
    if vocabulary is not None:
        unknown = atoms(f) - set(vocabulary)
        if unknown:
            raise UnknownAtomError(f"unknown atoms: {', '.join(sorted(unknown))}")
    return f


# --------------------------------------------------------------------------
# printing

_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}
_SYM = {Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Canonical text with minimal parentheses; ``parse(to_text(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Not):
        inner = to_text(f.arg)
        return "~" + (f"({inner})" if _prec(f.arg) < 4 else inner)
    p = _prec(f)
    left, right = to_text(f.left), to_text(f.right)
    if isinstance(f, Implies):
        # right-associative
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


# --------------------------------------------------------------------------
# semantics

def check_cap(n: int) -> None:
    if n > settings.max_vars:
        raise CapExceededError(
            f"{n} variables exceed the cap of {settings.max_vars}")


def vocabulary_of(*formulas: Formula) -> Vocabulary:
    names: set[str] = set()
    for f in formulas:
        names |= atoms(f)
    return tuple(sorted(names))


def merge_vocabularies(*vocabs: Iterable[str]) -> Vocabulary:
    names: set[str] = set()
    for v in vocabs:
        names.update(v)
    return tuple(sorted(names))


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def atom_mask(k: int, n: int) -> int:
    """Bitset of interpretations (over n atoms) where atom k is true."""
    block = 1 << (n - 1 - k)
    unit = ((1 << block) - 1) << block
    period = 2 * block
    rep = full_mask(n) // ((1 << period) - 1)
    return unit * rep


def model_mask(f: Formula, vocabulary: Sequence[str]) -> int:
    vocabulary = tuple(vocabulary)
    check_cap(len(vocabulary))
    missing = atoms(f) - set(vocabulary)
    if missing:
        raise UnknownAtomError(f"atoms {sorted(missing)} not in vocabulary")
    return _mask(f, vocabulary)


@lru_cache(maxsize=1 << 17)
def _mask(f: Formula, vocabulary: Vocabulary) -> int:
    n = len(vocabulary)
    if isinstance(f, Atom):
        return atom_mask(vocabulary.index(f.name), n)
    if isinstance(f, Top):
        return full_mask(n)
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return full_mask(n) ^ _mask(f.arg, vocabulary)
    left = _mask(f.left, vocabulary)
    right = _mask(f.right, vocabulary)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    # implication eliminated as ~left | right
    return (full_mask(n) ^ left) | right


def interpretation(index: int, n: int) -> Interpretation:
    return tuple(bool((index >> (n - 1 - k)) & 1) for k in range(n))


def interpretation_index(assignment: Interpretation) -> int:
    i = 0
    for value in assignment:
        i = (i << 1) | int(bool(value))
    return i


def mask_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def models(f: Formula, vocabulary: Sequence[str]) -> set[Interpretation]:
    n = len(vocabulary)
    return {interpretation(i, n) for i in mask_indices(model_mask(f, vocabulary))}


def _premise_mask(fs: Iterable[Formula], vocabulary: Vocabulary) -> int:
    m = full_mask(len(vocabulary))
    for f in fs:
        m &= model_mask(f, vocabulary)
    return m


def entails(premises: Iterable[Formula], conclusion: Formula,
            vocabulary: Sequence[str] | None = None) -> bool:
    premises = list(premises)
    if vocabulary is None:
        vocabulary = vocabulary_of(conclusion, *premises)
    vocabulary = tuple(vocabulary)
    p = _premise_mask(premises, vocabulary)
    return p & ~model_mask(conclusion, vocabulary) == 0


def is_consistent(fs: Iterable[Formula],
                  vocabulary: Sequence[str] | None = None) -> bool:
    fs = list(fs)
    if vocabulary is None:
        vocabulary = vocabulary_of(*fs)
    return _premise_mask(fs, tuple(vocabulary)) != 0


def is_tautology(f: Formula, vocabulary: Sequence[str] | None = None) -> bool:
    vocabulary = vocabulary_of(f) if vocabulary is None else tuple(vocabulary)
    return model_mask(f, vocabulary) == full_mask(len(vocabulary))


def _as_list(x) -> list[Formula]:
    return [x] if isinstance(x, Formula) else list(x)


def equivalent(f, g, vocabulary: Sequence[str] | None = None) -> bool:
    """Classical equivalence of two formulas or two sets of formulas."""
    fs, gs = _as_list(f), _as_list(g)
    if vocabulary is None:
        vocabulary = vocabulary_of(*fs, *gs)
    vocabulary = tuple(vocabulary)
    return _premise_mask(fs, vocabulary) == _premise_mask(gs, vocabulary)
