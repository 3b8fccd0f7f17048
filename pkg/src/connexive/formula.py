"""Formula syntax: AST, parser, printer, and the subformula/negation closure.

The connexive language has atoms, & (conjunction), | (disjunction),
-> (implication), and ~ (strong negation).  Primed atoms (p') form a
disjoint namespace used only by the negation-eliminating translation
into the positive intuitionistic target language.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

_ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


class ParseError(ValueError):
    """Syntax error with a byte offset and the token set that was expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str
    primed: bool = False

    def __post_init__(self):
        if not _ATOM_RE.fullmatch(self.name):
            raise ValueError(f"bad atom name: {self.name!r}")


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


def size(phi: Formula) -> int:
    """Number of connective and atom nodes."""
    if isinstance(phi, Var):
        return 1
    if isinstance(phi, Neg):
        return 1 + size(phi.body)
    return 1 + size(phi.left) + size(phi.right)


def subformulas(phi: Formula) -> Iterator[Formula]:
    """All subformulas including phi itself."""
    yield phi
    if isinstance(phi, Neg):
        yield from subformulas(phi.body)
    elif not isinstance(phi, Var):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def atoms(phi: Formula) -> set[Var]:
    return {f for f in subformulas(phi) if isinstance(f, Var)}


def has_negation(phi: Formula) -> bool:
    return any(isinstance(f, Neg) for f in subformulas(phi))


def has_primed(phi: Formula) -> bool:
    return any(f.primed for f in atoms(phi))


# ---------------------------------------------------------------------------
# Printing.  Precedence: ~ binds tightest, then &, then |, then ->.
# -> is right-associative; & and | are left-associative.

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NEG = 1, 2, 3, 4

_ASCII = {"neg": "~", "and": " & ", "or": " | ", "imp": " -> "}
_UNICODE = {"neg": "∼", "and": " ∧ ", "or": " ∨ ", "imp": " → "}


def show(phi: Formula, unicode: bool = False) -> str:
    """Minimal-parenthesis rendering of a formula."""
    sym = _UNICODE if unicode else _ASCII
    return _show(phi, sym)


def _show(phi: Formula, sym: dict) -> str:
    if isinstance(phi, Var):
        return phi.name + ("'" if phi.primed else "")
    if isinstance(phi, Neg):
        return sym["neg"] + _sub(phi.body, _PREC_NEG, sym)
    if isinstance(phi, And):
        # left-associative: left child keeps &-chains unparenthesized
        return _sub(phi.left, _PREC_AND, sym) + sym["and"] + _sub(phi.right, _PREC_AND + 1, sym)
    if isinstance(phi, Or):
        return _sub(phi.left, _PREC_OR, sym) + sym["or"] + _sub(phi.right, _PREC_OR + 1, sym)
    if isinstance(phi, Imp):
        # right-associative: right child keeps ->-chains unparenthesized
        return _sub(phi.left, _PREC_IMP + 1, sym) + sym["imp"] + _sub(phi.right, _PREC_IMP, sym)
    raise TypeError(f"not a formula: {phi!r}")


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Var, Neg)):
        return _PREC_NEG
    if isinstance(phi, And):
        return _PREC_AND
    if isinstance(phi, Or):
        return _PREC_OR
    return _PREC_IMP


def _sub(phi: Formula, need: int, sym: dict) -> str:
    s = _show(phi, sym)
    return s if _prec(phi) >= need else "(" + s + ")"


def key(phi: Formula) -> str:
    """Deterministic sort key for formulas."""
    return show(phi)


# ---------------------------------------------------------------------------
# Parsing.

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<atom>[a-z][a-zA-Z0-9_]*'?)
      | (?P<imp>->)
      | (?P<op>[~&|()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            kind = m.lastgroup if m.lastgroup != "op" else m.group()
            toks.append((kind, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, toks: list[tuple[str, str, int]], allow_primed: bool):
        self.toks = toks
        self.i = 0
        self.allow_primed = allow_primed

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str, expected: tuple[str, ...]) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if tok[0] != kind:
            raise ParseError(f"unexpected token {tok[1] or 'end of input'!r}", tok[2], expected)
        self.i += 1
        return tok

    # formula := imp ; imp := or ("->" imp)?
    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "imp":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.peek()[0] == "&":
            self.i += 1
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "~":
            self.i += 1
            return Neg(self.neg())
        if kind == "(":
            self.i += 1
            f = self.imp()
            self.take(")", (")",))
            return f
        if kind == "atom":
            self.i += 1
            primed = text.endswith("'")
            if primed and not self.allow_primed:
                raise ParseError("primed atom outside embedding-target mode", pos)
            return Var(text.rstrip("'"), primed)
        raise ParseError(f"unexpected token {text or 'end of input'!r}", pos, ("~", "(", "atom"))


def parse(text: str, allow_primed: bool = False) -> Formula:
    """Parse a formula; primed atoms (p') only with allow_primed."""
    if not text.strip():
        raise ParseError("empty input", 0, ("~", "(", "atom"))
    p = _Parser(_tokenize(text), allow_primed)
    f = p.imp()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], ("end of input",))
    return f


# ---------------------------------------------------------------------------
# Closure.

@dataclass(frozen=True)
class FormulaUniverse:
    """Finite formula set bounding backward proof search for a goal sequent."""

    members: frozenset[Formula]
    seed: object  # the Sequent this universe was generated from

    def sorted_members(self) -> list[Formula]:
        return sorted(self.members, key=key)


def closure_set(formulas: Iterable[Formula], add_negations: bool = True) -> frozenset[Formula]:
    """Smallest superset closed under immediate subformulas and, when
    add_negations, one ~ per member with the ~~~ chains truncated."""
    todo = list(formulas)
    seen: set[Formula] = set()
    while todo:
        f = todo.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, Neg):
            todo.append(f.body)
        elif not isinstance(f, Var):
            todo.append(f.left)
            todo.append(f.right)
        if add_negations and not (isinstance(f, Neg) and isinstance(f.body, Neg)):
            todo.append(Neg(f))
    return frozenset(seen)


def closure(sequent, add_negations: bool = True) -> FormulaUniverse:
    """Closure of every formula in a sequent (duck-typed: .ctx and .suc)."""
    return FormulaUniverse(
        closure_set([*sequent.ctx, sequent.suc], add_negations), sequent
    )
