"""Formulas of the blameworthiness language: AST, parser, printer.

The core AST has six node types: ``Var``, ``Not``, ``Implies``, ``Necessary``
(N), ``AttackerBlame`` (A) and ``DefenderBlame`` (D).  Conjunction,
disjunction, the biconditional and the ``R`` modality are surface syntax
only and are desugared by the parser (and by the ``conj``/``disj``/``iff``/
``rbox`` helpers):

    R f      ~>  !(f -> A f)
    f & g    ~>  !(f -> !g)
    f | g    ~>  !f -> g
    f <-> g  ~>  (f -> g) & (g -> f)

Precedence, tightest first: unary (``! N A D R``), ``&``, ``|``, ``->``
(right associative), ``<->`` (left associative).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

__all__ = [
    "Formula", "Var", "Not", "Implies", "Necessary", "AttackerBlame",
    "DefenderBlame", "FormulaSyntaxError", "ReservedIdentifierError",
    "parse", "render", "subformulas", "translate_D",
    "conj", "disj", "iff", "rbox", "variables",
]

VAR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
MODAL_LETTERS = frozenset("NADR")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class ReservedIdentifierError(FormulaSyntaxError):
    pass


class Formula:
    """Base class of all AST nodes.  Nodes are immutable and hash-consed by value."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)

    @property
    def children(self) -> tuple[Formula, ...]:
        return ()

    def walk(self) -> Iterator[Formula]:
        """Pre-order traversal, duplicates included."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())

    @property
    def depth(self) -> int:
        if not self.children:
            return 0
        return 1 + max(c.depth for c in self.children)

    def has_D(self) -> bool:
        return any(isinstance(n, DefenderBlame) for n in self.walk())


def _cached_hash(obj, *parts) -> None:
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.name in MODAL_LETTERS:
            raise ReservedIdentifierError(
                f"{self.name!r} is a modality letter and cannot name a variable")
        if not VAR_RE.match(self.name):
            raise ReservedIdentifierError(
                f"invalid variable name {self.name!r}; expected [a-z][a-z0-9_]*")
        _cached_hash(self, self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"


class _Unary(Formula):
    __slots__ = ()
    letter = ""

    def __post_init__(self):
        if not isinstance(self.child, Formula):
            raise TypeError(f"{type(self).__name__} child must be a Formula")
        _cached_hash(self, self.child._hash)

    def __hash__(self):
        return self._hash

    @property
    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"{type(self).__name__}({self.child!r})"


@dataclass(frozen=True, repr=False)
class Not(_Unary):
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)
    letter = "!"
    __hash__ = _Unary.__hash__


@dataclass(frozen=True, repr=False)
class Necessary(_Unary):
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)
    letter = "N"
    __hash__ = _Unary.__hash__


@dataclass(frozen=True, repr=False)
class AttackerBlame(_Unary):
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)
    letter = "A"
    __hash__ = _Unary.__hash__


@dataclass(frozen=True, repr=False)
class DefenderBlame(_Unary):
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)
    letter = "D"
    __hash__ = _Unary.__hash__


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.left, Formula) or not isinstance(self.right, Formula):
            raise TypeError("Implies operands must be Formulas")
        _cached_hash(self, self.left._hash, self.right._hash)

    def __hash__(self):
        return self._hash

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


MODAL_TYPES = {"N": Necessary, "A": AttackerBlame, "D": DefenderBlame}


# -- surface connectives -------------------------------------------------------

def conj(f: Formula, g: Formula) -> Formula:
    return Not(Implies(f, Not(g)))


def disj(f: Formula, g: Formula) -> Formula:
    return Implies(Not(f), g)


def iff(f: Formula, g: Formula) -> Formula:
    return conj(Implies(f, g), Implies(g, f))


def rbox(f: Formula) -> Formula:
    """``R f``: f holds under every response to the current defender action."""
    return Not(Implies(f, AttackerBlame(f)))


# -- parsing -------------------------------------------------------------------

_UNICODE = {"¬": "!", "→": "->", "∧": "&", "∨": "|", "↔": "<->"}
_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return ``(kind, value, pos)`` triples; kind is 'op', 'mod', 'var' or 'end'."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1):
            tokens.append(("op", m.group(1), m.start(1)))
        elif m.group(2):
            word, start = m.group(2), m.start(2)
            # "NAp" is read as N A p, the way the modal letters are usually typeset
            i = 0
            while i < len(word) and word[i] in MODAL_LETTERS:
                tokens.append(("mod", word[i], start + i))
                i += 1
            rest = word[i:]
            if rest:
                if not VAR_RE.match(rest):
                    raise ReservedIdentifierError(
                        f"invalid identifier {rest!r}: variables are lowercase "
                        f"and N, A, D, R are reserved modality letters",
                        start + i, text)
                tokens.append(("var", rest, start + i))
        else:
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", m.start(3), text)
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        kind, v, _ = self.peek()
        if kind == "op" and v == value:
            self.i += 1
            return True
        return False

    def error(self, message: str):
        kind, v, pos = self.peek()
        found = "end of input" if kind == "end" else repr(v)
        raise FormulaSyntaxError(f"{message}, found {found}", pos, self.text)

    def formula(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.accept("->"):
            return Implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.accept("|"):
            f = disj(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, v, _ = self.peek()
        if kind == "op" and v == "!":
            self.take()
            return Not(self.unary())
        if kind == "mod":
            self.take()
            child = self.unary()
            return rbox(child) if v == "R" else MODAL_TYPES[v](child)
        if kind == "var":
            self.take()
            return Var(v)
        if self.accept("("):
            f = self.formula()
            if not self.accept(")"):
                self.error("expected ')'")
            return f
        self.error("expected a formula")


def parse(text: str) -> Formula:
    """Parse surface syntax (ASCII or Unicode connectives) into a desugared AST."""
    for u, a in _UNICODE.items():
        text = text.replace(u, a)
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return f


# -- printing ------------------------------------------------------------------

def render(f: Formula) -> str:
    """Print with minimal parentheses; re-parses to the identical AST."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Implies):
        left = render(f.left)
        if isinstance(f.left, Implies):
            left = f"({left})"
        return f"{left} -> {render(f.right)}"
    if isinstance(f, _Unary):
        inner = render(f.child)
        if isinstance(f.child, Implies):
            return f"{f.letter}({inner})"
        if isinstance(f, Not):
            return f"!{inner}"
        return f"{f.letter} {inner}"
    raise TypeError(f"not a formula: {f!r}")


# -- structural utilities ------------------------------------------------------

def subformulas(f: Formula) -> list[Formula]:
    """Distinct subtrees of ``f``, children before parents."""
    seen: dict[Formula, None] = {}

    def visit(node):
        if node in seen:
            return
        for c in node.children:
            visit(c)
        seen[node] = None

    visit(f)
    return list(seen)


def variables(f: Formula) -> list[str]:
    """Sorted variable names occurring in ``f``."""
    return sorted({n.name for n in f.walk() if isinstance(n, Var)})


def translate_D(f: Formula) -> Formula:
    """Eliminate D innermost-first using ``D g == g & !N(!g -> A !g)``."""
    memo: dict[Formula, Formula] = {}

    def tr(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Var):
            out = node
        elif isinstance(node, Implies):
            out = Implies(tr(node.left), tr(node.right))
        else:
            child = tr(node.child)
            if isinstance(node, DefenderBlame):
                out = conj(child, Not(Necessary(Implies(Not(child), AttackerBlame(Not(child))))))
            else:
                out = type(node)(child)
        memo[node] = out
        return out

    return tr(f)
