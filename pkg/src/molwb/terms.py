"""Ortholattice terms: abstract syntax, parsing, printing, and structural helpers.

The term language has variables, the bounds ``0`` and ``1``, binary meet
``*`` and join ``+``, and a postfix orthocomplement ``'``.  Grammar::

    identity := term "=" term
    term     := join
    join     := meet ("+" meet)*
    meet     := unary ("*" unary)*
    unary    := atom ("'")*
    atom     := var | "0" | "1" | "(" term ")"
    var      := letter (letter | digit | "_")*

Meet binds tighter than join, complement tighter than both, and the binary
operators associate to the left.  Printing uses minimal parentheses and
round-trips: ``parse_term(print_term(t))`` is structurally equal to ``t``.

Terms are immutable and hashable.  Generated terms reuse subterm objects, so
large terms form DAGs; evaluators cache on node identity to stay fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class TermSyntaxError(ValueError):
    """Malformed term text; carries the offset of the offending character."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Comp:
    child: "Term"


Term = Union[Var, Zero, One, Meet, Join, Comp]

ZERO = Zero()
ONE = One()


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"


# ---------------------------------------------------------------------------
# Parsing


def _is_ident_start(c: str) -> bool:
    return c.isalpha()


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> TermSyntaxError:
        return TermSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def term(self) -> Term:
        node = self.meet()
        while self.peek() == "+":
            self.pos += 1
            node = Join(node, self.meet())
        return node

    def meet(self) -> Term:
        node = self.unary()
        while self.peek() == "*":
            self.pos += 1
            node = Meet(node, self.unary())
        return node

    def unary(self) -> Term:
        node = self.atom()
        while self.peek() == "'":
            self.pos += 1
            node = Comp(node)
        return node

    def atom(self) -> Term:
        c = self.peek()
        if c == "":
            raise self.error("unexpected end of input")
        if c == "0":
            self.pos += 1
            return ZERO
        if c == "1":
            self.pos += 1
            return ONE
        if c == "(":
            self.pos += 1
            node = self.term()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return node
        if _is_ident_start(c):
            start = self.pos
            while self.pos < len(self.text) and _is_ident_char(self.text[self.pos]):
                self.pos += 1
            return Var(self.text[start : self.pos])
        raise self.error(f"unexpected character {c!r}")


def parse_term(text: str) -> Term:
    """Parse ``text`` into a term, or raise :class:`TermSyntaxError`."""
    p = _Parser(text)
    node = p.term()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input after term")
    return node


def parse_identity(text: str) -> Identity:
    """Parse ``"t = s"`` into an :class:`Identity`."""
    p = _Parser(text)
    lhs = p.term()
    if p.peek() != "=":
        raise p.error("expected '='")
    p.pos += 1
    rhs = p.term()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input after identity")
    return Identity(lhs, rhs)


# ---------------------------------------------------------------------------
# Printing

# Precedence levels for minimal parenthesisation.  A child is parenthesised
# when its level is below the context's, or equal on the right of a binary
# operator (the parser associates to the left, so right-nested structure
# needs explicit parentheses to round-trip).
_ATOM, _COMP, _MEET, _JOIN = 3, 3, 2, 1


def _level(t: Term) -> int:
    if isinstance(t, Join):
        return _JOIN
    if isinstance(t, Meet):
        return _MEET
    return _ATOM


def _print(t: Term, out: list) -> None:
    if isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Zero):
        out.append("0")
    elif isinstance(t, One):
        out.append("1")
    elif isinstance(t, Comp):
        if _level(t.child) < _ATOM:
            out.append("(")
            _print(t.child, out)
            out.append(")")
        else:
            _print(t.child, out)
        out.append("'")
    elif isinstance(t, Meet):
        _print_child(t.left, _MEET, False, out)
        out.append("*")
        _print_child(t.right, _MEET, True, out)
    elif isinstance(t, Join):
        _print_child(t.left, _JOIN, False, out)
        out.append(" + ")
        _print_child(t.right, _JOIN, True, out)
    else:
        raise TypeError(f"not a term: {t!r}")


def _print_child(t: Term, parent_level: int, is_right: bool, out: list) -> None:
    lv = _level(t)
    need = lv < parent_level or (is_right and lv == parent_level)
    if need:
        out.append("(")
        _print(t, out)
        out.append(")")
    else:
        _print(t, out)


def print_term(t: Term) -> str:
    """Render ``t`` with minimal parentheses; inverse of :func:`parse_term`."""
    out: list = []
    _print(t, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# Structural utilities


def subterms(t: Term) -> Iterator[Term]:
    """Iterate the distinct nodes of ``t`` (as a DAG), children first."""
    seen: set = set()
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, (Meet, Join)):
            stack.append((node.right, False))
            stack.append((node.left, False))
        elif isinstance(node, Comp):
            stack.append((node.child, False))


def term_length(t: Term) -> int:
    """Number of AST nodes counted as a tree (shared subterms count each use)."""
    size: dict = {}
    for node in subterms(t):
        if isinstance(node, (Meet, Join)):
            size[id(node)] = 1 + size[id(node.left)] + size[id(node.right)]
        elif isinstance(node, Comp):
            size[id(node)] = 1 + size[id(node.child)]
        else:
            size[id(node)] = 1
    return size[id(t)]


def vars_of(t: Term) -> list:
    """Distinct variable names in first-occurrence (left to right) order."""
    out: list = []
    seen: set = set()
    visited: set = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            if node.name not in seen:
                seen.add(node.name)
                out.append(node.name)
        elif isinstance(node, (Meet, Join)):
            # A DAG node's variables are already recorded on second visits.
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Comp):
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append(node.child)
    return out


def vars_of_identity(ident: Identity) -> list:
    out = vars_of(ident.lhs)
    seen = set(out)
    for name in vars_of(ident.rhs):
        if name not in seen:
            seen.add(name)
            out.append(name)
    return out


def meet_all(ts: list) -> Term:
    """Left-nested meet of a nonempty list of terms."""
    if not ts:
        raise ValueError("meet_all of empty list")
    node = ts[0]
    for t in ts[1:]:
        node = Meet(node, t)
    return node


def join_all(ts: list) -> Term:
    """Left-nested join of a nonempty list of terms."""
    if not ts:
        raise ValueError("join_all of empty list")
    node = ts[0]
    for t in ts[1:]:
        node = Join(node, t)
    return node


def to_tautology(identities: list) -> Term:
    """Fold identities into one term equal to 1 exactly where they all hold.

    Each equation ``t = s`` becomes ``(t + s)' + t*s``; a list becomes the
    meet of the per-equation terms.  In a modular ortholattice the combined
    term evaluates to 1 under an assignment iff every equation holds there.
    """
    if not identities:
        raise ValueError("to_tautology of empty list")
    parts = [
        Join(Comp(Join(ident.lhs, ident.rhs)), Meet(ident.lhs, ident.rhs))
        for ident in identities
    ]
    return meet_all(parts)
