"""Recursive-descent parser and printer for the cobordism expression language.

    expression ::= tensor (";" tensor)*        composition, left to right
    tensor     ::= atom ("*" atom)*            disjoint union
    atom       ::= unit | counit | mult | comult | id | twist | "(" expression ")"

Both binary operators associate to the left.
"""

import re

from .cobordism import Compose, Gen, Tensor
from .config import TQFTError

__all__ = ["ParseError", "parse", "pretty", "to_tree"]

_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z_]\w*)|(.))")
_ATOMS = ("unit", "counit", "mult", "comult", "id", "twist")


class ParseError(TQFTError, SyntaxError):
    pass


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        word, sym = m.group(1), m.group(2)
        if word is not None:
            tokens.append((word, m.start(1)))
        elif sym is not None and not sym.isspace():
            tokens.append((sym, m.start(2)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def fail(self, msg):
        where = self.tokens[self.pos][1] if self.pos < len(self.tokens) else len(self.text)
        raise ParseError(f"{msg} at column {where + 1} in {self.text!r}")

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expression(self):
        term = self.tensor()
        while self.peek() == ";":
            self.take()
            rhs = self.tensor()
            try:
                term = Compose(term, rhs)
            except TQFTError as e:
                raise TQFTError(f"{e} (in {self.text!r})") from None
        return term

    def tensor(self):
        term = self.atom()
        while self.peek() == "*":
            self.take()
            term = Tensor(term, self.atom())
        return term

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        if tok == "(":
            self.take()
            term = self.expression()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return term
        if tok in _ATOMS:
            self.take()
            return Gen(tok)
        self.fail(f"unexpected token {tok!r}")

    def parse(self):
        term = self.expression()
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()!r}")
        return term


def parse(text):
    """Parse an expression into a ``CobTerm``.

    Raises ``ParseError`` on malformed syntax and ``ArityError`` when a
    composition joins mismatched boundaries.
    """
    return _Parser(text).parse()


def pretty(term):
    """Fully parenthesized form; ``parse(pretty(t)) == t``."""
    if isinstance(term, Gen):
        return term.name
    if isinstance(term, Compose):
        return f"({pretty(term.first)} ; {pretty(term.second)})"
    return f"({pretty(term.left)} * {pretty(term.right)})"


def to_tree(term):
    """Nested dict form for JSON output."""
    if isinstance(term, Gen):
        return {"gen": term.name, "in": term.inputs, "out": term.outputs}
    if isinstance(term, Compose):
        kids = [to_tree(term.first), to_tree(term.second)]
        op = "compose"
    else:
        kids = [to_tree(term.left), to_tree(term.right)]
        op = "tensor"
    return {"op": op, "in": term.inputs, "out": term.outputs, "args": kids}
