"""Concrete text grammar for formulas.

::

    phi ::= "true" | "false" | letter | "[" letter+ "]"
          | "X" phi | "F" phi | "G" phi | "!" phi
          | phi "U" phi | phi "U{" int "/" int "}" phi
          | phi "&" phi | phi "|" phi | "(" phi ")"

Letters are identifiers ``[A-Za-z_][A-Za-z0-9_]*`` plus the reserved tokens
``#`` and ``$``-prefixed names such as ``$0 $1 $z``. ``X F G U true false``
are keywords and cannot name letters. Precedence: unary operators bind
tightest, then the (right-associative) until operators, then ``&``, then
``|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .formulas import (
    FALSE,
    TRUE,
    Alphabet,
    Always,
    And,
    Atom,
    ClassicUntil,
    Eventually,
    Formula,
    FreqUntil,
    Implies,
    LetterSet,
    Next,
    Not,
    Or,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownLetterError(ParseError):
    pass


@dataclass(frozen=True)
class _Token:
    kind: str  # LETTER, KEYWORD, OP, INT, SYM, EOF
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dollar>\$[A-Za-z0-9_]+)
  | (?P<hash>\#)
  | (?P<int>[0-9]+)
  | (?P<sym>[()\[\]{}/&|!])
    """,
    re.VERBOSE,
)

_UNARY_OPS = {"X", "F", "G"}
_KEYWORDS = {"true", "false"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            value = m.group()
            if m.lastgroup == "ident":
                if value in _UNARY_OPS or value == "U":
                    kind = "OP"
                elif value in _KEYWORDS:
                    kind = "KEYWORD"
                else:
                    kind = "LETTER"
            elif m.lastgroup in ("dollar", "hash"):
                kind = "LETTER"
            elif m.lastgroup == "int":
                kind = "INT"
            else:
                kind = "SYM"
            tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.tokens = _tokenize(text)
        self.alphabet = alphabet
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", tok.pos)
        return self.advance()

    def parse(self) -> Formula:
        phi = self.parse_or()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return phi

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek().kind == "SYM" and self.peek().text == "|":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.peek().kind == "SYM" and self.peek().text == "&":
            self.advance()
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "U":
            self.advance()
            freq = self.parse_freq_annotation()
            right = self.parse_until()  # right-associative
            if freq is None:
                return ClassicUntil(left, right)
            return FreqUntil(freq, left, right)
        return left

    def parse_freq_annotation(self) -> Fraction | None:
        tok = self.peek()
        if not (tok.kind == "SYM" and tok.text == "{"):
            return None
        open_pos = self.advance().pos
        num = int(self.expect("INT").text)
        self.expect("SYM", "/")
        den = int(self.expect("INT").text)
        self.expect("SYM", "}")
        if den == 0:
            raise ParseError("frequency denominator must be positive", open_pos)
        freq = Fraction(num, den)
        if freq > 1:
            raise ParseError(f"frequency out of range: {num}/{den} > 1", open_pos)
        return freq

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in _UNARY_OPS:
            self.advance()
            child = self.parse_unary()
            if tok.text == "X":
                return Next(child)
            if tok.text == "F":
                return Eventually(child)
            return Always(child)
        if tok.kind == "SYM" and tok.text == "!":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            self.advance()
            return TRUE if tok.text == "true" else FALSE
        if tok.kind == "LETTER":
            self.advance()
            return Atom(self.check_letter(tok))
        if tok.kind == "SYM" and tok.text == "(":
            self.advance()
            phi = self.parse_or()
            self.expect("SYM", ")")
            return phi
        if tok.kind == "SYM" and tok.text == "[":
            self.advance()
            names = []
            while self.peek().kind == "LETTER":
                names.append(self.check_letter(self.advance()))
            if not names:
                raise ParseError("letter set needs at least one letter", tok.pos)
            self.expect("SYM", "]")
            return LetterSet(frozenset(names))
        raise ParseError(f"expected a formula, found {tok.text!r}", tok.pos)

    def check_letter(self, tok: _Token) -> str:
        if tok.text not in self.alphabet:
            raise UnknownLetterError(f"unknown letter {tok.text!r}", tok.pos)
        return tok.text


def parse(text: str, alphabet: Alphabet) -> Formula:
    """Parse a formula; all atoms must belong to ``alphabet``."""
    return _Parser(text, alphabet).parse()


# Precedence levels used by the renderer; a child is parenthesized when its
# level is below what its context admits.
_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_UNTIL = 3
_LEVEL_UNARY = 4
_LEVEL_ATOM = 5


def render(phi: Formula) -> str:
    """Text that ``parse`` maps back to an equal AST (modulo parentheses).

    ``Implies`` has no concrete syntax and is emitted as ``!lhs | rhs``.
    """
    return _render(phi, _LEVEL_OR)


def _render(phi: Formula, min_level: int) -> str:
    if isinstance(phi, Implies):
        return _render(Or(Not(phi.left), phi.right), min_level)
    text, level = _render_node(phi)
    if level < min_level:
        return f"({text})"
    return text


def _render_node(phi: Formula) -> tuple[str, int]:
    if isinstance(phi, Atom):
        return phi.name, _LEVEL_ATOM
    if phi == TRUE:
        return "true", _LEVEL_ATOM
    if phi == FALSE:
        return "false", _LEVEL_ATOM
    if isinstance(phi, LetterSet):
        return "[" + " ".join(sorted(phi.names)) + "]", _LEVEL_ATOM
    if isinstance(phi, Not):
        return "!" + _render(phi.child, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(phi, Next):
        return "X " + _render(phi.child, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(phi, Eventually):
        return "F " + _render(phi.child, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(phi, Always):
        return "G " + _render(phi.child, _LEVEL_UNARY), _LEVEL_UNARY
    if isinstance(phi, FreqUntil):
        op = f"U{{{phi.freq.numerator}/{phi.freq.denominator}}}"
        left = _render(phi.left, _LEVEL_UNARY)
        right = _render(phi.right, _LEVEL_UNTIL)
        return f"{left} {op} {right}", _LEVEL_UNTIL
    if isinstance(phi, ClassicUntil):
        left = _render(phi.left, _LEVEL_UNARY)
        right = _render(phi.right, _LEVEL_UNTIL)
        return f"{left} U {right}", _LEVEL_UNTIL
    if isinstance(phi, And):
        left = _render(phi.left, _LEVEL_AND)
        right = _render(phi.right, _LEVEL_UNTIL)
        return f"{left} & {right}", _LEVEL_AND
    if isinstance(phi, Or):
        left = _render(phi.left, _LEVEL_OR)
        right = _render(phi.right, _LEVEL_AND)
        return f"{left} | {right}", _LEVEL_OR
    raise TypeError(f"not a formula: {phi!r}")
