"""Lexer, parser, and printer for the sequence-synthesis DSL.

The language is a tiny integer expression language: constants, the two
binder variables ``x`` and ``y``, the arithmetic operators ``+ - * div
mod``, and the call forms ``loop``, ``loop2``, ``compr`` and ``cond``.
``loop``/``compr`` take one leading lambda written ``\\(x,y).body``,
``loop2`` takes two.

Grammar (EBNF)::

    program := expr
    expr    := mul {("+"|"-") mul}
    mul     := atom {("*"|"div"|"mod") atom}
    atom    := const | "x" | "y" | "(" expr ")" | call
    call    := "loop"  "(" lam "," expr "," expr ")"
             | "loop2" "(" lam "," lam "," expr "," expr "," expr ")"
             | "compr" "(" lam "," expr ")"
             | "cond"  "(" expr "," expr "," expr ")"
    lam     := "\\" "(" "x" "," "y" ")" "." expr
    const   := decimal digits        (strict mode: "0" | "1" | "2")

In strict mode (the synthesis corpus convention) the only constants are
0, 1 and 2.  Extended mode admits arbitrary nonnegative decimal
literals, which the optimizer needs for internal round-trips.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

MAX_NESTING = 200

CALL_ARITIES = {"loop": 3, "loop2": 5, "compr": 2, "cond": 3}


class LexError(Exception):
    """Character or literal outside the grammar, located by offset."""

    def __init__(self, offset: int, found: str, message: str | None = None):
        self.offset = offset
        self.found = found
        super().__init__(message or f"unexpected {found!r} at offset {offset}")


class ParseError(Exception):
    """Token stream does not form a program."""

    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected}, found {found} at offset {offset}")


class TokenKind(enum.Enum):
    CONST = "CONST"
    VAR_X = "VAR_X"
    VAR_Y = "VAR_Y"
    PLUS = "PLUS"
    MINUS = "MINUS"
    STAR = "STAR"
    DIV = "DIV"
    MOD = "MOD"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    COMMA = "COMMA"
    LAMBDA_HEAD = "LAMBDA_HEAD"
    DOT = "DOT"
    IDENT = "IDENT"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    value: object  # int payload for CONST, text for IDENT, binder pair for LAMBDA_HEAD
    start: int
    end: int


# AST nodes.  All are frozen so structural equality and hashing come for
# free; the evaluator, optimizer, and code generator all rely on ==.


@dataclass(frozen=True, slots=True)
class Const:
    value: int


@dataclass(frozen=True, slots=True)
class X:
    pass


@dataclass(frozen=True, slots=True)
class Y:
    pass


@dataclass(frozen=True, slots=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Mod:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Cond:
    test: "Expr"
    then: "Expr"
    other: "Expr"


@dataclass(frozen=True, slots=True)
class Loop:
    body: "Expr"  # binds x = accumulator, y = 1-based iteration counter
    count: "Expr"
    init: "Expr"


@dataclass(frozen=True, slots=True)
class Loop2:
    f: "Expr"  # binds x = first accumulator, y = second accumulator
    g: "Expr"
    count: "Expr"
    init1: "Expr"
    init2: "Expr"


@dataclass(frozen=True, slots=True)
class Compr:
    body: "Expr"  # binds x = candidate, y = 0
    index: "Expr"


Expr = (
    Const | X | Y | Add | Sub | Mul | Div | Mod | Cond | Loop | Loop2 | Compr
)

BINARY_OPS = {Add: "+", Sub: "-", Mul: "*", Div: "div", Mod: "mod"}


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(source: str, mode: str = "strict") -> list[Token]:
    """Tokenize ``source``; raises :class:`LexError` on foreign characters.

    Whitespace-insensitive.  ``\\(x,y)`` lexes as one LAMBDA_HEAD token;
    the following ``.`` is a separate DOT.  Strict mode rejects integer
    literals other than 0, 1 and 2.
    """
    if mode not in ("strict", "extended"):
        raise ValueError(f"unknown mode {mode!r}")
    tokens: list[Token] = []
    i = 0
    n = len(source)

    def skip_ws(j: int) -> int:
        while j < n and source[j].isspace():
            j += 1
        return j

    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        start = i
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            if mode == "strict" and text not in ("0", "1", "2"):
                raise LexError(start, text, f"constant {text!r} at offset {start}: strict mode allows only 0, 1, 2")
            tokens.append(Token(TokenKind.CONST, int(text), start, j))
            i = j
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = {
                "x": TokenKind.VAR_X,
                "y": TokenKind.VAR_Y,
                "div": TokenKind.DIV,
                "mod": TokenKind.MOD,
            }.get(text, TokenKind.IDENT)
            value = text if kind == TokenKind.IDENT else None
            tokens.append(Token(kind, value, start, j))
            i = j
            continue
        if c == "\\":
            # \ ( ident , ident )  -- whitespace allowed between parts
            j = skip_ws(i + 1)
            if j >= n or source[j] != "(":
                raise LexError(j if j < n else n, source[j] if j < n else "<eof>", f"expected '(' after '\\' at offset {j}")
            j = skip_ws(j + 1)
            binders = []
            for which in range(2):
                if j >= n or not _is_ident_start(source[j]):
                    raise LexError(j if j < n else n, source[j] if j < n else "<eof>", f"expected binder name at offset {j}")
                k = j
                while k < n and _is_ident_char(source[k]):
                    k += 1
                binders.append(source[j:k])
                j = skip_ws(k)
                sep = "," if which == 0 else ")"
                if j >= n or source[j] != sep:
                    raise LexError(j if j < n else n, source[j] if j < n else "<eof>", f"expected {sep!r} in lambda head at offset {j}")
                j = skip_ws(j + 1) if which == 0 else j + 1
            tokens.append(Token(TokenKind.LAMBDA_HEAD, tuple(binders), start, j))
            i = j
            continue
        simple = {
            "+": TokenKind.PLUS,
            "-": TokenKind.MINUS,
            "*": TokenKind.STAR,
            "(": TokenKind.LPAREN,
            ")": TokenKind.RPAREN,
            ",": TokenKind.COMMA,
            ".": TokenKind.DOT,
        }.get(c)
        if simple is None:
            raise LexError(start, c)
        tokens.append(Token(simple, None, start, i + 1))
        i += 1
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], length: int):
        self.tokens = tokens
        self.pos = 0
        self.end_offset = length

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _describe(self, tok: Token | None) -> str:
        if tok is None:
            return "end of input"
        if tok.kind == TokenKind.CONST:
            return repr(str(tok.value))
        if tok.kind == TokenKind.IDENT:
            return repr(tok.value)
        if tok.kind == TokenKind.LAMBDA_HEAD:
            return "lambda head"
        return repr({
            TokenKind.VAR_X: "x", TokenKind.VAR_Y: "y", TokenKind.PLUS: "+",
            TokenKind.MINUS: "-", TokenKind.STAR: "*", TokenKind.DIV: "div",
            TokenKind.MOD: "mod", TokenKind.LPAREN: "(", TokenKind.RPAREN: ")",
            TokenKind.COMMA: ",", TokenKind.DOT: ".",
        }[tok.kind])

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        offset = tok.start if tok is not None else self.end_offset
        return ParseError(offset, expected, self._describe(tok))

    def expect(self, kind: TokenKind, expected: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            raise self.fail(expected)
        self.pos += 1
        return tok

    def parse_expr(self, depth: int) -> Expr:
        if depth > MAX_NESTING:
            raise ParseError(self.peek().start if self.peek() else self.end_offset,
                             "shallower nesting", "nesting deeper than %d" % MAX_NESTING)
        node = self.parse_mul(depth + 1)
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == TokenKind.PLUS:
                self.pos += 1
                node = Add(node, self.parse_mul(depth + 1))
            elif tok is not None and tok.kind == TokenKind.MINUS:
                self.pos += 1
                node = Sub(node, self.parse_mul(depth + 1))
            else:
                return node

    def parse_mul(self, depth: int) -> Expr:
        if depth > MAX_NESTING:
            raise ParseError(self.peek().start if self.peek() else self.end_offset,
                             "shallower nesting", "nesting deeper than %d" % MAX_NESTING)
        node = self.parse_atom(depth + 1)
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == TokenKind.STAR:
                self.pos += 1
                node = Mul(node, self.parse_atom(depth + 1))
            elif tok is not None and tok.kind == TokenKind.DIV:
                self.pos += 1
                node = Div(node, self.parse_atom(depth + 1))
            elif tok is not None and tok.kind == TokenKind.MOD:
                self.pos += 1
                node = Mod(node, self.parse_atom(depth + 1))
            else:
                return node

    def parse_lambda(self, depth: int) -> Expr:
        tok = self.peek()
        if tok is None or tok.kind != TokenKind.LAMBDA_HEAD:
            raise self.fail("lambda head '\\(x,y).'")
        if tok.value != ("x", "y"):
            raise ParseError(tok.start, "binders 'x,y'", repr(",".join(tok.value)))
        self.pos += 1
        self.expect(TokenKind.DOT, "'.' after lambda head")
        return self.parse_expr(depth + 1)

    def parse_atom(self, depth: int) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.fail("expression")
        if tok.kind == TokenKind.CONST:
            self.pos += 1
            return Const(tok.value)
        if tok.kind == TokenKind.VAR_X:
            self.pos += 1
            return X()
        if tok.kind == TokenKind.VAR_Y:
            self.pos += 1
            return Y()
        if tok.kind == TokenKind.LPAREN:
            self.pos += 1
            node = self.parse_expr(depth + 1)
            self.expect(TokenKind.RPAREN, "')'")
            return node
        if tok.kind == TokenKind.IDENT:
            name = tok.value
            if name not in CALL_ARITIES:
                raise ParseError(tok.start, "constant, variable, '(' or call", repr(name))
            self.pos += 1
            self.expect(TokenKind.LPAREN, f"'(' after {name!r}")
            if name == "loop":
                body = self.parse_lambda(depth)
                self.expect(TokenKind.COMMA, "',' (loop takes 3 arguments)")
                count = self.parse_expr(depth + 1)
                self.expect(TokenKind.COMMA, "',' (loop takes 3 arguments)")
                init = self.parse_expr(depth + 1)
                node = Loop(body, count, init)
            elif name == "loop2":
                f = self.parse_lambda(depth)
                self.expect(TokenKind.COMMA, "',' (loop2 takes 5 arguments)")
                g = self.parse_lambda(depth)
                self.expect(TokenKind.COMMA, "',' (loop2 takes 5 arguments)")
                count = self.parse_expr(depth + 1)
                self.expect(TokenKind.COMMA, "',' (loop2 takes 5 arguments)")
                init1 = self.parse_expr(depth + 1)
                self.expect(TokenKind.COMMA, "',' (loop2 takes 5 arguments)")
                init2 = self.parse_expr(depth + 1)
                node = Loop2(f, g, count, init1, init2)
            elif name == "compr":
                body = self.parse_lambda(depth)
                self.expect(TokenKind.COMMA, "',' (compr takes 2 arguments)")
                index = self.parse_expr(depth + 1)
                node = Compr(body, index)
            else:  # cond
                test = self.parse_expr(depth + 1)
                self.expect(TokenKind.COMMA, "',' (cond takes 3 arguments)")
                then = self.parse_expr(depth + 1)
                self.expect(TokenKind.COMMA, "',' (cond takes 3 arguments)")
                other = self.parse_expr(depth + 1)
                node = Cond(test, then, other)
            self.expect(TokenKind.RPAREN, f"')' closing {name!r}")
            return node
        raise self.fail("expression")


def parse_program(source: str, mode: str = "strict") -> Expr:
    """Parse ``source`` into an :data:`Expr`, or raise Lex/ParseError."""
    tokens = tokenize(source, mode)
    parser = _Parser(tokens, len(source))
    node = parser.parse_expr(0)
    if parser.peek() is not None:
        raise parser.fail("end of input")
    return node


_PREC_ADD = 1
_PREC_MUL = 2
_PREC_ATOM = 3


def _node_prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div, Mod)):
        return _PREC_MUL
    return _PREC_ATOM


def _emit(e: Expr, min_prec: int, out: list[str]) -> None:
    prec = _node_prec(e)
    if prec < min_prec:
        out.append("(")
        _emit(e, 0, out)
        out.append(")")
        return
    if isinstance(e, Const):
        if e.value < 0:
            # the grammar has no negative literals; render via subtraction
            # so optimizer-folded constants stay re-parseable
            out.append(f"(0 - {-e.value})")
        else:
            out.append(str(e.value))
    elif isinstance(e, X):
        out.append("x")
    elif isinstance(e, Y):
        out.append("y")
    elif isinstance(e, (Add, Sub, Mul, Div, Mod)):
        # left-associative: the right operand needs one level more binding
        _emit(e.left, prec, out)
        out.append(f" {BINARY_OPS[type(e)]} ")
        _emit(e.right, prec + 1, out)
    elif isinstance(e, Cond):
        out.append("cond(")
        _emit(e.test, 0, out)
        out.append(", ")
        _emit(e.then, 0, out)
        out.append(", ")
        _emit(e.other, 0, out)
        out.append(")")
    elif isinstance(e, Loop):
        out.append("loop(\\(x,y).")
        _emit(e.body, _PREC_ADD, out)
        out.append(", ")
        _emit(e.count, 0, out)
        out.append(", ")
        _emit(e.init, 0, out)
        out.append(")")
    elif isinstance(e, Loop2):
        out.append("loop2(\\(x,y).")
        _emit(e.f, _PREC_ADD, out)
        out.append(", \\(x,y).")
        _emit(e.g, _PREC_ADD, out)
        out.append(", ")
        _emit(e.count, 0, out)
        out.append(", ")
        _emit(e.init1, 0, out)
        out.append(", ")
        _emit(e.init2, 0, out)
        out.append(")")
    elif isinstance(e, Compr):
        out.append("compr(\\(x,y).")
        _emit(e.body, _PREC_ADD, out)
        out.append(", ")
        _emit(e.index, 0, out)
        out.append(")")
    else:
        raise TypeError(f"not an Expr: {e!r}")


def print_program(e: Expr) -> str:
    """Render ``e`` as grammar-conformant text with minimal parentheses.

    Inverse of :func:`parse_program` up to structural equality; output
    containing constants outside 0..2 re-parses only in extended mode.
    """
    out: list[str] = []
    _emit(e, 0, out)
    return "".join(out)


def count_nodes(e: Expr) -> int:
    """Number of AST nodes in ``e``."""
    stack = [e]
    n = 0
    while stack:
        node = stack.pop()
        n += 1
        stack.extend(_children(node))
    return n


def _children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Const, X, Y)):
        return ()
    if isinstance(e, (Add, Sub, Mul, Div, Mod)):
        return (e.left, e.right)
    if isinstance(e, Cond):
        return (e.test, e.then, e.other)
    if isinstance(e, Loop):
        return (e.body, e.count, e.init)
    if isinstance(e, Loop2):
        return (e.f, e.g, e.count, e.init1, e.init2)
    if isinstance(e, Compr):
        return (e.body, e.index)
    raise TypeError(f"not an Expr: {e!r}")


def children(e: Expr) -> tuple[Expr, ...]:
    """Immediate subexpressions of ``e`` in positional order."""
    return _children(e)
