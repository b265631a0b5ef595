"""Parser for the OCL subset.

Constraint files hold `context <Class> inv <name>: <expr>` blocks with
`--` line comments.  Operator precedence, loosest first: implies
(right-associative), or, and, =/<>, comparisons, +/-, */÷, unary not/-,
then navigation and `->` collection calls.  String literals are
single-quoted and carry no escape sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from modelkit.diagnostics import Diagnostic, SourceSpan, error
from modelkit.metamodel import BoolV, FloatV, IntV, NULL, StrV
from modelkit.ocl.nodes import (
    Binary,
    CollectionOp,
    COLLECTION_OPS,
    If,
    Literal,
    Nav,
    NULLARY_OPS,
    OclConstraint,
    OclExpr,
    SelfRef,
    Unary,
    VarRef,
)

KEYWORDS = frozenset({
    "context", "inv", "self", "true", "false", "null",
    "not", "and", "or", "implies", "if", "then", "else", "endif",
})

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>--[^\n]*)
  | (?P<newline>\n)
  | (?P<float>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<string>'[^'\n]*')
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op><>|<=|>=|->|[()<>=+\-*/.,:|])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int float string ident op eof
    text: str
    line: int
    column: int


class OclSyntaxError(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


def tokenize(text: str, filename: str = "<ocl>") -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise OclSyntaxError(f"unexpected character {text[pos]!r}",
                                 Token("error", text[pos], line, col))
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class OclParseResult:
    constraints: list[OclConstraint] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def expect_op(self, op: str) -> Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise OclSyntaxError(f"expected '{op}', found {tok.text!r}", tok)
        return self.next()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise OclSyntaxError(f"expected {what}, found {tok.text!r}", tok)
        return self.next()

    # Precedence ladder, loosest binding first.

    def parse_expression(self) -> OclExpr:
        return self.parse_implies()

    def parse_implies(self) -> OclExpr:
        lhs = self.parse_or()
        if self.at_keyword("implies"):
            self.next()
            return Binary("implies", lhs, self.parse_implies())
        return lhs

    def parse_or(self) -> OclExpr:
        expr = self.parse_and()
        while self.at_keyword("or"):
            self.next()
            expr = Binary("or", expr, self.parse_and())
        return expr

    def parse_and(self) -> OclExpr:
        expr = self.parse_equality()
        while self.at_keyword("and"):
            self.next()
            expr = Binary("and", expr, self.parse_equality())
        return expr

    def parse_equality(self) -> OclExpr:
        expr = self.parse_comparison()
        while self.peek().kind == "op" and self.peek().text in ("=", "<>"):
            op = self.next().text
            expr = Binary(op, expr, self.parse_comparison())
        return expr

    def parse_comparison(self) -> OclExpr:
        expr = self.parse_additive()
        while self.peek().kind == "op" and self.peek().text in ("<", "<=", ">", ">="):
            op = self.next().text
            expr = Binary(op, expr, self.parse_additive())
        return expr

    def parse_additive(self) -> OclExpr:
        expr = self.parse_multiplicative()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.next().text
            expr = Binary(op, expr, self.parse_multiplicative())
        return expr

    def parse_multiplicative(self) -> OclExpr:
        expr = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.next().text
            expr = Binary(op, expr, self.parse_unary())
        return expr

    def parse_unary(self) -> OclExpr:
        if self.at_keyword("not"):
            self.next()
            return Unary("not", self.parse_unary())
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            return Unary("-", self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> OclExpr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == ".":
                self.next()
                name = self.expect_ident("an attribute or association name")
                expr = Nav(expr, name.text)
            elif tok.kind == "op" and tok.text == "->":
                self.next()
                expr = self.parse_collection_op(expr)
            else:
                return expr

    def parse_collection_op(self, source: OclExpr) -> OclExpr:
        op_tok = self.expect_ident("a collection operation")
        op = op_tok.text
        if op not in COLLECTION_OPS:
            raise OclSyntaxError(f"unknown collection operation '{op}'", op_tok)
        self.expect_op("(")
        if op in NULLARY_OPS:
            self.expect_op(")")
            return CollectionOp(source, op)
        if op == "includes":
            arg = self.parse_expression()
            self.expect_op(")")
            return CollectionOp(source, op, body=arg)
        # forAll / exists / select / collect: op(var | body)
        var = self.expect_ident("an iterator variable")
        self.expect_op("|")
        body = self.parse_expression()
        self.expect_op(")")
        return CollectionOp(source, op, var=var.text, body=body)

    def parse_primary(self) -> OclExpr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return Literal(IntV(int(tok.text)))
        if tok.kind == "float":
            self.next()
            return Literal(FloatV(float(tok.text)))
        if tok.kind == "string":
            self.next()
            return Literal(StrV(tok.text[1:-1]))
        if tok.kind == "op" and tok.text == "(":
            self.next()
            expr = self.parse_expression()
            self.expect_op(")")
            return expr
        if tok.kind == "ident":
            if tok.text == "true":
                self.next()
                return Literal(BoolV(True))
            if tok.text == "false":
                self.next()
                return Literal(BoolV(False))
            if tok.text == "null":
                self.next()
                return Literal(NULL)
            if tok.text == "self":
                self.next()
                return SelfRef()
            if tok.text == "if":
                return self.parse_if()
            if tok.text in KEYWORDS:
                raise OclSyntaxError(f"unexpected keyword '{tok.text}'", tok)
            self.next()
            return VarRef(tok.text)
        raise OclSyntaxError(f"unexpected token {tok.text!r}", tok)

    def parse_if(self) -> OclExpr:
        self.next()  # if
        condition = self.parse_expression()
        self.expect_keyword("then")
        then_branch = self.parse_expression()
        self.expect_keyword("else")
        else_branch = self.parse_expression()
        self.expect_keyword("endif")
        return If(condition, then_branch, else_branch)

    def expect_keyword(self, word: str) -> None:
        tok = self.peek()
        if tok.kind != "ident" or tok.text != word:
            raise OclSyntaxError(f"expected '{word}', found {tok.text!r}", tok)
        self.next()

    # Constraint blocks.

    def skip_to_next_context(self) -> None:
        while not self.at_keyword("context") and self.peek().kind != "eof":
            self.next()

    def parse_constraints(self) -> OclParseResult:
        result = OclParseResult()
        names: set[str] = set()
        while self.peek().kind != "eof":
            try:
                start = self.peek()
                self.expect_keyword("context")
                ctx = self.expect_ident("a context class name")
                self.expect_keyword("inv")
                name = self.expect_ident("a constraint name")
                self.expect_op(":")
                body = self.parse_expression()
                if name.text in names:
                    result.diagnostics.append(error(
                        "dup-constraint",
                        f"constraint '{name.text}' defined twice",
                        SourceSpan(self.filename, name.line, name.column)))
                else:
                    names.add(name.text)
                    result.constraints.append(OclConstraint(
                        context_class=ctx.text, name=name.text, body=body,
                        span=SourceSpan(self.filename, start.line, start.column)))
            except OclSyntaxError as exc:
                result.diagnostics.append(error(
                    "syntax", exc.message,
                    SourceSpan(self.filename, exc.token.line, exc.token.column)))
                self.skip_to_next_context()
        return result


def parse_ocl(text: str, filename: str = "<ocl>") -> OclParseResult:
    """Parse a constraint file into OclConstraints plus any diagnostics."""
    try:
        tokens = tokenize(text, filename)
    except OclSyntaxError as exc:
        return OclParseResult(diagnostics=[error(
            "syntax", exc.message,
            SourceSpan(filename, exc.token.line, exc.token.column))])
    return _Parser(tokens, filename).parse_constraints()


def parse_expression(text: str, filename: str = "<expr>"
                     ) -> tuple[Optional[OclExpr], list[Diagnostic]]:
    """Parse a single standalone expression (used for FSM guards)."""
    try:
        tokens = tokenize(text, filename)
        parser = _Parser(tokens, filename)
        expr = parser.parse_expression()
        trailing = parser.peek()
        if trailing.kind != "eof":
            raise OclSyntaxError(f"unexpected trailing input {trailing.text!r}",
                                 trailing)
        return expr, []
    except OclSyntaxError as exc:
        return None, [error("syntax", exc.message,
                            SourceSpan(filename, exc.token.line, exc.token.column))]
