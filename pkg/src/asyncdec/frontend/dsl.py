"""Equation DSL for generator functions.

One next-state equation per line, `x<i>' = <expr>`, over the state variables
x1..xn and input variables u1..um.  Operators: ! (not), & (and), ^ (xor),
| (or), parentheses and the constants 0/1, with precedence ! > & > ^ > |.
`#` starts a comment; whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..boolfn import GeneratorFn, check_scan_size
from ..errors import AsyncDecError


class DslSyntaxError(AsyncDecError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class DslNameError(AsyncDecError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


# AST nodes: ("const", bit) | ("x", i) | ("u", j) | ("not", e) |
# ("and"/"xor"/"or", left, right)

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z_0-9]*)|(\d+)|([!&^|()'=])|(\S))")


def _tokenize(text: str, line_no: int):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        name, digits, op, junk = match.groups()
        col = match.start(match.lastindex) + 1
        if junk is not None:
            raise DslSyntaxError(f"unexpected character {junk!r}", line_no, col)
        if name is not None:
            tokens.append(("name", name, col))
        elif digits is not None:
            tokens.append(("number", digits, col))
        else:
            tokens.append((op, op, col))
        pos = match.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, line_no: int):
        self.tokens = tokens
        self.line_no = line_no
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise DslSyntaxError(
                f"expected {kind!r}, found {tok[1]!r}" if tok[0] != "end" else f"unexpected end of line, expected {kind!r}",
                self.line_no,
                tok[2],
            )
        self.pos += 1
        return tok

    def or_expr(self):
        node = self.xor_expr()
        while self.peek()[0] == "|":
            self.take()
            node = ("or", node, self.xor_expr())
        return node

    def xor_expr(self):
        node = self.and_expr()
        while self.peek()[0] == "^":
            self.take()
            node = ("xor", node, self.and_expr())
        return node

    def and_expr(self):
        node = self.unary()
        while self.peek()[0] == "&":
            self.take()
            node = ("and", node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "!":
            self.take()
            return ("not", self.unary())
        return self.atom()

    def atom(self):
        kind, text, col = self.peek()
        if kind == "(":
            self.take()
            node = self.or_expr()
            self.take(")")
            return node
        if kind == "number":
            self.take()
            if text not in ("0", "1"):
                raise DslSyntaxError(f"constant must be 0 or 1, got {text}", self.line_no, col)
            return ("const", int(text))
        if kind == "name":
            self.take()
            kind_char = text[0]
            if kind_char in ("x", "u") and text[1:].isdigit() and not text[1:].startswith("0"):
                return (kind_char, int(text[1:]))
            raise DslSyntaxError(
                f"{text!r} is not a variable (expected x<i> or u<j>)", self.line_no, col
            )
        raise DslSyntaxError(
            f"unexpected {text!r}" if kind != "end" else "unexpected end of line",
            self.line_no,
            col,
        )


@dataclass(frozen=True)
class EquationProgram:
    """A parsed program: one expression per state coordinate."""

    n: int
    m: int
    exprs: tuple


def parse_dsl(text: str) -> EquationProgram:
    """Parse equations into a program; diagnostics carry line and column."""
    defined: dict[int, tuple] = {}
    references: list[tuple[str, int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        parser = _Parser(_tokenize(line, line_no), line_no)
        kind, name, col = parser.take()
        if kind != "name" or not (name[0] == "x" and name[1:].isdigit()):
            raise DslSyntaxError(
                f"a line must start with a state variable, found {name!r}", line_no, col
            )
        index = int(name[1:])
        parser.take("'")
        parser.take("=")
        expr = parser.or_expr()
        parser.take("end")
        if index in defined:
            raise DslNameError(f"state variable x{index} defined twice", line_no)
        if index < 1:
            raise DslNameError(f"state variable index must be >= 1, got x{index}", line_no)
        defined[index] = expr
        _collect_refs(expr, line_no, references)
    if not defined:
        raise DslNameError("no equations found", 0)
    n = max(defined)
    for i in range(1, n + 1):
        if i not in defined:
            raise DslNameError(f"state variable x{i} is never defined", 0)
    m = 0
    for kind, index, line_no in references:
        if kind == "x":
            if not 1 <= index <= n:
                raise DslNameError(f"undeclared state variable x{index}", line_no)
        else:
            m = max(m, index)
    return EquationProgram(n, m, tuple(defined[i] for i in range(1, n + 1)))


def _collect_refs(node, line_no, refs):
    kind = node[0]
    if kind in ("x", "u"):
        refs.append((kind, node[1], line_no))
    elif kind == "not":
        _collect_refs(node[1], line_no, refs)
    elif kind in ("and", "or", "xor"):
        _collect_refs(node[1], line_no, refs)
        _collect_refs(node[2], line_no, refs)


def _eval_expr(node, mu: int, lam: int) -> int:
    kind = node[0]
    if kind == "const":
        return node[1]
    if kind == "x":
        return (mu >> (node[1] - 1)) & 1
    if kind == "u":
        return (lam >> (node[1] - 1)) & 1
    if kind == "not":
        return 1 - _eval_expr(node[1], mu, lam)
    left = _eval_expr(node[1], mu, lam)
    right = _eval_expr(node[2], mu, lam)
    if kind == "and":
        return left & right
    if kind == "or":
        return left | right
    return left ^ right


def compile_program(prog: EquationProgram, limit: int | None = None) -> GeneratorFn:
    """Fill the truth table by evaluating every expression on every row."""
    check_scan_size(prog.n, prog.m, limit)
    rows = []
    for lam in range(1 << prog.m):
        for mu in range(1 << prog.n):
            out = 0
            for k, expr in enumerate(prog.exprs):
                out |= _eval_expr(expr, mu, lam) << k
            rows.append(out)
    return GeneratorFn(prog.n, prog.m, tuple(rows))
