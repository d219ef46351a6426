"""The ``.bnet`` network-definition language.

One statement per agent::

    # four agents, one stable state
    a1 = a1
    a2 = a1 | a3
    a3 = !a2; a4 = a3

``!`` binds tighter than ``&``, which binds tighter than ``|``.  A ``;`` ends a
statement; it may be left out when the statement is the last one on its line.
Names that are used but never defined become input agents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NetworkSyntaxError
from .network import (
    INPUT,
    MAX_AGENTS,
    And,
    Const,
    Expr,
    InteractionNetwork,
    Not,
    Or,
    Var,
    build_network,
)

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<const>[01](?![A-Za-z0-9_]))"
    r"|(?P<op>[=;!&|()])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, CONST, one of the operator characters, or EOF
    text: str
    line: int
    column: int
    newline_before: bool


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    newline = True
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise NetworkSyntaxError(line, col, {"IDENT", "0", "1", "!", "("},
                                     found=text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
            newline = True
        elif kind == "ident":
            tokens.append(Token("IDENT", m.group(), line, col, newline))
            newline = False
        elif kind == "const":
            tokens.append(Token("CONST", m.group(), line, col, newline))
            newline = False
        elif kind == "op":
            tokens.append(Token(m.group(), m.group(), line, col, newline))
            newline = False
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1, True))
    return tokens


_ATOM_START = {"IDENT", "0", "1", "(", "!"}


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise NetworkSyntaxError(t.line, t.column, expected,
                                 found=t.text if t.kind != "EOF" else "end of input")

    def expect(self, kind):
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def network(self):
        defs = []
        while self.tok.kind != "EOF":
            defs.append(self.stmt())
        return defs

    def stmt(self):
        name = self.expect("IDENT").text
        self.expect("=")
        body = self.expr()
        if self.tok.kind == ";":
            self.i += 1
        elif not self.tok.newline_before:
            self.fail({";", "&", "|"})
        return name, body

    def expr(self):
        args = [self.conj()]
        while self.tok.kind == "|":
            self.i += 1
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self):
        args = [self.unary()]
        while self.tok.kind == "&":
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        if self.tok.kind == "!":
            self.i += 1
            return Not(self.unary())
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "IDENT":
            self.i += 1
            return Var(t.text)
        if t.kind == "CONST":
            self.i += 1
            return Const(t.text == "1")
        if t.kind == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        self.fail(_ATOM_START)


def parse_definitions(text: str) -> list[tuple[str, Expr]]:
    """Parse source text into ``(name, expression)`` pairs without building."""
    return _Parser(text).network()


def parse_network(text: str, max_agents: int = MAX_AGENTS) -> InteractionNetwork:
    return build_network(parse_definitions(text), max_agents=max_agents)


def load_network(path, max_agents: int = MAX_AGENTS) -> InteractionNetwork:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_network(fh.read(), max_agents=max_agents)


# -- rendering ----------------------------------------------------------------


def render_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return "1" if e.value else "0"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Not):
        inner = render_expr(e.arg)
        if isinstance(e.arg, (And, Or)):
            inner = f"({inner})"
        return "!" + inner
    if isinstance(e, And):
        # Nested conjunctions keep their parentheses so the AST round-trips.
        return " & ".join(f"({render_expr(a)})" if isinstance(a, (And, Or))
                          else render_expr(a) for a in e.args)
    if isinstance(e, Or):
        return " | ".join(f"({render_expr(a)})" if isinstance(a, Or)
                          else render_expr(a) for a in e.args)
    raise TypeError(f"not an expression: {e!r}")


def render_network(net: InteractionNetwork) -> str:
    lines = []
    referenced = set()
    for a, f in zip(net.agents, net.functions):
        if f is INPUT:
            continue
        referenced.update(f.variables())
        lines.append(f"{a.name} = {render_expr(f)}")
    for a, f in zip(net.agents, net.functions):
        # An input nobody refers to has no textual carrier; keep it visible.
        if f is INPUT and a.name not in referenced:
            lines.append(f"# input {a.name}")
    return "".join(line + "\n" for line in lines)
