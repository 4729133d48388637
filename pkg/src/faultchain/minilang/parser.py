"""Front end for the mini imperative language.

Surface: integer variables, ``read``/assignment/``print``/``return``,
``if`` with optional ``else``, ``while``, arithmetic ``+ - * /``,
comparisons, and boolean ``&& || !``. One statement per line, braces
for bodies. Statement ids ``S1..Sn`` are assigned in source order to
every statement including predicates, so reports survive re-parsing.

Grammar (see docs/grammar.md for the full version)::

    program  := stmt+
    stmt     := "read" "(" IDENT {"," IDENT} ")" ";"
              | IDENT "=" expr ";"
              | "print" "(" expr ")" ";"
              | "return" expr ";"
              | "if" "(" expr ")" block ["else" block]
              | "while" "(" expr ")" block
    block    := "{" {stmt} "}" | stmt
    expr     := or-expr with the usual precedence
                ( ! unary- )  >  * /  >  + -  >  < <= > >=  >  == !=  >  &&  >  ||
    primary  := INT | "true" | "false" | IDENT | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..errors import ParseError

KEYWORDS = {"read", "print", "return", "if", "else", "while", "true", "false"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>&&|\|\||==|!=|<=|>=|[-+*/<>!=(){},;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | keyword | op | eof
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup == "int":
            tokens.append(Token("int", text, line, col))
        elif m.lastgroup == "ident":
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, col))
        elif m.lastgroup == "op":
            tokens.append(Token("op", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- AST ---------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass
class Statement:
    sid: str
    kind: str  # Read | Assign | If | While | Print | Return
    line: int
    # payload per kind
    targets: tuple = ()          # Read
    name: Optional[str] = None   # Assign
    expr: object = None          # Assign / Print / Return / If / While condition
    body: list = field(default_factory=list)        # If then-branch / While body
    else_body: list = field(default_factory=list)   # If else-branch
    parent: Optional[str] = None  # sid of the governing predicate, None at top level


@dataclass
class Program:
    statements: list[Statement]   # all statements, source order
    top: list[Statement]          # top-level statement tree
    source: str

    def __post_init__(self):
        self.by_id = {s.sid: s for s in self.statements}
        self.order = {s.sid: i for i, s in enumerate(self.statements)}

    def statement_ids(self) -> tuple[str, ...]:
        return tuple(s.sid for s in self.statements)

    def has_output(self) -> bool:
        return any(s.kind in ("Print", "Return") for s in self.statements)

    def read_variables(self) -> tuple[str, ...]:
        names = []
        for s in self.statements:
            if s.kind == "Read":
                names.extend(s.targets)
        return tuple(names)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.counter = 0
        self.all_statements: list[Statement] = []

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.column)
        return self.advance()

    def fresh_sid(self) -> str:
        self.counter += 1
        return f"S{self.counter}"

    # -- statements ----

    def parse_program(self) -> Program:
        top = []
        while self.peek().kind != "eof":
            top.append(self.statement(parent=None))
        if not top:
            raise ParseError("no statements", 1, 1)
        return Program(self.all_statements, top, "")

    def statement(self, parent: Optional[str]) -> Statement:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text == "read":
            return self.read_stmt(parent)
        if tok.kind == "keyword" and tok.text == "print":
            return self.simple_expr_stmt("Print", parent)
        if tok.kind == "keyword" and tok.text == "return":
            return self.return_stmt(parent)
        if tok.kind == "keyword" and tok.text == "if":
            return self.if_stmt(parent)
        if tok.kind == "keyword" and tok.text == "while":
            return self.while_stmt(parent)
        if tok.kind == "ident":
            return self.assign_stmt(parent)
        raise ParseError(f"expected a statement, found {tok.text or 'end of input'!r}",
                         tok.line, tok.column)

    def _register(self, stmt: Statement) -> Statement:
        self.all_statements.append(stmt)
        return stmt

    def read_stmt(self, parent) -> Statement:
        tok = self.advance()
        stmt = self._register(Statement(self.fresh_sid(), "Read", tok.line, parent=parent))
        self.expect("(")
        names = [self.expect_ident().text]
        while self.peek().text == ",":
            self.advance()
            names.append(self.expect_ident().text)
        self.expect(")")
        self.expect(";")
        stmt.targets = tuple(names)
        return stmt

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected identifier, found {tok.text!r}", tok.line, tok.column)
        return self.advance()

    def assign_stmt(self, parent) -> Statement:
        tok = self.expect_ident()
        stmt = self._register(Statement(self.fresh_sid(), "Assign", tok.line,
                                        name=tok.text, parent=parent))
        self.expect("=")
        stmt.expr = self.expression()
        self.expect(";")
        return stmt

    def simple_expr_stmt(self, kind, parent) -> Statement:
        tok = self.advance()
        stmt = self._register(Statement(self.fresh_sid(), kind, tok.line, parent=parent))
        self.expect("(")
        stmt.expr = self.expression()
        self.expect(")")
        self.expect(";")
        return stmt

    def return_stmt(self, parent) -> Statement:
        tok = self.advance()
        stmt = self._register(Statement(self.fresh_sid(), "Return", tok.line, parent=parent))
        stmt.expr = self.expression()
        self.expect(";")
        return stmt

    def if_stmt(self, parent) -> Statement:
        tok = self.advance()
        stmt = self._register(Statement(self.fresh_sid(), "If", tok.line, parent=parent))
        self.expect("(")
        stmt.expr = self.expression()
        self.expect(")")
        stmt.body = self.block(stmt.sid)
        if self.peek().text == "else":
            self.advance()
            stmt.else_body = self.block(stmt.sid)
        return stmt

    def while_stmt(self, parent) -> Statement:
        tok = self.advance()
        stmt = self._register(Statement(self.fresh_sid(), "While", tok.line, parent=parent))
        self.expect("(")
        stmt.expr = self.expression()
        self.expect(")")
        stmt.body = self.block(stmt.sid)
        return stmt

    def block(self, parent_sid: str) -> list[Statement]:
        if self.peek().text == "{":
            self.advance()
            stmts = []
            while self.peek().text != "}":
                if self.peek().kind == "eof":
                    tok = self.peek()
                    raise ParseError("unterminated block", tok.line, tok.column)
                stmts.append(self.statement(parent_sid))
            self.advance()
            return stmts
        return [self.statement(parent_sid)]

    # -- expressions, lowest precedence first ----

    def expression(self):
        return self.or_expr()

    def or_expr(self):
        node = self.and_expr()
        while self.peek().text == "||":
            self.advance()
            node = Binary("||", node, self.and_expr())
        return node

    def and_expr(self):
        node = self.equality()
        while self.peek().text == "&&":
            self.advance()
            node = Binary("&&", node, self.equality())
        return node

    def equality(self):
        node = self.comparison()
        while self.peek().text in ("==", "!="):
            op = self.advance().text
            node = Binary(op, node, self.comparison())
        return node

    def comparison(self):
        node = self.additive()
        while self.peek().text in ("<", "<=", ">", ">="):
            op = self.advance().text
            node = Binary(op, node, self.additive())
        return node

    def additive(self):
        node = self.multiplicative()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            node = Binary(op, node, self.multiplicative())
        return node

    def multiplicative(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok.text in ("!", "-"):
            self.advance()
            return Unary(tok.text, self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if tok.text == "true":
            self.advance()
            return BoolLit(True)
        if tok.text == "false":
            self.advance()
            return BoolLit(False)
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text)
        if tok.text == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        raise ParseError(f"expected an expression, found {tok.text or 'end of input'!r}",
                         tok.line, tok.column)


# -- static checks -----------------------------------------------------

_INT_OPS = {"+", "-", "*", "/"}
_CMP_OPS = {"<", "<=", ">", ">=", "==", "!="}
_BOOL_OPS = {"&&", "||"}


def expr_type(node, line: int) -> str:
    """Infer 'int' or 'bool'; raises on ill-typed trees."""
    if isinstance(node, IntLit):
        return "int"
    if isinstance(node, BoolLit):
        return "bool"
    if isinstance(node, Var):
        return "int"
    if isinstance(node, Unary):
        t = expr_type(node.operand, line)
        if node.op == "!" and t == "bool":
            return "bool"
        if node.op == "-" and t == "int":
            return "int"
        raise ParseError(f"operator {node.op!r} applied to {t}", line)
    if isinstance(node, Binary):
        lt = expr_type(node.left, line)
        rt = expr_type(node.right, line)
        if node.op in _INT_OPS and lt == rt == "int":
            return "int"
        if node.op in _CMP_OPS and lt == rt == "int":
            return "bool"
        if node.op in _BOOL_OPS and lt == rt == "bool":
            return "bool"
        raise ParseError(f"operator {node.op!r} applied to {lt} and {rt}", line)
    raise ParseError("malformed expression", line)


def expr_vars(node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return expr_vars(node.operand)
    if isinstance(node, Binary):
        return expr_vars(node.left) | expr_vars(node.right)
    return set()


def statement_uses(stmt: Statement) -> set[str]:
    """Variables read by the statement itself (not its body)."""
    if stmt.kind in ("Assign", "Print", "Return", "If", "While"):
        return expr_vars(stmt.expr)
    return set()


def statement_defs(stmt: Statement) -> tuple[str, ...]:
    if stmt.kind == "Read":
        return stmt.targets
    if stmt.kind == "Assign":
        return (stmt.name,)
    return ()


def _check_program(program: Program) -> None:
    defined: set[str] = set()
    for stmt in program.statements:
        for var in sorted(statement_uses(stmt)):
            if var not in defined:
                raise ParseError(f"variable {var!r} used before definition", stmt.line)
        defined.update(statement_defs(stmt))
        if stmt.kind in ("If", "While"):
            if expr_type(stmt.expr, stmt.line) != "bool":
                raise ParseError(f"{stmt.kind.lower()} condition must be boolean", stmt.line)
        elif stmt.kind in ("Assign", "Print", "Return"):
            if expr_type(stmt.expr, stmt.line) != "int":
                raise ParseError("expression must be an integer", stmt.line)


def parse(source: str) -> Program:
    """Parse and statically check a program.

    Raises ParseError with line/column on syntax errors, type errors,
    and lexical use-before-definition.
    """
    program = _Parser(tokenize(source)).parse_program()
    program.source = source
    _check_program(program)
    return program


# -- rendering (used by the fault-seeding corpus) ----------------------

def render_expr(node) -> str:
    if isinstance(node, IntLit):
        return str(node.value)
    if isinstance(node, BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"{node.op}({render_expr(node.operand)})"
    if isinstance(node, Binary):
        return f"({render_expr(node.left)} {node.op} {render_expr(node.right)})"
    raise ValueError(f"cannot render {node!r}")


def render_statement_line(stmt: Statement) -> str:
    """The statement's own line, without its body."""
    if stmt.kind == "Read":
        return f"read({', '.join(stmt.targets)});"
    if stmt.kind == "Assign":
        return f"{stmt.name} = {render_expr(stmt.expr)};"
    if stmt.kind == "Print":
        return f"print({render_expr(stmt.expr)});"
    if stmt.kind == "Return":
        return f"return {render_expr(stmt.expr)};"
    if stmt.kind == "If":
        return f"if ({render_expr(stmt.expr)})"
    if stmt.kind == "While":
        return f"while ({render_expr(stmt.expr)})"
    raise ValueError(stmt.kind)


def render_program(program: Program) -> str:
    lines: list[str] = []

    def emit(stmts, depth):
        pad = "    " * depth
        for s in stmts:
            if s.kind in ("If", "While"):
                lines.append(pad + render_statement_line(s) + " {")
                emit(s.body, depth + 1)
                if s.else_body:
                    lines.append(pad + "} else {")
                    emit(s.else_body, depth + 1)
                lines.append(pad + "}")
            else:
                lines.append(pad + render_statement_line(s))

    emit(program.top, 0)
    return "\n".join(lines) + "\n"
