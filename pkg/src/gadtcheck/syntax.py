"""Surface language: AST, lexer, parser and printers for `.gml` files.

A program is a sequence of type declarations and match checks::

    type _ t = Int : int t | Bool : bool t
    type ('a) option = None | Some of 'a
    type A.a
    check 'a t with | Int -> ok | Bool -> ok
    check char t with | _ -> .

Arms have no right-hand side beyond an opaque token; a literal ``.`` marks
a refutation arm.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"{line}:{col}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


# --------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class TyVar:
    name: str  # without the leading quote


@dataclass(frozen=True)
class TyAny:
    """Anonymous type variable, written ``_``."""


@dataclass(frozen=True)
class TyApp:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class TyArrow:
    dom: "TypeSyntax"
    cod: "TypeSyntax"


@dataclass(frozen=True)
class TyTuple:
    items: tuple


TypeSyntax = Union[TyVar, TyAny, TyApp, TyArrow, TyTuple]


# --------------------------------------------------------------------------
# Patterns

@dataclass(frozen=True)
class PWild:
    pass


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PConstr:
    name: str
    arg: Optional["Pattern"] = None


@dataclass(frozen=True)
class PTuple:
    items: tuple


@dataclass(frozen=True)
class POr:
    left: "Pattern"
    right: "Pattern"


Pattern = Union[PWild, PVar, PConstr, PTuple, POr]

WILD = PWild()


def or_of(patterns) -> Pattern:
    """Right-nested or-pattern of a non-empty sequence."""
    patterns = list(patterns)
    if not patterns:
        raise ValueError("or_of needs at least one pattern")
    out = patterns[-1]
    for p in reversed(patterns[:-1]):
        out = POr(p, out)
    return out


def or_branches(p: Pattern) -> list:
    if isinstance(p, POr):
        return or_branches(p.left) + or_branches(p.right)
    return [p]


def pattern_vars(p: Pattern) -> list:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PConstr):
        return pattern_vars(p.arg) if p.arg is not None else []
    if isinstance(p, PTuple):
        return [v for q in p.items for v in pattern_vars(q)]
    if isinstance(p, POr):
        return pattern_vars(p.left) + pattern_vars(p.right)
    return []


# --------------------------------------------------------------------------
# Declarations and checks

@dataclass(frozen=True)
class ConstructorSyntax:
    name: str
    arg: Optional[TypeSyntax]
    result: Optional[TypeSyntax]  # None for the `C of ty` form
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def is_gadt_form(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class Variant:
    constructors: tuple


@dataclass(frozen=True)
class Abstract:
    pass


@dataclass(frozen=True)
class Alias:
    target: TypeSyntax


@dataclass(frozen=True)
class TypeDeclSyntax:
    name: str
    params: tuple  # parameter names; "_" for anonymous
    body: Union[Variant, Abstract, Alias]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def arity(self) -> int:
        return len(self.params)


CONCRETE = "concrete"
REFUTATION = "refutation"


@dataclass(frozen=True)
class Arm:
    pattern: Pattern
    kind: str = CONCRETE
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MatchCheckSyntax:
    scrutinee: TypeSyntax
    arms: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SurfaceProgram:
    decls: tuple = ()
    checks: tuple = ()


# --------------------------------------------------------------------------
# Lexer

KEYWORDS = {"type", "and", "of", "check", "match", "with"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<tvar>'[a-z_][A-Za-z0-9_]*)
  | (?P<qname>[A-Z][A-Za-z0-9_]*\.[a-z_][A-Za-z0-9_]*)
  | (?P<uident>[A-Z][A-Za-z0-9_']*)
  | (?P<lident>[a-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>->|[|,*():=.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # tvar qname uident lident int sym kw eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token", text[pos])
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            if kind == "lident" and chunk in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# --------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_sym(self, text: str) -> bool:
        return self.at("sym", text)

    def at_kw(self, text: str) -> bool:
        return self.at("kw", text)

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            self.fail(what or (repr(text) if text else kind))
        return self.advance()

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.text or "end of input")

    # -- program --

    def program(self) -> SurfaceProgram:
        decls, checks = [], []
        while not self.at("eof"):
            if self.at_kw("type"):
                decls.extend(self.type_decls())
            elif self.at_kw("check") or self.at_kw("match"):
                checks.append(self.check())
            else:
                self.fail("'type' or 'check'")
        return SurfaceProgram(tuple(decls), tuple(checks))

    def type_decls(self) -> list:
        self.expect("kw", "type")
        out = [self.type_decl()]
        while self.at_kw("and"):
            self.advance()
            out.append(self.type_decl())
        return out

    def type_decl(self) -> TypeDeclSyntax:
        start = self.tok
        params = self.decl_params()
        name = self.type_name()
        if not self.at_sym("="):
            return TypeDeclSyntax(name, params, Abstract(), start.line, start.col)
        self.advance()
        if self.at("uident") or self.at_sym("|"):
            body = Variant(tuple(self.constructors()))
        else:
            body = Alias(self.type_expr())
        return TypeDeclSyntax(name, params, body, start.line, start.col)

    def decl_params(self) -> tuple:
        if self.at("tvar"):
            return (self.advance().text[1:],)
        if self.at("lident", "_"):
            self.advance()
            return ("_",)
        if self.at_sym("("):
            self.advance()
            params = [self.decl_param()]
            while self.at_sym(","):
                self.advance()
                params.append(self.decl_param())
            self.expect("sym", ")")
            return tuple(params)
        return ()

    def decl_param(self) -> str:
        if self.at("tvar"):
            return self.advance().text[1:]
        if self.at("lident", "_"):
            self.advance()
            return "_"
        self.fail("a type parameter")

    def type_name(self) -> str:
        if self.at("lident") and self.tok.text != "_":
            return self.advance().text
        if self.at("qname"):
            return self.advance().text
        self.fail("a type name")

    def constructors(self) -> list:
        out = []
        if self.at_sym("|"):
            self.advance()
            if not self.at("uident"):
                return out  # `type empty = |`
        out.append(self.constructor())
        while self.at_sym("|"):
            self.advance()
            out.append(self.constructor())
        return out

    def constructor(self) -> ConstructorSyntax:
        t = self.expect("uident", what="a constructor name")
        if self.at_kw("of"):
            self.advance()
            return ConstructorSyntax(t.text, self.type_expr(), None, t.line, t.col)
        if self.at_sym(":"):
            self.advance()
            parts = self.arrow_chain()
            result = parts[-1]
            args = parts[:-1]
            if not args:
                arg = None
            elif len(args) == 1:
                arg = args[0]
            else:
                arg = TyTuple(tuple(args))
            return ConstructorSyntax(t.text, arg, result, t.line, t.col)
        return ConstructorSyntax(t.text, None, None, t.line, t.col)

    # -- types --

    def arrow_chain(self) -> list:
        parts = [self.tuple_type()]
        while self.at_sym("->"):
            self.advance()
            parts.append(self.tuple_type())
        return parts

    def type_expr(self) -> TypeSyntax:
        parts = self.arrow_chain()
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = TyArrow(p, out)
        return out

    def tuple_type(self) -> TypeSyntax:
        items = [self.app_type()]
        while self.at_sym("*"):
            self.advance()
            items.append(self.app_type())
        return items[0] if len(items) == 1 else TyTuple(tuple(items))

    def app_type(self) -> TypeSyntax:
        if self.at_sym("("):
            self.advance()
            first = self.type_expr()
            if self.at_sym(","):
                args = [first]
                while self.at_sym(","):
                    self.advance()
                    args.append(self.type_expr())
                self.expect("sym", ")")
                ty = TyApp(self.type_name(), tuple(args))
            else:
                self.expect("sym", ")")
                ty = first
        elif self.at("tvar"):
            ty = TyVar(self.advance().text[1:])
        elif self.at("lident", "_"):
            self.advance()
            ty = TyAny()
        elif self.at("lident") or self.at("qname"):
            ty = TyApp(self.advance().text)
        else:
            self.fail("a type")
        while (self.at("lident") and self.tok.text != "_") or self.at("qname"):
            ty = TyApp(self.advance().text, (ty,))
        return ty

    # -- checks and patterns --

    def check(self) -> MatchCheckSyntax:
        start = self.advance()
        scrutinee = self.type_expr()
        self.expect("kw", "with")
        if self.at_sym("|"):
            self.advance()
        arms = [self.arm()]
        while self.at_sym("|"):
            self.advance()
            arms.append(self.arm())
        return MatchCheckSyntax(scrutinee, tuple(arms), start.line, start.col)

    def arm(self) -> Arm:
        start = self.tok
        pat = self.pattern()
        self.check_linear(pat, start)
        self.expect("sym", "->")
        if self.at_sym("."):
            self.advance()
            return Arm(pat, REFUTATION, start.line, start.col)
        if self.at("lident") or self.at("int") or self.at("uident"):
            self.advance()
            return Arm(pat, CONCRETE, start.line, start.col)
        self.fail("an arm body ('.' or a token)")

    def check_linear(self, pat: Pattern, at: Token):
        for branch in or_branches(pat):
            seen = set()
            for name in _linear_vars(branch):
                if name in seen:
                    raise ParseError(at.line, at.col,
                                     f"a linear pattern (variable {name!r} is bound twice)")
                seen.add(name)

    def pattern(self) -> Pattern:
        branches = [self.tuple_pattern()]
        # before `->` a bar is an or-pattern; after an arm body it starts the next arm
        while self.at_sym("|"):
            self.advance()
            branches.append(self.tuple_pattern())
        return or_of(branches)

    def tuple_pattern(self) -> Pattern:
        items = [self.app_pattern()]
        while self.at_sym(","):
            self.advance()
            items.append(self.app_pattern())
        return items[0] if len(items) == 1 else PTuple(tuple(items))

    def app_pattern(self) -> Pattern:
        if self.at("uident"):
            name = self.advance().text
            if self.at("uident"):
                return PConstr(name, self.app_pattern())
            if self._atom_start():
                return PConstr(name, self.atom_pattern())
            return PConstr(name)
        return self.atom_pattern()

    def _atom_start(self) -> bool:
        return self.at("lident") or self.at_sym("(")

    def atom_pattern(self) -> Pattern:
        if self.at("lident", "_"):
            self.advance()
            return WILD
        if self.at("lident"):
            return PVar(self.advance().text)
        if self.at("uident"):
            return PConstr(self.advance().text)
        if self.at_sym("("):
            self.advance()
            p = self.pattern()
            self.expect("sym", ")")
            return p
        self.fail("a pattern")


def _linear_vars(p: Pattern) -> Iterator[str]:
    # Variables of an or-free view; nested or-patterns contribute their left branch.
    if isinstance(p, PVar):
        yield p.name
    elif isinstance(p, PConstr) and p.arg is not None:
        yield from _linear_vars(p.arg)
    elif isinstance(p, PTuple):
        for q in p.items:
            yield from _linear_vars(q)
    elif isinstance(p, POr):
        yield from _linear_vars(p.left)


def parse_program(text: str) -> SurfaceProgram:
    return _Parser(text).program()


def parse_type(text: str) -> TypeSyntax:
    p = _Parser(text)
    ty = p.type_expr()
    p.expect("eof", what="end of type")
    return ty


def parse_pattern(text: str) -> Pattern:
    p = _Parser(text)
    pat = p.pattern()
    p.expect("eof", what="end of pattern")
    return pat


# --------------------------------------------------------------------------
# Printers

def print_pattern(p: Pattern) -> str:
    return _pp(p, 0)


# precedence levels: 0 or, 1 tuple component, 2 constructor argument
def _pp(p: Pattern, level: int) -> str:
    if isinstance(p, PWild):
        return "_"
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PTuple):
        return "(" + ", ".join(_pp(q, 1) for q in p.items) + ")"
    if isinstance(p, PConstr):
        if p.arg is None:
            return p.name
        s = p.name + " " + _pp(p.arg, 2)
        return f"({s})" if level >= 2 else s
    if isinstance(p, POr):
        s = _pp(p.left, 1) + " | " + _pp(p.right, 0)
        return f"({s})" if level >= 1 else s
    raise TypeError(f"not a pattern: {p!r}")


def print_type(t: TypeSyntax) -> str:
    return _pt(t, 0)


# precedence levels: 0 arrow, 1 tuple component, 2 application argument
def _pt(t: TypeSyntax, level: int) -> str:
    if isinstance(t, TyVar):
        return "'" + t.name
    if isinstance(t, TyAny):
        return "_"
    if isinstance(t, TyApp):
        if not t.args:
            return t.name
        if len(t.args) == 1:
            return _pt(t.args[0], 2) + " " + t.name
        return "(" + ", ".join(_pt(a, 0) for a in t.args) + ") " + t.name
    if isinstance(t, TyTuple):
        s = " * ".join(_pt(a, 2) for a in t.items)
        return f"({s})" if level >= 2 else s
    if isinstance(t, TyArrow):
        s = _pt(t.dom, 1) + " -> " + _pt(t.cod, 0)
        return f"({s})" if level >= 1 else s
    raise TypeError(f"not a type: {t!r}")


def _print_params(params: tuple) -> str:
    shown = ["_" if p == "_" else "'" + p for p in params]
    if not shown:
        return ""
    if len(shown) == 1:
        return shown[0] + " "
    return "(" + ", ".join(shown) + ") "


def print_decl(d: TypeDeclSyntax) -> str:
    head = "type " + _print_params(d.params) + d.name
    if isinstance(d.body, Abstract):
        return head
    if isinstance(d.body, Alias):
        return head + " = " + print_type(d.body.target)
    if not d.body.constructors:
        return head + " = |"
    cs = []
    for c in d.body.constructors:
        if c.result is not None:
            sig = print_type(c.result)
            if c.arg is not None:
                sig = _pt(c.arg, 1) + " -> " + sig
            cs.append(f"{c.name} : {sig}")
        elif c.arg is not None:
            cs.append(f"{c.name} of {print_type(c.arg)}")
        else:
            cs.append(c.name)
    return head + " =\n  | " + "\n  | ".join(cs)


def print_check(c: MatchCheckSyntax) -> str:
    lines = [f"check {print_type(c.scrutinee)} with"]
    for arm in c.arms:
        body = "." if arm.kind == REFUTATION else "ok"
        lines.append(f"  | {print_pattern(arm.pattern)} -> {body}")
    return "\n".join(lines)


def print_program(prog: SurfaceProgram) -> str:
    parts = [print_decl(d) for d in prog.decls] + [print_check(c) for c in prog.checks]
    return "\n".join(parts) + ("\n" if parts else "")
