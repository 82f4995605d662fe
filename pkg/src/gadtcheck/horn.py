"""GADT declarations as Horn clauses, and a depth-bounded SLD resolver.

Each declared type is a predicate and each constructor a clause whose
premises are the components of its argument. The resolver searches for a
proof of a type (optionally restricted by a pattern) and decodes the proof
into a witness value. It has its own term unification, with the occurs
check, and no compatibility relaxation: it answers inhabitation in the
closed world of the declarations.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .syntax import WILD, Pattern, PConstr, POr, PTuple, PVar, PWild
from .tycore import BUILTIN, TArrow, TCon, TTuple, TVar, Env, Type, resolve

TUPLE_FN = "*"
ARROW_FN = "->"
DEFAULT_MAX_STEPS = 2_000_000


# --------------------------------------------------------------------------
# Terms

_var_ids = itertools.count(1)


class Var:
    __slots__ = ("name", "id")

    def __init__(self, name: str = "_"):
        self.id = next(_var_ids)
        self.name = name

    def __repr__(self):
        return f"Var({self.name}#{self.id})"


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()


Term = Union[Var, Fn]


@dataclass(frozen=True)
class Clause:
    head: Fn
    body: tuple
    constructor: Optional[str] = None  # None for base-type facts
    tuple_arg: bool = False  # premises are the components of a tuple argument


def type_to_term(t: Type, vars: dict) -> Term:
    """Translate a type; ``vars`` maps TVar ids to term variables."""
    t = resolve(t)
    if isinstance(t, TVar):
        if t.id not in vars:
            vars[t.id] = Var(_prolog_var_name(t.name))
        return vars[t.id]
    if isinstance(t, TCon):
        return Fn(t.name, tuple(type_to_term(a, vars) for a in t.args))
    if isinstance(t, TArrow):
        return Fn(ARROW_FN, (type_to_term(t.dom, vars), type_to_term(t.cod, vars)))
    return Fn(TUPLE_FN, tuple(type_to_term(a, vars) for a in t.items))


def _prolog_var_name(name: Optional[str]) -> str:
    if not name or name == "_":
        return "_"
    return name[0].upper() + name[1:]


# --------------------------------------------------------------------------
# Encoding

def encode(env: Env, names: Optional[list] = None) -> list:
    """Clauses for the given declarations (default: all), in declaration order.

    Base types referenced by these clauses contribute a fact each, first.
    """
    if names is None:
        names = [n for n, d in env.decls.items() if d.kind != BUILTIN]
    clauses = []
    for name in names:
        decl = env.decls.get(name)
        if decl is None:
            continue
        for c in decl.constructors:
            vars: dict = {}
            head = Fn(name, tuple(type_to_term(i, vars) for i in c.result_indices))
            arg = resolve(c.argument) if c.argument is not None else None
            if arg is None:
                body, tuple_arg = (), False
            elif isinstance(arg, TTuple):
                body, tuple_arg = tuple(type_to_term(a, vars) for a in arg.items), True
            else:
                body, tuple_arg = (type_to_term(arg, vars),), False
            clauses.append(Clause(head, body, c.name, tuple_arg))
    used = []
    for cl in clauses:
        for term in (cl.head,) + cl.body:
            for fname in _functors(term):
                decl = env.decls.get(fname)
                if decl is not None and decl.kind == BUILTIN and fname not in used:
                    used.append(fname)
    facts = [Clause(Fn(n), (), None) for n in used]
    return facts + clauses


def base_facts(env: Env) -> list:
    return [Clause(Fn(n), (), None) for n, d in env.decls.items() if d.kind == BUILTIN]


def program_clauses(env: Env) -> list:
    """Every clause of the environment, with a fact for each base type."""
    clauses = [c for c in encode(env) if c.constructor is not None]
    return base_facts(env) + clauses


def _functors(t: Term) -> Iterator[str]:
    if isinstance(t, Fn):
        yield t.name
        for a in t.args:
            yield from _functors(a)


_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _atom(name: str) -> str:
    return name if _ATOM_RE.match(name) else "'" + name.replace("'", "\\'") + "'"


def format_term(t: Term, level: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if t.name == ARROW_FN:
        s = format_term(t.args[0], 1) + " -> " + format_term(t.args[1], 0)
        return f"({s})" if level >= 1 else s
    if t.name == TUPLE_FN:
        if len(t.args) == 2:
            return "(" + format_term(t.args[0], 1) + " * " + format_term(t.args[1], 1) + ")"
        return "*(" + ", ".join(format_term(a) for a in t.args) + ")"
    if not t.args:
        return _atom(t.name)
    return _atom(t.name) + "(" + ", ".join(format_term(a) for a in t.args) + ")"


def format_clause(c: Clause) -> str:
    head = format_term(c.head)
    if not c.body:
        return head + "."
    return head + " :- " + ", ".join(format_term(b) for b in c.body) + "."


def format_clauses(clauses: list) -> str:
    return "".join(format_clause(c) + "\n" for c in clauses)


# --------------------------------------------------------------------------
# Resolution results

@dataclass(frozen=True)
class Witness:
    value: Pattern
    size: int


@dataclass(frozen=True)
class NoProofWithinDepth:
    depth: int
    # True when the whole resolution tree was finite and failed: the goal is
    # unprovable at any depth, not only up to ``depth``.
    complete: bool = False


@dataclass(frozen=True)
class DepthExhausted:
    depth: int
    steps: int


ResolutionResult = Union[Witness, NoProofWithinDepth, DepthExhausted]


class _StepLimit(Exception):
    pass


class _Node:
    """Mutable proof-tree node, overwritten on backtracking."""

    __slots__ = ("label", "children")

    def __init__(self):
        self.label = None
        self.children = ()


class _Resolver:
    def __init__(self, clauses: list, max_steps: int):
        self.by_pred: dict = {}
        self.by_ctor: dict = {}
        for c in clauses:
            self.by_pred.setdefault((c.head.name, len(c.head.args)), []).append(c)
            if c.constructor is not None:
                self.by_ctor[c.constructor] = c
        self.bindings: dict = {}
        self.trail: list = []
        self.max_steps = max_steps
        self.steps = 0
        self.cut = False

    # -- unification --

    def walk(self, t: Term) -> Term:
        while isinstance(t, Var) and t.id in self.bindings:
            t = self.bindings[t.id]
        return t

    def occurs(self, v: Var, t: Term) -> bool:
        t = self.walk(t)
        if isinstance(t, Var):
            return t is v
        return any(self.occurs(v, a) for a in t.args)

    def unify(self, a: Term, b: Term) -> bool:
        a, b = self.walk(a), self.walk(b)
        if a is b:
            return True
        if isinstance(a, Var) or isinstance(b, Var):
            v, t = (a, b) if isinstance(a, Var) else (b, a)
            if self.occurs(v, t):
                return False
            self.bindings[v.id] = t
            self.trail.append(v.id)
            return True
        if a.name != b.name or len(a.args) != len(b.args):
            return False
        return all(self.unify(x, y) for x, y in zip(a.args, b.args))

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.bindings[self.trail.pop()]

    def rename(self, c: Clause):
        mapping: dict = {}

        def go(t):
            if isinstance(t, Var):
                if t.id not in mapping:
                    mapping[t.id] = Var(t.name)
                return mapping[t.id]
            return Fn(t.name, tuple(go(a) for a in t.args)) if t.args else t

        return go(c.head), tuple(go(b) for b in c.body)

    # -- search --

    def _cost(self, goal) -> int:
        term, pat, _ = goal
        t = self.walk(term)
        if isinstance(t, Var):
            return 0 if not isinstance(pat, (PConstr,)) else 1
        if t.name in (TUPLE_FN, ARROW_FN):
            return 0
        return 1

    def _select(self, goals: tuple) -> int:
        """Leftmost goal that is not a suspended unconstrained variable."""
        for i, (term, pat, _) in enumerate(goals):
            if not (isinstance(self.walk(term), Var) and isinstance(pat, (PWild, PVar))):
                return i
        return -1

    def solve(self, goals: tuple, budget: int) -> Iterator[None]:
        self.steps += 1
        if self.steps > self.max_steps:
            raise _StepLimit()
        if sum(self._cost(g) for g in goals) > budget:
            self.cut = True
            return
        i = self._select(goals)
        if i < 0:
            for _, _, node in goals:
                node.label, node.children = ("opaque",), ()
            yield
            return
        term, pat, node = goals[i]
        rest = goals[:i] + goals[i + 1:]
        t = self.walk(term)
        if isinstance(pat, POr):
            yield from self.solve(rest[:i] + ((t, pat.left, node),) + rest[i:], budget)
            yield from self.solve(rest[:i] + ((t, pat.right, node),) + rest[i:], budget)
            return
        if isinstance(pat, PTuple) or (isinstance(t, Fn) and t.name == TUPLE_FN):
            yield from self._solve_tuple(t, pat, node, rest, i, budget)
            return
        if isinstance(t, Fn) and t.name == ARROW_FN:
            if isinstance(pat, PConstr):
                return
            node.label, node.children = ("opaque",), ()
            yield from self.solve(rest, budget)
            return
        if isinstance(pat, PConstr):
            c = self.by_ctor.get(pat.name)
            candidates = [c] if c is not None else []
        elif isinstance(t, Fn):
            candidates = self.by_pred.get((t.name, len(t.args)), [])
        else:
            candidates = []
        for c in candidates:
            mark = len(self.trail)
            head, body = self.rename(c)
            if self.unify(head, t):
                sub_pats = self._premise_patterns(c, pat)
                if sub_pats is not None:
                    kids = tuple(_Node() for _ in body)
                    node.label = ("con", c.constructor, c.tuple_arg) if c.constructor else ("base", c.head.name)
                    node.children = kids
                    new = tuple(zip(body, sub_pats, kids))
                    yield from self.solve(rest[:i] + new + rest[i:], budget - 1)
            self.undo(mark)

    def _solve_tuple(self, t, pat, node, rest, i, budget):
        mark = len(self.trail)
        if isinstance(t, Var):
            n = len(pat.items)
            t2 = Fn(TUPLE_FN, tuple(Var() for _ in range(n)))
            self.unify(t, t2)
            t = t2
        if not (isinstance(t, Fn) and t.name == TUPLE_FN):
            return
        n = len(t.args)
        if isinstance(pat, PTuple):
            if len(pat.items) != n:
                self.undo(mark)
                return
            pats = pat.items
        else:
            pats = (WILD,) * n
        kids = tuple(_Node() for _ in range(n))
        node.label, node.children = ("tuple",), kids
        yield from self.solve(rest[:i] + tuple(zip(t.args, pats, kids)) + rest[i:], budget)
        self.undo(mark)

    @staticmethod
    def _premise_patterns(c: Clause, pat):
        n = len(c.body)
        if not isinstance(pat, PConstr) or pat.arg is None or isinstance(pat.arg, (PWild, PVar)):
            return (WILD,) * n
        if c.tuple_arg:
            arg = pat.arg
            if isinstance(arg, PTuple) and len(arg.items) == n:
                return arg.items
            return None
        return (pat.arg,)


def _expand_tuple_args(p: Pattern) -> list:
    """Push or-patterns out of constructor arguments so premises see or-free tuples."""
    if isinstance(p, POr):
        return _expand_tuple_args(p.left) + _expand_tuple_args(p.right)
    if isinstance(p, PConstr) and p.arg is not None:
        return [PConstr(p.name, a) for a in _expand_tuple_args(p.arg)]
    if isinstance(p, PTuple):
        out = [()]
        for q in p.items:
            out = [acc + (a,) for acc in out for a in _expand_tuple_args(q)]
        return [PTuple(items) for items in out]
    return [p]


def decode(node: _Node) -> Pattern:
    label = node.label
    if label is None or label[0] in ("opaque", "base"):
        return WILD
    if label[0] == "tuple":
        return PTuple(tuple(decode(k) for k in node.children))
    _, name, tuple_arg = label
    if not node.children:
        return PConstr(name)
    if tuple_arg:
        return PConstr(name, PTuple(tuple(decode(k) for k in node.children)))
    return PConstr(name, decode(node.children[0]))


def sld_inhabited(t: Type, depth: int, clauses: list, pattern: Optional[Pattern] = None,
                  max_steps: int = DEFAULT_MAX_STEPS) -> ResolutionResult:
    """Search for a value of type ``t`` (matching ``pattern``) of size at most ``depth``.

    Size counts clause applications. Bounds 1..depth are tried in turn, so
    a returned witness has minimal size.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    goal_term = type_to_term(t, {})
    pats = _expand_tuple_args(pattern) if pattern is not None else [WILD]
    resolver = _Resolver(clauses, max_steps)
    for bound in range(1, depth + 1):
        resolver.cut = False
        try:
            for p in pats:
                root = _Node()
                for _ in resolver.solve(((goal_term, p, root),), bound):
                    value = decode(root)
                    return Witness(value, _size(root))
        except _StepLimit:
            return DepthExhausted(bound, resolver.steps)
        if not resolver.cut:
            return NoProofWithinDepth(depth, complete=True)
    return NoProofWithinDepth(depth, complete=False)


def _size(node: _Node) -> int:
    label = node.label
    own = 1 if label is not None and label[0] in ("con", "base") else 0
    return own + sum(_size(k) for k in node.children)


def is_witness(r: ResolutionResult) -> bool:
    return isinstance(r, Witness)
