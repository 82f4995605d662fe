"""Semantic types, declarations, a trailed variable store, unification and
the pattern-typing compatibility relation."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from . import syntax as S

BUILTINS = ("int", "bool", "char", "float", "unit")

MAX_COMPAT_DEPTH = 64


class DeclError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class UnifyError(Exception):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"cannot unify {show_type(left)} with {show_type(right)}")


class OccursError(UnifyError):
    pass


# --------------------------------------------------------------------------
# Types

class TVar:
    """A unification variable. Bound through a `Trail` only."""

    __slots__ = ("id", "name", "level", "ref")

    def __init__(self, id: int, name: Optional[str] = None, level: int = 0):
        self.id = id
        self.name = name
        self.level = level
        self.ref = None

    def __repr__(self):
        return f"TVar({self.id}, {self.name!r})"


@dataclass(frozen=True)
class TCon:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class TArrow:
    dom: "Type"
    cod: "Type"


@dataclass(frozen=True)
class TTuple:
    items: tuple


Type = Union[TVar, TCon, TArrow, TTuple]

# Argument type reported for constructors that take no argument.
NO_ARGUMENT = TTuple(())

_schema_ids = itertools.count(-1, -1)


def schema_var(name: Optional[str] = None) -> TVar:
    """Variable of a declaration schema; never bound, only substituted."""
    return TVar(next(_schema_ids), name)


def resolve(t: Type) -> Type:
    while isinstance(t, TVar) and t.ref is not None:
        t = t.ref
    return t


def zonk(t: Type) -> Type:
    """Fully substitute bound variables."""
    t = resolve(t)
    if isinstance(t, TCon):
        return TCon(t.name, tuple(zonk(a) for a in t.args)) if t.args else t
    if isinstance(t, TArrow):
        return TArrow(zonk(t.dom), zonk(t.cod))
    if isinstance(t, TTuple):
        return TTuple(tuple(zonk(a) for a in t.items))
    return t


def type_key(t: Type):
    """Hashable structural key of a resolved type."""
    t = resolve(t)
    if isinstance(t, TVar):
        return ("var", t.id)
    if isinstance(t, TCon):
        return (t.name,) + tuple(type_key(a) for a in t.args)
    if isinstance(t, TArrow):
        return ("->", type_key(t.dom), type_key(t.cod))
    return ("*",) + tuple(type_key(a) for a in t.items)


def free_vars(t: Type) -> list:
    out, seen = [], set()

    def go(t):
        t = resolve(t)
        if isinstance(t, TVar):
            if t.id not in seen:
                seen.add(t.id)
                out.append(t)
        elif isinstance(t, TCon):
            for a in t.args:
                go(a)
        elif isinstance(t, TArrow):
            go(t.dom)
            go(t.cod)
        else:
            for a in t.items:
                go(a)

    go(t)
    return out


def subst(t: Type, mapping: dict) -> Type:
    """Replace variables (keyed by id) in a schema type."""
    t = resolve(t)
    if isinstance(t, TVar):
        return mapping.get(t.id, t)
    if isinstance(t, TCon):
        return TCon(t.name, tuple(subst(a, mapping) for a in t.args)) if t.args else t
    if isinstance(t, TArrow):
        return TArrow(subst(t.dom, mapping), subst(t.cod, mapping))
    return TTuple(tuple(subst(a, mapping) for a in t.items))


def show_type(t: Type) -> str:
    return _show(t, 0)


def _show(t: Type, level: int) -> str:
    t = resolve(t)
    if isinstance(t, TVar):
        return "'" + (t.name if t.name and t.name != "_" else f"_{abs(t.id)}")
    if isinstance(t, TCon):
        if not t.args:
            return t.name
        if len(t.args) == 1:
            return _show(t.args[0], 2) + " " + t.name
        return "(" + ", ".join(_show(a, 0) for a in t.args) + ") " + t.name
    if isinstance(t, TTuple):
        s = " * ".join(_show(a, 2) for a in t.items)
        return f"({s})" if level >= 2 else s
    s = _show(t.dom, 1) + " -> " + _show(t.cod, 0)
    return f"({s})" if level >= 1 else s


# --------------------------------------------------------------------------
# Declarations

VARIANT, ABSTRACT, BUILTIN = "variant", "abstract", "builtin"


@dataclass(frozen=True)
class ConstructorSig:
    name: str
    owner: str
    # Every type variable the signature binds; all are freshened per use.
    existentials: tuple
    argument: Optional[Type]
    result_indices: tuple
    is_gadt: bool = False


@dataclass(frozen=True)
class TypeDecl:
    name: str
    arity: int
    kind: str
    constructors: tuple = ()
    injective: tuple = ()

    @property
    def is_variant(self) -> bool:
        return self.kind == VARIANT


@dataclass
class Env:
    decls: dict = field(default_factory=dict)
    constructors: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)
    # names declared by the program itself, in order (prelude excluded)
    own_decls: tuple = ()

    def decl(self, name: str) -> TypeDecl:
        return self.decls[name]

    def constructor(self, name: str) -> ConstructorSig:
        return self.constructors[name]

    def convert(self, ty: S.TypeSyntax, scope: Optional[dict] = None,
                trail: Optional["Trail"] = None, where=(0, 0)) -> Type:
        """Turn surface syntax into a `Type`.

        Named variables are looked up in (and added to) ``scope``; fresh
        variables come from ``trail`` if given, else are schema variables.
        """
        if scope is None:
            scope = {}
        fresh = trail.fresh if trail is not None else schema_var
        return self._convert(ty, scope, fresh, where, ())

    def _convert(self, ty, scope, fresh, where, expanding):
        if isinstance(ty, S.TyVar):
            if ty.name not in scope:
                scope[ty.name] = fresh(ty.name)
            return scope[ty.name]
        if isinstance(ty, S.TyAny):
            return fresh("_")
        if isinstance(ty, S.TyArrow):
            return TArrow(self._convert(ty.dom, scope, fresh, where, expanding),
                          self._convert(ty.cod, scope, fresh, where, expanding))
        if isinstance(ty, S.TyTuple):
            return TTuple(tuple(self._convert(a, scope, fresh, where, expanding)
                                for a in ty.items))
        args = tuple(self._convert(a, scope, fresh, where, expanding) for a in ty.args)
        if ty.name in self.aliases:
            params, target = self.aliases[ty.name]
            if len(params) != len(args):
                raise DeclError(f"type {ty.name} expects {len(params)} argument(s), "
                                f"got {len(args)}", *where)
            if ty.name in expanding:
                raise DeclError(f"cyclic type abbreviation {ty.name}", *where)
            inner = dict(zip(params, args))
            return self._convert(target, inner, fresh, where, expanding + (ty.name,))
        decl = self.decls.get(ty.name)
        if decl is None:
            raise DeclError(f"unbound type constructor {ty.name}", *where)
        if decl.arity != len(args):
            raise DeclError(f"type {ty.name} expects {decl.arity} argument(s), "
                            f"got {len(args)}", *where)
        return TCon(ty.name, args)


def _builtin_decls() -> dict:
    return {n: TypeDecl(n, 0, BUILTIN) for n in BUILTINS}


def build_env(program: S.SurfaceProgram, prelude: Optional[S.SurfaceProgram] = None) -> Env:
    """Check declarations and assemble the typing environment."""
    env = Env(decls=_builtin_decls())
    all_decls = list(prelude.decls if prelude else ()) + list(program.decls)
    # first pass: register names so declarations may be mutually recursive
    pending = []
    for d in all_decls:
        if d.name in env.decls or d.name in env.aliases:
            raise DeclError(f"type {d.name} is declared twice", d.line, d.col)
        if isinstance(d.body, S.Alias):
            names = [p for p in d.params]
            if "_" in names or len(set(names)) != len(names):
                raise DeclError(f"abbreviation {d.name} needs distinct named parameters",
                                d.line, d.col)
            env.aliases[d.name] = (tuple(names), d.body.target)
            continue
        kind = ABSTRACT if isinstance(d.body, S.Abstract) else VARIANT
        inj = tuple(kind == VARIANT for _ in d.params)
        env.decls[d.name] = TypeDecl(d.name, d.arity, kind, (), inj)
        if kind == VARIANT:
            pending.append(d)
    for d in pending:
        sigs = []
        for c in d.body.constructors:
            if c.name in env.constructors or any(s.name == c.name for s in sigs):
                raise DeclError(f"constructor {c.name} is declared twice", c.line, c.col)
            sigs.append(_constructor_sig(env, d, c))
        for s in sigs:
            env.constructors[s.name] = s
        env.decls[d.name] = TypeDecl(d.name, d.arity, VARIANT, tuple(sigs),
                                     env.decls[d.name].injective)
    # validate alias bodies eagerly
    for name, (params, target) in env.aliases.items():
        env.convert(target, {p: schema_var(p) for p in params})
    own = [d.name for d in program.decls]
    env.own_decls = tuple(own)
    return env


def _constructor_sig(env: Env, d: S.TypeDeclSyntax, c: S.ConstructorSyntax) -> ConstructorSig:
    where = (c.line, c.col)
    scope: dict = {}
    if c.result is not None:
        res = env.convert(c.result, scope, where=where)
        if not (isinstance(res, TCon) and res.name == d.name):
            raise DeclError(f"constructor {c.name} must return a {d.name}", *where)
        indices = res.args
        arg = env.convert(c.arg, scope, where=where) if c.arg is not None else None
    else:
        params = {}
        for p in d.params:
            if p != "_":
                params[p] = schema_var(p)
        scope = dict(params)
        if c.arg is not None:
            used = _syntax_vars(c.arg)
            missing = [v for v in used if v not in params]
            if missing:
                raise DeclError(f"unbound type variable '{missing[0]} in constructor {c.name}",
                                *where)
            if any(isinstance(x, S.TyAny) for x in _syntax_nodes(c.arg)):
                raise DeclError(f"anonymous type variable in constructor {c.name}", *where)
            arg = env.convert(c.arg, scope, where=where)
        else:
            arg = None
        indices = tuple(scope[p] if p != "_" else schema_var("_") for p in d.params)
    bound = []
    seen = set()
    for t in list(indices) + ([arg] if arg is not None else []):
        for v in free_vars(t):
            if v.id not in seen:
                seen.add(v.id)
                bound.append(v)
    distinct_params = (all(isinstance(i, TVar) for i in indices)
                       and len({i.id for i in indices}) == len(indices))
    return ConstructorSig(c.name, d.name, tuple(bound), arg, tuple(indices),
                          is_gadt=not distinct_params)


def _syntax_nodes(t):
    yield t
    if isinstance(t, S.TyApp):
        for a in t.args:
            yield from _syntax_nodes(a)
    elif isinstance(t, S.TyArrow):
        yield from _syntax_nodes(t.dom)
        yield from _syntax_nodes(t.cod)
    elif isinstance(t, S.TyTuple):
        for a in t.items:
            yield from _syntax_nodes(a)


def _syntax_vars(t) -> list:
    return [n.name for n in _syntax_nodes(t) if isinstance(n, S.TyVar)]


# --------------------------------------------------------------------------
# Trail

class Trail:
    """Variable store plus an undo log of creations and bindings."""

    def __init__(self):
        self._log: list = []
        self._next_id = 0
        self.vars: list = []

    def fresh(self, name: Optional[str] = None, level: int = 0) -> TVar:
        v = TVar(self._next_id, name, level)
        self._next_id += 1
        self.vars.append(v)
        self._log.append((False, v))
        return v

    def bind(self, v: TVar, t: Type) -> None:
        assert v.ref is None, "variable already bound"
        v.ref = t
        self._log.append((True, v))

    def save(self) -> int:
        return len(self._log)

    def restore(self, mark: int) -> None:
        log = self._log
        while len(log) > mark:
            is_bind, v = log.pop()
            if is_bind:
                v.ref = None
            else:
                self.vars.pop()
                self._next_id -= 1

    def snapshot(self) -> tuple:
        """Structural image of the store, for purity checks."""
        return (self._next_id, tuple(
            (v.id, v.name, v.level, None if v.ref is None else type_key(v.ref))
            for v in self.vars))


# --------------------------------------------------------------------------
# Unification

class UnifyMode(enum.Enum):
    STRICT = "strict"
    PATTERN = "pattern"  # compatibility-relaxed, used for GADT indices in patterns


def occurs(v: TVar, t: Type) -> bool:
    t = resolve(t)
    if t is v:
        return True
    if isinstance(t, TCon):
        return any(occurs(v, a) for a in t.args)
    if isinstance(t, TArrow):
        return occurs(v, t.dom) or occurs(v, t.cod)
    if isinstance(t, TTuple):
        return any(occurs(v, a) for a in t.items)
    return False


def unify(t1: Type, t2: Type, mode: UnifyMode, env: Env, trail: Trail) -> None:
    """Unify two types, recording bindings on ``trail``.

    Raises UnifyError (or OccursError). Bindings made before a failure are
    left in place; callers restore to their own save point.
    """
    a, b = resolve(t1), resolve(t2)
    if a is b:
        return
    if isinstance(a, TVar) or isinstance(b, TVar):
        v, t = (a, b) if isinstance(a, TVar) else (b, a)
        if occurs(v, t):
            raise OccursError(v, t)
        trail.bind(v, t)
        return
    if isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name:
        decl = env.decls[a.name]
        for i, (x, y) in enumerate(zip(a.args, b.args)):
            if mode is UnifyMode.STRICT or decl.injective[i]:
                unify(x, y, mode, env, trail)
        return
    if isinstance(a, TArrow) and isinstance(b, TArrow):
        unify(a.dom, b.dom, mode, env, trail)
        unify(a.cod, b.cod, mode, env, trail)
        return
    if isinstance(a, TTuple) and isinstance(b, TTuple) and len(a.items) == len(b.items):
        for x, y in zip(a.items, b.items):
            unify(x, y, mode, env, trail)
        return
    if mode is UnifyMode.PATTERN and compatible(a, b, env):
        return
    raise UnifyError(a, b)


# --------------------------------------------------------------------------
# Compatibility

def compatible(t1: Type, t2: Type, env: Env) -> bool:
    """Whether two types may be assumed equal when typing patterns.

    Variables are compatible with anything (without being bound), abstract
    types with any type of another head, same heads compare on injective
    parameters only, and distinct variants with identical constructor lists
    compare structurally. Pairs under test are assumed compatible while
    their components are checked, so recursive declarations terminate.
    """
    return _compat(t1, t2, env, set(), 0)


def _compat(a: Type, b: Type, env: Env, assumed: set, depth: int) -> bool:
    a, b = resolve(a), resolve(b)
    if isinstance(a, TVar) or isinstance(b, TVar) or a is b:
        return True
    if depth > MAX_COMPAT_DEPTH:
        return True
    d = depth + 1
    if isinstance(a, TCon) and isinstance(b, TCon):
        if a.name == b.name:
            inj = env.decls[a.name].injective
            return all(_compat(x, y, env, assumed, d)
                       for i, (x, y) in enumerate(zip(a.args, b.args)) if inj[i])
        da, db = env.decls[a.name], env.decls[b.name]
        if da.kind == ABSTRACT or db.kind == ABSTRACT:
            return True
        return _same_shape_variants(a, b, da, db, env, assumed, d)
    if isinstance(a, TCon) and env.decls[a.name].kind == ABSTRACT:
        return True
    if isinstance(b, TCon) and env.decls[b.name].kind == ABSTRACT:
        return True
    if isinstance(a, TArrow) and isinstance(b, TArrow):
        return (_compat(a.dom, b.dom, env, assumed, d)
                and _compat(a.cod, b.cod, env, assumed, d))
    if isinstance(a, TTuple) and isinstance(b, TTuple) and len(a.items) == len(b.items):
        return all(_compat(x, y, env, assumed, d) for x, y in zip(a.items, b.items))
    return False


def _same_shape_variants(a, b, da, db, env, assumed, depth) -> bool:
    if not (da.is_variant and db.is_variant) or len(a.args) != len(b.args):
        return False
    if [c.name for c in da.constructors] != [c.name for c in db.constructors]:
        return False
    key = (type_key(a), type_key(b))
    if key in assumed or (key[1], key[0]) in assumed:
        return True
    assumed.add(key)
    try:
        if not all(_compat(x, y, env, assumed, depth) for x, y in zip(a.args, b.args)):
            return False
        for ca, cb in zip(da.constructors, db.constructors):
            if (ca.argument is None) != (cb.argument is None):
                return False
            if ca.argument is not None and not _compat(ca.argument, cb.argument,
                                                       env, assumed, depth):
                return False
            if not all(_compat(x, y, env, assumed, depth)
                       for x, y in zip(ca.result_indices, cb.result_indices)):
                return False
        return True
    finally:
        assumed.discard(key)


# --------------------------------------------------------------------------
# Constructors

def instantiate_constructor(c: ConstructorSig, expected: Type, mode: UnifyMode,
                            env: Env, trail: Trail) -> Optional[Type]:
    """Type constructor ``c`` at ``expected``; return its argument type.

    Returns NO_ARGUMENT for nullary constructors and None when the result
    indices cannot be unified, in which case the trail is back at its entry
    state.
    """
    mark = trail.save()
    exp = resolve(expected)
    if not (isinstance(exp, TVar) or (isinstance(exp, TCon) and exp.name == c.owner)):
        return None
    mapping = {v.id: trail.fresh(v.name) for v in c.existentials}
    result = TCon(c.owner, tuple(subst(i, mapping) for i in c.result_indices))
    try:
        unify(result, exp, mode, env, trail)
    except UnifyError:
        trail.restore(mark)
        return None
    if c.argument is None:
        return NO_ARGUMENT
    return subst(c.argument, mapping)
