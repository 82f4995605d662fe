"""Seeded generator of small well-formed programs for sweep testing."""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Optional

from . import syntax as S
from .driver import load_prelude
from .search import TYPE_ONLY, Inhabited, PatternTypeError, type_pat_check
from .tycore import DeclError, Env, TCon, TTuple, Trail, build_env, resolve

_BASES = ("int", "bool", "unit")
_PARAMS = ("a", "b")


@dataclass(frozen=True)
class GenConfig:
    max_decls: int = 4
    max_constructors: int = 3
    max_indices: int = 2        # arity bound, i.e. GADT index positions
    existentials: bool = True   # allow argument variables absent from the result
    max_checks: int = 3
    max_arms: int = 3
    refutation_rate: float = 0.25
    abstract_rate: float = 0.1
    empty_rate: float = 0.05


class _Gen:
    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.names: list = []
        self.arity: dict = {}
        self.ctor_counter = 0

    # -- types --

    def index_type(self, vars_: tuple, depth: int = 0) -> S.TypeSyntax:
        r = self.rng.random()
        if vars_ and r < 0.45:
            return S.TyVar(self.rng.choice(vars_))
        if r < 0.75 or depth >= 1:
            return S.TyApp(self.rng.choice(_BASES))
        name = self.rng.choice(self.names)
        return S.TyApp(name, tuple(self.index_type(vars_, depth + 1)
                                   for _ in range(self.arity[name])))

    def value_type(self, vars_: tuple) -> S.TypeSyntax:
        r = self.rng.random()
        if r < 0.15:
            return S.TyApp(self.rng.choice(_BASES))
        if r < 0.2 and vars_:
            return S.TyVar(self.rng.choice(vars_))
        name = self.rng.choice(self.names)
        return S.TyApp(name, tuple(self.index_type(vars_) for _ in range(self.arity[name])))

    # -- declarations --

    def constructor(self, owner: str) -> S.ConstructorSyntax:
        self.ctor_counter += 1
        name = f"C{self.ctor_counter}"
        n = self.arity[owner]
        pool = tuple(f"{p}{self.ctor_counter}" for p in _PARAMS)
        result = S.TyApp(owner, tuple(self.index_type(pool) for _ in range(n)))
        if self.cfg.existentials:
            arg_vars = pool
        else:
            arg_vars = tuple(sorted(set(_vars_of(result))))
        k = self.rng.choice((0, 0, 1, 1, 2))
        if k == 0:
            arg = None
        elif k == 1:
            arg = self.value_type(arg_vars)
        else:
            arg = S.TyTuple(tuple(self.value_type(arg_vars) for _ in range(2)))
        return S.ConstructorSyntax(name, arg, result)

    def program(self) -> S.SurfaceProgram:
        cfg, rng = self.cfg, self.rng
        count = rng.randint(1, cfg.max_decls)
        self.names = [f"t{i}" for i in range(count)]
        for name in self.names:
            self.arity[name] = rng.randint(0, cfg.max_indices)
        decls = []
        for name in self.names:
            params = ("_",) * self.arity[name]
            r = rng.random()
            if r < cfg.abstract_rate:
                body = S.Abstract()
            elif r < cfg.abstract_rate + cfg.empty_rate:
                body = S.Variant(())
            else:
                ctors = tuple(self.constructor(name)
                              for _ in range(rng.randint(1, cfg.max_constructors)))
                body = S.Variant(ctors)
            decls.append(S.TypeDeclSyntax(name, params, body))
        prog = S.SurfaceProgram(tuple(decls), ())
        env = build_env(prog, _prelude())
        checks = []
        for _ in range(rng.randint(1, cfg.max_checks)):
            c = self.check(env)
            if c is not None:
                checks.append(c)
        return S.SurfaceProgram(tuple(decls), tuple(checks))

    # -- checks --

    def scrutinee(self) -> S.TypeSyntax:
        vars_ = ("x", "y")
        t = self.value_type(vars_)
        r = self.rng.random()
        if r < 0.2:
            return S.TyApp("option", (t,))
        if r < 0.35:
            return S.TyTuple((t, self.value_type(vars_)))
        return t

    def pattern(self, ty: S.TypeSyntax, env: Env, depth: int) -> S.Pattern:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.3:
            return S.WILD
        if isinstance(ty, S.TyTuple):
            return S.PTuple(tuple(self.pattern(t, env, depth) for t in ty.items))
        if not isinstance(ty, S.TyApp) or ty.name not in env.decls:
            return S.WILD
        decl = env.decls[ty.name]
        if not decl.constructors:
            return S.WILD
        c = rng.choice(decl.constructors)
        if c.argument is None:
            p = S.PConstr(c.name)
        else:
            p = S.PConstr(c.name, self.pattern(_syntax_shape(c.argument), env, depth - 1))
        if rng.random() < 0.15:
            other = rng.choice(decl.constructors)
            alt = S.PConstr(other.name, S.WILD if other.argument is not None else None)
            if alt != p:
                p = S.POr(p, alt)
        return p

    def check(self, env: Env) -> Optional[S.MatchCheckSyntax]:
        rng = self.rng
        for _ in range(10):
            ty_syn = self.scrutinee()
            try:
                ty = env.convert(ty_syn, {}, Trail())
            except DeclError:
                continue
            arms = []
            for _ in range(rng.randint(1, self.cfg.max_arms)):
                p = self.pattern(ty_syn, env, 3)
                if not _types(p, ty, env):
                    continue
                kind = S.REFUTATION if rng.random() < self.cfg.refutation_rate else S.CONCRETE
                arms.append(S.Arm(p, kind))
            if arms:
                return S.MatchCheckSyntax(ty_syn, tuple(arms))
        return None


def _vars_of(t: S.TypeSyntax) -> list:
    if isinstance(t, S.TyVar):
        return [t.name]
    if isinstance(t, S.TyApp):
        return [v for a in t.args for v in _vars_of(a)]
    if isinstance(t, S.TyTuple):
        return [v for a in t.items for v in _vars_of(a)]
    if isinstance(t, S.TyArrow):
        return _vars_of(t.dom) + _vars_of(t.cod)
    return []


def _syntax_shape(t) -> S.TypeSyntax:
    """Rough surface shape of a constructor argument, enough to pick heads."""
    t = resolve(t)
    if isinstance(t, TTuple):
        return S.TyTuple(tuple(_syntax_shape(x) for x in t.items))
    if isinstance(t, TCon):
        return S.TyApp(t.name, tuple(S.TyAny() for _ in t.args))
    return S.TyAny()


def _types(p: S.Pattern, ty, env: Env) -> bool:
    try:
        return isinstance(type_pat_check(p, ty, env, TYPE_ONLY), Inhabited)
    except PatternTypeError:
        return False


@functools.lru_cache(maxsize=1)
def _prelude() -> S.SurfaceProgram:
    return load_prelude()


def random_program(seed: int, cfg: GenConfig = GenConfig()) -> S.SurfaceProgram:
    """A well-formed program; every arm types at its scrutinee."""
    return _Gen(random.Random(seed), cfg).program()
