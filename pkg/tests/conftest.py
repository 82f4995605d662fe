from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from gadtcheck import syntax as S
from gadtcheck.driver import load_prelude
from gadtcheck.matrix import residual
from gadtcheck.tycore import TCon, TTuple, Env, Trail, build_env

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def prelude() -> S.SurfaceProgram:
    return load_prelude()


def corpus_text(name: str) -> str:
    return (CORPUS / f"{name}.gml").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def corpus_program(name: str) -> S.SurfaceProgram:
    return S.parse_program(corpus_text(name))


def env_of_text(text: str) -> Env:
    return build_env(S.parse_program(text), prelude())


def corpus_env(name: str) -> Env:
    return build_env(corpus_program(name), prelude())


def corpus_names() -> list:
    return sorted(p.stem for p in CORPUS.glob("*.gml"))


def ty(env: Env, text: str, trail: Trail | None = None, scope: dict | None = None):
    return env.convert(S.parse_type(text), scope if scope is not None else {},
                       trail if trail is not None else Trail())


def pat(text: str) -> S.Pattern:
    return S.parse_pattern(text)


@dataclass
class Query:
    """One pattern/type pair taken from a corpus check."""

    source: str
    env: Env
    scrutinee: S.TypeSyntax
    pattern: S.Pattern

    def __str__(self):
        return f"{self.source}: {S.print_pattern(self.pattern)} : {S.print_type(self.scrutinee)}"


def queries_of(source: str, prog: S.SurfaceProgram, env: Env) -> list:
    """Arm patterns, per-arm residuals and missing cases of every check."""
    out = []
    for c in prog.checks:
        seen = []
        previous = []
        for arm in c.arms:
            seen.append(arm.pattern)
            seen.extend(residual(arm.pattern, previous, env))
            previous.append(arm.pattern)
        seen.extend(residual(S.WILD, previous, env))
        for p in dict.fromkeys(seen):
            out.append(Query(source, env, c.scrutinee, p))
    return out


@functools.lru_cache(maxsize=None)
def corpus_queries() -> tuple:
    out = []
    for name in corpus_names():
        out.extend(queries_of(name, corpus_program(name), corpus_env(name)))
    return tuple(out)


# --------------------------------------------------------------------------
# Random types over a small fixed environment

TYPE_ENV_TEXT = """
type _ t = Int : int t | Bool : bool t
type (_, _) cmp = Eq : ('a, 'a) cmp | Any : ('a, 'b) cmp
type A.a
type A.b
type _ box
type zero = Zero
type _ succ = Succ
type e1 = |
type e2 = |
"""


@functools.lru_cache(maxsize=None)
def type_env() -> Env:
    return env_of_text(TYPE_ENV_TEXT)


def random_type(rng: random.Random, env: Env, vars_: list, depth: int = 0):
    heads = sorted(n for n, d in env.decls.items())
    r = rng.random()
    if vars_ and r < 0.15:
        return rng.choice(vars_)
    if depth < 2 and r < 0.25:
        return TTuple(tuple(random_type(rng, env, vars_, depth + 1)
                            for _ in range(rng.choice((2, 3)))))
    name = rng.choice(heads)
    arity = env.decls[name].arity
    if depth >= 3:
        name = rng.choice([h for h in heads if env.decls[h].arity == 0])
        arity = 0
    return TCon(name, tuple(random_type(rng, env, vars_, depth + 1) for _ in range(arity)))


@st.composite
def type_pairs(draw, n_vars: int = 2):
    """A trail with fresh variables and two random types over them."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    env = type_env()
    trail = Trail()
    vars_ = [trail.fresh(f"v{i}") for i in range(n_vars)]
    return env, trail, random_type(rng, env, vars_), random_type(rng, env, vars_)


@pytest.fixture
def plus_env() -> Env:
    return corpus_env("plus")


@pytest.fixture
def t_env() -> Env:
    return corpus_env("g1")


# --------------------------------------------------------------------------
# Partition checking against enumerated values

def partition_violations(rows: list, missing: list, values) -> list:
    """Values matched by no row and no missing vector, or by both a row
    and a missing vector, or by two missing vectors."""
    from gadtcheck.matrix import row_matches

    bad = []
    for v in values:
        by_rows = any(row_matches(r, v) for r in rows)
        by_missing = sum(row_matches(m, v) for m in missing)
        if by_rows + by_missing != 1:
            bad.append(v)
    return bad


def check_values(check: S.MatchCheckSyntax, env: Env, height: int, typed: bool) -> list:
    """Values of a check's scrutinee as 1-tuples: typed ones or bare shapes."""
    from gadtcheck.brute import enumerate_shapes, enumerate_values

    t = env.convert(check.scrutinee, {}, Trail())
    vals = (enumerate_values(t, env, max_height=height) if typed
            else enumerate_shapes(t, env, height))
    return [(v,) for v in vals]
