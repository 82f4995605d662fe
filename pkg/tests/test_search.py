from __future__ import annotations

import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gadtcheck import syntax as S
from gadtcheck.randprog import random_program
from gadtcheck.search import (
    NEVER, ONCE, TYPE_ONLY, Empty, EmptyVariant, Inhabited, PatternTypeError, SearchMode,
    SearchStats, SplitPolicy, explode_pat, full, split_eligible, type_pat_check,
)
from gadtcheck.tycore import Trail, build_env

from conftest import corpus_env, corpus_queries, env_of_text, pat, prelude, queries_of, ty

QUERY_IDS = [str(q) for q in corpus_queries()]


def _check(env, p, t_text, mode=ONCE):
    return type_pat_check(pat(p) if isinstance(p, str) else p, ty(env, t_text), env, mode)


def test_some_wild_at_char_t_option_is_empty(t_env):
    assert _check(t_env, "Some _", "char t option") == Empty()
    assert isinstance(_check(t_env, "Some _", "char t option", NEVER), Inhabited)


def test_h2_counter_example_is_empty():
    env = corpus_env("h2")
    assert _check(env, "(Bool, _)", "'a t * 'a is_int") == Empty()
    assert isinstance(_check(env, "(Int, _)", "'a t * 'a is_int"), Inhabited)


def test_sum_of_gadts_is_not_split_under_once(t_env):
    assert _check(t_env, "Some _", "(char t, char t) sum option") == Inhabited(pat("Some _"))
    assert _check(t_env, "Some _", "(char t, char t) sum option", full(8)) == Empty()


def test_plus_needs_one_split(plus_env):
    t = "(zero succ, zero succ, zero succ) plus"
    assert _check(plus_env, "PlusS _", t, full(2)) == Empty()
    assert _check(plus_env, "PlusS _", t, ONCE) == Empty()


def test_harder_under_once(plus_env):
    got = _check(plus_env, "Some _", "(zero succ, zero succ, zero succ) plus option")
    assert got == Inhabited(pat("Some (PlusS _)"))


def test_inv_zero_dependency_through_the_tuple():
    env = corpus_env("inv_zero")
    t = "('a, 'b, 'c) plus * ('c, 'd, zero) plus"
    assert _check(env, "(Plus0, PlusS _)", t) == Empty()
    assert _check(env, "(PlusS _, _)", t) == Empty()
    assert isinstance(_check(env, "(Plus0, Plus0)", t), Inhabited)


def test_or_pattern_takes_the_first_typeable_branch(t_env):
    assert _check(t_env, "Bool | Int", "int t") == Inhabited(pat("Int"))
    assert _check(t_env, "Bool | Bool", "int t") == Empty()


def test_type_only_requires_every_branch(t_env):
    assert _check(t_env, "Int | Bool", "int t", TYPE_ONLY) == Empty()
    assert isinstance(_check(t_env, "Int | Bool", "'a t", TYPE_ONLY), Inhabited)


def test_unknown_constructor_and_arity(t_env):
    with pytest.raises(PatternTypeError):
        _check(t_env, "Nope", "int t")
    with pytest.raises(PatternTypeError):
        _check(t_env, "Int _", "int t")
    with pytest.raises(PatternTypeError):
        _check(t_env, "Some", "int t option")


def test_split_eligible(t_env):
    once, never, fullp = SplitPolicy.ONCE, SplitPolicy.NEVER, SplitPolicy.FULL
    assert split_eligible(ty(t_env, "char t"), t_env, once)
    assert not split_eligible(ty(t_env, "(char t, char t) sum"), t_env, once)
    assert split_eligible(ty(t_env, "int * bool"), t_env, once)
    assert not split_eligible(ty(t_env, "int * bool"), t_env, never)
    assert split_eligible(ty(t_env, "(char t, char t) sum"), t_env, fullp)
    assert not split_eligible(ty(t_env, "int"), t_env, fullp)
    assert not split_eligible(ty(t_env, "int -> int"), t_env, fullp)


def test_explode_pat(t_env, plus_env):
    def shown(env, t):
        # generated holes are PWild subclasses; compare the printed form
        return S.print_pattern(explode_pat(ty(env, t), env))

    assert shown(t_env, "char t option") == "None | Some _"
    assert shown(plus_env, "(zero, zero, zero) plus") == "Plus0 | PlusS _"
    assert shown(plus_env, "zero") == "Zero"
    assert shown(t_env, "int * bool") == "(_, _)"
    env = env_of_text("type e = |")
    with pytest.raises(EmptyVariant):
        explode_pat(ty(env, "e"), env)


def test_empty_variant_wildcard_is_empty():
    env = env_of_text("type e = |")
    assert _check(env, "_", "e") == Empty()
    assert isinstance(_check(env, "_", "e", NEVER), Inhabited)


def test_recursive_single_constructor_type_terminates():
    env = env_of_text("type t0 = C1 : t0 * t0 -> t0")
    start = time.perf_counter()
    assert isinstance(_check(env, "_", "t0"), Inhabited)
    assert isinstance(_check(env, "_", "t0", full(64)), Inhabited)
    assert time.perf_counter() - start < 2


def test_fuel_is_charged_only_for_extra_splits(t_env):
    stats = SearchStats()
    type_pat_check(pat("Some _"), ty(t_env, "char t option"), t_env, full(1), stats=stats)
    assert stats.fuel_spent == 0
    stats = SearchStats()
    out = type_pat_check(pat("Some _"), ty(t_env, "(char t, char t) sum option"), t_env,
                         full(1), stats=stats)
    assert stats.fuel_spent == 1 and out == Empty()  # the char t holes split for free


def test_wildcard_stays_when_fuel_runs_out(t_env):
    t = "((char t, char t) sum, char t) sum option"
    assert _check(t_env, "Some _", t, full(1)) == Inhabited(pat("Some (Inl _)"))
    assert _check(t_env, "Some _", t, full(3)) == Empty()


def test_full_needs_positive_fuel():
    with pytest.raises(ValueError):
        SearchMode(policy=SplitPolicy.FULL, fuel=0)


# --------------------------------------------------------------------------
# Properties over every corpus query

MODES = [NEVER, ONCE, full(4096)]


@pytest.mark.parametrize("q", corpus_queries(), ids=QUERY_IDS)
def test_corpus_query_properties(q):
    results = []
    for mode in MODES:
        trail = Trail()
        t = q.env.convert(q.scrutinee, {}, trail)
        before = trail.snapshot()
        out = type_pat_check(q.pattern, t, q.env, mode, trail)
        assert trail.snapshot() == before, "trail not restored"
        again = type_pat_check(q.pattern, t, q.env, mode, trail)
        assert again == out, "non-deterministic witness"
        if isinstance(out, Inhabited):
            w = out.witness
            assert S.or_branches(w) == [w], "witness contains an or-pattern"
            assert isinstance(type_pat_check(w, t, q.env, TYPE_ONLY, trail), Inhabited)
        results.append(out)
    never, once, fullr = (isinstance(r, Empty) for r in results)
    assert (not never or once) and (not once or fullr), "policy monotonicity"


def _random_queries(seed):
    prog = random_program(seed)
    env = build_env(prog, prelude())
    return queries_of(f"seed{seed}", prog, env)


@given(st.integers(0, 100_000))
def test_random_query_properties(seed):
    for q in _random_queries(seed):
        outs = []
        for mode in (NEVER, ONCE, full(64)):
            trail = Trail()
            t = q.env.convert(q.scrutinee, {}, trail)
            before = trail.snapshot()
            out = type_pat_check(q.pattern, t, q.env, mode, trail)
            assert trail.snapshot() == before
            if isinstance(out, Inhabited):
                assert isinstance(type_pat_check(out.witness, t, q.env, TYPE_ONLY, trail),
                                  Inhabited)
            outs.append(isinstance(out, Empty))
        assert (not outs[0] or outs[1]) and (not outs[1] or outs[2])
