from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gadtcheck import syntax as S
from gadtcheck.brute import enumerate_shapes
from gadtcheck.matrix import default, matches, missing_patterns, residual, row_matches, specialize
from gadtcheck.syntax import WILD, PConstr, PTuple

from conftest import (
    check_values, corpus_env, corpus_names, corpus_program, env_of_text, pat,
    partition_violations, ty,
)


def _set(vectors):
    return {tuple(S.print_pattern(p) for p in v) for v in vectors}


def test_missing_int_bool_pairs(t_env):
    m = [(pat("Int"), pat("Int")), (pat("Bool"), pat("Bool"))]
    assert _set(missing_patterns(m, t_env)) == {("Int", "Bool"), ("Bool", "Int")}


def test_missing_plus_pairs(plus_env):
    m = [(pat("Plus0"), pat("Plus0"))]
    assert _set(missing_patterns(m, plus_env)) == {("Plus0", "PlusS _"), ("PlusS _", "_")}


def test_wildcard_row_leaves_nothing(t_env):
    assert missing_patterns([(WILD,)], t_env) == []


def test_empty_matrix_needs_width(t_env):
    assert missing_patterns([], t_env, width=2) == [(WILD, WILD)]
    with pytest.raises(ValueError):
        missing_patterns([], t_env)


def test_missing_in_declaration_order(t_env):
    assert missing_patterns([], t_env, width=1) == [(WILD,)]
    assert missing_patterns([(pat("Some _"),)], t_env) == [(pat("None"),)]
    m = [(pat("Some Int"),)]
    assert [S.print_pattern(v[0]) for v in missing_patterns(m, t_env)] == ["None", "Some Bool"]


def test_residual_examples(t_env):
    assert residual(pat("Some _"), [pat("None")], t_env) == [pat("Some _")]
    assert residual(pat("None"), [pat("None")], t_env) == []
    assert residual(WILD, [pat("None")], t_env) == [pat("Some _")]


def test_residual_with_or_patterns(t_env):
    assert residual(pat("None | Some Int"), [pat("Some _")], t_env) == [pat("None")]
    assert residual(WILD, [pat("None | Some _")], t_env) == []


def test_specialize_and_default(t_env):
    some, none = t_env.constructor("Some"), t_env.constructor("None")
    x, y = S.PVar("x"), S.PVar("y")
    assert specialize([(pat("Some _"), x)], none) == []
    assert specialize([(WILD, x)], some) == [(WILD, x)]
    assert specialize([(pat("Some Int"), x), (pat("None"), y)], some) == [(pat("Int"), x)]
    assert default([(pat("Some _"), x), (WILD, y)]) == [(y,)]
    assert default([(pat("Some _ | _"), x)]) == [(x,)]


def test_tuple_columns(t_env):
    m = [(PTuple((pat("Int"), WILD)),)]
    got = missing_patterns(m, t_env)
    assert _set(got) == {("(Bool, _)",)}


# --------------------------------------------------------------------------
# Partition and residual properties

def _corpus_checks():
    for name in corpus_names():
        for i, c in enumerate(corpus_program(name).checks):
            if name == "exponential":
                continue  # 4^8 values per depth; covered by the acceptance suite
            yield pytest.param(name, i, id=f"{name}-{i}")


@pytest.mark.parametrize("name,index", list(_corpus_checks()))
@pytest.mark.parametrize("typed", [True, False], ids=["typed", "shapes"])
def test_partition_by_enumeration(name, index, typed):
    env = corpus_env(name)
    c = corpus_program(name).checks[index]
    rows = [(a.pattern,) for a in c.arms]
    missing = missing_patterns(rows, env)
    values = check_values(c, env, 3, typed)
    assert partition_violations(rows, missing, values) == []


MATRIX_ENV = env_of_text("""
type _ t = Int : int t | Bool : bool t
type (_, _, _) trio = T1 : (int, 'a, 'a) trio | T2 : 'a t -> ('a, bool, 'b) trio
    | T3 : ('a, 'b, 'c) trio * 'a t -> ('a, 'b, 'c) trio
""")
MATRIX_TYPES = ["int t option", "(int t, bool t) sum", "(int, int, int) trio",
                "int t list", "int t * (bool t, int t) sum"]


def _random_pattern(rng, value, keep=0.6):
    """Generalise a value by replacing random subterms with `_`."""
    if rng.random() > keep:
        return WILD
    if isinstance(value, PConstr) and value.arg is not None:
        return PConstr(value.name, _random_pattern(rng, value.arg, keep))
    if isinstance(value, PTuple):
        return PTuple(tuple(_random_pattern(rng, v, keep) for v in value.items))
    return value


@st.composite
def matrices(draw):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    t = ty(MATRIX_ENV, rng.choice(MATRIX_TYPES))
    shapes = enumerate_shapes(t, MATRIX_ENV, 3)
    rows = []
    for _ in range(rng.randint(0, 5)):
        p = _random_pattern(rng, rng.choice(shapes))
        if rng.random() < 0.2:
            p = S.POr(p, _random_pattern(rng, rng.choice(shapes)))
        rows.append((p,))
    return rows, [(v,) for v in shapes]


@given(matrices())
def test_partition_on_random_matrices(case):
    rows, values = case
    missing = missing_patterns(rows, MATRIX_ENV, width=1)
    assert partition_violations(rows, missing, values) == []


@given(matrices())
def test_residual_covers_the_same_values(case):
    rows, values = case
    if not rows:
        return
    *previous, (arm,) = rows
    res = residual(arm, [r[0] for r in previous], MATRIX_ENV)
    for (v,) in values:
        before = any(row_matches(r, (v,)) for r in previous)
        assert (before or matches(arm, v)) == (before or any(matches(r, v) for r in res))
        # and the residual never overlaps the previous rows
        assert not (before and any(matches(r, v) for r in res))


@given(matrices())
def test_missing_set_is_order_insensitive(case):
    rows, values = case
    covered = []
    for perm in itertools.islice(itertools.permutations(rows), 6):
        missing = missing_patterns(list(perm), MATRIX_ENV, width=1)
        covered.append([any(row_matches(m, v) for m in missing) for v in values])
    assert all(c == covered[0] for c in covered)
