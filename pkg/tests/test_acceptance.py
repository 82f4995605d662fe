"""Acceptance suite: one PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py` or `python tests/test_acceptance.py`.
"""

from __future__ import annotations

import random
import time

import pytest

from gadtcheck import horn
from gadtcheck import syntax as S
from gadtcheck.cli import format_resolution
from gadtcheck.driver import (
    NON_EXHAUSTIVE, UNREACHABLE, WARNING_8, WARNING_56_SUGGEST, CheckConfig, check_program,
)
from gadtcheck.matrix import missing_patterns
from gadtcheck.randprog import random_program
from gadtcheck.search import NEVER, ONCE, Empty, SplitPolicy, full, type_pat_check
from gadtcheck.tycore import Trail, UnifyError, UnifyMode, compatible, unify

from conftest import (
    check_values, corpus_env, corpus_names, corpus_program, corpus_queries, partition_violations,
    prelude, random_type, ty, type_env,
)


def verdict(capsys, n: int, title: str, ok: bool, info: str = "") -> None:
    with capsys.disabled():
        tail = f" ({info})" if info else ""
        print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {title}{tail}")
    assert ok, info


def summary(diags):
    return [(d.kind, d.arm_index,
             S.print_pattern(d.witness) if d.witness is not None else None,
             d.suggest_refutation) for d in diags]


# --------------------------------------------------------------------------
# 1. Golden corpus verdicts

GOLDEN = {
    "f": [], "g2": [], "h": [], "h2": [], "basic_trio": [],
    "g1": [(NON_EXHAUSTIVE, None, "Bool", None)],
    "cmp": [(NON_EXHAUSTIVE, None, "Eq", None)],
    "deep": [], "trivial": [], "easy": [], "inv_zero": [],
    "harder": [(NON_EXHAUSTIVE, None, "Some (PlusS _)", None)],
    "harder_prime": [],
    "deeper": [(NON_EXHAUSTIVE, None, "Some _", None)],
    "deeper_prime": [], "magic": [],
    "deep_prime": [(UNREACHABLE, 2, None, True)],
}

COMPAT_TEXT = {
    "g1": WARNING_8.format("Bool"),
    "cmp": WARNING_8.format("Eq"),
    "deep_prime": WARNING_56_SUGGEST,
}


def test_criterion_1_golden_verdicts(capsys):
    bad = []
    for name, want in GOLDEN.items():
        diags = check_program(corpus_program(name), CheckConfig(), prelude()).diagnostics
        if summary(diags) != want:
            bad.append(f"{name}: {summary(diags)}")
        texts = [d.message(ocaml_compat=True) for d in diags]
        if name in COMPAT_TEXT and texts != [COMPAT_TEXT[name]]:
            bad.append(f"{name}: message text")
    verdict(capsys, 1, "golden corpus verdicts and compat message text", not bad, "; ".join(bad))


# --------------------------------------------------------------------------
# 2. Oracle soundness sweep

def _sweep_programs():
    for name in corpus_names():
        yield name, corpus_program(name)
    for seed in range(200):
        yield f"seed{seed}", random_program(seed)


# the Full pass uses a modest fuel: recursive random types make Full(4096) slow
SWEEP_CONFIGS = (CheckConfig(), CheckConfig(split_policy=SplitPolicy.FULL, fuel=256))


def test_criterion_2_oracle_soundness_sweep(capsys):
    start = time.perf_counter()
    disagreements, empties, undecided = [], 0, 0
    for name, prog in _sweep_programs():
        if name == "exponential":
            continue  # no empty verdicts; its search is covered by criterion 5
        for config in SWEEP_CONFIGS:
            result = check_program(prog, config, prelude())
            env = result.env
            clauses = horn.program_clauses(env)
            for c, report in zip(prog.checks, result.reports):
                for v in (report.empty if report is not None else ()):
                    empties += 1
                    t = env.convert(c.scrutinee, {}, Trail())
                    res = horn.sld_inhabited(t, 6, clauses, pattern=v.pattern)
                    if isinstance(res, horn.Witness):
                        disagreements.append(f"{name}: {S.print_pattern(v.pattern)}")
                    elif isinstance(res, horn.DepthExhausted):
                        undecided += 1
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < 60
    verdict(capsys, 2, "every Empty verdict has no Horn witness at depths 1-6", ok,
            f"{empties} empty verdicts, {len(disagreements)} disagreements, "
            f"{undecided} step-limited, {elapsed:.1f}s")


# --------------------------------------------------------------------------
# 3. Matrix partition against enumerated values

def test_criterion_3_matrix_partition(capsys):
    checked, violations = 0, []
    for name in corpus_names():
        env = corpus_env(name)
        for i, c in enumerate(corpus_program(name).checks):
            rows = [(a.pattern,) for a in c.arms]
            missing = missing_patterns(rows, env)
            for typed in (True, False):
                values = check_values(c, env, 3, typed)
                checked += len(values)
                bad = partition_violations(rows, missing, values)
                violations.extend(f"{name}#{i}: {S.print_pattern(v[0])}" for v in bad[:3])
    verdict(capsys, 3, "each depth-3 value matched by exactly one arm or missing case",
            not violations, f"{checked} values, {len(violations)} violations")


# --------------------------------------------------------------------------
# 4. Compatibility relation

def test_criterion_4_compatibility_properties(capsys):
    env = type_env()
    rng = random.Random(20261016)
    failures = []
    for k in range(1000):
        trail = Trail()
        vars_ = [trail.fresh("a"), trail.fresh("b")]
        a, b = random_type(rng, env, vars_), random_type(rng, env, vars_)
        if not compatible(a, a, env) or compatible(a, b, env) != compatible(b, a, env):
            failures.append(k)
    t = lambda s: ty(env, s)
    triple = (compatible(t("int"), t("A.a"), env) and compatible(t("A.a"), t("bool"), env)
              and not compatible(t("int"), t("bool"), env))
    verdict(capsys, 4, "compatibility reflexive and symmetric, not transitive",
            not failures and triple, f"{len(failures)} failing pairs, triple={triple}")


# --------------------------------------------------------------------------
# 5. Exponential stress

def test_criterion_5_exponential(capsys):
    start = time.perf_counter()
    result = check_program(corpus_program("exponential"), CheckConfig(), prelude())
    elapsed = time.perf_counter() - start
    leaves = sum(r.stats.leaves for r in result.reports if r is not None)
    ok = result.diagnostics == [] and leaves == 4 ** 8 and elapsed < 120
    verdict(capsys, 5, "exponential example exhaustive with 65536 leaves", ok,
            f"leaves={leaves}, diagnostics={len(result.diagnostics)}, {elapsed:.2f}s")


# --------------------------------------------------------------------------
# 6. Termination on the Turing-machine program

TURING_WITNESS = horn.Witness(S.parse_pattern(
    "Tm_ext_left (Tm_mv_left (Tr1, Tm_ext_left (Tm_mv_left (Tr3, Tm_fin))))"), 7)


def test_criterion_6_turing_termination(capsys):
    start = time.perf_counter()
    check_program(corpus_program("turing"), CheckConfig(), prelude())
    check_time = time.perf_counter() - start
    env = corpus_env("turing")
    start = time.perf_counter()
    res = horn.sld_inhabited(ty(env, "goal"), 20, horn.program_clauses(env))
    oracle_time = time.perf_counter() - start
    ok = check_time < 5 and res == TURING_WITNESS
    verdict(capsys, 6, "turing check terminates and oracle depth 20 matches regression", ok,
            f"check {check_time:.2f}s, oracle {oracle_time:.2f}s, "
            f"{format_resolution(res)}")


# --------------------------------------------------------------------------
# 7. Policy monotonicity

def test_criterion_7_policy_monotonicity(capsys):
    broken = []
    queries = corpus_queries()
    for q in queries:
        empty = []
        for mode in (NEVER, ONCE, full(4096)):
            trail = Trail()
            t = q.env.convert(q.scrutinee, {}, trail)
            empty.append(isinstance(type_pat_check(q.pattern, t, q.env, mode, trail), Empty))
        if (empty[0] and not empty[1]) or (empty[1] and not empty[2]):
            broken.append(str(q))
    verdict(capsys, 7, "Empty under Never implies Once implies Full(4096)", not broken,
            f"{len(queries)} queries, {len(broken)} violations")


# --------------------------------------------------------------------------
# 8. Trail purity

def test_criterion_8_trail_purity(capsys):
    env = type_env()
    rng = random.Random(8)
    trail = Trail()
    base = [trail.fresh(f"v{i}") for i in range(6)]
    start = trail.save()
    initial = trail.snapshot()
    marks: list = []  # (mark, snapshot) pairs, oldest first
    mismatches = 0
    for _ in range(10_000):
        if rng.random() < 0.55 or not marks:
            marks.append((trail.save(), trail.snapshot()))
            vars_ = base + [trail.fresh() for _ in range(rng.randrange(3))]
            a, b = random_type(rng, env, vars_), random_type(rng, env, vars_)
            try:
                unify(a, b, rng.choice(list(UnifyMode)), env, trail)
            except UnifyError:
                pass
        else:
            # usually undo the latest step, sometimes jump back further
            i = len(marks) - 1 if rng.random() < 0.8 else rng.randrange(len(marks))
            mark, snap = marks[i]
            del marks[i:]
            trail.restore(mark)
            mismatches += trail.snapshot() != snap
    trail.restore(start)
    ok = mismatches == 0 and trail.snapshot() == initial and all(v.ref is None for v in base)
    verdict(capsys, 8, "10^4 unify/restore operations leave the store unchanged", ok,
            f"{mismatches} intermediate mismatches")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
