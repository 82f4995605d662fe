"""Per-match exhaustiveness, redundancy and refutation checking."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import horn, matrix
from . import syntax as S
from .search import (
    DEFAULT_FUEL, Inhabited, PatternTypeError, SearchMode, SearchStats, SplitPolicy,
    TYPE_ONLY, type_pat_check,
)
from .tycore import DeclError, Env, Trail, build_env

NON_EXHAUSTIVE = "non-exhaustive"
UNREACHABLE = "unreachable-case"
REFUTATION_FAILED = "refutation-failed"
TYPE_ERROR = "type-error"
SYNTAX_ERROR = "syntax-error"
ORACLE_DISAGREEMENT = "oracle-disagreement"

WARNING, ERROR = "warning", "error"
_SEVERITY = {NON_EXHAUSTIVE: WARNING, UNREACHABLE: WARNING}

WARNING_8 = ("Warning 8: this pattern-matching is not exhaustive.\n"
             "Here is an example of a value that is not matched:\n{}")
WARNING_56 = "Warning 56: this match case is unreachable."
WARNING_56_SUGGEST = WARNING_56 + "\nConsider replacing it with a refutation case '<pat> -> .'"
REFUTATION_ERROR = ("Error: This match case could not be refuted.\n"
                    "Here is an example of a value that would reach it: {}")


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    line: int = 0
    col: int = 0
    check_index: Optional[int] = None
    arm_index: Optional[int] = None  # 1-based
    witness: Optional[S.Pattern] = None
    suggest_refutation: Optional[bool] = None
    detail: str = ""

    @property
    def severity(self) -> str:
        return _SEVERITY.get(self.kind, ERROR)

    def message(self, ocaml_compat: bool = False) -> str:
        w = S.print_pattern(self.witness) if self.witness is not None else ""
        if ocaml_compat:
            if self.kind == NON_EXHAUSTIVE:
                return WARNING_8.format(w)
            if self.kind == UNREACHABLE:
                return WARNING_56_SUGGEST if self.suggest_refutation else WARNING_56
            if self.kind == REFUTATION_FAILED:
                return REFUTATION_ERROR.format(w)
        if self.kind == NON_EXHAUSTIVE:
            return f"match is not exhaustive; unmatched: {w}"
        if self.kind == UNREACHABLE:
            hint = "; it can be written as a refutation case" if self.suggest_refutation else ""
            return f"arm {self.arm_index} is unreachable{hint}"
        if self.kind == REFUTATION_FAILED:
            return f"refutation arm {self.arm_index} is reachable, e.g. by: {w}"
        return self.detail

    def to_record(self) -> dict:
        return {
            "severity": self.severity,
            "kind": self.kind,
            "line": self.line,
            "col": self.col,
            "check": self.check_index,
            "arm": self.arm_index,
            "witness": S.print_pattern(self.witness) if self.witness is not None else None,
            "suggest_refutation": self.suggest_refutation,
            "message": self.message(),
        }


@dataclass(frozen=True)
class CheckConfig:
    # Splitting used for the final exhaustiveness check of matches with
    # more than one arm; FULL also upgrades the other emptiness checks.
    split_policy: SplitPolicy = SplitPolicy.NEVER
    fuel: int = DEFAULT_FUEL
    oracle_depth: int = 6
    oracle_check: bool = False

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")
        if self.oracle_depth < 1:
            raise ValueError("oracle_depth must be at least 1")

    def mode(self, policy: SplitPolicy) -> SearchMode:
        if self.split_policy is SplitPolicy.FULL:
            policy = SplitPolicy.FULL
        return SearchMode(policy=policy, fuel=self.fuel)


@dataclass
class EmptyVerdict:
    """A pattern the search proved empty at the scrutinee type."""

    pattern: S.Pattern
    arm_index: Optional[int]  # None for a missing case


@dataclass
class MatchReport:
    diagnostics: list = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    empty: list = field(default_factory=list)  # EmptyVerdict entries
    missing: list = field(default_factory=list)  # syntactic missing cases


@dataclass(frozen=True)
class MatchCheckRequest:
    scrutinee: S.TypeSyntax
    arms: tuple  # of syntax.Arm
    line: int = 0
    col: int = 0

    @classmethod
    def from_syntax(cls, c: S.MatchCheckSyntax) -> "MatchCheckRequest":
        return cls(c.scrutinee, c.arms, c.line, c.col)


def _first_inhabited(patterns, ty, env, mode, trail, stats):
    for p in patterns:
        out = type_pat_check(p, ty, env, mode, trail, stats)
        if isinstance(out, Inhabited):
            return out.witness
    return None


def run_match(req, env: Env, config: CheckConfig = CheckConfig(),
              check_index: Optional[int] = None) -> MatchReport:
    """Check one match; return diagnostics plus search bookkeeping."""
    if isinstance(req, S.MatchCheckSyntax):
        req = MatchCheckRequest.from_syntax(req)
    trail = Trail()
    where = (req.line, req.col)
    ty = env.convert(req.scrutinee, {}, trail, where)
    report = MatchReport()
    stats = report.stats
    for k, arm in enumerate(req.arms, 1):
        try:
            ok = type_pat_check(arm.pattern, ty, env, TYPE_ONLY, trail)
        except PatternTypeError as e:
            raise PatternTypeError(f"{arm.line}:{arm.col}: {e}") from None
        if not isinstance(ok, Inhabited):
            raise PatternTypeError(f"{arm.line}:{arm.col}: pattern "
                                   f"{S.print_pattern(arm.pattern)} does not have the "
                                   f"scrutinee type")

    once = config.mode(SplitPolicy.ONCE)
    previous: list = []
    for k, arm in enumerate(req.arms, 1):
        resid = matrix.residual(arm.pattern, previous, env)
        witness = _first_inhabited(resid, ty, env, once, trail, stats)
        if witness is None and resid:
            report.empty.extend(EmptyVerdict(r, k) for r in resid)
        if arm.kind == S.REFUTATION and witness is not None:
            report.diagnostics.append(Diagnostic(
                REFUTATION_FAILED, arm.line, arm.col, check_index, k, witness=witness))
        elif arm.kind == S.CONCRETE and witness is None:
            report.diagnostics.append(Diagnostic(
                UNREACHABLE, arm.line, arm.col, check_index, k,
                suggest_refutation=bool(resid)))
        previous.append(arm.pattern)

    missing = matrix.residual(S.WILD, previous, env)
    report.missing = missing
    final = once if len(req.arms) == 1 else config.mode(config.split_policy)
    surviving = []
    for m in missing:
        w = _first_inhabited([m], ty, env, final, trail, stats)
        if w is None:
            report.empty.append(EmptyVerdict(m, None))
        else:
            surviving.append(w)
    if surviving:
        report.diagnostics.append(Diagnostic(
            NON_EXHAUSTIVE, req.line, req.col, check_index, witness=S.or_of(surviving)))
    return report


def check_match(req, env: Env, config: CheckConfig = CheckConfig(),
                check_index: Optional[int] = None) -> list:
    return run_match(req, env, config, check_index).diagnostics


# --------------------------------------------------------------------------
# Programs

def default_prelude_text() -> str:
    return resources.files("gadtcheck").joinpath("prelude.gml").read_text(encoding="utf-8")


def load_prelude(text: Optional[str] = None) -> S.SurfaceProgram:
    return S.parse_program(default_prelude_text() if text is None else text)


@dataclass
class ProgramResult:
    diagnostics: list
    reports: list  # MatchReport or None per check
    env: Optional[Env] = None


def oracle_disagreements(report: MatchReport, req, env: Env, depth: int,
                         check_index: Optional[int] = None, clauses=None) -> list:
    """Cross-check every empty verdict of a match against the Horn oracle."""
    if isinstance(req, S.MatchCheckSyntax):
        req = MatchCheckRequest.from_syntax(req)
    if clauses is None:
        clauses = horn.program_clauses(env)
    out = []
    for v in report.empty:
        ty = env.convert(req.scrutinee, {}, Trail())
        res = horn.sld_inhabited(ty, depth, clauses, pattern=v.pattern)
        if isinstance(res, horn.Witness):
            out.append(Diagnostic(
                ORACLE_DISAGREEMENT, req.line, req.col, check_index, v.arm_index,
                witness=res.value,
                detail=(f"search proved {S.print_pattern(v.pattern)} empty but the oracle "
                        f"found {S.print_pattern(res.value)}")))
    return out


def check_program(prog: S.SurfaceProgram, config: CheckConfig = CheckConfig(),
                  prelude: Optional[S.SurfaceProgram] = None) -> ProgramResult:
    """Build the environment and check every match, in order."""
    if prelude is None:
        prelude = load_prelude()
    try:
        env = build_env(prog, prelude)
    except DeclError as e:
        return ProgramResult([Diagnostic(TYPE_ERROR, e.line, e.col, detail=str(e))], [])
    diags, reports = [], []
    clauses = horn.program_clauses(env) if config.oracle_check else None
    for i, c in enumerate(prog.checks, 1):
        try:
            report = run_match(c, env, config, i)
        except (PatternTypeError, DeclError) as e:
            diags.append(Diagnostic(TYPE_ERROR, c.line, c.col, i, detail=str(e)))
            reports.append(None)
            continue
        diags.extend(report.diagnostics)
        if config.oracle_check:
            diags.extend(oracle_disagreements(report, c, env, config.oracle_depth, i, clauses))
        reports.append(report)
    return ProgramResult(diags, reports, env)


def exit_status(diags: list) -> int:
    if any(d.severity == ERROR for d in diags):
        return 2
    if diags:
        return 1
    return 0


def replace_arm_kind(req: S.MatchCheckSyntax, index: int, kind: str) -> S.MatchCheckSyntax:
    """Copy of a check with arm ``index`` (1-based) turned into ``kind``."""
    arms = list(req.arms)
    arms[index - 1] = dataclasses.replace(arms[index - 1], kind=kind)
    return dataclasses.replace(req, arms=tuple(arms))
