"""Pattern typing turned into proof search.

`type_pat_check` types a pattern against an expected type. In check mode
or-patterns are non-deterministic choice points and wildcards at suitable
types are split into the or-pattern of their constructors, so the search
explores every combination until one types (the pattern may match a value)
or all fail (provably empty). Choice points are generators: each one
restores the trail to its own entry mark before trying the next branch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import WILD, Pattern, PConstr, POr, PTuple, PVar, PWild, or_of
from .tycore import (
    NO_ARGUMENT, TCon, TTuple, TVar, Env, Trail, Type, UnifyError, UnifyMode,
    instantiate_constructor, resolve, unify,
)

DEFAULT_FUEL = 4096
# Nesting bound for splits along one path; single-constructor recursive
# types would otherwise split forever.
MAX_SPLIT_DEPTH = 32


class SplitPolicy(enum.Enum):
    NEVER = "never"
    ONCE = "once"
    FULL = "full"


@dataclass(frozen=True)
class SearchMode:
    check: bool = True
    policy: SplitPolicy = SplitPolicy.ONCE
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if self.policy is SplitPolicy.FULL and self.fuel <= 0:
            raise ValueError("full splitting needs positive fuel")


TYPE_ONLY = SearchMode(check=False, policy=SplitPolicy.NEVER)
NEVER = SearchMode(policy=SplitPolicy.NEVER)
ONCE = SearchMode(policy=SplitPolicy.ONCE)


def full(fuel: int = DEFAULT_FUEL) -> SearchMode:
    return SearchMode(policy=SplitPolicy.FULL, fuel=fuel)


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Inhabited:
    witness: Pattern


SearchOutcome = Union[Empty, Inhabited]


@dataclass
class SearchStats:
    leaves: int = 0   # terminal nodes of the search tree: failures plus successes
    splits: int = 0
    fuel_spent: int = 0

    def add(self, other: "SearchStats") -> None:
        self.leaves += other.leaves
        self.splits += other.splits
        self.fuel_spent += other.fuel_spent


class EmptyVariant(Exception):
    pass


class PatternTypeError(Exception):
    pass


@dataclass(frozen=True)
class Hole(PWild):
    """Wildcard produced by splitting."""

    gadt_generated: bool = field(default=False, compare=False)
    depth: int = field(default=0, compare=False)
    # single-constructor type heads already split on the path to this hole
    path: frozenset = field(default=frozenset(), compare=False)


# --------------------------------------------------------------------------
# Splitting

SINGLE, TUPLE, GADT, OTHER = "single", "tuple", "gadt", "other"


def split_kind(t: Type, env: Env) -> Optional[str]:
    t = resolve(t)
    if isinstance(t, TTuple):
        return TUPLE
    if isinstance(t, TCon):
        decl = env.decls[t.name]
        if not decl.is_variant:
            return None
        if len(decl.constructors) == 1:
            return SINGLE
        if all(c.is_gadt for c in decl.constructors):
            return GADT
        return OTHER
    return None


def split_eligible(t: Type, env: Env, policy: SplitPolicy) -> bool:
    """Whether a wildcard at ``t`` may be split under ``policy`` (fuel aside)."""
    kind = split_kind(t, env)
    if policy is SplitPolicy.NEVER or kind is None:
        return False
    if policy is SplitPolicy.ONCE:
        return kind != OTHER
    return True


def explode_pat(t: Type, env: Env, gadt_generated: bool = False, depth: int = 0,
                path: frozenset = frozenset()) -> Pattern:
    """Or-pattern of all constructors of ``t`` (or a tuple of wildcards)."""
    t = resolve(t)
    if isinstance(t, TTuple):
        return PTuple(tuple(Hole(False, depth, path) for _ in t.items))
    decl = env.decls[t.name]
    if not decl.constructors:
        raise EmptyVariant(t.name)
    if len(decl.constructors) == 1:
        path = path | {t.name}
    return or_of(PConstr(c.name, Hole(gadt_generated, depth, path)
                         if c.argument is not None else None)
                 for c in decl.constructors)


# --------------------------------------------------------------------------
# Search

class _Search:
    def __init__(self, env: Env, trail: Trail, mode: SearchMode,
                 stats: SearchStats, unify_mode: UnifyMode):
        self.env = env
        self.trail = trail
        self.mode = mode
        self.stats = stats
        self.unify_mode = unify_mode
        self.fuel = mode.fuel

    def _constructor(self, name: str):
        try:
            return self.env.constructor(name)
        except KeyError:
            raise PatternTypeError(f"unbound constructor {name}") from None

    def _arity_check(self, p: PConstr, c) -> None:
        if c.argument is None and p.arg is not None:
            raise PatternTypeError(f"constructor {p.name} expects no argument")
        if c.argument is not None and p.arg is None:
            raise PatternTypeError(f"constructor {p.name} expects an argument")

    # -- check mode: generator of typed, or-free patterns --

    def _split_decision(self, p: PWild, t: Type):
        """Return (split?, marks generated holes) for a wildcard."""
        policy = self.mode.policy
        if policy is SplitPolicy.NEVER:
            return False, False
        kind = split_kind(t, self.env)
        if kind is None:
            return False, False
        hole = p if isinstance(p, Hole) else None
        depth = hole.depth if hole else 0
        if depth >= MAX_SPLIT_DEPTH:
            return False, False
        marked = hole is not None and hole.gadt_generated
        # a single-constructor type nested in itself would unfold without end
        recursive = kind == SINGLE and hole is not None and resolve(t).name in hole.path
        once_ok = kind != OTHER and not marked and not recursive
        if once_ok:
            return True, kind == GADT
        if policy is SplitPolicy.FULL and self.fuel > 0:
            self.fuel -= 1
            self.stats.fuel_spent += 1
            return True, False
        return False, False

    def solve(self, p: Pattern, t: Type) -> Iterator[Pattern]:
        trail = self.trail
        if isinstance(p, PVar):
            yield p
            return
        if isinstance(p, PWild):
            split, mark = self._split_decision(p, t)
            if not split:
                yield WILD
                return
            depth = (p.depth if isinstance(p, Hole) else 0) + 1
            path = p.path if isinstance(p, Hole) else frozenset()
            try:
                exploded = explode_pat(t, self.env, gadt_generated=mark, depth=depth, path=path)
            except EmptyVariant:
                self.stats.splits += 1
                self.stats.leaves += 1
                return
            self.stats.splits += 1
            yield from self.solve(exploded, t)
            return
        if isinstance(p, POr):
            mark = trail.save()
            yield from self.solve(p.left, t)
            trail.restore(mark)
            yield from self.solve(p.right, t)
            trail.restore(mark)
            return
        if isinstance(p, PTuple):
            mark = trail.save()
            tys = self._tuple_types(p, t)
            if tys is None:
                self.stats.leaves += 1
                return
            yield from self._solve_items(p.items, tys, 0, ())
            trail.restore(mark)
            return
        if isinstance(p, PConstr):
            c = self._constructor(p.name)
            self._arity_check(p, c)
            mark = trail.save()
            arg_ty = instantiate_constructor(c, t, self.unify_mode, self.env, trail)
            if arg_ty is None:
                self.stats.leaves += 1
                return
            if arg_ty is NO_ARGUMENT:
                yield PConstr(p.name)
            else:
                for a in self.solve(p.arg, arg_ty):
                    yield PConstr(p.name, a)
            trail.restore(mark)
            return
        raise TypeError(f"not a pattern: {p!r}")

    def _solve_items(self, items, tys, i, acc) -> Iterator[Pattern]:
        if i == len(items):
            yield PTuple(acc)
            return
        for q in self.solve(items[i], tys[i]):
            yield from self._solve_items(items, tys, i + 1, acc + (q,))

    def _tuple_types(self, p: PTuple, t: Type):
        t = resolve(t)
        n = len(p.items)
        if isinstance(t, TTuple):
            return t.items if len(t.items) == n else None
        if isinstance(t, TVar):
            tys = tuple(self.trail.fresh() for _ in range(n))
            self.trail.bind(t, TTuple(tys))
            return tys
        return None

    # -- type-only mode: deterministic, every or-branch must type --

    def typecheck(self, p: Pattern, t: Type) -> bool:
        if isinstance(p, (PWild, PVar)):
            return True
        if isinstance(p, POr):
            for branch in (p.left, p.right):
                mark = self.trail.save()
                ok = self.typecheck(branch, t)
                self.trail.restore(mark)
                if not ok:
                    return False
            return True
        if isinstance(p, PTuple):
            tys = self._tuple_types(p, t)
            return tys is not None and all(self.typecheck(q, ty) for q, ty in zip(p.items, tys))
        if isinstance(p, PConstr):
            c = self._constructor(p.name)
            self._arity_check(p, c)
            arg_ty = instantiate_constructor(c, t, self.unify_mode, self.env, self.trail)
            if arg_ty is None:
                return False
            return arg_ty is NO_ARGUMENT or self.typecheck(p.arg, arg_ty)
        raise TypeError(f"not a pattern: {p!r}")


def type_pat_check(p: Pattern, expected: Type, env: Env, mode: SearchMode = ONCE,
                   trail: Optional[Trail] = None, stats: Optional[SearchStats] = None,
                   unify_mode: UnifyMode = UnifyMode.PATTERN) -> SearchOutcome:
    """Decide whether ``p`` may match some value of type ``expected``.

    Returns Empty when every alternative fails to type, otherwise
    Inhabited with the first (left-most) typeable or-free refinement of
    ``p``. The trail is left exactly as it was on entry.
    """
    if trail is None:
        trail = Trail()
    if stats is None:
        stats = SearchStats()
    search = _Search(env, trail, mode, stats, unify_mode)
    entry = trail.save()
    try:
        if not mode.check:
            return Inhabited(p) if search.typecheck(p, expected) else Empty()
        gen = search.solve(p, expected)
        witness = next(gen, None)
        gen.close()
        if witness is None:
            return Empty()
        stats.leaves += 1
        return Inhabited(witness)
    finally:
        trail.restore(entry)
