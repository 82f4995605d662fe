"""Brute-force value enumeration, used as a second oracle in tests.

Two enumerators live here. `enumerate_values` lists the well-typed closed
values of a type by plain strict unification over the declarations, with
no compatibility relation and no splitting heuristics. `enumerate_shapes`
ignores type indices altogether and lists every constructor term whose
shape follows the declared argument types; it is a superset of the typed
values and is what the untyped matrix algorithms must partition.

Leaves whose type is a builtin, an arrow or a still-unknown variable are
opaque values, rendered as `_`. Size counts constructor nodes plus builtin
leaves, the same measure the Horn resolver uses for witnesses; height
counts nested constructors.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .syntax import WILD, Pattern, PConstr, PTuple
from .tycore import (
    BUILTIN, NO_ARGUMENT, TArrow, TCon, TTuple, TVar, Env, Trail, Type, UnifyMode,
    instantiate_constructor, resolve, subst,
)


class _Slot:
    __slots__ = ("value",)

    def __init__(self):
        self.value = None


def _build(shape) -> Pattern:
    """Turn a tree of slots into a pattern once every slot is filled."""
    if isinstance(shape, _Slot):
        return _build(shape.value)
    if isinstance(shape, tuple) and shape and shape[0] == "tuple":
        return PTuple(tuple(_build(s) for s in shape[1]))
    if isinstance(shape, tuple) and shape and shape[0] == "con":
        _, name, arg = shape
        return PConstr(name) if arg is None else PConstr(name, _build(arg))
    return WILD


class _Enumerator:
    def __init__(self, env: Env, trail: Trail, max_size: Optional[int], max_height: Optional[int]):
        self.env = env
        self.trail = trail
        self.max_size = max_size
        self.max_height = max_height

    def run(self, goals: list, size: int) -> Iterator[None]:
        # Goals whose type is still an unknown variable wait until some
        # sibling fixes it; if none does they become opaque leaves.
        pick = next((i for i, (t, _, _) in enumerate(goals)
                     if not isinstance(resolve(t), TVar)), None)
        if pick is None:
            for _, slot, _ in goals:
                slot.value = "opaque"
            yield
            return
        t, slot, height = goals[pick]
        rest = goals[:pick] + goals[pick + 1:]
        t = resolve(t)
        if isinstance(t, TTuple):
            kids = [_Slot() for _ in t.items]
            slot.value = ("tuple", kids)
            yield from self.run([(ty, k, height) for ty, k in zip(t.items, kids)] + rest, size)
            return
        if isinstance(t, TArrow):
            slot.value = "opaque"
            yield from self.run(rest, size)
            return
        decl = self.env.decls[t.name]
        if self.max_size is not None and size + 1 > self.max_size:
            return
        if decl.kind == BUILTIN:
            slot.value = "opaque"
            yield from self.run(rest, size + 1)
            return
        if self.max_height is not None and height >= self.max_height:
            return
        for c in decl.constructors:
            mark = self.trail.save()
            arg = instantiate_constructor(c, t, UnifyMode.STRICT, self.env, self.trail)
            if arg is None:
                continue
            if arg is NO_ARGUMENT:
                slot.value = ("con", c.name, None)
                yield from self.run(rest, size + 1)
            else:
                kid = _Slot()
                slot.value = ("con", c.name, kid)
                yield from self.run([(arg, kid, height + 1)] + rest, size + 1)
            self.trail.restore(mark)


def _iter_values(t: Type, env: Env, trail: Trail, max_size: Optional[int],
                 max_height: Optional[int]) -> Iterator[Pattern]:
    # Callers restore the trail themselves; an abandoned generator must not
    # touch it later.
    if max_size is None and max_height is None:
        raise ValueError("at least one bound is required")
    root = _Slot()
    for _ in _Enumerator(env, trail, max_size, max_height).run([(t, root, 0)], 0):
        yield _build(root)


def enumerate_values(t: Type, env: Env, max_size: Optional[int] = None,
                     max_height: Optional[int] = None, limit: int = 100_000,
                     trail: Optional[Trail] = None) -> list:
    """Distinct closed values of ``t`` within the bounds, in discovery order."""
    trail = trail if trail is not None else Trail()
    entry = trail.save()
    seen: dict = {}
    try:
        for v in _iter_values(t, env, trail, max_size, max_height):
            seen.setdefault(v, None)
            if len(seen) >= limit:
                break
    finally:
        trail.restore(entry)
    return list(seen)


def inhabited_within(t: Type, env: Env, max_size: int,
                     trail: Optional[Trail] = None) -> Optional[Pattern]:
    """Some value of ``t`` of size at most ``max_size``, or None."""
    trail = trail if trail is not None else Trail()
    entry = trail.save()
    try:
        return next(_iter_values(t, env, trail, max_size, None), None)
    finally:
        trail.restore(entry)


# --------------------------------------------------------------------------
# Untyped shapes

def enumerate_shapes(t: Type, env: Env, max_height: int) -> list:
    """Every constructor term of height at most ``max_height`` following the
    declared argument structure of ``t`` but ignoring all type indices.

    Result positions that are plain variables take the actual argument, so
    ordinary parameters such as the element type of an option are followed;
    every other index constraint is dropped.
    """
    return list(_shapes(resolve(t), env, max_height))


def _shapes(t: Type, env: Env, height: int) -> Iterator[Pattern]:
    if isinstance(t, TTuple):
        yield from _product([resolve(x) for x in t.items], env, height, ())
        return
    if not isinstance(t, TCon):
        yield WILD
        return
    decl = env.decls[t.name]
    if decl.kind == BUILTIN:
        yield WILD
        return
    if height <= 0:
        return
    for c in decl.constructors:
        if c.argument is None:
            yield PConstr(c.name)
            continue
        mapping = {i.id: a for i, a in zip(c.result_indices, t.args) if isinstance(i, TVar)}
        for a in _shapes(resolve(subst(c.argument, mapping)), env, height - 1):
            yield PConstr(c.name, a)


def _product(items, env, height, acc):
    if not items:
        yield PTuple(acc)
        return
    for v in _shapes(items[0], env, height):
        yield from _product(items[1:], env, height, acc + (v,))
