"""Type-free pattern matrix algorithms.

Rows are tuples of patterns. Constructor names are unique across
declarations, so the signature of a column is recovered from any
constructor appearing in it; columns made only of wildcards are never
enumerated.
"""

from __future__ import annotations

from typing import Optional

from .syntax import WILD, Pattern, PConstr, POr, PTuple, PVar, PWild
from .tycore import ConstructorSig, Env

PatternMatrix = list  # list of equal-width tuples of patterns


def is_wild(p: Pattern) -> bool:
    return isinstance(p, (PWild, PVar))


def expand_or_heads(m: PatternMatrix) -> PatternMatrix:
    out = []
    for row in m:
        stack = [row]
        while stack:
            r = stack.pop()
            if r and isinstance(r[0], POr):
                stack.append((r[0].right,) + r[1:])
                stack.append((r[0].left,) + r[1:])
            else:
                out.append(r)
    return out


def specialize(m: PatternMatrix, c: ConstructorSig) -> PatternMatrix:
    """Rows whose head admits constructor ``c``, head replaced by its argument."""
    width = 1 if c.argument is not None else 0
    out = []
    for row in expand_or_heads(m):
        head, rest = row[0], row[1:]
        if is_wild(head):
            out.append((WILD,) * width + rest)
        elif isinstance(head, PConstr) and head.name == c.name:
            if width:
                out.append((head.arg if head.arg is not None else WILD,) + rest)
            else:
                out.append(rest)
    return out


def specialize_tuple(m: PatternMatrix, n: int) -> PatternMatrix:
    out = []
    for row in expand_or_heads(m):
        head, rest = row[0], row[1:]
        if is_wild(head):
            out.append((WILD,) * n + rest)
        elif isinstance(head, PTuple) and len(head.items) == n:
            out.append(tuple(head.items) + rest)
    return out


def default(m: PatternMatrix) -> PatternMatrix:
    """Rows with a wildcard head, head removed."""
    return [row[1:] for row in expand_or_heads(m) if is_wild(row[0])]


def _head_signature(m: PatternMatrix, env: Env):
    """('tuple', n), ('constr', decl) or None if every head is a wildcard."""
    for row in m:
        h = row[0]
        if isinstance(h, PTuple):
            return ("tuple", len(h.items))
        if isinstance(h, PConstr):
            return ("constr", env.decls[env.constructor(h.name).owner])
    return None


def residual_vectors(q: tuple, m: PatternMatrix, env: Env) -> list:
    """Vectors covering exactly the values matched by ``q`` and by no row of ``m``."""
    if not m:
        return [q]
    if not q:
        return []
    head, rest = q[0], q[1:]
    if isinstance(head, POr):
        return (residual_vectors((head.left,) + rest, m, env)
                + residual_vectors((head.right,) + rest, m, env))
    m = expand_or_heads(m)
    if isinstance(head, PConstr):
        c = env.constructor(head.name)
        if c.argument is None:
            return [(head,) + v for v in residual_vectors(rest, specialize(m, c), env)]
        arg = head.arg if head.arg is not None else WILD
        sub = residual_vectors((arg,) + rest, specialize(m, c), env)
        return [(PConstr(head.name, v[0]),) + v[1:] for v in sub]
    if isinstance(head, PTuple):
        n = len(head.items)
        sub = residual_vectors(tuple(head.items) + rest, specialize_tuple(m, n), env)
        return [(PTuple(v[:n]),) + v[n:] for v in sub]
    # wildcard or variable head
    sig = _head_signature(m, env)
    if sig is None:
        return [(head,) + v for v in residual_vectors(rest, default(m), env)]
    if sig[0] == "tuple":
        return residual_vectors((PTuple((WILD,) * sig[1]),) + rest, m, env)
    decl = sig[1]
    present = {r[0].name for r in m if isinstance(r[0], PConstr)}
    out = []
    absent_rest: Optional[list] = None
    for c in decl.constructors:
        if c.name in present:
            skel = PConstr(c.name, WILD if c.argument is not None else None)
            out.extend(residual_vectors((skel,) + rest, m, env))
        else:
            if absent_rest is None:
                absent_rest = residual_vectors(rest, default(m), env)
            skel = PConstr(c.name, WILD if c.argument is not None else None)
            out.extend((skel,) + v for v in absent_rest)
    return out


def missing_patterns(m: PatternMatrix, env: Env, width: Optional[int] = None) -> list:
    """Complete set of pattern vectors for the values no row of ``m`` matches."""
    if width is None:
        if not m:
            raise ValueError("width is required for an empty matrix")
        width = len(m[0])
    return residual_vectors((WILD,) * width, m, env)


def residual(arm: Pattern, previous, env: Env) -> list:
    """Patterns for the values ``arm`` matches that no earlier arm matches."""
    rows = [p if isinstance(p, tuple) else (p,) for p in previous]
    return [v[0] for v in residual_vectors((arm,), rows, env)]


def matches(p: Pattern, value: Pattern) -> bool:
    """Whether ``p`` matches a value term (wildcards in a value are opaque leaves)."""
    if is_wild(p):
        return True
    if isinstance(p, POr):
        return matches(p.left, value) or matches(p.right, value)
    if isinstance(p, PConstr):
        if not (isinstance(value, PConstr) and value.name == p.name):
            return False
        if p.arg is None or value.arg is None:
            return True
        return matches(p.arg, value.arg)
    if isinstance(p, PTuple):
        return (isinstance(value, PTuple) and len(value.items) == len(p.items)
                and all(matches(a, b) for a, b in zip(p.items, value.items)))
    return False


def row_matches(row: tuple, values: tuple) -> bool:
    return all(matches(p, v) for p, v in zip(row, values))
