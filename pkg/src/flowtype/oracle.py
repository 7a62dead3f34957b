"""Exact ground truth for finite flows.

Every subset of a finite flow is clopen and every ultracopower of a finite
flow is the flow itself, so weak containment between finite flows is factor
existence.  This module computes both sides by brute force, independently of
the window-based search in :mod:`flowtype.weaktype`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import GuardExceeded, InvalidInput
from .flowspace import FiniteFlow
from .group import SymmetricFiniteSet
from .weaktype import LStructure, Resolution, WeakType, canonicalize, flow_name, language, maximal_only

MAX_BRUTE_POINTS = 4
MAX_FACTOR_POINTS = 8


def _nonempty_subsets(size: int) -> list[frozenset]:
    pts = range(size)
    return [frozenset(c) for r in range(1, size + 1) for c in itertools.combinations(pts, r)]


def _structure(X: FiniteFlow, family: tuple, F: tuple) -> LStructure:
    everything = frozenset(range(X.size))
    E = frozenset(
        (g, k, l)
        for g in F
        for k, A in enumerate(family)
        for l, B in enumerate(family)
        if not X.translate(A, g) & B
    )
    C = frozenset(
        frozenset(S)
        for r in range(1, len(family) + 1)
        for S in itertools.combinations(range(len(family)), r)
        if frozenset().union(*(family[i] for i in S)) == everything
    )
    return LStructure(len(family), F, E, C, X.group)


def brute_type(X: FiniteFlow, F, nmax: int, *, force: bool = False) -> WeakType:
    """The exact type of ``X`` on at most ``nmax`` vertices.

    Structures on more vertices than ``X`` has nonempty subsets are never
    realized, so ``nmax`` beyond that count changes nothing.
    """
    if not isinstance(X, FiniteFlow):
        raise InvalidInput("brute_type needs a finite flow")
    if nmax < 1:
        raise InvalidInput("nmax must be positive")
    if X.size > MAX_BRUTE_POINTS and not force:
        raise GuardExceeded(f"brute_type is limited to {MAX_BRUTE_POINTS} points (use force to override)")
    Ft = language(F, X.group)
    subsets = _nonempty_subsets(X.size)
    k = min(nmax, len(subsets))
    found = set()
    for family in itertools.combinations(subsets, k):
        M = _structure(X, family, Ft)
        found.add(canonicalize(M) if k <= 6 else M)
    gens = maximal_only(found) if k <= 6 else tuple(sorted(found, key=LStructure.key))
    return WeakType(Ft, Resolution(nmax, 0), gens, X.group, flow_name(X), True)


@dataclass(frozen=True)
class FactorMap:
    assignment: tuple

    def to_json(self) -> dict:
        return {"factor": list(self.assignment)}


def _group_elements(Y: FiniteFlow) -> list:
    if Y.group.is_finite:
        return Y.group.elements()
    return list(SymmetricFiniteSet.closure(Y.group, Y.action_generators()))


def is_factor_map(Y: FiniteFlow, X: FiniteFlow, f) -> bool:
    if len(f) != Y.size or set(f) != set(range(X.size)):
        return False
    return all(f[Y.act(g, y)] == X.act(g, f[y]) for g in _group_elements(Y) for y in range(Y.size))


def factor_exists(Y: FiniteFlow, X: FiniteFlow, *, force: bool = False) -> FactorMap | None:
    """A surjective equivariant map from ``Y`` onto ``X``, or ``None``."""
    if Y.group != X.group:
        raise InvalidInput("flows act by different groups")
    if max(Y.size, X.size) > MAX_FACTOR_POINTS and not force:
        raise GuardExceeded(f"factor search is limited to {MAX_FACTOR_POINTS} points (use force to override)")
    if X.size > Y.size:
        return None
    gens = list(SymmetricFiniteSet.closure(Y.group, Y.action_generators()))
    f = [-1] * Y.size

    def assign(y0: int, x0: int, trail: list) -> bool:
        stack = [(y0, x0)]
        while stack:
            y, x = stack.pop()
            if f[y] == x:
                continue
            if f[y] != -1:
                return False
            f[y] = x
            trail.append(y)
            for g in gens:
                stack.append((Y.act(g, y), X.act(g, x)))
        return True

    def go(y: int) -> bool:
        while y < Y.size and f[y] != -1:
            y += 1
        if y == Y.size:
            return set(f) == set(range(X.size))
        for x in range(X.size):
            trail: list[int] = []
            if assign(y, x, trail) and go(y + 1):
                return True
            for t in trail:
                f[t] = -1
        return False

    if not go(0):
        return None
    if not is_factor_map(Y, X, f):
        raise RuntimeError("factor search produced an invalid map")
    return FactorMap(tuple(f))


def verify_containment_theorem(pairs, F, *, force: bool = False) -> dict:
    """Compare factor existence with full type containment on each pair ``(X, Y)``."""
    cache: dict = {}

    def tp(Z, nmax):
        key = (Z, nmax)
        if key not in cache:
            cache[key] = brute_type(Z, F, nmax, force=force)
        return cache[key]

    rows = []
    for X, Y in pairs:
        nmax = 2**X.size - 1
        factor = factor_exists(Y, X, force=force) is not None
        contained = tp(X, nmax).issubset(tp(Y, nmax))
        rows.append(
            {"X": flow_name(X), "Y": flow_name(Y), "factor": factor, "type_contained": contained, "agree": factor == contained}
        )
    agree = sum(r["agree"] for r in rows)
    return {
        "instances": rows,
        "summary": {
            "total": len(rows),
            "agree": agree,
            "disagree": len(rows) - agree,
            "factor_true": sum(r["factor"] for r in rows),
            "contained_true": sum(r["type_contained"] for r in rows),
        },
    }
