"""Exact seminorm calculus on discrete groups.

A generated seminorm ``[[P]]`` is a weighted word metric: the cheapest way to
write ``g`` as a product of listed elements, each paying its cost, capped at
the default cost (every element may be used as a single factor at that
price).  All values are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidInput, PreconditionError
from .group import Group, SymmetricFiniteSet, ball, product_set


def rational(x) -> Fraction:
    """Parse ``"p/q"``, ints or Fractions; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise InvalidInput(f"rationals must be exact, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"bad rational {x!r}") from None
    raise InvalidInput(f"bad rational {x!r}")


def fmt(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class WeightedPairSet:
    """Listed costs plus a default cost applying to every element."""

    group: Group
    costs: Mapping
    default_cost: Fraction

    def __post_init__(self):
        G = self.group
        default = rational(self.default_cost)
        if default <= 0:
            raise InvalidInput("default cost must be positive")
        sym: dict = {}
        for g, c in self.costs.items():
            G.check(g)
            c = rational(c)
            if c < 0:
                raise InvalidInput(f"negative cost for {G.format(g)}")
            if c > default:
                raise InvalidInput(f"cost {c} of {G.format(g)} exceeds the default cost {default}")
            for h in (g, G._inv(g)):
                sym[h] = min(c, sym.get(h, c))
        sym[G.identity] = Fraction(0)
        if not G.is_finite:
            zero = [g for g, c in sym.items() if c == 0 and g != G.identity]
            if zero:
                raise InvalidInput(
                    f"zero cost on {G.format(zero[0])} in an infinite group makes evaluation unbounded"
                )
        object.__setattr__(self, "costs", sym)
        object.__setattr__(self, "default_cost", default)

    @cached_property
    def distances(self) -> dict:
        """Every element with value strictly below the default cost, with its value."""
        G = self.group
        cap = self.default_cost
        steps = sorted(
            ((c, g) for g, c in self.costs.items() if c < cap and g != G.identity),
            key=lambda t: (t[0], G.sort_key(t[1])),
        )
        dist = {G.identity: Fraction(0)}
        done = set()
        tie = itertools.count()
        heap = [(Fraction(0), next(tie), G.identity)]
        while heap:
            d, _, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for c, s in steps:
                nd = d + c
                if nd >= cap:
                    break
                y = G._mul(x, s)
                if y not in done and nd < dist.get(y, cap):
                    dist[y] = nd
                    heapq.heappush(heap, (nd, next(tie), y))
        return dist

    def __call__(self, g) -> Fraction:
        self.group.check(g)
        return self.distances.get(g, self.default_cost)


@dataclass(frozen=True)
class NestedChain:
    """Decreasing symmetric sets ``U_0 ⊇ U_1 ⊇ ...`` with nonincreasing costs."""

    group: Group
    levels: tuple
    costs: tuple = ()

    def __post_init__(self):
        levels = tuple(
            lv if isinstance(lv, SymmetricFiniteSet) else SymmetricFiniteSet.of(self.group, lv)
            for lv in self.levels
        )
        if not levels:
            raise InvalidInput("chain needs at least one level")
        costs = tuple(rational(c) for c in self.costs) or tuple(
            Fraction(1, 2**n) for n in range(len(levels))
        )
        if len(costs) != len(levels):
            raise InvalidInput("chain needs one cost per level")
        for n in range(len(levels) - 1):
            if not levels[n + 1].elements <= levels[n].elements:
                raise InvalidInput(f"chain level {n + 1} is not contained in level {n}")
            if costs[n + 1] > costs[n]:
                raise InvalidInput(f"chain costs increase at level {n + 1}")
        if costs[0] > 1 or costs[-1] < 0:
            raise InvalidInput("chain costs must lie in [0, 1]")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "costs", costs)

    @property
    def has_default_costs(self) -> bool:
        return all(c == Fraction(1, 2**n) for n, c in enumerate(self.costs))

    def pair_set(self) -> WeightedPairSet:
        # costs are nonincreasing, so the deepest level containing u wins
        costs: dict = {}
        for lv, c in zip(self.levels, self.costs):
            for u in lv.elements:
                costs[u] = c
        return WeightedPairSet(self.group, costs, Fraction(1))


class Seminorm:
    """An evaluable seminorm: generated, chain-induced, or an explicit table."""

    kind: str

    def __init__(self, group: Group, kind: str, *, pairs=None, chain=None, values=None):
        self.group = group
        self.kind = kind
        self.pairs = pairs
        self.chain = chain
        self.values = values

    @classmethod
    def generated(cls, pairs: WeightedPairSet) -> "Seminorm":
        return cls(pairs.group, "generated", pairs=pairs)

    @classmethod
    def from_chain(cls, chain: NestedChain) -> "Seminorm":
        return cls(chain.group, "chain", chain=chain, pairs=chain.pair_set())

    @classmethod
    def table(cls, group: Group, values: Iterable) -> "Seminorm":
        if not group.is_finite:
            raise InvalidInput("table seminorms need a finite group")
        vals = tuple(rational(v) for v in values)
        if len(vals) != group.order:
            raise InvalidInput(f"table has {len(vals)} values for a group of order {group.order}")
        bad = seminorm_violations(group, vals.__getitem__, group.elements())
        if bad:
            raise InvalidInput(f"not a seminorm: {bad[0]}")
        return cls(group, "table", values=vals)

    def __call__(self, g) -> Fraction:
        if self.kind == "table":
            return self.values[self.group.check(g)]
        return self.pairs(g)

    def __repr__(self):
        return f"Seminorm({self.kind}, {self.group.describe()})"

    def norm(self) -> Fraction:
        """``sup`` of the seminorm over the group."""
        if self.kind == "table":
            return max(self.values)
        if self.group.is_finite:
            return max(self(g) for g in self.group.elements())
        # positive costs: distances below the cap form a finite set
        return self.pairs.default_cost

    def as_table(self) -> "Seminorm":
        if self.kind == "table":
            return self
        return Seminorm.table(self.group, [self(g) for g in self.group.elements()])

    # -- JSON -------------------------------------------------------------

    @classmethod
    def from_json(cls, group: Group, obj) -> "Seminorm":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidInput("seminorm JSON must be an object with a 'kind' field")
        kind = obj["kind"]
        try:
            if kind == "table":
                return cls.table(group, obj["values"])
            if kind == "generated":
                costs: dict = {}
                for g, c in obj["pairs"]:
                    g = group.parse(g)
                    c = rational(c)
                    costs[g] = min(c, costs.get(g, c))
                return cls.generated(WeightedPairSet(group, costs, rational(obj.get("default", "1"))))
            if kind == "chain":
                return cls.from_chain(chain_from_json(group, obj))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad seminorm JSON: {exc}") from exc
        raise InvalidInput(f"unknown seminorm kind {kind!r}")

    def to_json(self) -> dict:
        G = self.group
        if self.kind == "table":
            return {"kind": "table", "values": [fmt(v) for v in self.values]}
        if self.kind == "chain":
            return chain_to_json(self.chain)
        items = sorted(self.pairs.costs.items(), key=lambda t: G.sort_key(t[0]))
        return {
            "kind": "generated",
            "pairs": [[G.format(g), fmt(c)] for g, c in items if g != G.identity],
            "default": fmt(self.pairs.default_cost),
        }


def chain_from_json(group: Group, obj) -> NestedChain:
    """Levels are element lists or ``{"ball": r}`` over the standard generators."""
    levels = []
    for lv in obj["levels"]:
        if isinstance(lv, dict) and "ball" in lv:
            levels.append(ball(group, group.standard_generators(), int(lv["ball"])))
        else:
            levels.append([group.parse(x) for x in lv])
    return NestedChain(group, tuple(levels), tuple(obj.get("costs") or ()))


def chain_to_json(chain: NestedChain) -> dict:
    G = chain.group
    return {
        "kind": "chain",
        "levels": [[G.format(x) for x in lv.sorted()] for lv in chain.levels],
        "costs": [fmt(c) for c in chain.costs],
    }


def seminorm_violations(group: Group, sigma, domain: Iterable) -> list[str]:
    """Check the seminorm axioms on ``domain`` (products that leave it are skipped)."""
    G = group
    dom = list(domain)
    dset = set(dom)
    vals = {g: sigma(g) for g in dom}
    out = []
    if G.identity in dset and vals[G.identity] != 0:
        out.append("value at the identity is not 0")
    for g in dom:
        if vals[g] < 0:
            out.append(f"negative value at {G.format(g)}")
        gi = G._inv(g)
        if gi in dset and vals[gi] != vals[g]:
            out.append(f"asymmetric at {G.format(g)}")
    for g in dom:
        for h in dom:
            gh = G._mul(g, h)
            if gh in dset and vals[gh] > vals[g] + vals[h]:
                out.append(f"subadditivity fails at ({G.format(g)}, {G.format(h)})")
                if len(out) > 10:
                    return out
    return out


def eval_generated(P: WeightedPairSet, g) -> Fraction:
    return P(g)


def sigma_chain(chain: NestedChain, g) -> Fraction:
    return chain.pair_set()(g)


def seminorm_ball(sigma, c, domain: Iterable) -> set:
    """``{g in domain : sigma(g) < c}``."""
    c = rational(c)
    return {g for g in domain if sigma(g) < c}


def phi_pairs(sigma, sigma_prime, F: SymmetricFiniteSet | Iterable, eps, support: Iterable) -> WeightedPairSet:
    """Pair set of ``sigma`` on ``support`` plus ``(f, sigma'(f) + eps)`` for f in F."""
    group = sigma.group
    eps = rational(eps)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    support = set(support)
    Fset = F.elements if isinstance(F, SymmetricFiniteSet) else set(F)
    missing = [f for f in Fset if f not in support]
    if missing:
        raise PreconditionError(f"F is not contained in the support: {group.format(missing[0])}")
    cap = sigma.norm()
    costs = {h: sigma(h) for h in support}
    for f in Fset:
        costs[f] = min(costs[f], sigma_prime(f) + eps, cap)
    if cap == 0:
        # Phi <= sigma = 0 everywhere
        return _ZeroSeminorm(group)
    return WeightedPairSet(group, costs, cap)


@dataclass(frozen=True)
class _ZeroSeminorm:
    group: Group

    def __call__(self, g) -> Fraction:
        self.group.check(g)
        return Fraction(0)


def phi(sigma, sigma_prime, F, eps, g, support: Iterable | None = None) -> Fraction:
    if support is None:
        if not sigma.group.is_finite:
            raise PreconditionError("phi on an infinite group needs an explicit finite support")
        support = sigma.group.elements()
    return phi_pairs(sigma, sigma_prime, F, eps, support)(g)


# -- Birkhoff-Kakutani bounds ---------------------------------------------


@dataclass
class BKReport:
    precondition: str
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.precondition == "ok" and not self.violations

    def to_json(self, group: Group) -> dict:
        return {
            "precondition": self.precondition,
            "violations": [
                {"h": group.format(h), "level": n, "value": fmt(v)} for h, n, v in self.violations
            ],
        }


def bk_verify(chain: NestedChain) -> BKReport:
    """Check ``2^-(n+1) <= sigma(h) <= 2^-n`` for every ``h`` in ``U_n \\ U_{n+1}``."""
    G = chain.group
    if not chain.has_default_costs:
        return BKReport("failed: costs must be 2^-n")
    levels = chain.levels
    for n in range(len(levels) - 1):
        U = levels[n + 1].elements
        cube = product_set(G, product_set(G, U, U), U)
        outside = cube - levels[n].elements
        if outside:
            w = min(outside, key=G.sort_key)
            return BKReport(f"failed: U_{n + 1}^3 is not contained in U_{n} (witness {G.format(w)})")
    sigma = chain.pair_set()
    report = BKReport("ok")
    for n in range(len(levels) - 1):
        lo, hi = Fraction(1, 2 ** (n + 1)), Fraction(1, 2**n)
        for h in sorted(levels[n].elements - levels[n + 1].elements, key=G.sort_key):
            v = sigma(h)
            report.checked += 1
            if not lo <= v <= hi:
                report.violations.append((h, n, v))
    return report


# -- Fubini witnesses -----------------------------------------------------


@dataclass
class FubiniWitness:
    F: SymmetricFiniteSet
    eps: Fraction
    verified: bool
    V: frozenset = frozenset()


def fubini_witness(G: Group, sigma0, sigma2, delta) -> FubiniWitness:
    """Build ``(F, eps)`` with ``Phi(sigma2, sigma0, F, eps) <= sigma0 + delta``.

    ``V`` collects the elements where both seminorms are at most ``delta/5``,
    ``eps = delta/5`` and ``F`` is grown greedily until ``V F V`` covers the
    open unit ball of ``sigma0``.  The inequality is then checked at every
    group element.
    """
    if not G.is_finite:
        raise PreconditionError("fubini_witness needs a finite group")
    delta = rational(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    s0, s2 = sigma0.as_table(), sigma2.as_table()
    if s0.norm() > 1 or s2.norm() > 1:
        raise PreconditionError("seminorms must have norm at most 1")
    elems = G.elements()
    eps = delta / 5
    V = frozenset(g for g in elems if max(s0(g), s2(g)) <= eps)

    if delta >= s2.norm():
        F = {G.identity}
    else:
        target = {h for h in elems if s0(h) < 1}
        F = {G.identity}
        covered = product_set(G, V, V)
        uncovered = target - covered
        while uncovered:
            best, best_gain = None, set()
            for f in elems:
                gain = product_set(G, product_set(G, V, [f]), V) & uncovered
                if len(gain) > len(best_gain):
                    best, best_gain = f, gain
            F.update((best, G._inv(best)))
            for f in (best, G._inv(best)):
                uncovered -= product_set(G, product_set(G, V, [f]), V)
    Fset = SymmetricFiniteSet.of(G, F)
    Phi = phi_pairs(s2, s0, Fset, eps, elems)
    verified = all(Phi(h) <= s0(h) + delta for h in elems)
    return FubiniWitness(Fset, eps, verified, V)


# -- Lipschitz correction -------------------------------------------------


@dataclass(frozen=True)
class FiniteMetricSpace:
    rho: tuple

    def __post_init__(self):
        rho = tuple(tuple(rational(x) for x in row) for row in self.rho)
        k = len(rho)
        if any(len(row) != k for row in rho):
            raise InvalidInput("rho must be a square matrix")
        for i in range(k):
            if rho[i][i] != 0:
                raise InvalidInput(f"rho[{i}][{i}] is not 0")
            for j in range(k):
                if rho[i][j] < 0 or rho[i][j] != rho[j][i]:
                    raise InvalidInput(f"rho is not a symmetric nonnegative matrix at ({i}, {j})")
                for m in range(k):
                    if rho[i][m] > rho[i][j] + rho[j][m]:
                        raise InvalidInput(f"triangle inequality fails at ({i}, {j}, {m})")
        object.__setattr__(self, "rho", rho)

    def __len__(self):
        return len(self.rho)


def lipschitz_correct(space: FiniteMetricSpace, f: Iterable, delta) -> list[Fraction]:
    """A rho-Lipschitz ``f'`` with ``max |f' - f| <= delta/2``.

    Each point starts with the interval ``[f(x) - delta/2, f(x) + delta/2]``;
    lower endpoints are pushed up until ``a(x) >= a(y) - rho(x, y)`` for all
    pairs, and the lower endpoints are returned.
    """
    f = [rational(v) for v in f]
    delta = rational(delta)
    rho = space.rho
    k = len(rho)
    if len(f) != k:
        raise InvalidInput(f"f has {len(f)} values for a space of {k} points")
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    for x in range(k):
        for y in range(x + 1, k):
            if abs(f[x] - f[y]) > rho[x][y] + delta:
                raise PreconditionError(
                    f"|f({x}) - f({y})| exceeds rho({x}, {y}) + delta", witness=(x, y)
                )
    half = delta / 2
    # rho satisfies the triangle inequality, so one pass reaches the fixpoint
    return [max(f[y] - half - rho[x][y] for y in range(k)) for x in range(k)]
