"""Concrete G-flows: Z-subshifts of finite type and finite flows.

Shift convention: ``(n·x)(k) = x(k - n)``, so translating the cylinder
``[w@k]`` by ``n`` gives ``[w@(k+n)]``.  This makes ``n·(m·x) = (n+m)·x`` a
left action.

Subsets of a subshift are clopen window predicates (:class:`ClopenSet`);
subsets of a finite flow are ``frozenset``s of points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput, PreconditionError
from .group import Group, SymmetricFiniteSet, cyclic_table
from .seminorm import Seminorm, rational

SYMBOLS = "0123456789"


# -- subshifts of finite type ----------------------------------------------


class ZSubshift:
    """Bi-infinite sequences over ``0..alphabet-1`` avoiding ``forbidden``.

    Words are strings of digits.  The presentation is the graph on legal
    words of length ``m - 1`` (``m`` the block length), trimmed to its
    essential part: the vertices lying on bi-infinite paths.
    """

    group = Group.lattice(1)

    def __init__(self, alphabet: int, forbidden: Iterable[str] = ()):
        if not 1 <= alphabet <= len(SYMBOLS):
            raise InvalidInput(f"alphabet size must be in 1..{len(SYMBOLS)}")
        forbidden = frozenset(forbidden)
        for w in forbidden:
            _check_word(w, alphabet)
            if not w:
                raise InvalidInput("the empty word cannot be forbidden")
        self.alphabet = alphabet
        self.forbidden = forbidden
        self.symbols = SYMBOLS[:alphabet]
        self.block = max([2] + [len(w) for w in forbidden])
        k = self.block - 1
        verts = [w for w in _words(self.symbols, k) if self.is_legal(w)]
        succ = {v: [] for v in verts}
        pred = {v: [] for v in verts}
        for v in verts:
            for a in self.symbols:
                w = v + a
                if self.is_legal(w):
                    succ[v].append(w[1:])
                    pred[w[1:]].append(v)
        alive = set(verts)
        changed = True
        while changed:
            changed = False
            for v in sorted(alive):
                if not any(u in alive for u in pred[v]) or not any(u in alive for u in succ[v]):
                    alive.discard(v)
                    changed = True
        self.vertices = sorted(alive)
        self.succ = {v: sorted(u for u in succ[v] if u in alive) for v in self.vertices}
        self.pred = {v: sorted(u for u in pred[v] if u in alive) for v in self.vertices}
        self._language: dict[int, list[str]] = {}

    def __repr__(self):
        return f"ZSubshift(alphabet={self.alphabet}, forbidden={sorted(self.forbidden)})"

    def __eq__(self, other):
        return (
            isinstance(other, ZSubshift)
            and self.alphabet == other.alphabet
            and self.forbidden == other.forbidden
        )

    def __hash__(self):
        return hash((self.alphabet, self.forbidden))

    @classmethod
    def from_json(cls, obj) -> "ZSubshift":
        try:
            return cls(int(obj["alphabet"]), obj.get("forbidden", []))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad subshift JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"kind": "sft", "alphabet": self.alphabet, "forbidden": sorted(self.forbidden)}

    @property
    def is_empty_shift(self) -> bool:
        return not self.vertices

    def is_legal(self, word: str) -> bool:
        return not any(f in word for f in self.forbidden)

    def in_language(self, word: str) -> bool:
        """Does ``word`` occur in some point of the subshift?"""
        k = self.block - 1
        if len(word) < k:
            return any(v.startswith(word) for v in self.vertices)
        if not self.is_legal(word):
            return False
        return word[:k] in self.succ and word[-k:] in self.succ

    def language(self, length: int) -> list[str]:
        """All words of the given length occurring in the subshift, sorted."""
        if length not in self._language:
            k = self.block - 1
            if length <= k:
                words = sorted({v[:length] for v in self.vertices})
            else:
                words = list(self.vertices)
                for _ in range(length - k):
                    words = [w + u[-1] for w in words for u in self.succ[w[-k:]]]
                words.sort()
            self._language[length] = words
        return self._language[length]

    def point_through(self, word: str, lo: int) -> "PointWitness | None":
        """An eventually periodic point carrying ``word`` at coordinates ``lo..``."""
        k = self.block - 1
        if not self.in_language(word):
            return None
        if len(word) < k:
            ext = next(v for v in self.vertices if v.startswith(word))
            return self.point_through(ext, lo)
        s, t = word[:k], word[-k:]
        # walk backwards until a vertex repeats
        back = [s]
        seen = {s: 0}
        while True:
            p = self.pred[back[-1]][0]
            if p in seen:
                i = seen[p]
                break
            seen[p] = len(back)
            back.append(p)
        left = "".join(back[j][-1] for j in range(len(back) - 1, i - 1, -1))
        bridge_l = "".join(back[j][-1] for j in range(i - 1, -1, -1))
        fwd = [t]
        seen = {t: 0}
        while True:
            p = self.succ[fwd[-1]][0]
            if p in seen:
                i = seen[p]
                break
            seen[p] = len(fwd)
            fwd.append(p)
        bridge_r = "".join(fwd[j][-1] for j in range(1, i + 1))
        right = "".join(fwd[j][-1] for j in range(i + 1, len(fwd))) + fwd[i][-1]
        reps = -(-k // len(left))
        head = left * reps + bridge_l
        center = head + word[k:] + bridge_r
        start = lo - (len(head) - k)
        return PointWitness(left, center, right, start)


def _check_word(word: str, alphabet: int) -> None:
    if not isinstance(word, str) or any(ch not in SYMBOLS[:alphabet] for ch in word):
        raise InvalidInput(f"bad word {word!r} for alphabet size {alphabet}")


def _words(symbols: str, length: int) -> list[str]:
    return ["".join(t) for t in itertools.product(symbols, repeat=length)]


@dataclass(frozen=True)
class PointWitness:
    """The eventually periodic point ``...LLL center RRR...`` with
    ``center[0]`` at coordinate ``start``."""

    left_cycle: str
    center: str
    right_cycle: str
    start: int = 0

    def symbol(self, i: int) -> str:
        j = i - self.start
        if j < 0:
            return self.left_cycle[j % len(self.left_cycle)]
        if j < len(self.center):
            return self.center[j]
        return self.right_cycle[(j - len(self.center)) % len(self.right_cycle)]

    def window(self, lo: int, hi: int) -> str:
        return "".join(self.symbol(i) for i in range(lo, hi + 1))

    def is_valid(self, X: ZSubshift) -> bool:
        """No forbidden factor anywhere in the denoted point."""
        m = X.block
        reps_l = m // len(self.left_cycle) + 2
        reps_r = m // len(self.right_cycle) + 2
        text = self.left_cycle * reps_l + self.center + self.right_cycle * reps_r
        return X.is_legal(text)

    def to_json(self) -> dict:
        return {
            "left_cycle": self.left_cycle,
            "center": self.center,
            "right_cycle": self.right_cycle,
            "start": self.start,
        }


@dataclass(frozen=True)
class ClopenSet:
    """``{x : x[lo..hi] in allowed}``."""

    lo: int
    hi: int
    allowed: frozenset
    alphabet: int = 2

    def __post_init__(self):
        if self.hi < self.lo:
            raise InvalidInput("clopen window must have hi >= lo")
        allowed = frozenset(self.allowed)
        n = self.hi - self.lo + 1
        for w in allowed:
            _check_word(w, self.alphabet)
            if len(w) != n:
                raise InvalidInput(f"word {w!r} does not fit the window [{self.lo}, {self.hi}]")
        object.__setattr__(self, "allowed", allowed)

    @classmethod
    def cylinder(cls, word: str, pos: int = 0, alphabet: int = 2) -> "ClopenSet":
        return cls(pos, pos + len(word) - 1, frozenset([word]), alphabet)

    @classmethod
    def full(cls, alphabet: int = 2, lo: int = 0, hi: int = 0) -> "ClopenSet":
        return cls(lo, hi, frozenset(_words(SYMBOLS[:alphabet], hi - lo + 1)), alphabet)

    @classmethod
    def empty(cls, alphabet: int = 2) -> "ClopenSet":
        return cls(0, 0, frozenset(), alphabet)

    @classmethod
    def from_json(cls, obj, alphabet: int = 2) -> "ClopenSet":
        try:
            return cls(int(obj["lo"]), int(obj["hi"]), frozenset(obj["allowed"]), alphabet)
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad clopen JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "allowed": sorted(self.allowed)}

    def extend(self, lo: int, hi: int) -> "ClopenSet":
        """The same set described on the larger window ``[lo, hi]``."""
        if lo > self.lo or hi < self.hi:
            raise InvalidInput("extension window must contain the current window")
        syms = SYMBOLS[: self.alphabet]
        pre = _words(syms, self.lo - lo)
        post = _words(syms, hi - self.hi)
        allowed = frozenset(a + w + b for w in self.allowed for a in pre for b in post)
        return ClopenSet(lo, hi, allowed, self.alphabet)

    def contains_point(self, x: PointWitness) -> bool:
        return x.window(self.lo, self.hi) in self.allowed


def translate(C, n, X=None):
    """``n·C``.  For finite flows pass the flow as ``X`` (``C`` a point set)."""
    if isinstance(C, ClopenSet):
        n = _shift(n)
        return ClopenSet(C.lo + n, C.hi + n, C.allowed, C.alphabet)
    if X is None:
        raise InvalidInput("translating a point set needs its flow")
    return X.translate(C, n)


def _shift(n) -> int:
    if isinstance(n, tuple):
        if len(n) != 1:
            raise InvalidInput(f"{n!r} is not an element of Z")
        n = n[0]
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInput(f"{n!r} is not an element of Z")
    return n


def boolean(op: str, C1: ClopenSet, C2: ClopenSet | None = None) -> ClopenSet:
    if op == "complement":
        full = set(_words(SYMBOLS[: C1.alphabet], C1.hi - C1.lo + 1))
        return ClopenSet(C1.lo, C1.hi, frozenset(full - C1.allowed), C1.alphabet)
    if C2 is None:
        raise InvalidInput(f"{op} needs two operands")
    if C1.alphabet != C2.alphabet:
        raise InvalidInput("operands have different alphabets")
    lo, hi = min(C1.lo, C2.lo), max(C1.hi, C2.hi)
    a, b = C1.extend(lo, hi).allowed, C2.extend(lo, hi).allowed
    if op == "union":
        out = a | b
    elif op == "intersect":
        out = a & b
    elif op == "minus":
        out = a - b
    else:
        raise InvalidInput(f"unknown boolean operation {op!r}")
    return ClopenSet(lo, hi, out, C1.alphabet)


def union_all(family: Sequence[ClopenSet], alphabet: int) -> ClopenSet:
    out = ClopenSet.empty(alphabet)
    for C in family:
        out = boolean("union", out, C)
    return out


def witness_point(X: ZSubshift, C: ClopenSet) -> PointWitness | None:
    """A point of ``X`` in ``C``, or ``None`` when ``C`` misses ``X``."""
    for w in sorted(C.allowed):
        x = X.point_through(w, C.lo)
        if x is not None:
            return x
    return None


def is_empty(X, C) -> bool:
    if isinstance(X, FiniteFlow):
        return not X.subset(C)
    return witness_point(X, C) is None


def sets_equal(X, C1, C2) -> bool:
    """Semantic equality of two subsets of ``X``."""
    if isinstance(X, FiniteFlow):
        return X.subset(C1) == X.subset(C2)
    return is_empty(X, boolean("minus", C1, C2)) and is_empty(X, boolean("minus", C2, C1))


def uncovered_point(X, family):
    """A point of ``X`` outside the union of ``family``, or ``None``."""
    if isinstance(X, FiniteFlow):
        covered = set().union(*[X.subset(A) for A in family]) if family else set()
        rest = [p for p in range(X.size) if p not in covered]
        return rest[0] if rest else None
    rest = boolean("complement", union_all(family, X.alphabet))
    return witness_point(X, rest)


def is_cover(X, family) -> bool:
    return uncovered_point(X, family) is None


def r_u_disjoint(X, A, B, U: Iterable) -> bool:
    """Is ``A × B`` disjoint from the closure of ``{(x, gx) : g in U}``?"""
    if isinstance(X, FiniteFlow):
        A, B = X.subset(A), X.subset(B)
        return all(not (X.translate(A, g) & B) for g in U)
    return all(is_empty(X, boolean("intersect", translate(A, g), B)) for g in U)


def is_transitive(X) -> bool:
    """Transitivity of the action on points for finite flows; for subshifts,
    irreducibility (strong connectivity) of the essential graph.

    Irreducibility is stronger than having a dense orbit: forbidding only
    ``"10"`` leaves a reducible shift in which ``...000111...`` has a dense
    orbit.
    """
    if isinstance(X, FiniteFlow):
        if X.size == 0:
            raise PreconditionError("empty flow")
        return len(X.orbit(0)) == X.size
    if X.is_empty_shift:
        raise PreconditionError("empty subshift")
    start = X.vertices[0]
    return _reach(X.succ, start) == set(X.vertices) == _reach(X.pred, start)


def _reach(adj: dict, start) -> set:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


# -- finite flows ----------------------------------------------------------


class FiniteFlow:
    """A finite set ``0..size-1`` with a left action of a supported group.

    ``action`` maps generators (or, for finite groups, any generating set of
    elements) to permutations given as tuples ``perm[x] = g·x``.
    """

    def __init__(self, group: Group, size: int, action: dict, name: str | None = None):
        if size < 1:
            raise InvalidInput("flow must have at least one point")
        self.group = group
        self.size = size
        self.name = name
        perms = {}
        for g, p in action.items():
            group.check(g)
            p = tuple(int(v) for v in p)
            if sorted(p) != list(range(size)):
                raise InvalidInput(f"action of {group.format(g)} is not a permutation of 0..{size - 1}")
            perms[g] = p
        self._perms: dict = {}
        ident = tuple(range(size))
        if group.is_finite:
            self._close_finite(perms, ident)
        else:
            gens = group.generators()
            if set(perms) != set(gens):
                names = ", ".join(group.format(g) for g in gens)
                raise InvalidInput(f"action must be given on exactly the generators {names}")
            self._gens = {g: perms[g] for g in gens}
            self._gen_inv = {g: _perm_inverse(p) for g, p in self._gens.items()}
            if group.kind == "lattice":
                ps = list(self._gens.values())
                for p, q in itertools.combinations(ps, 2):
                    if _compose(p, q) != _compose(q, p):
                        raise InvalidInput("lattice generators must act by commuting permutations")
            self._perms[group.identity] = ident

    def _close_finite(self, perms: dict, ident: tuple) -> None:
        G = self.group
        if G.identity in perms and perms[G.identity] != ident:
            raise InvalidInput("the identity must act trivially")
        table = {G.identity: ident}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, p in perms.items():
                    y = G._mul(g, x)
                    q = _compose(p, table[x])
                    if y in table:
                        if table[y] != q:
                            raise InvalidInput("action is not a homomorphism")
                    else:
                        table[y] = q
                        nxt.append(y)
            frontier = nxt
        if len(table) != G.order:
            raise InvalidInput("action keys must generate the group")
        for a in G.elements():
            for b in G.elements():
                if table[G._mul(a, b)] != _compose(table[a], table[b]):
                    raise InvalidInput("action is not a homomorphism")
        self._perms = table

    def perm(self, g) -> tuple:
        p = self._perms.get(g)
        if p is None:
            G = self.group
            G.check(g)
            p = tuple(range(self.size))
            if G.kind == "lattice":
                for gen, k in zip(G.generators(), g):
                    q = self._gens[gen] if k >= 0 else self._gen_inv[gen]
                    for _ in range(abs(k)):
                        p = _compose(q, p)
            else:
                # word s1 s2 ... sk acts as s1(s2(...sk(x)))
                for s in reversed(g):
                    q = self._gens[(abs(s),)]
                    p = _compose(q if s > 0 else _perm_inverse(q), p)
            self._perms[g] = p
        return p

    def act(self, g, x: int) -> int:
        return self.perm(g)[x]

    def translate(self, A, g) -> frozenset:
        p = self.perm(g)
        return frozenset(p[x] for x in self.subset(A))

    def subset(self, A) -> frozenset:
        A = frozenset(A)
        if any(not isinstance(x, int) or not 0 <= x < self.size for x in A):
            raise InvalidInput(f"{sorted(A)} is not a set of points of a {self.size}-point flow")
        return A

    def action_generators(self) -> list:
        if self.group.is_finite:
            return self.group.elements()
        return self.group.generators()

    def orbit(self, x: int) -> set:
        seen = {x}
        stack = [x]
        gens = [self.perm(g) for g in self.action_generators()]
        gens += [_perm_inverse(p) for p in gens]
        while stack:
            y = stack.pop()
            for p in gens:
                if p[y] not in seen:
                    seen.add(p[y])
                    stack.append(p[y])
        return seen

    def __repr__(self):
        return self.name or f"FiniteFlow({self.group.describe()}, {self.size} points)"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFlow)
            and self.group == other.group
            and self.size == other.size
            and all(self.perm(g) == other.perm(g) for g in self.action_generators())
        )

    def __hash__(self):
        return hash((self.group, self.size, tuple(self.perm(g) for g in self.action_generators())))

    @classmethod
    def from_json(cls, obj) -> "FiniteFlow":
        try:
            group = Group.from_json(obj["group"])
            action = {group.parse(k): v for k, v in obj["action"].items()}
            return cls(group, int(obj["size"]), action, obj.get("name"))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInput(f"bad finite flow JSON: {exc}") from exc

    def to_json(self) -> dict:
        G = self.group
        gens = G.generators() if not G.is_finite else [g for g in G.elements() if g != 0]
        out = {
            "kind": "finite_flow",
            "group": G.to_json(),
            "size": self.size,
            "action": {G.format(g): list(self.perm(g)) for g in gens},
        }
        if self.name:
            out["name"] = self.name
        return out


def _compose(p: tuple, q: tuple) -> tuple:
    """``p ∘ q``."""
    return tuple(p[x] for x in q)


def _perm_inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def periodic_orbit(p: int) -> FiniteFlow:
    """``Z`` acting on ``Z/p`` by ``x -> x + 1``."""
    return FiniteFlow(
        Group.lattice(1), p, {(1,): tuple((x + 1) % p for x in range(p))}, name=f"C{p}"
    )


def point_flow(group: Group) -> FiniteFlow:
    if group.is_finite:
        return FiniteFlow(group, 1, {g: (0,) for g in group.elements()}, name="point")
    return FiniteFlow(group, 1, {g: (0,) for g in group.generators()}, name="point")


def cyclic_flows(n: int, max_points: int) -> list[FiniteFlow]:
    """All actions of ``Z/n`` on at most ``max_points`` points, up to relabeling."""
    G = Group.finite(cyclic_table(n))
    out = []
    seen = set()
    for k in range(1, max_points + 1):
        for p in itertools.permutations(range(k)):
            q = tuple(range(k))
            for _ in range(n):
                q = _compose(p, q)
            if q != tuple(range(k)):
                continue
            key = min(
                tuple(s[p[_perm_inverse(s)[x]]] for x in range(k))
                for s in itertools.permutations(range(k))
            )
            if (k, key) in seen:
                continue
            seen.add((k, key))
            out.append(FiniteFlow(G, k, {1: key}, name=f"Z{n}:{list(key)}"))
    return out


def partial_sigma(X: FiniteFlow, sigma: Seminorm, x: int, y: int) -> Fraction:
    """``min{sigma(g) : g·x = y}`` capped at 1, or 1 across orbits."""
    G = X.group
    if not G.is_finite:
        raise PreconditionError("partial_sigma needs a finite group")
    if sigma.norm() > 1:
        raise PreconditionError("seminorm must have norm at most 1")
    vals = [sigma(g) for g in G.elements() if X.act(g, x) == y]
    return min(vals + [Fraction(1)])


def flow_from_json(obj):
    if not isinstance(obj, dict):
        raise InvalidInput("flow JSON must be an object")
    kind = obj.get("kind")
    if kind == "sft":
        return ZSubshift.from_json(obj)
    if kind == "finite_flow":
        return FiniteFlow.from_json(obj)
    raise InvalidInput(f"unknown flow kind {kind!r}")


def parse_subset(X, obj):
    """A family member: a clopen JSON object for subshifts, a point list otherwise."""
    if isinstance(X, FiniteFlow):
        if not isinstance(obj, list):
            raise InvalidInput("finite-flow subsets are lists of points")
        return X.subset(obj)
    if not isinstance(obj, dict):
        raise InvalidInput("subshift subsets are clopen JSON objects")
    return ClopenSet.from_json(obj, X.alphabet)


def subset_to_json(X, A):
    if isinstance(X, FiniteFlow):
        return sorted(A)
    return A.to_json()
