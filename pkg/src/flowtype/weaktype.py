"""Weak types of discrete-group flows.

Given a finite symmetric ``F`` and a finite family of nonempty sets
``A_0, ..., A_{n-1}`` in a flow ``X``, the full structure on the family has

* ``E_g(k, l)`` whenever ``g·A_k ∩ A_l`` is empty (``g`` in ``F``), and
* ``C(S)`` whenever ``{A_m : m in S}`` covers ``X``.

A structure ``M`` is *realized* by ``X`` if some family of ``M.n`` distinct
nonempty sets carries every relation of ``M`` (extra relations allowed).  The
weak type is the set of realized structures.  It is closed under deleting
relations and under passing to induced substructures, so a
:class:`WeakType` stores a generating set (the maximal members whenever
canonical forms are available); membership is an injective-homomorphism
search.

Subshift families are searched among clopen sets determined by the window
``[-w, w]``.  Finite flows use all subsets and are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GuardExceeded, InvalidInput, PreconditionError
from .flowspace import (
    ClopenSet,
    FiniteFlow,
    ZSubshift,
    boolean,
    is_cover,
    is_empty,
    sets_equal,
    translate,
)
from .group import Group, SymmetricFiniteSet
from .search import Solver

MAX_CANONICAL = 6
# window models with at most this many cells are searched set by set
SMALL_MODEL_CELLS = 10
FAMILY_LIMIT = 200_000
CANDIDATE_BITS = 20
CLOSURE_LIMIT = 200_000


# -- structures ------------------------------------------------------------


@dataclass(frozen=True)
class LStructure:
    n: int
    F: tuple
    E: frozenset = frozenset()
    C: frozenset = frozenset()
    group: Group = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("structures need at least one vertex")
        Fset = set(self.F)
        for g, k, l in self.E:
            if g not in Fset:
                raise InvalidInput(f"E uses {g!r}, which is not in F")
            if not (0 <= k < self.n and 0 <= l < self.n):
                raise InvalidInput(f"E triple {(g, k, l)} is out of range")
        C = frozenset(frozenset(S) for S in self.C)
        for S in C:
            if not S or any(not 0 <= v < self.n for v in S):
                raise InvalidInput(f"bad C set {sorted(S)}")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "E", frozenset(self.E))

    @property
    def size(self) -> int:
        return len(self.E) + len(self.C)

    def relabel(self, perm: Sequence[int]) -> "LStructure":
        """Vertex ``k`` becomes ``perm[k]``."""
        return LStructure(
            self.n,
            self.F,
            frozenset((g, perm[k], perm[l]) for g, k, l in self.E),
            frozenset(frozenset(perm[v] for v in S) for S in self.C),
            self.group,
        )

    def induced(self, vertices: Sequence[int]) -> "LStructure":
        """Restriction to ``vertices``, renumbered in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        return LStructure(
            len(vertices),
            self.F,
            frozenset((g, pos[k], pos[l]) for g, k, l in self.E if k in pos and l in pos),
            frozenset(frozenset(pos[v] for v in S) for S in self.C if S <= pos.keys()),
            self.group,
        )

    def without(self, relation) -> "LStructure":
        if isinstance(relation, frozenset):
            return LStructure(self.n, self.F, self.E, self.C - {relation}, self.group)
        return LStructure(self.n, self.F, self.E - {relation}, self.C, self.group)

    def key(self) -> tuple:
        fidx = {g: i for i, g in enumerate(self.F)}
        return (
            self.n,
            tuple(sorted((fidx[g], k, l) for g, k, l in self.E)),
            tuple(sorted(tuple(sorted(S)) for S in self.C)),
        )

    def to_json(self) -> dict:
        G = self.group
        fidx = {g: i for i, g in enumerate(self.F)}
        return {
            "n": self.n,
            "F": [G.format(g) for g in self.F],
            "E": [[G.format(g), k, l] for g, k, l in sorted(self.E, key=lambda t: (fidx[t[0]], t[1], t[2]))],
            "C": sorted(sorted(S) for S in self.C),
        }

    @classmethod
    def from_json(cls, group: Group, obj) -> "LStructure":
        try:
            F = sort_elements(group, [group.parse(g) for g in obj["F"]])
            E = frozenset((group.parse(g), int(k), int(l)) for g, k, l in obj.get("E", []))
            C = frozenset(frozenset(int(v) for v in S) for S in obj.get("C", []))
            return cls(int(obj["n"]), F, E, C, group)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"bad structure JSON: {exc}") from exc


def sort_elements(group: Group, elems: Iterable) -> tuple:
    return tuple(sorted(set(elems), key=group.sort_key))


def language(F: SymmetricFiniteSet | Iterable, group: Group | None = None) -> tuple:
    if isinstance(F, SymmetricFiniteSet):
        return tuple(F.sorted())
    if group is None:
        raise InvalidInput("need a group to order F")
    return sort_elements(group, F)


# -- bitmask encoding ------------------------------------------------------


class _Codec:
    """Relations of ``n``-vertex structures as bits of an int."""

    def __init__(self, n: int, nf: int):
        self.n = n
        self.nf = nf
        self.cbase = nf * n * n
        self.nbits = self.cbase + (1 << n) - 1
        self._perm_maps = None

    def e_bit(self, fi: int, k: int, l: int) -> int:
        return (fi * self.n + k) * self.n + l

    def c_bit(self, S: int) -> int:
        return self.cbase + S - 1

    def decode_bit(self, b: int):
        if b < self.cbase:
            fi, rest = divmod(b, self.n * self.n)
            k, l = divmod(rest, self.n)
            return ("E", fi, k, l)
        return ("C", b - self.cbase + 1)

    def encode(self, M: LStructure) -> int:
        fidx = {g: i for i, g in enumerate(M.F)}
        mask = 0
        for g, k, l in M.E:
            mask |= 1 << self.e_bit(fidx[g], k, l)
        for S in M.C:
            mask |= 1 << self.c_bit(sum(1 << v for v in S))
        return mask

    def decode(self, mask: int, F: tuple, group: Group) -> LStructure:
        E, C = set(), set()
        for b in _bits(mask):
            d = self.decode_bit(b)
            if d[0] == "E":
                E.add((F[d[1]], d[2], d[3]))
            else:
                C.add(frozenset(v for v in range(self.n) if d[1] >> v & 1))
        return LStructure(self.n, F, frozenset(E), frozenset(C), group)

    @property
    def perm_maps(self) -> list[list[int]]:
        if self._perm_maps is None:
            if self.n > MAX_CANONICAL:
                raise GuardExceeded(f"canonical forms need at most {MAX_CANONICAL} vertices")
            maps = []
            for p in itertools.permutations(range(self.n)):
                m = [0] * self.nbits
                for b in range(self.nbits):
                    d = self.decode_bit(b)
                    if d[0] == "E":
                        m[b] = self.e_bit(d[1], p[d[2]], p[d[3]])
                    else:
                        S = sum(1 << p[v] for v in range(self.n) if d[1] >> v & 1)
                        m[b] = self.c_bit(S)
                maps.append(m)
            self._perm_maps = maps
        return self._perm_maps

    def variants(self, mask: int) -> list[int]:
        bits = list(_bits(mask))
        return [sum(1 << m[b] for b in bits) for m in self.perm_maps]

    def canonical(self, mask: int) -> int:
        bits = list(_bits(mask))
        best_key, best = None, mask
        for m in self.perm_maps:
            key = sorted(m[b] for b in bits)
            if best_key is None or key < best_key:
                best_key = key
                best = sum(1 << b for b in key)
        return best


@lru_cache(maxsize=None)
def _codec(n: int, nf: int) -> _Codec:
    return _Codec(n, nf)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonicalize(M: LStructure) -> LStructure:
    """The lexicographically least relabeling of ``M``."""
    if M.n > MAX_CANONICAL:
        raise GuardExceeded(f"canonicalize supports at most {MAX_CANONICAL} vertices, got {M.n}")
    codec = _codec(M.n, len(M.F))
    return codec.decode(codec.canonical(codec.encode(M)), M.F, M.group)


def embeds(M: LStructure, T: LStructure) -> list[int] | None:
    """An injective map of vertices sending every relation of ``M`` to one of ``T``."""
    if M.F != T.F:
        raise InvalidInput("structures over different languages")
    if M.n > T.n:
        return None
    fidx = {g: i for i, g in enumerate(M.F)}
    tE = {(fidx[g], k, l) for g, k, l in T.E}
    tC = {sum(1 << v for v in S) for S in T.C}
    need_e = [[] for _ in range(M.n)]
    for g, k, l in M.E:
        need_e[max(k, l)].append((fidx[g], k, l))
    need_c = [[] for _ in range(M.n)]
    for S in M.C:
        need_c[max(S)].append(sorted(S))
    loops = [{fi for fi, k, l in need_e[v] if k == l == v} for v in range(M.n)]
    assign = [-1] * M.n
    used = [False] * T.n

    def ok(v: int) -> bool:
        for fi, k, l in need_e[v]:
            if (fi, assign[k], assign[l]) not in tE:
                return False
        for S in need_c[v]:
            if sum(1 << assign[u] for u in S) not in tC:
                return False
        return True

    def go(v: int) -> bool:
        if v == M.n:
            return True
        for t in range(T.n):
            if used[t] or any((fi, t, t) not in tE for fi in loops[v]):
                continue
            assign[v] = t
            used[t] = True
            if ok(v) and go(v + 1):
                return True
            used[t] = False
        assign[v] = -1
        return False

    return list(assign) if go(0) else None


# -- cell models -----------------------------------------------------------


class CellModel:
    """A flow cut into finitely many cells; candidate sets are unions of cells.

    ``image(fi, A)`` over-approximates ``F[fi]·A`` by cells so that
    ``F[fi]·A ∩ B`` is empty exactly when ``image(fi, A) & B == 0``.
    """

    def __init__(self, X, F: tuple, w: int = 0):
        self.X = X
        self.F = F
        self.w = w
        if isinstance(X, FiniteFlow):
            self.labels = list(range(X.size))
            self.targets = [[1 << X.act(g, c) for c in range(X.size)] for g in F]
        else:
            if w < 0:
                raise InvalidInput("window radius must be nonnegative")
            if X.is_empty_shift:
                raise PreconditionError("empty subshift")
            width = 2 * w + 1
            self.labels = X.language(width)
            idx = {u: i for i, u in enumerate(self.labels)}
            self.targets = []
            for g in F:
                s = g[0] if isinstance(g, tuple) else g
                tg = [0] * len(self.labels)
                for v in X.language(width + abs(s)):
                    if s >= 0:
                        uk, ul = v[s : s + width], v[:width]
                    else:
                        uk, ul = v[:width], v[-s : -s + width]
                    tg[idx[uk]] |= 1 << idx[ul]
                self.targets.append(tg)
        self.ncells = len(self.labels)
        self.full = (1 << self.ncells) - 1
        self._images: list[dict] = [{} for _ in F]

    @property
    def nsets(self) -> int:
        return self.full

    def image(self, fi: int, A: int) -> int:
        cache = self._images[fi]
        out = cache.get(A)
        if out is None:
            out = 0
            tg = self.targets[fi]
            for b in _bits(A):
                out |= tg[b]
            cache[A] = out
        return out

    def structure_mask(self, masks: Sequence[int], codec: _Codec) -> int:
        n = len(masks)
        out = 0
        for fi in range(len(self.F)):
            for k in range(n):
                img = self.image(fi, masks[k])
                for l in range(n):
                    if not img & masks[l]:
                        out |= 1 << codec.e_bit(fi, k, l)
        unions = [0] * (1 << n)
        for S in range(1, 1 << n):
            low = (S & -S).bit_length() - 1
            unions[S] = unions[S & (S - 1)] | masks[low]
            if unions[S] == self.full:
                out |= 1 << codec.c_bit(S)
        return out

    def to_set(self, mask: int):
        if isinstance(self.X, FiniteFlow):
            return frozenset(c for c in range(self.ncells) if mask >> c & 1)
        words = frozenset(self.labels[c] for c in range(self.ncells) if mask >> c & 1)
        return ClopenSet(-self.w, self.w, words, self.X.alphabet)

    def realize(self, M: LStructure) -> list[int] | None:
        if M.n > self.nsets:
            return None
        if self.ncells <= SMALL_MODEL_CELLS:
            return self._realize_small(M)
        return self._realize_sat(M)

    def _constraints(self, M: LStructure):
        fidx = {g: i for i, g in enumerate(self.F)}
        if tuple(M.F) != tuple(self.F):
            raise InvalidInput("structure language differs from the search language")
        E = sorted((fidx[g], k, l) for g, k, l in M.E)
        C = sorted(sorted(S) for S in M.C)
        return E, C

    def _realize_small(self, M: LStructure) -> list[int] | None:
        E, C = self._constraints(M)
        n = M.n
        need_e = [[] for _ in range(n)]
        for fi, k, l in E:
            need_e[max(k, l)].append((fi, k, l))
        need_c = [[] for _ in range(n)]
        for S in C:
            need_c[max(S)].append(S)
        assign = [0] * n
        used = set()
        full = self.full

        def ok(v: int) -> bool:
            for fi, k, l in need_e[v]:
                if self.image(fi, assign[k]) & assign[l]:
                    return False
            for S in need_c[v]:
                u = 0
                for x in S:
                    u |= assign[x]
                if u != full:
                    return False
            return True

        def go(v: int) -> bool:
            if v == n:
                return True
            for m in range(1, full + 1):
                if m in used:
                    continue
                assign[v] = m
                if ok(v):
                    used.add(m)
                    if go(v + 1):
                        return True
                    used.discard(m)
            return False

        return list(assign) if go(0) else None

    def _realize_sat(self, M: LStructure) -> list[int] | None:
        E, C = self._constraints(M)
        n, m = M.n, self.ncells

        def x(v, c):
            return v * m + c + 1

        clauses = [[x(v, c) for c in range(m)] for v in range(n)]
        for fi, k, l in E:
            tg = self.targets[fi]
            for c1 in range(m):
                for c2 in _bits(tg[c1]):
                    clauses.append([-x(k, c1), -x(l, c2)])
        for S in C:
            for c in range(m):
                clauses.append([x(v, c) for v in S])
        nvars = n * m
        for k, l in itertools.combinations(range(n), 2):
            ds = []
            for c in range(m):
                nvars += 1
                d = nvars
                ds.append(d)
                clauses.append([-d, x(k, c), x(l, c)])
                clauses.append([-d, -x(k, c), -x(l, c)])
            clauses.append(ds)
        sol = Solver(nvars, clauses).solve()
        if sol is None:
            return None
        return [sum(1 << c for c in range(m) if sol[x(v, c) - 1]) for v in range(n)]


# -- full structures and realization --------------------------------------


def full_structure(X, family: Sequence, F) -> LStructure:
    """The full structure on an ordered family of distinct nonempty sets."""
    group = X.group
    Ft = language(F, group)
    family = list(family)
    if not family:
        raise InvalidInput("family must be nonempty")
    for i, A in enumerate(family):
        if is_empty(X, A):
            raise PreconditionError(f"family member {i} is empty in X")
    for i, j in itertools.combinations(range(len(family)), 2):
        if sets_equal(X, family[i], family[j]):
            raise PreconditionError(f"family members {i} and {j} are the same set")
    E = set()
    for g in Ft:
        for k, A in enumerate(family):
            gA = X.translate(A, g) if isinstance(X, FiniteFlow) else translate(A, g)
            for l, B in enumerate(family):
                if isinstance(X, FiniteFlow):
                    meet = gA & X.subset(B)
                else:
                    meet = boolean("intersect", gA, B)
                if is_empty(X, meet):
                    E.add((g, k, l))
    C = set()
    for r in range(1, len(family) + 1):
        for S in itertools.combinations(range(len(family)), r):
            if is_cover(X, [family[i] for i in S]):
                C.add(frozenset(S))
    return LStructure(len(family), Ft, frozenset(E), frozenset(C), group)


def contains_relations(big: LStructure, small: LStructure) -> bool:
    return small.n == big.n and small.E <= big.E and small.C <= big.C


def realizes(X, M: LStructure, w: int = 0) -> list | None:
    """A family realizing ``M`` in ``X`` at window ``w``, or ``None``.

    ``None`` means no realization among window-``w`` clopen sets; for a
    subshift a larger window may still succeed.  Finite flows ignore ``w``.
    """
    model = CellModel(X, M.F, w)
    masks = model.realize(M)
    if masks is None:
        return None
    family = [model.to_set(mk) for mk in masks]
    got = full_structure(X, family, M.F)
    if not contains_relations(got, M):
        raise RuntimeError("realization witness failed re-validation")
    return family


# -- weak types ------------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    n: int
    w: int = 0

    def __post_init__(self):
        if self.n < 1 or self.w < 0:
            raise InvalidInput("resolution needs n >= 1 and w >= 0")

    def to_json(self) -> dict:
        return {"n": self.n, "w": self.w}


@dataclass(frozen=True, eq=False)
class WeakType:
    """Realized structures on at most ``resolution.n`` vertices.

    The type is the set of structures embedding into some member of
    ``generators``.  Generators on at most six vertices are reduced to the
    maximal ones; larger ones are only deduplicated, since comparing them up
    to isomorphism costs more than it saves.
    """

    F: tuple
    resolution: Resolution
    generators: tuple
    group: Group = field(repr=False, default=None)
    flow_id: str = ""
    exact: bool = False

    def __contains__(self, M: LStructure) -> bool:
        return M.n <= self.resolution.n and any(embeds(M, T) is not None for T in self.generators)

    def issubset(self, other: "WeakType") -> bool:
        """Semantic containment; the vertex bounds may differ."""
        if self.F != other.F:
            raise PreconditionError("weak types over different languages")
        return all(T in other for T in self.generators)

    def first_missing(self, other: "WeakType") -> LStructure | None:
        for T in self.generators:
            if T not in other:
                return T
        return None

    def __le__(self, other: "WeakType") -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeakType):
            return NotImplemented
        return (
            self.F == other.F
            and self.resolution.n == other.resolution.n
            and self.issubset(other)
            and other.issubset(self)
        )

    def __hash__(self):
        return hash((self.F, self.resolution.n))

    def structures(self) -> frozenset:
        """Every member, as canonical structures."""
        out = set()
        budget = CLOSURE_LIMIT
        for T in self.generators:
            for r in range(1, T.n + 1):
                for verts in itertools.combinations(range(T.n), r):
                    sub = T.induced(verts)
                    codec = _codec(r, len(self.F))
                    mask = codec.encode(sub)
                    budget -= 1 << bin(mask).count("1")
                    if budget < 0:
                        raise GuardExceeded("weak type is too large to list explicitly")
                    for sm in _submasks(mask):
                        out.add(codec.canonical(sm) | (r << codec.nbits))
        result = set()
        for key in out:
            r = 1
            while True:
                codec = _codec(r, len(self.F))
                if key >> codec.nbits == r:
                    break
                r += 1
            result.add(codec.decode(key & ((1 << codec.nbits) - 1), self.F, self.group))
        return frozenset(result)

    def to_json(self, with_structures: bool = True) -> dict:
        G = self.group
        out = {
            "flow": self.flow_id,
            "group": G.to_json(),
            "F": [G.format(g) for g in self.F],
            "resolution": self.resolution.to_json(),
            "exact": self.exact,
            "generators": [M.to_json() for M in sorted(self.generators, key=LStructure.key)],
        }
        if with_structures:
            try:
                out["structures"] = [M.to_json() for M in sorted(self.structures(), key=LStructure.key)]
            except GuardExceeded:
                out["structures"] = None
        return out

    @classmethod
    def from_json(cls, obj) -> "WeakType":
        try:
            G = Group.from_json(obj["group"])
            F = sort_elements(G, [G.parse(g) for g in obj["F"]])
            res = Resolution(int(obj["resolution"]["n"]), int(obj["resolution"].get("w", 0)))
            gens = tuple(LStructure.from_json(G, m) for m in obj["generators"])
            return cls(F, res, gens, G, obj.get("flow", ""), bool(obj.get("exact", False)))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad weak type JSON: {exc}") from exc


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def maximal_only(structs: Iterable[LStructure]) -> tuple:
    """Drop every structure that embeds into another one."""
    items = sorted(set(structs), key=lambda M: (-M.n, -M.size, M.key()))
    kept: list[LStructure] = []
    for M in items:
        if not any(embeds(M, T) is not None for T in kept):
            kept.append(M)
    return tuple(sorted(kept, key=LStructure.key))


def flow_name(X) -> str:
    if isinstance(X, FiniteFlow):
        return repr(X)
    return f"sft(alphabet={X.alphabet}, forbidden={sorted(X.forbidden)})"


def enumerate_type(
    X,
    F,
    n: int,
    w: int = 0,
    *,
    force: bool = False,
    max_subshift_vertices: int = 3,
) -> WeakType:
    """The weak type of ``X`` over ``F`` on at most ``n`` vertices at window ``w``."""
    group = X.group
    Ft = language(F, group)
    res = Resolution(n, w)
    if isinstance(X, ZSubshift) and n > max_subshift_vertices and not force:
        raise GuardExceeded(
            f"subshift types are limited to {max_subshift_vertices} vertices (use force to override)"
        )
    model = CellModel(X, Ft, w)
    k = min(n, model.nsets)
    if math.comb(model.nsets, k) <= FAMILY_LIMIT:
        gens = _maximal_by_families(model, k, group)
    else:
        codec = _codec(k, len(Ft))
        if codec.nbits > CANDIDATE_BITS and not force:
            raise GuardExceeded(
                f"{math.comb(model.nsets, k)} families and {codec.nbits} relation bits exceed the search guard"
            )
        gens = _maximal_by_candidates(model, k, group)
    return WeakType(Ft, res, gens, group, flow_name(X), isinstance(X, FiniteFlow))


def _maximal_by_families(model: CellModel, k: int, group: Group) -> tuple:
    Ft = model.F
    codec = _codec(k, len(Ft))
    seen = set()
    for fam in itertools.combinations(range(1, model.nsets + 1), k):
        mask = model.structure_mask(fam, codec)
        if k <= MAX_CANONICAL:
            mask = codec.canonical(mask)
        seen.add(mask)
    if k <= MAX_CANONICAL:
        return _maximal_masks(seen, codec, Ft, group)
    return tuple(sorted((codec.decode(m, Ft, group) for m in seen), key=LStructure.key))


def _maximal_masks(masks: Iterable[int], codec: _Codec, Ft: tuple, group: Group) -> tuple:
    order = sorted(set(masks), key=lambda m: (-bin(m).count("1"), m))
    kept: list[int] = []
    kept_variants: list[int] = []
    for m in order:
        if any(m & ~v == 0 for v in kept_variants):
            continue
        kept.append(m)
        kept_variants.extend(codec.variants(m))
    return tuple(sorted((codec.decode(m, Ft, group) for m in kept), key=LStructure.key))


def _maximal_by_candidates(model: CellModel, k: int, group: Group) -> tuple:
    """Level-wise search over canonical candidate structures.

    Realized sets are closed downward, so a candidate is only tried when each
    of its one-smaller substructures is realized.  A solver call that succeeds
    yields the full structure of its witness, which covers many later
    candidates at no cost.
    """
    Ft = model.F
    codec = _codec(k, len(Ft))
    empty = LStructure(k, Ft, group=group)
    if model.realize(empty) is None:
        return ()
    witnesses: list[int] = []
    witness_variants: list[int] = []

    def record(masks):
        full = codec.canonical(model.structure_mask(masks, codec))
        witnesses.append(full)
        witness_variants.extend(codec.variants(full))

    record(model.realize(empty))
    realized = {0}
    level = [0]
    while level:
        nxt = []
        tried = set()
        for base in level:
            for b in range(codec.nbits):
                if base >> b & 1:
                    continue
                cand = codec.canonical(base | 1 << b)
                if cand in tried:
                    continue
                tried.add(cand)
                if any(codec.canonical(cand & ~(1 << c)) not in realized for c in _bits(cand)):
                    continue
                if not any(cand & ~v == 0 for v in witness_variants):
                    masks = model.realize(codec.decode(cand, Ft, group))
                    if masks is None:
                        continue
                    record(masks)
                realized.add(cand)
                nxt.append(cand)
        level = nxt
    return _maximal_masks(witnesses, codec, Ft, group)


# -- containment and meets -------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str  # Contained | NotContainedCertified | NotContainedAtResolution
    resolution: dict
    structure: LStructure | None = None

    @property
    def contained(self) -> bool:
        return self.kind == "Contained"

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "resolution": self.resolution,
            "structure": None if self.structure is None else self.structure.to_json(),
        }


def check_containment(X, Y, F, n: int, wX: int = 0, wY: int = 0, *, force: bool = False) -> Verdict:
    """Is every structure of ``X``'s type at (n, wX) realized in ``Y`` at wY?"""
    if X.group != Y.group:
        raise InvalidInput("flows act by different groups")
    tX = enumerate_type(X, F, n, wX, force=force)
    res = {"n": n, "wX": wX, "wY": wY}
    for M in tX.generators:
        if realizes(Y, M, wY) is None:
            kind = "NotContainedCertified" if isinstance(Y, FiniteFlow) else "NotContainedAtResolution"
            return Verdict(kind, res, M)
    return Verdict("Contained", res)


def meet_pair(A: LStructure, B: LStructure) -> list[LStructure]:
    """Maximal structures embedding into both ``A`` and ``B``."""
    if A.n > B.n:
        A, B = B, A
    out = []
    for verts in itertools.permutations(range(B.n), A.n):
        pulled = B.induced(list(verts))
        out.append(LStructure(A.n, A.F, A.E & pulled.E, A.C & pulled.C, A.group))
    return out


def type_meet(types: Sequence[WeakType]) -> WeakType:
    """Structures realized by every flow in the list."""
    if not types:
        raise InvalidInput("type_meet needs at least one type")
    first = types[0]
    for t in types[1:]:
        if t.F != first.F or t.resolution != first.resolution:
            raise PreconditionError("weak types must share F and resolution")
    current = list(first.generators)
    for t in types[1:]:
        nxt = []
        for A in current:
            for B in t.generators:
                nxt.extend(meet_pair(A, B))
        current = list(maximal_only(nxt)) if first.resolution.n <= MAX_CANONICAL else sorted(set(nxt), key=LStructure.key)
    names = "∧".join(t.flow_id for t in types)
    return WeakType(
        first.F,
        first.resolution,
        tuple(current),
        first.group,
        names,
        all(t.exact for t in types),
    )
