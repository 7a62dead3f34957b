"""Finite, free and free-abelian groups with exact canonical forms.

Elements are plain hashable Python values:

* finite group given by a multiplication table: an ``int`` index, identity ``0``;
* free group of rank ``r``: a freely reduced ``tuple`` of nonzero ints, where
  ``+i`` is the i-th generator (1-based) and ``-i`` its inverse;
* lattice ``Z^d``: a ``tuple`` of ``d`` ints.

Words for the free group are written over ``a..z`` with ``A..Z`` as inverses,
so ``"aB"`` is ``(1, -2)``.
"""

from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidInput

FINITE = "finite"
FREE = "free"
LATTICE = "lattice"


@dataclass(frozen=True)
class Group:
    kind: str
    table: tuple[tuple[int, ...], ...] | None = None
    rank: int = 0
    d: int = 0
    _inverses: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == FINITE:
            if self.table is None:
                raise InvalidInput("finite group needs a table")
            _check_table(self.table)
            inverses = tuple(row.index(0) for row in self.table)
            object.__setattr__(self, "_inverses", inverses)
        elif self.kind == FREE:
            if not 1 <= self.rank <= 26:
                raise InvalidInput(f"free group rank must be in 1..26, got {self.rank}")
        elif self.kind == LATTICE:
            if self.d < 1:
                raise InvalidInput(f"lattice dimension must be positive, got {self.d}")
        else:
            raise InvalidInput(f"unknown group kind {self.kind!r}")

    # -- construction -----------------------------------------------------

    @classmethod
    def finite(cls, table: Iterable[Iterable[int]]) -> "Group":
        return cls(FINITE, table=tuple(tuple(int(x) for x in row) for row in table))

    @classmethod
    def free(cls, rank: int) -> "Group":
        return cls(FREE, rank=int(rank))

    @classmethod
    def lattice(cls, d: int) -> "Group":
        return cls(LATTICE, d=int(d))

    @classmethod
    def from_json(cls, obj) -> "Group":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidInput("group JSON must be an object with a 'kind' field")
        kind = obj["kind"]
        try:
            if kind == FINITE:
                return cls.finite(obj["table"])
            if kind == FREE:
                return cls.free(obj["rank"])
            if kind == LATTICE:
                return cls.lattice(obj["d"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"bad group JSON: {exc}") from exc
        raise InvalidInput(f"unknown group kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == FINITE:
            return {"kind": FINITE, "table": [list(row) for row in self.table]}
        if self.kind == FREE:
            return {"kind": FREE, "rank": self.rank}
        return {"kind": LATTICE, "d": self.d}

    # -- basic structure --------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise InvalidInput("infinite group has no finite order")
        return len(self.table)

    @property
    def identity(self):
        if self.kind == FINITE:
            return 0
        if self.kind == FREE:
            return ()
        return (0,) * self.d

    def elements(self) -> list:
        if not self.is_finite:
            raise InvalidInput("cannot list the elements of an infinite group")
        return list(range(len(self.table)))

    def generators(self) -> list:
        """A generating list (without identity or inverses)."""
        if self.kind == FINITE:
            return list(range(1, len(self.table)))
        if self.kind == FREE:
            return [(i,) for i in range(1, self.rank + 1)]
        return [tuple(1 if j == i else 0 for j in range(self.d)) for i in range(self.d)]

    def standard_generators(self) -> "SymmetricFiniteSet":
        gens = self.generators()
        return SymmetricFiniteSet.closure(self, gens)

    def is_element(self, a) -> bool:
        if self.kind == FINITE:
            return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < len(self.table)
        if self.kind == FREE:
            return (
                isinstance(a, tuple)
                and all(isinstance(x, int) and x != 0 and abs(x) <= self.rank for x in a)
                and all(a[i] != -a[i + 1] for i in range(len(a) - 1))
            )
        return isinstance(a, tuple) and len(a) == self.d and all(isinstance(x, int) for x in a)

    def check(self, a):
        if not self.is_element(a):
            raise InvalidInput(f"{a!r} is not a valid element of {self.describe()}")
        return a

    def describe(self) -> str:
        if self.kind == FINITE:
            return f"finite group of order {len(self.table)}"
        if self.kind == FREE:
            return f"free group of rank {self.rank}"
        return f"Z^{self.d}"

    # -- arithmetic -------------------------------------------------------

    def mul(self, a, b):
        self.check(a)
        self.check(b)
        return self._mul(a, b)

    def _mul(self, a, b):
        if self.kind == FINITE:
            return self.table[a][b]
        if self.kind == FREE:
            return _free_reduce(a, b)
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        self.check(a)
        return self._inv(a)

    def _inv(self, a):
        if self.kind == FINITE:
            return self._inverses[a]
        if self.kind == FREE:
            return tuple(-x for x in reversed(a))
        return tuple(-x for x in a)

    def product(self, elems: Iterable):
        out = self.identity
        for x in elems:
            out = self._mul(out, x)
        return out

    # -- text forms -------------------------------------------------------

    def parse(self, obj):
        """Parse an element from its JSON/CLI form."""
        if self.kind == FINITE:
            if isinstance(obj, str):
                try:
                    obj = int(obj)
                except ValueError:
                    raise InvalidInput(f"bad finite-group element {obj!r}") from None
            return self.check(obj)
        if self.kind == FREE:
            if isinstance(obj, (list, tuple)):
                word = tuple(int(x) for x in obj)
            elif isinstance(obj, str):
                word = _parse_word(obj, self.rank)
            else:
                raise InvalidInput(f"bad free-group element {obj!r}")
            if not self.is_element(word):
                raise InvalidInput(f"{obj!r} is not a freely reduced word of rank {self.rank}")
            return word
        if isinstance(obj, bool):
            raise InvalidInput(f"bad lattice element {obj!r}")
        if isinstance(obj, int):
            vec = (obj,)
        elif isinstance(obj, str):
            try:
                vec = tuple(int(x) for x in obj.strip("()[] ").split(","))
            except ValueError:
                raise InvalidInput(f"bad lattice element {obj!r}") from None
        elif isinstance(obj, (list, tuple)):
            vec = tuple(obj)
        else:
            raise InvalidInput(f"bad lattice element {obj!r}")
        return self.check(vec)

    def format(self, a) -> str:
        if self.kind == FINITE:
            return str(a)
        if self.kind == FREE:
            return "".join(
                string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1]
                for x in a
            )
        return ",".join(str(x) for x in a)

    def sort_key(self, a):
        if self.kind == FREE:
            return (len(a), tuple((abs(x), x < 0) for x in a))
        return a


def _free_reduce(a: tuple, b: tuple) -> tuple:
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return a[: len(a) - i] + b[i:]


def _parse_word(word: str, rank: int) -> tuple:
    out: list[int] = []
    for ch in word:
        if ch in string.ascii_lowercase:
            x = string.ascii_lowercase.index(ch) + 1
        elif ch in string.ascii_uppercase:
            x = -(string.ascii_uppercase.index(ch) + 1)
        else:
            raise InvalidInput(f"bad letter {ch!r} in word {word!r}")
        if abs(x) > rank:
            raise InvalidInput(f"letter {ch!r} exceeds rank {rank}")
        # words are reduced on input
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _check_table(table: tuple[tuple[int, ...], ...]) -> None:
    k = len(table)
    if k == 0:
        raise InvalidInput("empty group table")
    rng = set(range(k))
    for i, row in enumerate(table):
        if len(row) != k:
            raise InvalidInput(f"table row {i} has length {len(row)}, expected {k}")
        if set(row) != rng:
            raise InvalidInput(f"table row {i} is not a permutation of 0..{k - 1}")
    for i in range(k):
        if table[0][i] != i or table[i][0] != i:
            raise InvalidInput("index 0 must be the identity of the table")
    for a in range(k):
        ra = table[a]
        for b in range(k):
            rab = table[ra[b]]
            rb = table[b]
            for c in range(k):
                if rab[c] != ra[rb[c]]:
                    raise InvalidInput(f"table is not associative at ({a}, {b}, {c})")


@dataclass(frozen=True)
class SymmetricFiniteSet:
    """A finite subset of a group that contains the identity and is closed
    under inverses."""

    group: Group
    elements: frozenset

    def __post_init__(self):
        G = self.group
        for x in self.elements:
            G.check(x)
        if G.identity not in self.elements:
            raise InvalidInput("symmetric set must contain the identity")
        for x in self.elements:
            if G._inv(x) not in self.elements:
                raise InvalidInput(f"symmetric set is missing the inverse of {G.format(x)}")

    @classmethod
    def of(cls, group: Group, elems: Iterable) -> "SymmetricFiniteSet":
        return cls(group, frozenset(elems))

    @classmethod
    def closure(cls, group: Group, elems: Iterable) -> "SymmetricFiniteSet":
        """Smallest symmetric set containing ``elems`` and the identity."""
        out = {group.identity}
        for x in elems:
            group.check(x)
            out.add(x)
            out.add(group._inv(x))
        return cls(group, frozenset(out))

    def __iter__(self) -> Iterator:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def sorted(self) -> list:
        return sorted(self.elements, key=self.group.sort_key)


def mul(G: Group, a, b):
    return G.mul(a, b)


def inv(G: Group, a):
    return G.inv(a)


def ball(G: Group, gens: SymmetricFiniteSet | Iterable, radius: int) -> set:
    """All products of at most ``radius`` elements of ``gens``."""
    if radius < 0:
        raise InvalidInput("radius must be nonnegative")
    gen_list = list(gens.elements if isinstance(gens, SymmetricFiniteSet) else gens)
    for g in gen_list:
        G.check(g)
    seen = {G.identity}
    frontier = deque([G.identity])
    for _ in range(radius):
        nxt = deque()
        for x in frontier:
            for s in gen_list:
                y = G._mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return seen


def product_set(G: Group, A: Iterable, B: Iterable) -> set:
    B = list(B)
    return {G._mul(a, b) for a in A for b in B}


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def dihedral_table(n: int) -> list[list[int]]:
    """Table of the dihedral group of order 2n; index ``s*n + i`` is ``r^i s^s``."""
    def decode(x):
        return x % n, x // n

    def encode(i, s):
        return s * n + i % n

    table = []
    for x in range(2 * n):
        i, s = decode(x)
        row = []
        for y in range(2 * n):
            j, t = decode(y)
            # r^i s^s r^j s^t = r^(i + (-1)^s j) s^(s+t)
            row.append(encode(i + (j if s == 0 else -j), (s + t) % 2))
        table.append(row)
    return table
