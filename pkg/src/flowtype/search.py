"""A small DPLL satisfiability search with unit propagation.

Literals are nonzero ints: ``v + 1`` for variable ``v`` true, ``-(v + 1)``
for false.  Decisions follow variable index order and try ``False`` first,
so the first model found is deterministic.
"""

from __future__ import annotations

import sys
from typing import Sequence


class Solver:
    def __init__(self, nvars: int, clauses: Sequence[Sequence[int]]):
        self.nvars = nvars
        self.clauses = [tuple(sorted(set(c))) for c in clauses]
        self.occurs: list[list[int]] = [[] for _ in range(2 * nvars)]
        for i, c in enumerate(self.clauses):
            for lit in c:
                self.occurs[self._slot(-lit)].append(i)
        self.value: list[int] = [0] * nvars  # 0 unassigned, 1 true, -1 false
        self.trail: list[int] = []

    @staticmethod
    def _slot(lit: int) -> int:
        # clauses watched by the literal that would falsify their member
        return 2 * (abs(lit) - 1) + (lit < 0)

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit) - 1]
        return v if lit > 0 else -v

    def _assign(self, lit: int) -> None:
        self.value[abs(lit) - 1] = 1 if lit > 0 else -1
        self.trail.append(lit)

    def _propagate(self, queue: list[int]) -> bool:
        while queue:
            lit = queue.pop()
            for ci in self.occurs[self._slot(lit)]:
                unassigned = None
                count = 0
                sat = False
                for l2 in self.clauses[ci]:
                    val = self._lit_value(l2)
                    if val == 1:
                        sat = True
                        break
                    if val == 0:
                        count += 1
                        unassigned = l2
                        if count > 1:
                            break
                if sat or count > 1:
                    continue
                if count == 0:
                    return False
                self._assign(unassigned)
                queue.append(unassigned)
        return True

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            lit = self.trail.pop()
            self.value[abs(lit) - 1] = 0

    def solve(self) -> list[bool] | None:
        for c in self.clauses:
            if not c:
                return None
        queue = []
        for c in self.clauses:
            if len(c) == 1 and self._lit_value(c[0]) == 0:
                self._assign(c[0])
                queue.append(c[0])
            elif len(c) == 1 and self._lit_value(c[0]) == -1:
                return None
        if not self._propagate(queue):
            return None
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * self.nvars + 100))
        try:
            ok = self._search(0)
        finally:
            sys.setrecursionlimit(limit)
        if not ok:
            return None
        return [v == 1 for v in self.value]

    def _search(self, start: int) -> bool:
        v = start
        while v < self.nvars and self.value[v] != 0:
            v += 1
        if v >= self.nvars:
            return True
        for lit in (-(v + 1), v + 1):
            mark = len(self.trail)
            self._assign(lit)
            if self._propagate([lit]) and self._search(v + 1):
                return True
            self._undo(mark)
        return False
