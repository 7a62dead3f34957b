"""Independent reference computations used to derive expected test values.

Each routine takes a deliberately different route from the library: string
brute force instead of graphs, fixed-point relaxation instead of Dijkstra,
enumeration instead of search.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


# -- groups ----------------------------------------------------------------


def reduced_words(rank: int, max_len: int) -> set:
    """All freely reduced words of length <= max_len, by filtering every sequence."""
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    out = set()
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if all(w[i] != -w[i + 1] for i in range(n - 1)):
                out.add(w)
    return out


def cyclic_products(n: int, gens, radius: int) -> set:
    out = {0}
    for r in range(1, radius + 1):
        for word in itertools.product(gens, repeat=r):
            out.add(sum(word) % n)
    return out


# -- weighted word metrics -------------------------------------------------


def relaxed_distances(elements, mul, identity, costs: dict, default) -> dict:
    """Bellman-Ford style relaxation restricted to ``elements``; capped at ``default``."""
    elements = list(elements)
    eset = set(elements)
    dist = {g: Fraction(default) for g in elements}
    dist[identity] = Fraction(0)
    changed = True
    while changed:
        changed = False
        for x in elements:
            for s, c in costs.items():
                y = mul(x, s)
                if y in eset and dist[x] + c < dist[y]:
                    dist[y] = dist[x] + c
                    changed = True
    return dist


def z_distances(costs: dict, default, radius: int) -> dict:
    return relaxed_distances(range(-radius, radius + 1), lambda a, b: a + b, 0, costs, default)


def chain_costs_z(levels, costs) -> dict:
    """Cost map of a chain on Z given as integer intervals, deepest level wins."""
    out = {}
    for lv, c in zip(levels, costs):
        for u in lv:
            out[u] = Fraction(c)
    return out


# -- subshifts -------------------------------------------------------------


def legal(word: str, forbidden) -> bool:
    return not any(f in word for f in forbidden)


def extendable(word: str, alphabet: int, forbidden, pad: int) -> bool:
    """Does some legal string have ``pad`` symbols on each side of ``word``?"""
    syms = "0123456789"[:alphabet]
    for left in itertools.product(syms, repeat=pad):
        lw = "".join(left) + word
        if not legal(lw, forbidden):
            continue
        for right in itertools.product(syms, repeat=pad):
            if legal(lw + "".join(right), forbidden):
                return True
    return False


def block_length(forbidden) -> int:
    return max([2] + [len(f) for f in forbidden])


def default_pad(alphabet: int, forbidden) -> int:
    # a path longer than the vertex count repeats a vertex, hence extends forever
    return alphabet ** (block_length(forbidden) - 1) + 1


def clopen_nonempty(alphabet: int, forbidden, allowed, pad: int | None = None) -> bool:
    pad = default_pad(alphabet, forbidden) if pad is None else pad
    return any(extendable(w, alphabet, forbidden, pad) for w in allowed)


def essential_graph(alphabet: int, forbidden) -> nx.DiGraph:
    """Vertices on cycles or on paths from one cycle to another."""
    m = block_length(forbidden)
    syms = "0123456789"[:alphabet]
    D = nx.DiGraph()
    for u in itertools.product(syms, repeat=m - 1):
        u = "".join(u)
        if legal(u, forbidden):
            D.add_node(u)
    for w in itertools.product(syms, repeat=m):
        w = "".join(w)
        if legal(w, forbidden):
            D.add_edge(w[:-1], w[1:])
    cyclic = set()
    for comp in nx.strongly_connected_components(D):
        v = next(iter(comp))
        if len(comp) > 1 or D.has_edge(v, v):
            cyclic |= comp
    keep = set()
    for v in D.nodes:
        fwd = nx.descendants(D, v) | {v}
        back = nx.ancestors(D, v) | {v}
        if fwd & cyclic and back & cyclic:
            keep.add(v)
    return D.subgraph(keep).copy()


def irreducible(alphabet: int, forbidden) -> bool:
    E = essential_graph(alphabet, forbidden)
    return E.number_of_nodes() > 0 and nx.is_strongly_connected(E)


# -- finite flows ----------------------------------------------------------


def all_maps(k_from: int, k_to: int):
    return itertools.product(range(k_to), repeat=k_from)


def brute_factor_exists(Y, X, elements) -> bool:
    for f in all_maps(Y.size, X.size):
        if set(f) != set(range(X.size)):
            continue
        if all(f[Y.act(g, y)] == X.act(g, f[y]) for g in elements for y in range(Y.size)):
            return True
    return False
