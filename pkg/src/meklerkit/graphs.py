"""Finite graphs: niceness, exhaustive search up to isomorphism, brute-force iso.

A graph is nice when any two distinct vertices a, b admit a third vertex
adjacent to a but not to b, and the graph contains neither a 3-cycle nor a
4-cycle.  Vertices are 0..n-1 and the index order doubles as the fixed
enumeration used by the group construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import SchemaError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int):
        return [j for j in range(self.n) if j != i and self.has_edge(i, j)]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def nonedges(self):
        """All pairs (i, j), i < j, not joined by an edge, in lex order."""
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if (i, j) not in self.edges
        ]


def graph(n: int, edges) -> Graph:
    if n < 1:
        raise ValueError("graph needs at least one vertex")
    norm = set()
    for e in edges:
        i, j = e
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge {e} out of range for n={n}")
        norm.add((min(i, j), max(i, j)))
    return Graph(n, frozenset(norm))


def cycle_graph(n: int) -> Graph:
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return graph(n, itertools.combinations(range(n), 2))


@dataclass(frozen=True)
class NicenessReport:
    nice: bool
    violation: tuple | None  # (kind, witness) with kind in
    # {"too_small", "triangle", "square", "pair"}


def _find_triangle(g: Graph):
    for a, b, c in itertools.combinations(range(g.n), 3):
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c):
            return (a, b, c)
    return None


def _find_square(g: Graph):
    # 4-cycle as a subgraph: four distinct vertices, cyclically adjacent.
    for quad in itertools.combinations(range(g.n), 4):
        a, b, c, d = quad
        for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            w, x, y, z = cyc
            if (
                g.has_edge(w, x)
                and g.has_edge(x, y)
                and g.has_edge(y, z)
                and g.has_edge(z, w)
            ):
                return cyc
    return None


def is_nice(g: Graph) -> NicenessReport:
    """Decide niceness; on failure report the first witness found.

    Violations are searched in order: vertex count, triangle, square, then
    separation failures over ordered pairs in lex order.
    """
    if g.n < 2:
        return NicenessReport(False, ("too_small", ()))
    tri = _find_triangle(g)
    if tri is not None:
        return NicenessReport(False, ("triangle", tri))
    sq = _find_square(g)
    if sq is not None:
        return NicenessReport(False, ("square", sq))
    for a in range(g.n):
        for b in range(g.n):
            if a == b:
                continue
            if not any(
                c != a and c != b and g.has_edge(a, c) and not g.has_edge(b, c)
                for c in range(g.n)
            ):
                return NicenessReport(False, ("pair", (a, b)))
    return NicenessReport(True, None)


# ── Isomorphism ────────────────────────────────────────────────────────────


def graph_iso(g1: Graph, g2: Graph):
    """A vertex bijection preserving edges both ways, or None.

    Backtracking with degree pruning; vertices of g1 are assigned in order of
    rarest degree first so mismatches surface early.
    """
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return None
    deg1 = [g1.degree(i) for i in range(g1.n)]
    deg2 = [g2.degree(i) for i in range(g2.n)]
    if sorted(deg1) != sorted(deg2):
        return None
    freq = {}
    for d in deg1:
        freq[d] = freq.get(d, 0) + 1
    order = sorted(range(g1.n), key=lambda v: (freq[deg1[v]], v))
    mapping = [-1] * g1.n
    used = [False] * g2.n

    def extend(k):
        if k == len(order):
            return True
        v = order[k]
        for w in range(g2.n):
            if used[w] or deg2[w] != deg1[v]:
                continue
            ok = True
            for u in order[:k]:
                if g1.has_edge(v, u) != g2.has_edge(w, mapping[u]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if extend(k + 1):
                    return True
                used[w] = False
                mapping[v] = -1
        return False

    if extend(0):
        return list(mapping)
    return None


def canonical_form(g: Graph):
    """Minimum adjacency bit string over all vertex permutations (n <= 8)."""
    if g.n > 8:
        raise ValueError("canonical_form is brute force, n <= 8 only")
    pairs = list(itertools.combinations(range(g.n), 2))
    best = None
    for perm in itertools.permutations(range(g.n)):
        bits = tuple(
            1 if (min(perm[i], perm[j]), max(perm[i], perm[j])) in g.edges else 0
            for i, j in pairs
        )
        if best is None or bits < best:
            best = bits
    return (g.n, best)


# ── Exhaustive nice-graph search ───────────────────────────────────────────


def _extension_ok(g: Graph, nbrs) -> bool:
    # Adding a vertex adjacent to nbrs: any new triangle or square must pass
    # through the new vertex, so only local patterns need checking.
    for x, y in itertools.combinations(nbrs, 2):
        if g.has_edge(x, y):
            return False  # triangle new-x-y
        for z in range(g.n):
            if z != x and z != y and g.has_edge(x, z) and g.has_edge(y, z):
                return False  # square new-x-z-y
    return True


def _dedupe(graphs):
    buckets = {}
    out = []
    for g in graphs:
        key = (g.n, len(g.edges), tuple(sorted(g.degree(i) for i in range(g.n))))
        seen = buckets.setdefault(key, [])
        if not any(graph_iso(g, h) is not None for h in seen):
            seen.append(g)
            out.append(g)
    return out


def find_nice_graphs(n_max: int):
    """All nice graphs with at most n_max vertices, one per isomorphism class.

    Grows triangle- and square-free graphs one vertex at a time (the class is
    hereditary, so this reaches every isomorphism type), filters by is_nice
    and orders results by canonical form.
    """
    if n_max > 8:
        raise ValueError("find_nice_graphs supports n_max <= 8")
    nice = []
    level = [graph(1, [])]
    for n in range(2, n_max + 1):
        nxt = []
        for base in level:
            for r in range(n):
                for nbrs in itertools.combinations(range(n - 1), r):
                    if len(nbrs) and not _extension_ok(base, nbrs):
                        continue
                    nxt.append(
                        graph(n, list(base.edges) + [(v, n - 1) for v in nbrs])
                    )
        level = _dedupe(nxt)
        nice.extend(g for g in level if is_nice(g).nice)
    return sorted(nice, key=canonical_form)


# ── JSON ───────────────────────────────────────────────────────────────────


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": sorted(list(e) for e in g.edges)}


def graph_from_json(data) -> Graph:
    if not isinstance(data, dict) or set(data) != {"n", "edges"}:
        raise SchemaError('graph JSON must be {"n": ..., "edges": [...]}')
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("graph n must be a positive integer")
    edges = data["edges"]
    if not isinstance(edges, list):
        raise SchemaError("graph edges must be a list of pairs")
    seen = set()
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise SchemaError(f"bad edge entry {e!r}")
        i, j = e
        if i == j:
            raise SchemaError(f"self-loop at vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise SchemaError(f"edge {e} out of range for n={n}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise SchemaError(f"duplicate edge {e}")
        seen.add(key)
    return graph(n, seen)
