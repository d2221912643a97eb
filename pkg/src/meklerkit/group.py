"""Exact arithmetic in the Mekler group of a graph.

G(A) is the free class-2 exponent-p nilpotent group on the vertices of A,
modulo the commutators of adjacent pairs.  Every element has a unique normal
form: a generator-exponent vector u (its image mod the center) and a
commutator-exponent vector w indexed by the non-edges of A.

Sign convention, normative for the JSON format: c_(i,j) := [a_i, a_j] for
i < j, so the collection rule reads a_j a_i = a_i a_j c_(i,j)^(-1).  The
closed-form product below is validated against the collection oracle
`collect_product` by the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContextMismatch, GraphNotNice, NotAnOddPrime, SchemaError, TooLarge
from .graphs import Graph, is_nice

MAX_PRIME = 17
ENUM_BOUND = 10**6

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13, 17}


@dataclass(frozen=True)
class GroupElement:
    u: tuple
    w: tuple


class GroupContext:
    """Fixed coordinate system for G(A): prime, graph, ordered non-edge list."""

    def __init__(self, p: int, g: Graph):
        self.p = p
        self.graph = g
        self.n = g.n
        self.nonedges = tuple(g.nonedges())
        self.m = len(self.nonedges)
        self.ne_index = {pair: k for k, pair in enumerate(self.nonedges)}
        # Vertices with at least one non-neighbor; only these block centrality.
        self.noncentral_vertices = tuple(
            sorted({i for pair in self.nonedges for i in pair})
        )
        self.cache = {}

    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.n, (0,) * self.m)

    def generator(self, i: int) -> GroupElement:
        if not 0 <= i < self.n:
            raise ContextMismatch(f"no generator {i} in a graph on {self.n} vertices")
        u = [0] * self.n
        u[i] = 1
        return GroupElement(tuple(u), (0,) * self.m)

    def element(self, u, w) -> GroupElement:
        if len(u) != self.n or len(w) != self.m:
            raise ContextMismatch(
                f"expected vectors of lengths {self.n} and {self.m}, "
                f"got {len(u)} and {len(w)}"
            )
        p = self.p
        return GroupElement(tuple(x % p for x in u), tuple(x % p for x in w))

    def random_element(self, rng) -> GroupElement:
        return GroupElement(
            tuple(rng.randrange(self.p) for _ in range(self.n)),
            tuple(rng.randrange(self.p) for _ in range(self.m)),
        )

    def order(self) -> int:
        return self.p ** (self.n + self.m)

    def enumerate_elements(self):
        if self.order() > ENUM_BOUND:
            raise TooLarge(f"group order {self.order()} exceeds {ENUM_BOUND}")
        return (
            GroupElement(u, w)
            for u in itertools.product(range(self.p), repeat=self.n)
            for w in itertools.product(range(self.p), repeat=self.m)
        )

    def __repr__(self):
        return f"GroupContext(p={self.p}, n={self.n}, nonedges={self.m})"


def mk_context(p: int, g: Graph, allow_non_nice: bool = False) -> GroupContext:
    if p not in _SMALL_PRIMES or p == 2:
        raise NotAnOddPrime(f"p must be an odd prime <= {MAX_PRIME}, got {p}")
    if not allow_non_nice:
        report = is_nice(g)
        if not report.nice:
            raise GraphNotNice(f"graph is not nice: {report.violation}")
    return GroupContext(p, g)


def group_order(ctx: GroupContext) -> int:
    """p^(n + number of non-edges); every normal form is distinct."""
    return ctx.order()


def _check(ctx: GroupContext, g: GroupElement):
    if len(g.u) != ctx.n or len(g.w) != ctx.m:
        raise ContextMismatch("element does not fit this context")


def multiply(ctx: GroupContext, g: GroupElement, h: GroupElement) -> GroupElement:
    """Product in normal form: u adds; w adds plus a bilinear collection term."""
    _check(ctx, g)
    _check(ctx, h)
    p = ctx.p
    u = tuple((a + b) % p for a, b in zip(g.u, h.u))
    w = list(g.w)
    gu, hu = g.u, h.u
    for k, (i, j) in enumerate(ctx.nonedges):
        # moving h's a_i block left past g's a_j block costs c_(i,j)^(-u_g[j] u_h[i])
        w[k] = (w[k] + h.w[k] - gu[j] * hu[i]) % p
    return GroupElement(u, tuple(w))


def inverse(ctx: GroupContext, g: GroupElement) -> GroupElement:
    _check(ctx, g)
    p = ctx.p
    u = tuple((-a) % p for a in g.u)
    w = list(g.w)
    for k, (i, j) in enumerate(ctx.nonedges):
        w[k] = (-g.w[k] - g.u[i] * g.u[j]) % p
    return GroupElement(u, tuple(w))


def power(ctx: GroupContext, g: GroupElement, k: int) -> GroupElement:
    """g^k by repeated squaring; the exponent only matters mod p."""
    _check(ctx, g)
    k %= ctx.p
    result = ctx.identity()
    base = g
    while k:
        if k & 1:
            result = multiply(ctx, result, base)
        base = multiply(ctx, base, base)
        k >>= 1
    return result


def commutator(ctx: GroupContext, g: GroupElement, h: GroupElement) -> GroupElement:
    """[g, h] = g^-1 h^-1 g h; always central in a class-2 group."""
    gi = inverse(ctx, g)
    hi = inverse(ctx, h)
    return multiply(ctx, multiply(ctx, gi, hi), multiply(ctx, g, h))


def is_central(ctx: GroupContext, g: GroupElement) -> bool:
    """Centrality from the u-vector: every vertex with a non-neighbor must vanish."""
    _check(ctx, g)
    return all(g.u[i] == 0 for i in ctx.noncentral_vertices)


def commutes_with_all_generators(ctx: GroupContext, g: GroupElement) -> bool:
    """Definitional centrality check; cross-validates is_central in the tests."""
    e = ctx.identity()
    return all(
        commutator(ctx, g, ctx.generator(i)) == e for i in range(ctx.n)
    )


def collect_product(ctx: GroupContext, g: GroupElement, h: GroupElement) -> GroupElement:
    """Reference product by naive string rewriting.

    Concatenates the generator words of g and h and bubble-sorts the letters,
    applying a_j a_i -> a_i a_j c_(i,j)^(-1) at every adjacent swap.  Slow and
    deliberately independent of the closed form in `multiply`.
    """
    _check(ctx, g)
    _check(ctx, h)
    p = ctx.p
    word = []
    for i in range(ctx.n):
        word.extend([i] * g.u[i])
    for i in range(ctx.n):
        word.extend([i] * h.u[i])
    w = [(a + b) % p for a, b in zip(g.w, h.w)]
    changed = True
    while changed:
        changed = False
        for t in range(len(word) - 1):
            a, b = word[t], word[t + 1]
            if a > b:
                word[t], word[t + 1] = b, a
                k = ctx.ne_index.get((b, a))
                if k is not None:
                    w[k] = (w[k] - 1) % p
                changed = True
    u = [0] * ctx.n
    for letter in word:
        u[letter] += 1
    return GroupElement(tuple(x % p for x in u), tuple(w))


# ── JSON ───────────────────────────────────────────────────────────────────


def element_to_json(g: GroupElement) -> dict:
    return {"u": list(g.u), "w": list(g.w)}


def element_from_json(ctx: GroupContext, data) -> GroupElement:
    if not isinstance(data, dict) or set(data) != {"u", "w"}:
        raise SchemaError('element JSON must be {"u": [...], "w": [...]}')
    u, w = data["u"], data["w"]
    for name, vec, want in (("u", u, ctx.n), ("w", w, ctx.m)):
        if not (isinstance(vec, list) and all(isinstance(x, int) for x in vec)):
            raise SchemaError(f"element {name} must be a list of integers")
        if len(vec) != want:
            raise SchemaError(f"element {name} must have length {want}")
        if any(not 0 <= x < ctx.p for x in vec):
            raise SchemaError(f"element {name} entries must be residues mod {ctx.p}")
    return ctx.element(u, w)
