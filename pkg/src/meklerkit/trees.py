"""Finite trees of strings with the strong-language structure.

Nodes are tuples of digits below the branching bound; a domain holds every
string of length below its height.  The language has the prefix order, the
meet (longest common prefix) and the lexicographic order; quantifier-free
types in it are decided by the fingerprint of the meet closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    LengthMismatch,
    LevelsOutOfRange,
    RangeOverflow,
    SchemaError,
    ShapeMismatch,
)

ROOT = ()
NODE_CAP = 2**17


def node_str(node) -> str:
    return "".join(str(d) for d in node)


def parse_node(text: str):
    if not all(ch.isdigit() for ch in text):
        raise SchemaError(f"node string must be digits, got {text!r}")
    return tuple(int(ch) for ch in text)


@dataclass(frozen=True)
class TreeDomain:
    """All strings over 0..branching-1 of length below height."""

    height: int
    branching: int

    def __post_init__(self):
        if self.height < 1 or self.branching < 1:
            raise ValueError("height and branching must be at least 1")
        if self.branching > 10:
            raise ValueError("branching above 10 breaks digit-string serialization")
        if self.node_count() > NODE_CAP:
            raise ValueError(f"domain has more than {NODE_CAP} nodes")

    def node_count(self) -> int:
        if self.branching == 1:
            return self.height
        return (self.branching**self.height - 1) // (self.branching - 1)

    def contains(self, node) -> bool:
        return len(node) < self.height and all(
            0 <= d < self.branching for d in node
        )

    def children(self, node):
        if len(node) + 1 < self.height:
            for d in range(self.branching):
                yield node + (d,)

    def nodes(self):
        """All nodes in lexicographic order (depth-first preorder)."""
        yield from self.subtree(ROOT)

    def subtree(self, node):
        stack = [node]
        while stack:
            cur = stack.pop()
            yield cur
            if len(cur) + 1 < self.height:
                for d in range(self.branching - 1, -1, -1):
                    stack.append(cur + (d,))

    def leaves(self):
        return itertools.product(range(self.branching), repeat=self.height - 1)

    def branch_nodes(self, leaf):
        """The chain of prefixes of a maximal node, root included."""
        return [leaf[:a] for a in range(len(leaf) + 1)]


# ── The strong language ────────────────────────────────────────────────────


def prec(a, b) -> bool:
    """Strict prefix."""
    return len(a) < len(b) and b[: len(a)] == a


def prec_eq(a, b) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def meet(a, b):
    """Longest common prefix."""
    i = 0
    bound = min(len(a), len(b))
    while i < bound and a[i] == b[i]:
        i += 1
    return a[:i]


def incomparable(a, b) -> bool:
    return not prec_eq(a, b) and not prec_eq(b, a)


def lex_less(a, b) -> bool:
    """a before b: strict prefix, or smaller digit at the first disagreement."""
    if prec(a, b):
        return True
    m = len(meet(a, b))
    return m < len(a) and m < len(b) and a[m] < b[m]


def lex_key(node):
    """Sort key realizing the lexicographic order on tree nodes."""
    # a strict prefix precedes all its extensions; digits decide otherwise
    return tuple(d + 1 for d in node)


def meet_closure(nodes):
    """All pairwise meets (selves included), deduplicated, in lex order."""
    if not nodes:
        raise ValueError("meet closure of an empty tuple")
    out = set()
    for a in nodes:
        for b in nodes:
            out.add(meet(a, b))
    return tuple(sorted(out, key=lex_key))


# ── Quantifier-free type fingerprints ──────────────────────────────────────

_REL_EQ, _REL_PREC, _REL_SUCC, _REL_INCOMP = 0, 1, 2, 3


def qftp_fingerprint(nodes):
    """Canonical code deciding equality of quantifier-free types.

    Terms are generated by the meet, which stabilizes on the meet closure, so
    the fingerprint records: the embedding of the original positions into the
    lex-sorted closure, every pairwise order relation on the closure, and the
    closure index realizing each pairwise meet.
    """
    nodes = tuple(nodes)
    closure = meet_closure(nodes)
    index = {c: i for i, c in enumerate(closure)}
    positions = tuple(index[a] for a in nodes)
    rels = []
    meets = []
    for a in closure:
        for b in closure:
            if a == b:
                rels.append(_REL_EQ)
            elif prec(a, b):
                rels.append(_REL_PREC)
            elif prec(b, a):
                rels.append(_REL_SUCC)
            else:
                rels.append(_REL_INCOMP)
            meets.append(index[meet(a, b)])
    return (len(nodes), len(closure), positions, tuple(rels), tuple(meets))


def qftp_equal(t1, t2) -> bool:
    if len(t1) != len(t2):
        raise LengthMismatch(f"tuple lengths {len(t1)} and {len(t2)} differ")
    return qftp_fingerprint(t1) == qftp_fingerprint(t2)


def is_distant_siblings(nodes, k: int) -> bool:
    """k distinct nodes whose pairwise meets all coincide.

    Convention: the common meet must also lie strictly below every member,
    so sets containing a comparable pair are rejected even for k = 2.
    """
    nodes = list(nodes)
    if len(nodes) != k or k < 2:
        return False
    if len(set(nodes)) != k:
        return False
    meets = {meet(a, b) for a, b in itertools.combinations(nodes, 2)}
    if len(meets) != 1:
        return False
    xi = meets.pop()
    return all(prec(xi, a) for a in nodes)


# ── Subtree maps used by the characterization proofs ───────────────────────


def level_subsequence_embed(host: TreeDomain, levels):
    """Embed the full tree of depth len(levels) along the given host levels.

    The root lands on the all-zeros node of length levels[0]; each child step
    pads with zeros up to the next level and then appends the child digit.
    Preserves the prefix and lexicographic orders; image meets extend mapped
    meets by zeros only.
    """
    levels = list(levels)
    d = len(levels)
    if d == 0:
        raise LevelsOutOfRange("need at least one level")
    if any(levels[i] >= levels[i + 1] for i in range(d - 1)):
        raise LevelsOutOfRange("levels must be strictly increasing")
    if levels[0] < 0 or levels[-1] >= host.height:
        raise LevelsOutOfRange("levels outside the host domain")
    b = host.branching
    out = {ROOT: (0,) * levels[0]}
    frontier = [ROOT]
    for level in range(d - 1):
        target = levels[level + 1]
        nxt = []
        for node in frontier:
            image = out[node]
            pad = image + (0,) * (target - len(image) - 1)
            for digit in range(b):
                child = node + (digit,)
                out[child] = pad + (digit,)
                nxt.append(child)
        frontier = nxt
    return out


def gmap(host: TreeDomain, f):
    """Stretch map: digit j of the source lands at host position f(j).

    The image of a length-l node has length f(l-1)+1, zeros everywhere except
    at the positions f(j) carrying the source digits; the successor position
    f(j)+ is realized as the integer index f(j).  Preserves the prefix and
    lexicographic orders; image meets are zero-padded mapped meets.
    """
    f = list(f)
    if any(f[i] >= f[i + 1] for i in range(len(f) - 1)):
        raise RangeOverflow("level map must be strictly increasing")
    if f and (f[0] < 0 or f[-1] + 1 >= host.height):
        raise RangeOverflow("level map exceeds the host height")
    b = host.branching
    out = {ROOT: ROOT}
    source = TreeDomain(len(f) + 1, b)
    for node in source.nodes():
        if node == ROOT:
            continue
        length = f[len(node) - 1] + 1
        image = [0] * length
        for j, digit in enumerate(node):
            image[f[j]] = digit
        out[node] = tuple(image)
    return out


# ── Colorings and monochromatic extraction ─────────────────────────────────


@dataclass
class Coloring:
    domain: TreeDomain
    colors: dict
    num_colors: int = field(default=0)

    def __post_init__(self):
        missing = [n for n in self.domain.nodes() if n not in self.colors]
        if missing:
            raise SchemaError(f"coloring misses {len(missing)} nodes, e.g. {missing[0]}")
        top = max(self.colors.values(), default=0)
        if self.num_colors == 0:
            self.num_colors = top + 1
        if any(c < 0 or c >= self.num_colors for c in self.colors.values()):
            raise SchemaError("color ids out of range")

    def __call__(self, node) -> int:
        return self.colors[node]


def coloring_from_function(domain: TreeDomain, fn, num_colors: int = 0) -> Coloring:
    return Coloring(domain, {n: fn(n) for n in domain.nodes()}, num_colors)


def coloring_to_json(c: Coloring) -> dict:
    return {
        "height": c.domain.height,
        "branching": c.domain.branching,
        "colors": {node_str(n): c.colors[n] for n in c.domain.nodes()},
    }


def coloring_from_json(data) -> Coloring:
    if not isinstance(data, dict) or not {"height", "branching", "colors"} <= set(data):
        raise SchemaError('coloring JSON needs "height", "branching", "colors"')
    if not isinstance(data["colors"], dict):
        raise SchemaError("colors must be an object")
    domain = TreeDomain(data["height"], data["branching"])
    colors = {}
    for key, value in data["colors"].items():
        if not isinstance(value, int) or value < 0:
            raise SchemaError(f"bad color for node {key!r}")
        node = parse_node(key)
        if not domain.contains(node):
            raise SchemaError(f"node {key!r} outside the domain")
        colors[node] = value
    return Coloring(domain, colors)


def find_cofinal_color(domain: TreeDomain, coloring: Coloring):
    """A color and a node above which that color stays reachable, or None.

    Returns the smallest qualifying color id with its lex-least witness.  In a
    finite domain a maximal node always certifies its own color, so absence
    only signals a degenerate input; the optional return type keeps the
    contract honest.
    """
    if domain.branching != 2:
        raise ShapeMismatch("cofinal color search expects a binary domain")
    nodes = list(domain.nodes())
    bottom_up = sorted(nodes, key=len, reverse=True)
    for color in range(coloring.num_colors):
        reach = {}
        for node in bottom_up:
            ok = coloring(node) == color
            if not ok:
                ok = any(reach[c] for c in domain.children(node))
            reach[node] = ok
        good = {}
        for node in bottom_up:
            ok = reach[node]
            if ok:
                ok = all(good[c] for c in domain.children(node))
            good[node] = ok
        for node in nodes:  # lex order
            if good[node]:
                return color, node
    return None


@dataclass
class MonoResult:
    shape: str
    depth: int
    width: int
    color: int | None
    embedding: dict | None
    failed_colors: tuple

    @property
    def found(self) -> bool:
        return self.embedding is not None


def _color_subtree(host, coloring, base, color, strict=False):
    """Candidates above base with the given color, in lex order."""
    if not host.contains(base):
        return
    for node in host.subtree(base):
        if strict and node == base:
            continue
        if coloring(node) == color:
            yield node


def _search_sop2(host, coloring, depth, color):
    abstract = TreeDomain(depth, 2)
    order = [n for n in abstract.nodes()]
    assign = {}

    def backtrack(idx):
        if idx == len(order):
            return True
        node = order[idx]
        if node == ROOT:
            candidates = _color_subtree(host, coloring, ROOT, color)
        else:
            base = assign[node[:-1]] + (node[-1],)
            candidates = _color_subtree(host, coloring, base, color)
        for cand in candidates:
            assign[node] = cand
            if backtrack(idx + 1):
                return True
            del assign[node]
        return False

    return dict(assign) if backtrack(0) else None


def _sop1_order(depth):
    # parents before children, 1-child before its 0-sibling: the 0-child's
    # candidates depend on where the 1-child landed.
    order = [ROOT]
    frontier = [ROOT]
    for _ in range(depth - 1):
        nxt = []
        for node in frontier:
            nxt.extend((node + (1,), node + (0,)))
        order.extend(nxt)
        frontier = nxt
    return order


def _search_sop1(host, coloring, depth, color):
    order = _sop1_order(depth)
    assign = {}

    def candidates(node):
        if node == ROOT:
            yield from _color_subtree(host, coloring, ROOT, color)
        elif node[-1] == 1:
            for cand in _color_subtree(host, coloring, assign[node[:-1]], color, strict=True):
                if cand and cand[-1] == 1:
                    yield cand
        else:
            xi = assign[node[:-1] + (1,)][:-1]
            yield from _color_subtree(host, coloring, xi + (0,), color)

    def backtrack(idx):
        if idx == len(order):
            return True
        node = order[idx]
        for cand in candidates(node):
            assign[node] = cand
            if backtrack(idx + 1):
                return True
            del assign[node]
        return False

    return dict(assign) if backtrack(0) else None


def mono_subtree_sop2(host: TreeDomain, coloring: Coloring, depth: int) -> MonoResult:
    """Monochromatic embedding with e(child i) extending e(parent) + i."""
    if host.branching != 2:
        raise ShapeMismatch("binary host required")
    failed = []
    for color in range(coloring.num_colors):
        emb = _search_sop2(host, coloring, depth, color)
        if emb is not None:
            return MonoResult("sop2", depth, 2, color, emb, tuple(failed))
        failed.append(color)
    return MonoResult("sop2", depth, 2, None, None, tuple(failed))


def mono_subtree_sop1(host: TreeDomain, coloring: Coloring, depth: int) -> MonoResult:
    """Monochromatic embedding where each 1-child image ends in digit 1 and
    its 0-sibling extends the matching 0-branch."""
    if host.branching != 2:
        raise ShapeMismatch("binary host required")
    failed = []
    for color in range(coloring.num_colors):
        emb = _search_sop1(host, coloring, depth, color)
        if emb is not None:
            return MonoResult("sop1", depth, 2, color, emb, tuple(failed))
        failed.append(color)
    return MonoResult("sop1", depth, 2, None, None, tuple(failed))


def tp1_binary_depth(depth: int, width: int) -> int:
    return (depth - 1) * width + 1


def mono_subtree_tp1(
    host: TreeDomain, coloring: Coloring, depth: int, width: int
) -> MonoResult:
    """Width-branching monochromatic map derived from a deep binary embedding.

    Builds the binary shape first, then sends child i of a node imaged at r
    to the image of r + 1^i + 0.
    """
    if host.branching != 2:
        raise ShapeMismatch("binary host required")
    if width < 1 or depth < 1:
        raise ValueError("depth and width must be positive")
    bdepth = tp1_binary_depth(depth, width)
    failed = []
    for color in range(coloring.num_colors):
        base = _search_sop2(host, coloring, bdepth, color)
        if base is None:
            failed.append(color)
            continue
        abstract = TreeDomain(depth, width)
        preimage = {ROOT: ROOT}
        emb = {ROOT: base[ROOT]}
        for node in abstract.nodes():
            if node == ROOT:
                continue
            rho = preimage[node[:-1]] + (1,) * node[-1] + (0,)
            preimage[node] = rho
            emb[node] = base[rho]
        return MonoResult("tp1", depth, width, color, emb, tuple(failed))
    return MonoResult("tp1", depth, width, None, None, tuple(failed))


def validate_mono_embedding(
    kind: str,
    host: TreeDomain,
    coloring: Coloring,
    result: MonoResult,
) -> bool:
    """Independent re-check of a returned embedding against its shape rules."""
    if not result.found:
        return False
    emb = result.embedding
    if result.color is None:
        return False
    images = list(emb.values())
    if len(set(images)) != len(images):
        return False
    if not all(host.contains(v) and coloring(v) == result.color for v in images):
        return False
    b = 2 if kind in ("sop2", "sop1") else result.width
    abstract = TreeDomain(result.depth, b)
    if set(emb) != set(abstract.nodes()):
        return False
    if kind == "sop2":
        for node in abstract.nodes():
            for child in abstract.children(node):
                if not prec_eq(emb[node] + (child[-1],), emb[child]):
                    return False
        return True
    if kind == "sop1":
        for node in abstract.nodes():
            if len(node) + 1 >= abstract.height:
                continue
            one, zero = emb[node + (1,)], emb[node + (0,)]
            if not one or one[-1] != 1:
                return False
            if not prec(emb[node], one):
                return False
            if not prec_eq(one[:-1] + (0,), zero):
                return False
        return True
    if kind == "tp1":
        pairs = list(emb.items())
        for a, va in pairs:
            for b_, vb in pairs:
                if a == b_:
                    continue
                if prec(a, b_) and not prec(va, vb):
                    return False
                if incomparable(a, b_) and not incomparable(va, vb):
                    return False
        return True
    raise ValueError(f"unknown shape {kind!r}")
