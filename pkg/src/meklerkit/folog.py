"""Finite relational structures and first-order evaluation by enumeration.

Formulas are parsed from s-expressions, e.g. (exists z (and (E x z) (E z y))).
Consistency of a formula set here means joint satisfiability inside the given
finite structure; type equality over a fixed set is orbit equivalence under
automorphisms, which coincides with first-order type equality on finite
structures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    FormulaSyntaxError,
    SchemaError,
    TooLarge,
    UnboundVariable,
    UnknownRelation,
)

MAX_UNIVERSE = 64
MAX_LISTING = 16


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset


@dataclass(frozen=True)
class FinStructure:
    m: int
    relations: dict

    def __post_init__(self):
        if self.m < 1 or self.m > MAX_UNIVERSE:
            raise ValueError(f"universe size must be 1..{MAX_UNIVERSE}")
        for name, rel in self.relations.items():
            for t in rel.tuples:
                if len(t) != rel.arity or any(not 0 <= x < self.m for x in t):
                    raise ValueError(f"bad tuple {t} in relation {name}")


def structure(m: int, relations: dict) -> FinStructure:
    rels = {
        name: Relation(arity, frozenset(tuple(t) for t in tuples))
        for name, (arity, tuples) in relations.items()
    }
    return FinStructure(m, rels)


# ── Formula AST ────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


def free_vars(formula) -> frozenset:
    if isinstance(formula, Rel):
        return frozenset(formula.args)
    if isinstance(formula, Eq):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Not):
        return free_vars(formula.body)
    if isinstance(formula, (And, Or)):
        out = frozenset()
        for part in formula.parts:
            out |= free_vars(part)
        return out
    if isinstance(formula, Implies):
        return free_vars(formula.left) | free_vars(formula.right)
    if isinstance(formula, (Exists, Forall)):
        return free_vars(formula.body) - {formula.var}
    raise TypeError(f"not a formula: {formula!r}")


# ── Parsing ────────────────────────────────────────────────────────────────


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _read(tokens, pos, end):
    if pos >= len(tokens):
        raise FormulaSyntaxError("unexpected end of input", end)
    tok, at = tokens[pos]
    if tok == ")":
        raise FormulaSyntaxError('unexpected ")"', at)
    if tok != "(":
        return tok, at, pos + 1
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise FormulaSyntaxError("unclosed (", end)
        if tokens[pos][0] == ")":
            return items, at, pos + 1
        item, item_at, pos = _read(tokens, pos, end)
        items.append((item, item_at))


def _build(item, at):
    if isinstance(item, str):
        raise FormulaSyntaxError(f"bare symbol {item!r} is not a formula", at)
    if not item:
        raise FormulaSyntaxError("empty form", at)
    (head, head_at), *rest = item
    if not isinstance(head, str):
        raise FormulaSyntaxError("operator must be a symbol", head_at)
    if head in ("and", "or"):
        if not rest:
            raise FormulaSyntaxError(f"({head} ...) needs arguments", at)
        parts = tuple(_build(x, x_at) for x, x_at in rest)
        return And(parts) if head == "and" else Or(parts)
    if head == "not":
        if len(rest) != 1:
            raise FormulaSyntaxError("(not ...) takes one argument", at)
        return Not(_build(*rest[0]))
    if head in ("->", "implies"):
        if len(rest) != 2:
            raise FormulaSyntaxError("(-> ...) takes two arguments", at)
        return Implies(_build(*rest[0]), _build(*rest[1]))
    if head in ("exists", "forall"):
        if len(rest) != 2 or not isinstance(rest[0][0], str):
            raise FormulaSyntaxError(f"({head} var body) expected", at)
        cls = Exists if head == "exists" else Forall
        return cls(rest[0][0], _build(*rest[1]))
    if head == "=":
        if len(rest) != 2 or not all(isinstance(x, str) for x, _ in rest):
            raise FormulaSyntaxError("(= x y) expects two variables", at)
        return Eq(rest[0][0], rest[1][0])
    # relation atom
    args = []
    for x, x_at in rest:
        if not isinstance(x, str):
            raise FormulaSyntaxError("relation arguments must be variables", x_at)
        args.append(x)
    return Rel(head, tuple(args))


def parse_formula(text: str):
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty input", 0)
    item, at, pos = _read(tokens, 0, len(text))
    if pos != len(tokens):
        raise FormulaSyntaxError("trailing input", tokens[pos][1])
    return _build(item, at)


def bind_check(s: FinStructure, formula):
    """Relation names and arities are checked against the structure at bind time."""
    if isinstance(formula, Rel):
        if formula.name not in s.relations:
            raise UnknownRelation(formula.name)
        want = s.relations[formula.name].arity
        if len(formula.args) != want:
            raise ArityMismatch(
                f"{formula.name} has arity {want}, got {len(formula.args)} arguments"
            )
    elif isinstance(formula, Not):
        bind_check(s, formula.body)
    elif isinstance(formula, (And, Or)):
        for part in formula.parts:
            bind_check(s, part)
    elif isinstance(formula, Implies):
        bind_check(s, formula.left)
        bind_check(s, formula.right)
    elif isinstance(formula, (Exists, Forall)):
        bind_check(s, formula.body)


# ── Evaluation ─────────────────────────────────────────────────────────────


def _eval(s, formula, asg):
    if isinstance(formula, Rel):
        try:
            t = tuple(asg[v] for v in formula.args)
        except KeyError as exc:
            raise UnboundVariable(str(exc)) from None
        return t in s.relations[formula.name].tuples
    if isinstance(formula, Eq):
        try:
            return asg[formula.left] == asg[formula.right]
        except KeyError as exc:
            raise UnboundVariable(str(exc)) from None
    if isinstance(formula, Not):
        return not _eval(s, formula.body, asg)
    if isinstance(formula, And):
        return all(_eval(s, part, asg) for part in formula.parts)
    if isinstance(formula, Or):
        return any(_eval(s, part, asg) for part in formula.parts)
    if isinstance(formula, Implies):
        return (not _eval(s, formula.left, asg)) or _eval(s, formula.right, asg)
    if isinstance(formula, Exists):
        return any(
            _eval(s, formula.body, {**asg, formula.var: e}) for e in range(s.m)
        )
    if isinstance(formula, Forall):
        return all(
            _eval(s, formula.body, {**asg, formula.var: e}) for e in range(s.m)
        )
    raise TypeError(f"not a formula: {formula!r}")


def eval_formula(s: FinStructure, formula, asg: dict) -> bool:
    bind_check(s, formula)
    return _eval(s, formula, asg)


def solutions(s: FinStructure, formula, variables):
    """All satisfying tuples over the given variables, lexicographically."""
    bind_check(s, formula)
    variables = list(variables)
    missing = free_vars(formula) - set(variables)
    if missing:
        raise UnboundVariable(f"free variables {sorted(missing)} not listed")
    out = []
    for values in itertools.product(range(s.m), repeat=len(variables)):
        if _eval(s, formula, dict(zip(variables, values))):
            out.append(values)
    return out


# ── Automorphisms and orbit equivalence ────────────────────────────────────


class _AutoSearch:
    """Backtracking over permutations preserving every relation both ways.

    Elements are ordered so that each newcomer shares as many relation tuples
    as possible with the already-assigned prefix, which lets the incremental
    consistency check prune hard; pruning also uses per-position degree
    profiles.  Complete assignments are verified against all relations.
    """

    def __init__(self, s: FinStructure):
        self.s = s
        prof = [[] for _ in range(s.m)]
        incident = [[] for _ in range(s.m)]
        for name in sorted(s.relations):
            rel = s.relations[name]
            for pos in range(rel.arity):
                counts = [0] * s.m
                for t in rel.tuples:
                    counts[t[pos]] += 1
                for x in range(s.m):
                    prof[x].append(counts[x])
            for t in rel.tuples:
                for x in set(t):
                    incident[x].append((rel.tuples, t))
        self.profiles = [tuple(p) for p in prof]
        self.incident = incident
        self.candidates = {}
        for x in range(s.m):
            self.candidates[x] = [
                y for y in range(s.m) if self.profiles[y] == self.profiles[x]
            ]

    def order_from(self, seeds):
        chosen = list(seeds)
        chosen_set = set(chosen)
        while len(chosen) < self.s.m:
            best, best_score = None, -1
            for x in range(self.s.m):
                if x in chosen_set:
                    continue
                score = sum(
                    1
                    for _, t in self.incident[x]
                    if all(v == x or v in chosen_set for v in t)
                )
                if score > best_score:
                    best, best_score = x, score
            chosen.append(best)
            chosen_set.add(best)
        return chosen

    def consistent(self, mapping, inverse, x):
        y = mapping[x]
        for tuples, t in self.incident[x]:
            if all(v in mapping for v in t):
                if tuple(mapping[v] for v in t) not in tuples:
                    return False
        for tuples, t in self.incident[y]:
            if all(w in inverse for w in t):
                if tuple(inverse[w] for w in t) not in tuples:
                    return False
        return True

    def complete_ok(self, mapping) -> bool:
        for rel in self.s.relations.values():
            mapped = {tuple(mapping[x] for x in t) for t in rel.tuples}
            if mapped != rel.tuples:
                return False
        return True

    def extend(self, mapping, inverse, order, idx, collect):
        if idx == len(order):
            if self.complete_ok(mapping):
                if collect is None:
                    return True
                collect.append(tuple(mapping[x] for x in range(self.s.m)))
            return False
        x = order[idx]
        for y in self.candidates[x]:
            if y in inverse:
                continue
            mapping[x] = y
            inverse[y] = x
            if self.consistent(mapping, inverse, x):
                if self.extend(mapping, inverse, order, idx + 1, collect):
                    return True
            del mapping[x]
            del inverse[y]
        return False


def automorphisms(s: FinStructure):
    """All relation-preserving permutations; full listing needs m <= 16."""
    if s.m > MAX_LISTING:
        raise TooLarge(f"automorphism listing limited to m <= {MAX_LISTING}")
    search = _AutoSearch(s)
    out = []
    search.extend({}, {}, search.order_from(()), 0, out)
    return sorted(out)


def orbit_equivalent(s: FinStructure, a, b, fixed=()) -> bool:
    """Does some automorphism fix `fixed` pointwise and map a to b elementwise?

    Existence-only backtracking; equals first-order type equality over the
    fixed set because the structure is finite.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    search = _AutoSearch(s)
    mapping = {}
    for x in fixed:
        mapping[x] = x
    for x, y in zip(a, b):
        if x in mapping and mapping[x] != y:
            return False
        mapping[x] = y
    inverse = {}
    for x, y in mapping.items():
        if search.profiles[x] != search.profiles[y] or y in inverse:
            return False
        inverse[y] = x
    for rel in s.relations.values():
        for t in rel.tuples:
            if all(v in mapping for v in t):
                if tuple(mapping[v] for v in t) not in rel.tuples:
                    return False
    order = search.order_from(list(mapping))
    return search.extend(mapping, inverse, order, len(mapping), None)


# ── JSON ───────────────────────────────────────────────────────────────────


def structure_to_json(s: FinStructure) -> dict:
    return {
        "m": s.m,
        "relations": {
            name: {"arity": rel.arity, "tuples": sorted(list(t) for t in rel.tuples)}
            for name, rel in sorted(s.relations.items())
        },
    }


def structure_from_json(data) -> FinStructure:
    if not isinstance(data, dict) or not {"m", "relations"} <= set(data):
        raise SchemaError('structure JSON needs "m" and "relations"')
    m = data["m"]
    if not isinstance(m, int) or not 1 <= m <= MAX_UNIVERSE:
        raise SchemaError(f"m must be 1..{MAX_UNIVERSE}")
    if not isinstance(data["relations"], dict):
        raise SchemaError("relations must be an object")
    rels = {}
    for name, spec in data["relations"].items():
        if not isinstance(spec, dict) or not {"arity", "tuples"} <= set(spec):
            raise SchemaError(f'relation {name!r} needs "arity" and "tuples"')
        arity = spec["arity"]
        if not isinstance(arity, int) or arity < 1:
            raise SchemaError(f"relation {name!r} arity must be positive")
        tuples = set()
        for t in spec["tuples"]:
            if (
                not isinstance(t, list)
                or len(t) != arity
                or any(not isinstance(x, int) or not 0 <= x < m for x in t)
            ):
                raise SchemaError(f"bad tuple {t!r} in relation {name!r}")
            tuples.add(tuple(t))
        rels[name] = (arity, tuples)
    return structure(m, rels)
