"""Formula parsing, Tarskian evaluation, automorphisms, orbit equivalence."""

import itertools
import random

import pytest

from meklerkit.errors import (
    ArityMismatch,
    FormulaSyntaxError,
    TooLarge,
    UnboundVariable,
    UnknownRelation,
)
from meklerkit.folog import (
    And,
    Eq,
    Not,
    Rel,
    automorphisms,
    eval_formula,
    free_vars,
    orbit_equivalent,
    parse_formula,
    solutions,
    structure,
    structure_from_json,
    structure_to_json,
)


def c5_structure():
    edges = [(i, (i + 1) % 5) for i in range(5)]
    sym = [(i, j) for i, j in edges] + [(j, i) for i, j in edges]
    return structure(5, {"E": (2, sym)})


def prefix_tree_structure():
    nodes = [()] + [(a,) for a in range(2)] + [(a, b) for a in range(2) for b in range(2)]
    idx = {n: i for i, n in enumerate(nodes)}
    tuples = [
        (idx[a], idx[b])
        for a in nodes
        for b in nodes
        if len(a) <= len(b) and b[: len(a)] == a
    ]
    return structure(7, {"pre": (2, tuples)}), idx


def test_parse_examples():
    f = parse_formula("(E x y)")
    assert f == Rel("E", ("x", "y"))
    g = parse_formula("(and (E x y) (not (= x y)))")
    assert isinstance(g, And) and isinstance(g.parts[1], Not)
    assert g.parts[1].body == Eq("x", "y")
    assert free_vars(parse_formula("(exists z (and (E x z) (E z y)))")) == {"x", "y"}


def test_parse_error_positions():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula("(E x")
    assert err.value.position == 4
    with pytest.raises(FormulaSyntaxError):
        parse_formula("E")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(E x y) junk")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("")


def test_eval_examples():
    s = c5_structure()
    f = parse_formula("(E x y)")
    assert eval_formula(s, f, {"x": 0, "y": 1})
    assert not eval_formula(s, f, {"x": 0, "y": 2})
    assert eval_formula(s, parse_formula("(forall x (exists y (E x y)))"), {})
    sols = solutions(s, parse_formula("(exists y (E x y))"), ["x"])
    assert sols == [(0,), (1,), (2,), (3,), (4,)]


def test_bind_and_eval_errors():
    s = c5_structure()
    with pytest.raises(UnknownRelation):
        eval_formula(s, parse_formula("(R x)"), {"x": 0})
    with pytest.raises(ArityMismatch):
        eval_formula(s, parse_formula("(E x y z)"), {"x": 0, "y": 1, "z": 2})
    with pytest.raises(UnboundVariable):
        eval_formula(s, parse_formula("(E x y)"), {"x": 0})
    with pytest.raises(UnboundVariable):
        solutions(s, parse_formula("(E x y)"), ["x"])


def naive_eval(s, formula, asg):
    """Tiny independent evaluator for the quantifier-free fragment."""
    if isinstance(formula, Rel):
        return tuple(asg[v] for v in formula.args) in s.relations[formula.name].tuples
    if isinstance(formula, Eq):
        return asg[formula.left] == asg[formula.right]
    if isinstance(formula, Not):
        return not naive_eval(s, formula.body, asg)
    if isinstance(formula, And):
        return all(naive_eval(s, p, asg) for p in formula.parts)
    raise TypeError


def test_eval_against_truth_table_on_random_qf_formulas():
    rng = random.Random(0)
    s = c5_structure()
    variables = ["x", "y", "z"]

    def random_qf(depth):
        if depth == 0 or rng.random() < 0.3:
            if rng.random() < 0.5:
                return Rel("E", (rng.choice(variables), rng.choice(variables)))
            return Eq(rng.choice(variables), rng.choice(variables))
        kind = rng.randrange(2)
        if kind == 0:
            return Not(random_qf(depth - 1))
        return And((random_qf(depth - 1), random_qf(depth - 1)))

    for _ in range(50):
        f = random_qf(3)
        for values in itertools.product(range(5), repeat=3):
            asg = dict(zip(variables, values))
            assert eval_formula(s, f, asg) == naive_eval(s, f, asg)


def brute_automorphisms(s):
    out = []
    for perm in itertools.permutations(range(s.m)):
        ok = True
        for rel in s.relations.values():
            if {tuple(perm[x] for x in t) for t in rel.tuples} != rel.tuples:
                ok = False
                break
        if ok:
            out.append(perm)
    return sorted(out)


def test_automorphism_counts():
    s = c5_structure()
    auts = automorphisms(s)
    assert len(auts) == 10
    assert auts == brute_automorphisms(s)

    empty4 = structure(4, {"E": (2, [])})
    assert len(automorphisms(empty4)) == 24

    ptree, _ = prefix_tree_structure()
    auts = automorphisms(ptree)
    assert len(auts) == 8
    assert auts == brute_automorphisms(ptree)


def test_automorphisms_form_a_group():
    s = c5_structure()
    auts = set(automorphisms(s))
    for a in auts:
        inverse = tuple(a.index(i) for i in range(5))
        assert inverse in auts
        for b in auts:
            assert tuple(a[b[i]] for i in range(5)) in auts


def test_automorphism_listing_guard():
    big = structure(17, {"E": (2, [])})
    with pytest.raises(TooLarge):
        automorphisms(big)


def test_orbit_examples():
    s = c5_structure()
    assert orbit_equivalent(s, (0, 3), (0, 3), fixed=(1, 2))
    # 0 and 2 are the two neighbors of 1: the reflection through 1 swaps them
    assert orbit_equivalent(s, (0,), (2,), fixed=(1,))
    assert not orbit_equivalent(s, (0, 1), (0, 2), fixed=(0,))
    assert not orbit_equivalent(s, (0,), (0, 1))


def test_orbit_is_equivalence_and_refines_atomic_types():
    s = c5_structure()
    rng = random.Random(1)
    tuples = [tuple(rng.randrange(5) for _ in range(2)) for _ in range(15)]
    for a in tuples:
        assert orbit_equivalent(s, a, a)
    for a, b in itertools.combinations(tuples, 2):
        ab = orbit_equivalent(s, a, b)
        assert ab == orbit_equivalent(s, b, a)
        if ab:
            # atomic types agree
            assert ((a[0], a[1]) in s.relations["E"].tuples) == (
                (b[0], b[1]) in s.relations["E"].tuples
            )
            assert (a[0] == a[1]) == (b[0] == b[1])
    for a, b, c in itertools.combinations(tuples, 3):
        if orbit_equivalent(s, a, b) and orbit_equivalent(s, b, c):
            assert orbit_equivalent(s, a, c)


def test_structure_json_roundtrip():
    s = c5_structure()
    assert structure_from_json(structure_to_json(s)) == s
