"""Normal-form arithmetic against the collection oracle and the group laws."""

import itertools
import random

import pytest

from meklerkit.errors import (
    ContextMismatch,
    GraphNotNice,
    NotAnOddPrime,
    SchemaError,
    TooLarge,
)
from meklerkit.graphs import complete_graph, cycle_graph, graph
from meklerkit.group import (
    collect_product,
    commutator,
    commutes_with_all_generators,
    element_from_json,
    element_to_json,
    group_order,
    inverse,
    is_central,
    mk_context,
    multiply,
    power,
)


@pytest.fixture(scope="module")
def c5_ctx():
    return mk_context(3, cycle_graph(5))


def test_context_c5_has_five_nonedges(c5_ctx):
    assert c5_ctx.m == 5
    assert c5_ctx.nonedges == ((0, 2), (0, 3), (1, 3), (1, 4), (2, 4))


def test_context_rejects_bad_primes():
    with pytest.raises(NotAnOddPrime):
        mk_context(2, cycle_graph(5))
    with pytest.raises(NotAnOddPrime):
        mk_context(9, cycle_graph(5))
    with pytest.raises(NotAnOddPrime):
        mk_context(19, cycle_graph(5))


def test_context_niceness_gate():
    with pytest.raises(GraphNotNice):
        mk_context(3, complete_graph(3))
    ctx = mk_context(3, complete_graph(3), allow_non_nice=True)
    assert ctx.m == 0


def test_identity_law(c5_ctx):
    rng = random.Random(0)
    e = c5_ctx.identity()
    for _ in range(100):
        g = c5_ctx.random_element(rng)
        assert multiply(c5_ctx, e, g) == g
        assert multiply(c5_ctx, g, e) == g


def test_edge_generator_product_has_no_commutator_part(c5_ctx):
    prod = multiply(c5_ctx, c5_ctx.generator(0), c5_ctx.generator(1))
    assert prod.u == (1, 1, 0, 0, 0)
    assert prod.w == (0,) * 5


def test_nonedge_reversed_product_picks_up_minus_one(c5_ctx):
    prod = multiply(c5_ctx, c5_ctx.generator(2), c5_ctx.generator(0))
    assert prod.u == (1, 0, 1, 0, 0)
    expect = [0] * 5
    expect[c5_ctx.ne_index[(0, 2)]] = 2  # -1 mod 3
    assert prod.w == tuple(expect)
    assert prod == collect_product(c5_ctx, c5_ctx.generator(2), c5_ctx.generator(0))


def test_closed_form_equals_oracle_exhaustively_on_restriction():
    # C5 restricted to generators 0,1,2: a path with single non-edge (0,2)
    ctx = mk_context(3, graph(3, [(0, 1), (1, 2)]), allow_non_nice=True)
    elements = list(ctx.enumerate_elements())
    assert len(elements) == 81
    for g in elements:
        for h in elements:
            assert multiply(ctx, g, h) == collect_product(ctx, g, h)


def test_closed_form_equals_oracle_sampled(c5_ctx):
    rng = random.Random(1)
    for _ in range(2000):
        g, h = c5_ctx.random_element(rng), c5_ctx.random_element(rng)
        assert multiply(c5_ctx, g, h) == collect_product(c5_ctx, g, h)


def test_group_laws_sampled(c5_ctx):
    rng = random.Random(2)
    e = c5_ctx.identity()
    for _ in range(300):
        g, h, k = (c5_ctx.random_element(rng) for _ in range(3))
        assert multiply(c5_ctx, multiply(c5_ctx, g, h), k) == multiply(
            c5_ctx, g, multiply(c5_ctx, h, k)
        )
        assert multiply(c5_ctx, g, inverse(c5_ctx, g)) == e
        assert multiply(c5_ctx, inverse(c5_ctx, g), g) == e


def test_exponent_p(c5_ctx):
    rng = random.Random(3)
    e = c5_ctx.identity()
    for _ in range(100):
        assert power(c5_ctx, c5_ctx.random_element(rng), 3) == e


def test_power_matches_repeated_multiplication(c5_ctx):
    rng = random.Random(4)
    for _ in range(50):
        g = c5_ctx.random_element(rng)
        k = rng.randrange(0, 9)
        acc = c5_ctx.identity()
        for _ in range(k):
            acc = multiply(c5_ctx, acc, g)
        assert power(c5_ctx, g, k) == acc


def test_commutator_examples(c5_ctx):
    e = c5_ctx.identity()
    rng = random.Random(5)
    g = c5_ctx.random_element(rng)
    assert commutator(c5_ctx, g, g) == e
    # non-edge generators: [a_0, a_2] = +1 at coordinate (0, 2)
    c = commutator(c5_ctx, c5_ctx.generator(0), c5_ctx.generator(2))
    assert c.u == (0,) * 5
    expect = [0] * 5
    expect[c5_ctx.ne_index[(0, 2)]] = 1
    assert c.w == tuple(expect)
    # edge generators commute
    assert commutator(c5_ctx, c5_ctx.generator(0), c5_ctx.generator(1)) == e


def test_class_two_properties(c5_ctx):
    rng = random.Random(6)
    e = c5_ctx.identity()
    for _ in range(200):
        g, h, k = (c5_ctx.random_element(rng) for _ in range(3))
        c = commutator(c5_ctx, g, h)
        assert is_central(c5_ctx, c)
        assert commutator(c5_ctx, c, k) == e
        # bilinearity in the first slot
        left = commutator(c5_ctx, multiply(c5_ctx, g, k), h)
        right = multiply(
            c5_ctx, commutator(c5_ctx, g, h), commutator(c5_ctx, k, h)
        )
        assert left == right
        # closed-form commutator coordinates
        expect = tuple(
            (g.u[i] * h.u[j] - g.u[j] * h.u[i]) % 3 for i, j in c5_ctx.nonedges
        )
        assert c.w == expect


def test_is_central_examples(c5_ctx):
    assert is_central(c5_ctx, c5_ctx.identity())
    assert is_central(c5_ctx, c5_ctx.element((0,) * 5, (1, 2, 0, 1, 0)))
    assert not is_central(c5_ctx, c5_ctx.generator(0))


def test_is_central_cross_validated_on_every_element(c5_ctx):
    for g in c5_ctx.enumerate_elements():
        assert is_central(c5_ctx, g) == commutes_with_all_generators(c5_ctx, g)


def test_enumeration_and_order(c5_ctx):
    assert c5_ctx.order() == 3**10 == group_order(c5_ctx)
    seen = set()
    for g in c5_ctx.enumerate_elements():
        assert g not in seen
        seen.add(g)
    assert len(seen) == 3**10

    k3 = mk_context(3, complete_graph(3), allow_non_nice=True)
    assert k3.order() == 27 == group_order(k3)

    big = mk_context(5, cycle_graph(5))
    assert big.order() == 5**10
    with pytest.raises(TooLarge):
        big.enumerate_elements()


def test_order_formula_matches_nonedge_count():
    for g, p in ((cycle_graph(5), 3), (cycle_graph(6), 3)):
        ctx = mk_context(p, g)
        n, edges = g.n, len(g.edges)
        assert ctx.order() == p ** (n + n * (n - 1) // 2 - edges)


def test_context_mismatch(c5_ctx):
    other = mk_context(3, cycle_graph(6))
    with pytest.raises(ContextMismatch):
        multiply(c5_ctx, other.identity(), c5_ctx.identity())
    with pytest.raises(ContextMismatch):
        c5_ctx.element((0,) * 4, (0,) * 5)


def test_element_json_roundtrip(c5_ctx):
    el = c5_ctx.element((1, 0, 2, 0, 0), (0, 1, 0, 0, 2))
    assert element_from_json(c5_ctx, element_to_json(el)) == el
    with pytest.raises(SchemaError):
        element_from_json(c5_ctx, {"u": [1, 0, 2, 0, 0], "w": [0, 1, 0, 0]})
    with pytest.raises(SchemaError):
        element_from_json(c5_ctx, {"u": [3, 0, 0, 0, 0], "w": [0] * 5})
