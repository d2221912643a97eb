"""Strong-language operations, proof maps and monochromatic extraction."""

import itertools
import random

import pytest

from meklerkit.errors import (
    LengthMismatch,
    LevelsOutOfRange,
    RangeOverflow,
    SchemaError,
    ShapeMismatch,
)
from meklerkit.trees import (
    Coloring,
    TreeDomain,
    coloring_from_function,
    coloring_from_json,
    coloring_to_json,
    find_cofinal_color,
    gmap,
    incomparable,
    is_distant_siblings,
    level_subsequence_embed,
    lex_key,
    lex_less,
    meet,
    meet_closure,
    mono_subtree_sop1,
    mono_subtree_sop2,
    mono_subtree_tp1,
    node_str,
    parse_node,
    prec,
    prec_eq,
    qftp_equal,
    qftp_fingerprint,
    validate_mono_embedding,
)

N = parse_node


def test_basic_order_examples():
    assert meet(N("010"), N("011")) == N("01")
    assert lex_less((), N("0"))
    assert lex_less(N("0"), N("1"))
    assert incomparable(N("00"), N("01"))
    assert not incomparable(N("0"), N("00"))
    assert prec(N("0"), N("00")) and prec_eq(N("0"), N("0")) and not prec(N("0"), N("0"))


def test_meet_axioms_exhaustive():
    nodes = [n for n in TreeDomain(3, 3).nodes()]
    for a, b in itertools.product(nodes, repeat=2):
        m = meet(a, b)
        assert m == meet(b, a)
        assert prec_eq(m, a) and prec_eq(m, b)
        assert meet(a, a) == a
        for c in nodes:
            assert meet(meet(a, b), c) == meet(a, meet(b, c))


def test_lex_is_strict_total_order():
    nodes = [n for n in TreeDomain(3, 3).nodes()]
    for a, b in itertools.product(nodes, repeat=2):
        if a == b:
            assert not lex_less(a, b)
        else:
            assert lex_less(a, b) != lex_less(b, a)
        if prec(a, b):
            assert lex_less(a, b)
    ordered = sorted(nodes, key=lex_key)
    for i, j in itertools.combinations(range(len(ordered)), 2):
        assert lex_less(ordered[i], ordered[j])


def test_meet_closure_examples():
    assert meet_closure((N("00"), N("01"))) == (N("0"), N("00"), N("01"))
    assert meet_closure((N("01"),)) == (N("01"),)
    assert meet_closure((N("000"), N("010"), N("011"))) == (
        N("0"),
        N("000"),
        N("01"),
        N("010"),
        N("011"),
    )


def test_meet_closure_idempotent_and_meet_closed():
    rng = random.Random(0)
    for _ in range(200):
        tup = tuple(
            tuple(rng.randrange(3) for _ in range(rng.randrange(4)))
            for _ in range(rng.randrange(1, 5))
        )
        closure = meet_closure(tup)
        assert meet_closure(closure) == closure
        for a, b in itertools.combinations(closure, 2):
            assert meet(a, b) in closure


def test_qftp_examples():
    assert qftp_equal((N("0"), N("1")), (N("10"), N("11")))
    assert not qftp_equal((N("0"), N("1")), (N("0"), N("00")))
    with pytest.raises(LengthMismatch):
        qftp_equal((N("0"),), (N("0"), N("1")))


def test_qftp_invariant_under_prefix_translation():
    rng = random.Random(1)
    for _ in range(300):
        tup = tuple(
            tuple(rng.randrange(3) for _ in range(rng.randrange(3)))
            for _ in range(rng.randrange(1, 4))
        )
        shift = (rng.randrange(3),)
        moved = tuple(shift + node for node in tup)
        assert qftp_fingerprint(tup) == qftp_fingerprint(moved)


def test_meet_closure_determinacy_sampled():
    # agreeing tuples have agreeing meet closures
    rng = random.Random(2)
    agreements = 0
    for _ in range(2000):
        t1 = tuple(
            tuple(rng.randrange(3) for _ in range(rng.randrange(4)))
            for _ in range(rng.randrange(1, 4))
        )
        t2 = tuple(
            tuple(rng.randrange(3) for _ in range(rng.randrange(4)))
            for _ in range(len(t1))
        )
        if qftp_fingerprint(t1) != qftp_fingerprint(t2):
            continue
        agreements += 1
        assert qftp_fingerprint(meet_closure(t1)) == qftp_fingerprint(meet_closure(t2))
    assert agreements > 50


def test_distant_siblings():
    for xi in ((), N("1"), N("02")):
        sibs = [xi + (d,) for d in range(3)]
        assert is_distant_siblings(sibs, 3)
        assert is_distant_siblings(sibs[:2], 2)
    assert not is_distant_siblings([N("0"), N("00")], 2)
    assert not is_distant_siblings([N("00"), N("01"), N("1")], 3)
    assert not is_distant_siblings([N("0"), N("0")], 2)


def test_level_embed_identity_levels():
    host = TreeDomain(5, 2)
    emb = level_subsequence_embed(host, [0, 1, 2])
    assert all(emb[n] == n for n in emb)


def test_level_embed_hand_stepped():
    emb = level_subsequence_embed(TreeDomain(8, 2), [1, 3])
    assert emb[()] == N("0")
    assert emb[N("1")] == N("001")
    assert emb[N("0")] == N("000")


def test_level_embed_preserves_orders():
    rng = random.Random(3)
    host = TreeDomain(9, 3)
    emb = level_subsequence_embed(host, [1, 3, 6, 8])
    keys = list(emb)
    for _ in range(1000):
        a, b = rng.choice(keys), rng.choice(keys)
        assert prec(a, b) == prec(emb[a], emb[b])
        if a != b:
            assert lex_less(a, b) == lex_less(emb[a], emb[b])
        mapped = emb[meet(a, b)]
        image_meet = meet(emb[a], emb[b])
        assert prec_eq(mapped, image_meet)
        assert not any(image_meet[len(mapped):])


def test_level_embed_rejects_bad_levels():
    host = TreeDomain(4, 2)
    with pytest.raises(LevelsOutOfRange):
        level_subsequence_embed(host, [2, 1])
    with pytest.raises(LevelsOutOfRange):
        level_subsequence_embed(host, [1, 4])
    with pytest.raises(LevelsOutOfRange):
        level_subsequence_embed(host, [])


def test_gmap_examples():
    host = TreeDomain(8, 3)
    g = gmap(host, [1, 3])
    assert g[N("12")] == N("0102")
    assert g[N("1")] == N("01")
    ident = gmap(TreeDomain(8, 2), [0])
    assert ident[N("1")] == N("1")
    assert ident[()] == ()


def test_gmap_meet_property():
    rng = random.Random(4)
    host = TreeDomain(11, 2)
    g = gmap(host, [0, 2, 5, 9])
    keys = list(g)
    for _ in range(1000):
        a, b = rng.choice(keys), rng.choice(keys)
        assert prec(a, b) == prec(g[a], g[b])
        if a != b:
            assert lex_less(a, b) == lex_less(g[a], g[b])
        mapped = g[meet(a, b)]
        image_meet = meet(g[a], g[b])
        assert prec_eq(mapped, image_meet)
        assert not any(image_meet[len(mapped):])


def test_gmap_range_overflow():
    with pytest.raises(RangeOverflow):
        gmap(TreeDomain(4, 2), [1, 3])
    with pytest.raises(RangeOverflow):
        gmap(TreeDomain(4, 2), [2, 1])


def test_cofinal_color_examples():
    dom = TreeDomain(4, 2)
    assert find_cofinal_color(dom, coloring_from_function(dom, lambda n: 0)) == (0, ())
    leaf = coloring_from_function(dom, lambda n: 1 if len(n) == 3 else 0)
    assert find_cofinal_color(dom, leaf) == (1, ())
    first = coloring_from_function(dom, lambda n: n[0] if n else 0)
    assert find_cofinal_color(dom, first) == (0, (0,))
    with pytest.raises(ShapeMismatch):
        find_cofinal_color(TreeDomain(3, 3), coloring_from_function(TreeDomain(3, 3), lambda n: 0))


def test_mono_constant_coloring_identity_embedding():
    host = TreeDomain(8, 2)
    const = coloring_from_function(host, lambda n: 0, num_colors=1)
    res = mono_subtree_sop2(host, const, 3)
    assert res.found and res.color == 0
    # leftmost embedding is the identity on the abstract tree
    assert all(res.embedding[n] == n for n in res.embedding)
    for kind, res in (
        ("sop1", mono_subtree_sop1(host, const, 3)),
        ("tp1", mono_subtree_tp1(host, const, 3, 3)),
    ):
        assert res.found
        assert validate_mono_embedding(kind, host, const, res)


def test_mono_parity_coloring():
    host = TreeDomain(16, 2)
    parity = coloring_from_function(host, lambda n: len(n) % 2)
    for kind, res in (
        ("sop2", mono_subtree_sop2(host, parity, 3)),
        ("sop1", mono_subtree_sop1(host, parity, 3)),
        ("tp1", mono_subtree_tp1(host, parity, 3, 2)),
    ):
        assert res.found, kind
        assert validate_mono_embedding(kind, host, parity, res), kind


def test_mono_left_spine_reports_per_color_failure():
    host = TreeDomain(8, 2)
    spine = coloring_from_function(
        host, lambda n: 0 if not any(n) else 1, num_colors=2
    )
    res = mono_subtree_sop2(host, spine, 2)
    assert res.found and res.color == 1
    assert res.failed_colors == (0,)
    assert validate_mono_embedding("sop2", host, spine, res)


def test_validator_rejects_corrupted_embeddings():
    host = TreeDomain(8, 2)
    const = coloring_from_function(host, lambda n: 0, num_colors=1)
    res = mono_subtree_sop1(host, const, 3)
    assert validate_mono_embedding("sop1", host, const, res)
    res.embedding[(1,)] = res.embedding[(1,)] + (0,)  # last digit no longer 1
    assert not validate_mono_embedding("sop1", host, const, res)

    res2 = mono_subtree_sop2(host, const, 2)
    res2.embedding[(0,)] = (1, 0)  # breaks e(child) above e(parent)+digit
    assert not validate_mono_embedding("sop2", host, const, res2)


def test_tp1_embedding_hits_width():
    host = TreeDomain(12, 2)
    const = coloring_from_function(host, lambda n: 0, num_colors=1)
    res = mono_subtree_tp1(host, const, 3, 3)
    assert res.found
    abstract = TreeDomain(3, 3)
    assert set(res.embedding) == set(abstract.nodes())
    assert validate_mono_embedding("tp1", host, const, res)


def test_coloring_json_roundtrip_and_totality():
    dom = TreeDomain(3, 2)
    c = coloring_from_function(dom, lambda n: len(n) % 2)
    again = coloring_from_json(coloring_to_json(c))
    assert again.colors == c.colors
    data = coloring_to_json(c)
    del data["colors"]["0"]
    with pytest.raises(SchemaError):
        coloring_from_json(data)


def test_node_string_roundtrip():
    assert node_str(()) == ""
    assert parse_node("") == ()
    assert parse_node("0102") == (0, 1, 0, 2)
    with pytest.raises(SchemaError):
        parse_node("0a")
