"""Mod-p echelon forms and subspaces against brute-force enumeration."""

import itertools
import random

import pytest

from meklerkit.errors import TooLarge
from meklerkit.linalg import Subspace, nullspace, rref, standard_complement


def brute_kernel(rows, p, ambient):
    out = set()
    for v in itertools.product(range(p), repeat=ambient):
        if all(sum(r * x for r, x in zip(row, v)) % p == 0 for row in rows):
            out.add(v)
    return out


def test_rref_hand_example():
    reduced, pivots = rref([[2, 1, 0], [1, 1, 1]], 3)
    assert pivots == (0, 1)
    assert reduced == ((1, 0, 2), (0, 1, 2))
    # dependent rows collapse: (2,1,0) is twice (1,2,0) mod 3
    assert rref([[2, 1, 0], [1, 2, 0]], 3)[0] == ((1, 2, 0),)


def test_rref_drops_zero_rows():
    reduced, pivots = rref([[1, 1], [2, 2]], 3)
    assert reduced == ((1, 1),) and pivots == (0,)


def test_nullspace_matches_brute_force():
    rng = random.Random(0)
    p = 3
    for _ in range(30):
        ambient = rng.randrange(1, 5)
        rows = [
            [rng.randrange(p) for _ in range(ambient)]
            for _ in range(rng.randrange(0, 4))
        ]
        sub = nullspace(rows, p, ambient)
        members = set(sub.members())
        assert members == brute_kernel(rows, p, ambient)
        assert len(members) == p**sub.dim


def test_subspace_canonical_under_row_operations():
    rng = random.Random(1)
    p = 5
    basis = [(1, 2, 0, 4), (0, 1, 1, 1)]
    sub = Subspace.from_vectors(p, 4, basis)
    for _ in range(20):
        a, b = rng.randrange(1, p), rng.randrange(p)
        mixed = [
            tuple((a * x + b * y) % p for x, y in zip(basis[0], basis[1])),
            basis[1],
        ]
        assert Subspace.from_vectors(p, 4, mixed) == sub


def test_reduce_and_contains():
    sub = Subspace.from_vectors(3, 3, [(1, 0, 2)])
    assert sub.contains((2, 0, 1))
    assert not sub.contains((1, 1, 0))
    assert sub.reduce((1, 0, 2)) == (0, 0, 0)
    # coset representatives are constant on cosets
    assert sub.reduce((1, 1, 0)) == sub.reduce((2, 1, 2))


def test_members_guard():
    sub = Subspace.from_vectors(3, 14, [tuple(1 if i == j else 0 for i in range(14)) for j in range(14)])
    with pytest.raises(TooLarge):
        list(sub.members())


def test_standard_complement():
    p = 3
    full = Subspace.from_vectors(
        p, 4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    )
    sub = Subspace.from_vectors(p, 4, [(1, 1, 0, 0), (0, 0, 1, 2)])
    comp = standard_complement(sub, full)
    assert sub.dim + comp.dim == full.dim
    in_both = {v for v in comp.members() if sub.contains(v)}
    assert in_both == {(0, 0, 0, 0)}
