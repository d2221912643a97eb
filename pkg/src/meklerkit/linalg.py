"""Exact linear algebra over Z/p: row echelon forms, nullspaces, subspaces."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import TooLarge


def inv_mod(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


def rref(rows, p: int):
    """Reduced row-echelon form mod p.

    Returns (reduced rows as tuple of tuples, pivot column tuple). Zero rows
    are dropped, so the result is the canonical form of the row space.
    """
    if len(rows) == 0:
        return (), ()
    a = np.array(rows, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if a[i, c] % p != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        for i in range(nrows):
            if i != r and a[i, c] % p != 0:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    reduced = tuple(tuple(int(x) for x in a[i]) for i in range(r))
    return reduced, tuple(pivots)


class Subspace:
    """A subspace of (Z/p)^n held as a canonical RREF basis.

    Equality of subspaces is componentwise equality of the basis matrices.
    """

    __slots__ = ("p", "ambient", "basis", "pivots")

    def __init__(self, p: int, ambient: int, basis=(), pivots=None):
        self.p = p
        self.ambient = ambient
        if pivots is None:
            basis, pivots = rref(basis, p)
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, p: int, ambient: int, vectors) -> "Subspace":
        vecs = [v for v in vectors]
        if not vecs:
            return cls(p, ambient, ())
        return cls(p, ambient, vecs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec):
        """Canonical coset representative of vec modulo this subspace."""
        v = [x % self.p for x in vec]
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                coef = v[c]
                for j in range(self.ambient):
                    v[j] = (v[j] - coef * row[j]) % self.p
        return tuple(v)

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def contains_all(self, vectors) -> bool:
        return all(self.contains(v) for v in vectors)

    def extended(self, vec) -> "Subspace":
        return Subspace(self.p, self.ambient, self.basis + (tuple(vec),))

    def members(self, limit: int = 1_000_000):
        """All vectors of the subspace, including zero."""
        if self.p ** self.dim > limit:
            raise TooLarge(f"subspace has {self.p ** self.dim} members")
        zero = (0,) * self.ambient
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            v = list(zero)
            for c, row in zip(coeffs, self.basis):
                if c:
                    for j in range(self.ambient):
                        v[j] = (v[j] + c * row[j]) % self.p
            yield tuple(v)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(p={self.p}, ambient={self.ambient}, dim={self.dim})"


def nullspace(rows, p: int, ambient: int) -> Subspace:
    """Kernel of the linear map given by constraint rows."""
    reduced, pivots = rref(rows, p)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ambient) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [0] * ambient
        v[fc] = 1
        for row, pc in zip(reduced, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(tuple(v))
    return Subspace(p, ambient, basis)


def span_dim(p: int, ambient: int, vectors) -> int:
    return Subspace.from_vectors(p, ambient, vectors).dim


def standard_complement(sub: Subspace, within: Subspace) -> Subspace:
    """Greedy complement of `sub` inside `within` (sub must lie in within).

    Scans within's canonical basis rows in order and keeps those independent
    of sub plus the rows already kept; deterministic by construction.
    """
    chosen = []
    current = sub
    for row in within.basis:
        if not current.contains(row):
            chosen.append(row)
            current = current.extended(row)
    return Subspace.from_vectors(sub.p, sub.ambient, chosen)
