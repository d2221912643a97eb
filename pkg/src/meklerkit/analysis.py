"""Element analysis in G(A): centralizers, equivalences, types, transversals.

Everything here rides on one observation: commutation only sees the image of
an element mod the center, so centralizers, the three equivalences and the
type classification are all linear algebra on generator-exponent vectors.
For a u-vector x the commuting directions form

    K(x) = { y : x_i y_j - x_j y_i = 0 mod p for every non-edge (i, j) }

and C(g) is exactly the preimage of K(u_g) under the projection mod center.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .errors import (
    AmbiguousHandle,
    NoComplement,
    NoHandleFound,
    NotTypeP,
    TooLarge,
)
from .graphs import Graph, graph, graph_iso
from .group import GroupContext, GroupElement, is_central, multiply
from .linalg import Subspace, inv_mod, nullspace, standard_complement

SWEEP_BOUND = 10**6


class TypeKind(Enum):
    CENTRAL = "central"
    ONE_NU = "1nu"
    ONE_IOTA = "1iota"
    P_MINUS_ONE = "p-1"
    TYPE_P = "p"
    ANOMALOUS = "anomalous"


@dataclass(frozen=True)
class TypeLabel:
    kind: TypeKind
    q: int
    isolated: bool


CENTRAL_LABEL = TypeLabel(TypeKind.CENTRAL, 0, False)


# ── Centralizers and equivalences ──────────────────────────────────────────


def central_u_space(ctx: GroupContext) -> Subspace:
    """Directions whose elements are central: vertices adjacent to all others."""
    if "u_z" not in ctx.cache:
        noncentral = set(ctx.noncentral_vertices)
        rows = []
        for i in range(ctx.n):
            if i not in noncentral:
                e = [0] * ctx.n
                e[i] = 1
                rows.append(tuple(e))
        ctx.cache["u_z"] = Subspace.from_vectors(ctx.p, ctx.n, rows)
    return ctx.cache["u_z"]


def _is_central_dir(ctx: GroupContext, u) -> bool:
    return all(u[i] == 0 for i in ctx.noncentral_vertices)


def commuting_space(ctx: GroupContext, u) -> Subspace:
    rows = []
    for (i, j) in ctx.nonedges:
        if u[i] or u[j]:
            row = [0] * ctx.n
            row[j] = u[i] % ctx.p
            row[i] = (-u[j]) % ctx.p
            rows.append(row)
    return nullspace(rows, ctx.p, ctx.n)


def centralizer_subspace(ctx: GroupContext, g: GroupElement) -> Subspace:
    """K(u_g); the centralizer of g is its full preimage mod the center."""
    return commuting_space(ctx, g.u)


def commutes(ctx: GroupContext, x, y) -> bool:
    p = ctx.p
    return all((x[i] * y[j] - x[j] * y[i]) % p == 0 for (i, j) in ctx.nonedges)


def _approx_canon(ctx: GroupContext, u):
    """Canonical representative of the class {r*u + z : r != 0, z central dir}.

    None for central directions.  Reduces mod the central directions, then
    scales the first nonzero coordinate to 1.
    """
    red = central_u_space(ctx).reduce(u)
    lead = next((x for x in red if x), None)
    if lead is None:
        return None
    r = inv_mod(lead, ctx.p)
    return tuple((r * x) % ctx.p for x in red)


def sim_equivalent(ctx: GroupContext, g: GroupElement, h: GroupElement) -> bool:
    return centralizer_subspace(ctx, g) == centralizer_subspace(ctx, h)


def approx_equivalent(ctx: GroupContext, g: GroupElement, h: GroupElement) -> bool:
    # r = 0 is excluded for non-central pairs, else ~ would not refine sim.
    cg, ch = is_central(ctx, g), is_central(ctx, h)
    if cg or ch:
        return cg and ch
    return _approx_canon(ctx, g.u) == _approx_canon(ctx, h.u)


def z_equivalent(ctx: GroupContext, g: GroupElement, h: GroupElement) -> bool:
    uz = central_u_space(ctx)
    return uz.reduce(g.u) == uz.reduce(h.u)


# ── Classification sweep ───────────────────────────────────────────────────


@dataclass
class SweepResult:
    labels: dict  # u-vector -> TypeLabel (non-central vectors only)
    class_key: dict  # u-vector -> canonical K basis
    buckets: dict  # K basis -> tuple of member u-vectors
    bucket_label: dict  # K basis -> TypeLabel
    class_rep: dict  # K basis -> lex-least normalized member


def sweep_classification(ctx: GroupContext) -> SweepResult:
    """Bucket all nonzero non-central u-vectors by their commuting space.

    One pass over p^n vectors; q counts approx-classes inside each bucket and
    isolation is decided by comparing cardinalities of the commuting space
    against a single approx-class.
    """
    if "sweep" in ctx.cache:
        return ctx.cache["sweep"]
    p, n = ctx.p, ctx.n
    if p**n > SWEEP_BOUND:
        raise TooLarge(f"sweep over {p**n} vectors exceeds {SWEEP_BOUND}")
    u_z = central_u_space(ctx)
    approx_size = (p - 1) * p**u_z.dim
    noncentral_cols = list(ctx.noncentral_vertices)
    buckets = {}
    for u in itertools.product(range(p), repeat=n):
        if _is_central_dir(ctx, u):
            continue
        key = commuting_space(ctx, u).basis
        buckets.setdefault(key, []).append(u)
    labels, class_key, bucket_label, class_rep = {}, {}, {}, {}
    for key, members in buckets.items():
        q = len({_approx_canon(ctx, u) for u in members})
        dim_k = len(key)
        # dim of K intersected with the central directions
        restricted = [[row[c] for c in noncentral_cols] for row in key]
        from .linalg import rref as _rref

        rank_restricted = len(_rref(restricted, p)[0]) if restricted else 0
        noncentral_in_k = p**dim_k - p ** (dim_k - rank_restricted)
        isolated = noncentral_in_k == approx_size
        if q == 1:
            kind = TypeKind.ONE_IOTA if isolated else TypeKind.ONE_NU
        elif q == p - 1:
            kind = TypeKind.P_MINUS_ONE
        elif q == p:
            kind = TypeKind.TYPE_P
        else:
            kind = TypeKind.ANOMALOUS
        label = TypeLabel(kind, q, isolated)
        bucket_label[key] = label
        class_rep[key] = min(_approx_canon(ctx, u) for u in members)
        for u in members:
            labels[u] = label
            class_key[u] = key
    result = SweepResult(labels, class_key, dict(buckets), bucket_label, class_rep)
    ctx.cache["sweep"] = result
    return result


def classify(ctx: GroupContext, g: GroupElement) -> TypeLabel:
    if is_central(ctx, g):
        return CENTRAL_LABEL
    return sweep_classification(ctx).labels[g.u]


def isolated_by_enumeration(ctx: GroupContext, g: GroupElement) -> bool:
    """Literal isolation check: every non-central commuting direction is
    approx-equivalent to g.  Oracle for the cardinality shortcut in the sweep."""
    canon = _approx_canon(ctx, g.u)
    for y in centralizer_subspace(ctx, g).members():
        if _is_central_dir(ctx, y):
            continue
        if _approx_canon(ctx, y) != canon:
            return False
    return True


# ── Handles and proper elements ────────────────────────────────────────────


def handle_of(ctx: GroupContext, g: GroupElement) -> GroupElement:
    """The 1-nu class representative commuting with a type-p element.

    Raises AmbiguousHandle if several non-equivalent handles are found; at
    this scale that would falsify the uniqueness claim and must be loud.
    """
    label = classify(ctx, g)
    if label.kind is not TypeKind.TYPE_P:
        raise NotTypeP(f"element has kind {label.kind.value}, not p")
    sweep = sweep_classification(ctx)
    keys = set()
    for y in centralizer_subspace(ctx, g).members():
        if _is_central_dir(ctx, y):
            continue
        if sweep.labels[y].kind is TypeKind.ONE_NU:
            keys.add(sweep.class_key[y])
    if not keys:
        raise NoHandleFound("no commuting 1nu element")
    if len(keys) > 1:
        raise AmbiguousHandle(f"{len(keys)} non-equivalent handles")
    rep = sweep.class_rep[keys.pop()]
    return ctx.element(rep, (0,) * ctx.m)


def v_nu(ctx: GroupContext) -> Subspace:
    """Span of the u-vectors of all type-1nu elements; cached per context."""
    if "v_nu" not in ctx.cache:
        sweep = sweep_classification(ctx)
        vecs = [
            u for u, label in sweep.labels.items() if label.kind is TypeKind.ONE_NU
        ]
        ctx.cache["v_nu"] = Subspace.from_vectors(ctx.p, ctx.n, vecs)
    return ctx.cache["v_nu"]


def is_proper(ctx: GroupContext, g: GroupElement) -> bool:
    """Not a product of type-1nu elements, i.e. u_g outside their span."""
    return not v_nu(ctx).contains(g.u)


# ── Transversals and the central complement ────────────────────────────────


@dataclass
class Transversal:
    x_nu: tuple
    x_p: tuple
    x_iota: tuple
    handle_of_xp: dict  # x_p element -> x_nu element


@dataclass
class TransversalReport:
    ok: bool
    clauses: dict  # {"nu": bool, "p": bool, "iota": bool, "handles": bool}
    details: tuple


def _lex_vectors(ctx: GroupContext):
    return itertools.product(range(ctx.p), repeat=ctx.n)


def _iota_base_space(ctx: GroupContext, iota_mode: str) -> Subspace:
    sweep = sweep_classification(ctx)
    if iota_mode == "nu_p":
        first = TypeKind.ONE_NU
    elif iota_mode == "iota_p":
        first = TypeKind.ONE_IOTA
    else:
        raise ValueError(f"unknown iota_mode {iota_mode!r}")
    vecs = [
        u
        for u, label in sweep.labels.items()
        if label.kind in (first, TypeKind.TYPE_P)
    ]
    vecs.extend(central_u_space(ctx).basis)
    return Subspace.from_vectors(ctx.p, ctx.n, vecs)


def _handle_key(ctx: GroupContext, key) -> tuple:
    sweep = sweep_classification(ctx)
    rep = sweep.buckets[key][0]
    h = handle_of(ctx, ctx.element(rep, (0,) * ctx.m))
    return sweep.class_key[h.u]


def build_transversal(ctx: GroupContext, iota_mode: str = "nu_p") -> Transversal:
    """Greedy deterministic transversal: lex-least representatives throughout."""
    sweep = sweep_classification(ctx)
    zero_w = (0,) * ctx.m
    nu_keys = sorted(
        (k for k, lb in sweep.bucket_label.items() if lb.kind is TypeKind.ONE_NU),
        key=lambda k: sweep.class_rep[k],
    )
    x_nu = tuple(ctx.element(sweep.class_rep[k], zero_w) for k in nu_keys)
    nu_element = {k: el for k, el in zip(nu_keys, x_nu)}

    s_p = Subspace.from_vectors(
        ctx.p, ctx.n, list(v_nu(ctx).basis) + list(central_u_space(ctx).basis)
    )
    chosen_keys = set()
    per_handle = {}
    x_p = []
    handle_map = {}
    for u in _lex_vectors(ctx):
        label = sweep.labels.get(u)
        if label is None or label.kind is not TypeKind.TYPE_P:
            continue
        if v_nu(ctx).contains(u):
            continue
        key = sweep.class_key[u]
        if key in chosen_keys:
            continue
        hk = _handle_key(ctx, key)
        ext = per_handle.get(hk, s_p)
        if ext.contains(u):
            continue
        chosen_keys.add(key)
        per_handle[hk] = ext.extended(u)
        el = ctx.element(u, zero_w)
        x_p.append(el)
        handle_map[el] = nu_element[hk]

    s_iota = _iota_base_space(ctx, iota_mode)
    ext = s_iota
    iota_keys = set()
    x_iota = []
    for u in _lex_vectors(ctx):
        label = sweep.labels.get(u)
        if label is None or label.kind is not TypeKind.ONE_IOTA:
            continue
        if v_nu(ctx).contains(u):
            continue
        key = sweep.class_key[u]
        if key in iota_keys or ext.contains(u):
            continue
        iota_keys.add(key)
        ext = ext.extended(u)
        x_iota.append(ctx.element(u, zero_w))

    return Transversal(x_nu, tuple(x_p), tuple(x_iota), handle_map)


def verify_transversal(
    ctx: GroupContext, t: Transversal, iota_mode: str = "nu_p"
) -> TransversalReport:
    """Re-check the four transversal clauses from scratch."""
    sweep = sweep_classification(ctx)
    details = []

    nu_ok = True
    seen_keys = set()
    for el in t.x_nu:
        if classify(ctx, el).kind is not TypeKind.ONE_NU:
            nu_ok = False
            details.append(("nu", "not 1nu", el.u))
        key = sweep.class_key.get(el.u)
        if key in seen_keys:
            nu_ok = False
            details.append(("nu", "duplicate class", el.u))
        seen_keys.add(key)
    all_nu_keys = {
        k for k, lb in sweep.bucket_label.items() if lb.kind is TypeKind.ONE_NU
    }
    if seen_keys != all_nu_keys:
        nu_ok = False
        details.append(("nu", "classes not covered", len(all_nu_keys) - len(seen_keys)))

    s_p = Subspace.from_vectors(
        ctx.p, ctx.n, list(v_nu(ctx).basis) + list(central_u_space(ctx).basis)
    )
    p_ok = True
    p_keys = set()
    per_handle = {}
    for el in t.x_p:
        label = classify(ctx, el)
        if label.kind is not TypeKind.TYPE_P or not is_proper(ctx, el):
            p_ok = False
            details.append(("p", "not proper type p", el.u))
            continue
        key = sweep.class_key[el.u]
        if key in p_keys:
            p_ok = False
            details.append(("p", "sim-equivalent pair", el.u))
        p_keys.add(key)
        hk = _handle_key(ctx, key)
        ext = per_handle.get(hk, s_p)
        if ext.contains(el.u):
            p_ok = False
            details.append(("p", "dependent within handle group", el.u))
        per_handle[hk] = ext.extended(el.u)
    if p_ok:
        for u in _lex_vectors(ctx):
            label = sweep.labels.get(u)
            if label is None or label.kind is not TypeKind.TYPE_P:
                continue
            if v_nu(ctx).contains(u) or sweep.class_key[u] in p_keys:
                continue
            hk = _handle_key(ctx, sweep.class_key[u])
            if not per_handle.get(hk, s_p).contains(u):
                p_ok = False
                details.append(("p", "not maximal", u))
                break

    s_iota = _iota_base_space(ctx, iota_mode)
    iota_ok = True
    iota_keys = set()
    ext = s_iota
    for el in t.x_iota:
        label = classify(ctx, el)
        if label.kind is not TypeKind.ONE_IOTA or not is_proper(ctx, el):
            iota_ok = False
            details.append(("iota", "not proper 1iota", el.u))
            continue
        key = sweep.class_key[el.u]
        if key in iota_keys:
            iota_ok = False
            details.append(("iota", "sim-equivalent pair", el.u))
        iota_keys.add(key)
        if ext.contains(el.u):
            iota_ok = False
            details.append(("iota", "dependent", el.u))
        ext = ext.extended(el.u)
    if iota_ok:
        for u in _lex_vectors(ctx):
            label = sweep.labels.get(u)
            if label is None or label.kind is not TypeKind.ONE_IOTA:
                continue
            if v_nu(ctx).contains(u) or sweep.class_key[u] in iota_keys:
                continue
            if not ext.contains(u):
                iota_ok = False
                details.append(("iota", "not maximal", u))
                break

    handles_ok = set(t.handle_of_xp) == set(t.x_p)
    if not handles_ok:
        details.append(("handles", "domain mismatch", ()))
    nu_set = set(t.x_nu)
    for el, h in t.handle_of_xp.items():
        if h not in nu_set:
            handles_ok = False
            details.append(("handles", "handle not in x_nu", el.u))
            continue
        try:
            true_handle = handle_of(ctx, el)
        except (NotTypeP, NoHandleFound, AmbiguousHandle) as exc:
            handles_ok = False
            details.append(("handles", str(exc), el.u))
            continue
        if not sim_equivalent(ctx, h, true_handle):
            handles_ok = False
            details.append(("handles", "wrong handle class", el.u))

    clauses = {"nu": nu_ok, "p": p_ok, "iota": iota_ok, "handles": handles_ok}
    return TransversalReport(all(clauses.values()), clauses, tuple(details))


def subgroup_closure(ctx: GroupContext, gens, limit: int = SWEEP_BOUND):
    """All products of the generators (a subgroup: the group is finite)."""
    elements = {ctx.identity()}
    frontier = [ctx.identity()]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = multiply(ctx, x, g)
                if y not in elements:
                    if len(elements) >= limit:
                        raise TooLarge("subgroup closure exceeded limit")
                    elements.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elements)


def _full_coords(ctx: GroupContext, el: GroupElement):
    return el.u + el.w


def complement_H(ctx: GroupContext, t: Transversal) -> Subspace:
    """Central complement H with <X> * H = G and trivial intersection.

    Computed as a linear complement, inside the center, of the central part
    of <X>; verified by order arithmetic and by enumerating H.  Returns the
    zero subspace when <X> is the whole group.
    """
    if ctx.order() > SWEEP_BOUND:
        raise TooLarge("group too large to verify the factorization")
    ambient = ctx.n + ctx.m
    gens = list(t.x_nu) + list(t.x_p) + list(t.x_iota)
    closure = subgroup_closure(ctx, gens)
    central_rows = []
    noncentral = set(ctx.noncentral_vertices)
    for i in range(ctx.n):
        if i not in noncentral:
            e = [0] * ambient
            e[i] = 1
            central_rows.append(tuple(e))
    for k in range(ctx.m):
        e = [0] * ambient
        e[ctx.n + k] = 1
        central_rows.append(tuple(e))
    z_space = Subspace.from_vectors(ctx.p, ambient, central_rows)
    c_x = Subspace.from_vectors(
        ctx.p,
        ambient,
        [_full_coords(ctx, el) for el in closure if is_central(ctx, el)],
    )
    h = standard_complement(c_x, z_space)
    if len(closure) * ctx.p**h.dim != ctx.order():
        raise NoComplement(
            f"|<X>| * |H| = {len(closure)} * {ctx.p ** h.dim} != {ctx.order()}"
        )
    for v in h.members():
        if any(v):
            el = ctx.element(v[: ctx.n], v[ctx.n :])
            if el in closure:
                raise NoComplement(f"nontrivial intersection at {v}")
    return h


# ── Graph interpretation ───────────────────────────────────────────────────


def gamma(ctx: GroupContext) -> Graph:
    """Graph on the 1nu classes, with edges given by commutation.

    Well-defined because commutation only depends on the centralizer, which
    is constant on each class; the tests spot-check this on random members.
    """
    sweep = sweep_classification(ctx)
    reps = sorted(
        sweep.class_rep[k]
        for k, lb in sweep.bucket_label.items()
        if lb.kind is TypeKind.ONE_NU
    )
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(len(reps)), 2)
        if commutes(ctx, reps[a], reps[b])
    ]
    return graph(len(reps), edges) if reps else graph(1, [])


def gamma_roundtrip(ctx: GroupContext):
    """Isomorphism between the interpreted graph and the source graph, or None."""
    return graph_iso(gamma(ctx), ctx.graph)
