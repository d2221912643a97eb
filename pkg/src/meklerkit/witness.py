"""Witness-family checking over finite structures.

A witness family maps every node of a finite tree domain to a parameter tuple
in a finite structure; an instance is the family formula with its parameter
variables bound at a node.  "Consistent" always means jointly satisfiable
inside the structure.  The checkers verify the branch-consistency clause plus
the inconsistency pattern of each tree property, and report the first
counterexample in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import LengthMismatch, SchemaError, ShapeMismatch, TooLarge
from .folog import (
    FinStructure,
    bind_check,
    eval_formula,
    free_vars,
    orbit_equivalent,
    parse_formula,
    structure,
    structure_from_json,
)
from .trees import (
    TreeDomain,
    is_distant_siblings,
    lex_key,
    node_str,
    parse_node,
    prec_eq,
    qftp_fingerprint,
)


@dataclass
class WitnessFamily:
    domain: TreeDomain
    structure: FinStructure
    formula: object
    object_vars: tuple
    param_vars: tuple
    params: dict  # node -> tuple of universe elements

    def __post_init__(self):
        bind_check(self.structure, self.formula)
        extra = free_vars(self.formula) - set(self.object_vars) - set(self.param_vars)
        if extra:
            raise SchemaError(f"formula has undeclared variables {sorted(extra)}")
        width = len(self.param_vars)
        for node in self.domain.nodes():
            if node not in self.params:
                raise SchemaError(f"params missing node {node_str(node)!r}")
            if len(self.params[node]) != width:
                raise SchemaError(
                    f"params at {node_str(node)!r} must have width {width}"
                )
            if any(not 0 <= x < self.structure.m for x in self.params[node]):
                raise SchemaError(f"params at {node_str(node)!r} out of universe")


@dataclass
class ArrayFamily:
    structure: FinStructure
    formula: object
    object_vars: tuple
    param_vars: tuple
    rows: tuple  # ((c_00, c_01), (c_10, c_11), ...) of parameter tuples

    def __post_init__(self):
        bind_check(self.structure, self.formula)
        width = len(self.param_vars)
        for i, row in enumerate(self.rows):
            if len(row) != 2:
                raise SchemaError(f"row {i} must have two cells")
            for cell in row:
                if len(cell) != width or any(
                    not 0 <= x < self.structure.m for x in cell
                ):
                    raise SchemaError(f"bad cell in row {i}")

    @property
    def n_rows(self) -> int:
        return len(self.rows)


@dataclass
class CheckReport:
    kind: str
    ok: bool
    clauses: dict
    counterexample: tuple | None = None


# ── Satisfiability of instance sets ────────────────────────────────────────


def _jointly_satisfiable(fam_structure, formula, object_vars, param_vars, tuples):
    for values in itertools.product(range(fam_structure.m), repeat=len(object_vars)):
        asg = dict(zip(object_vars, values))
        ok = True
        for t in tuples:
            asg.update(zip(param_vars, t))
            if not eval_formula(fam_structure, formula, asg):
                ok = False
                break
        if ok:
            return True
    return False


def _family_sat(f: WitnessFamily, nodes) -> bool:
    return _jointly_satisfiable(
        f.structure,
        f.formula,
        f.object_vars,
        f.param_vars,
        [f.params[n] for n in nodes],
    )


def _branch_clause(f: WitnessFamily):
    """First maximal branch whose instances have no common solution, or None."""
    for leaf in f.domain.leaves():
        chain = f.domain.branch_nodes(leaf)
        if not _family_sat(f, chain):
            return leaf
    return None


def _sorted_nodes(domain):
    return sorted(domain.nodes(), key=lex_key)


# ── Tree-property checkers ─────────────────────────────────────────────────


def check_sop1(f: WitnessFamily) -> CheckReport:
    """Branch consistency plus: the 1-child instance at xi clashes with every
    instance above the 0-child of xi."""
    if f.domain.branching != 2:
        raise ShapeMismatch("sop1 check expects a binary domain")
    bad_branch = _branch_clause(f)
    clause_a = bad_branch is None
    clause_b = True
    counter = ("branch", bad_branch) if bad_branch else None
    for xi in _sorted_nodes(f.domain):
        if len(xi) + 1 >= f.domain.height:
            continue
        one = xi + (1,)
        for nu in f.domain.subtree(xi + (0,)):
            if _family_sat(f, [one, nu]):
                clause_b = False
                if counter is None:
                    counter = ("pair", (one, nu))
                break
        if not clause_b:
            break
    ok = clause_a and clause_b
    return CheckReport("sop1", ok, {"a": clause_a, "b": clause_b}, counter)


def _incomparable_pairs(domain):
    nodes = _sorted_nodes(domain)
    for a, b in itertools.combinations(nodes, 2):
        if not prec_eq(a, b) and not prec_eq(b, a):
            yield a, b


def check_sop2(f: WitnessFamily) -> CheckReport:
    """Branch consistency plus pairwise inconsistency over incomparable pairs."""
    if f.domain.branching != 2:
        raise ShapeMismatch("sop2 check expects a binary domain")
    return _pairwise_check(f, "sop2")


def check_tp1(f: WitnessFamily) -> CheckReport:
    """Same clauses as sop2 but on a domain of arbitrary branching."""
    return _pairwise_check(f, "tp1")


def _pairwise_check(f: WitnessFamily, kind: str) -> CheckReport:
    bad_branch = _branch_clause(f)
    clause_a = bad_branch is None
    clause_b = True
    counter = ("branch", bad_branch) if bad_branch else None
    for a, b in _incomparable_pairs(f.domain):
        if _family_sat(f, [a, b]):
            clause_b = False
            if counter is None:
                counter = ("pair", (a, b))
            break
    ok = clause_a and clause_b
    return CheckReport(kind, ok, {"a": clause_a, "b": clause_b}, counter)


def check_weak_ktp1(f: WitnessFamily, k: int) -> CheckReport:
    """Branch consistency plus inconsistency of every distant-sibling k-set."""
    if k < 2:
        raise ValueError("k must be at least 2")
    bad_branch = _branch_clause(f)
    clause_a = bad_branch is None
    clause_b = True
    counter = ("branch", bad_branch) if bad_branch else None
    nodes = _sorted_nodes(f.domain)
    for combo in itertools.combinations(nodes, k):
        if not is_distant_siblings(combo, k):
            continue
        if _family_sat(f, list(combo)):
            clause_b = False
            if counter is None:
                counter = ("siblings", combo)
            break
    ok = clause_a and clause_b
    return CheckReport(f"weak_{k}tp1", ok, {"a": clause_a, "b": clause_b}, counter)


def restrict_to_binary(f: WitnessFamily) -> WitnessFamily:
    if f.domain.branching < 2:
        raise ShapeMismatch("need branching >= 2 to restrict")
    domain = TreeDomain(f.domain.height, 2)
    params = {n: f.params[n] for n in domain.nodes()}
    return WitnessFamily(
        domain, f.structure, f.formula, f.object_vars, f.param_vars, params
    )


# ── Comb paths and arrays ──────────────────────────────────────────────────


def comb_paths(d: int):
    """Pairs (0^(i+1), 0^i + 1): a spine column and its sibling deviations.

    For i < j the node 0^(i+1) is a prefix of the second column's later
    entries, so a family passing the sop1 check turns the columns into a
    consistent / pairwise-inconsistent array.
    """
    if d < 1:
        raise ValueError("d must be positive")
    return [((0,) * (i + 1), (0,) * i + (1,)) for i in range(d)]


def array_from_family(f: WitnessFamily, d: int) -> ArrayFamily:
    """Rows (a at spine node, a at deviation node) along the comb paths."""
    rows = []
    for eta, nu in comb_paths(d):
        if not (f.domain.contains(eta) and f.domain.contains(nu)):
            raise ShapeMismatch(f"comb depth {d} exceeds the family domain")
        rows.append((f.params[eta], f.params[nu]))
    return ArrayFamily(
        f.structure, f.formula, f.object_vars, f.param_vars, tuple(rows)
    )


def check_sop1_array(
    a: ArrayFamily, k: int, check_indiscernible: bool = False
) -> CheckReport:
    """Row type equality over predecessors, column-0 consistency, column-1
    k-inconsistency; optionally order-indiscernibility of the rows."""
    if a.n_rows < 2 or k < 2:
        raise ShapeMismatch("need at least two rows and k >= 2")
    clauses = {}
    counter = None

    type_ok = True
    for i, (c0, c1) in enumerate(a.rows):
        fixed = sorted(
            {x for row in a.rows[:i] for cell in row for x in cell}
        )
        if not orbit_equivalent(a.structure, c0, c1, fixed):
            type_ok = False
            if counter is None:
                counter = ("type_eq", i)
            break
    clauses["type_eq"] = type_ok

    col0 = [row[0] for row in a.rows]
    col0_ok = _jointly_satisfiable(
        a.structure, a.formula, a.object_vars, a.param_vars, col0
    )
    clauses["col0_consistent"] = col0_ok
    if not col0_ok and counter is None:
        counter = ("col0", ())

    col1_ok = True
    for combo in itertools.combinations(range(a.n_rows), k):
        tuples = [a.rows[i][1] for i in combo]
        if _jointly_satisfiable(
            a.structure, a.formula, a.object_vars, a.param_vars, tuples
        ):
            col1_ok = False
            if counter is None:
                counter = ("col1", combo)
            break
    clauses["col1_k_inconsistent"] = col1_ok

    if check_indiscernible:
        indis_ok = True
        row_tuples = [row[0] + row[1] for row in a.rows]
        for size in range(1, a.n_rows + 1):
            combos = list(itertools.combinations(range(a.n_rows), size))
            base = combos[0]
            base_tuple = sum((row_tuples[i] for i in base), ())
            for combo in combos[1:]:
                other = sum((row_tuples[i] for i in combo), ())
                if not orbit_equivalent(a.structure, base_tuple, other):
                    indis_ok = False
                    if counter is None:
                        counter = ("indiscernible", (base, combo))
                    break
            if not indis_ok:
                break
        clauses["indiscernible"] = indis_ok

    ok = all(clauses.values())
    return CheckReport("sop1_array", ok, clauses, None if ok else counter)


# ── Indiscernibility and basedness surrogates ──────────────────────────────


def check_strong_indiscernible(f: WitnessFamily, tuple_size_bound: int) -> CheckReport:
    """Node tuples with equal qf-type fingerprints must carry orbit-equivalent
    parameter tuples; checked for all tuples up to the size bound."""
    if tuple_size_bound > 3:
        raise TooLarge("tuple size bound capped at 3")
    nodes = _sorted_nodes(f.domain)
    counter = None
    ok = True
    for size in range(1, tuple_size_bound + 1):
        groups = {}
        for combo in itertools.product(nodes, repeat=size):
            groups.setdefault(qftp_fingerprint(combo), []).append(combo)
        for members in groups.values():
            rep = members[0]
            rep_params = sum((f.params[n] for n in rep), ())
            for other in members[1:]:
                other_params = sum((f.params[n] for n in other), ())
                if not orbit_equivalent(f.structure, rep_params, other_params):
                    ok = False
                    if counter is None:
                        counter = ("tuples", (rep, other))
                    break
            if not ok:
                break
        if not ok:
            break
    return CheckReport("strong_indiscernible", ok, {"orbit": ok}, counter)


def check_based_on(b: WitnessFamily, a: WitnessFamily, formulas) -> CheckReport:
    """For every formula and node tuple over B, some qf-type-equal tuple over A
    takes the same truth value.

    `formulas` holds (formula, slots) pairs; each slot is a tuple of variable
    names of the family's parameter width and the slot count is capped at 3.
    """
    if b.domain != a.domain or b.structure != a.structure:
        raise ShapeMismatch("families must share domain and structure")
    nodes = _sorted_nodes(b.domain)
    width = len(b.param_vars)
    counter = None
    ok = True
    for phi_idx, (formula, slots) in enumerate(formulas):
        bind_check(b.structure, formula)
        n_slots = len(slots)
        if n_slots > 3:
            raise TooLarge("parameter arity budget capped at 3 slots")
        for slot in slots:
            if len(slot) != width:
                raise LengthMismatch("slot width must match the family width")

        def truth(fam, node_tuple):
            asg = {}
            for slot, node in zip(slots, node_tuple):
                asg.update(zip(slot, fam.params[node]))
            return eval_formula(fam.structure, formula, asg)

        candidates = {}
        for combo in itertools.product(nodes, repeat=n_slots):
            candidates.setdefault(qftp_fingerprint(combo), []).append(combo)
        for combo in itertools.product(nodes, repeat=n_slots):
            want = truth(b, combo)
            found = any(
                truth(a, other) == want
                for other in candidates[qftp_fingerprint(combo)]
            )
            if not found:
                ok = False
                if counter is None:
                    counter = ("formula", (phi_idx, combo))
                break
        if not ok:
            break
    return CheckReport("based_on", ok, {"based": ok}, counter)


# ── The branch structure B_h ───────────────────────────────────────────────


def branch_structure(h: int, branching: int = 2):
    """Nodes and maximal branches of a height-h tree with the relation
    "node is a prefix of the branch".  Returns (structure, node ids, branch ids).
    """
    domain = TreeDomain(h, branching)
    nodes = _sorted_nodes(domain)
    node_id = {n: i for i, n in enumerate(nodes)}
    branch_id = {}
    tuples = []
    next_id = len(nodes)
    for leaf in domain.leaves():
        branch_id[leaf] = next_id
        for pref in domain.branch_nodes(leaf):
            tuples.append((next_id, node_id[pref]))
        next_id += 1
    s = structure(next_id, {"P": (2, tuples)})
    return s, node_id, branch_id


def branch_family(h: int, branching: int = 2) -> WitnessFamily:
    """The canonical witness family on B_h: each node names itself."""
    s, node_id, _ = branch_structure(h, branching)
    domain = TreeDomain(h, branching)
    params = {n: (node_id[n],) for n in domain.nodes()}
    return WitnessFamily(
        domain, s, parse_formula("(P x y)"), ("x",), ("y",), params
    )


# ── JSON ───────────────────────────────────────────────────────────────────


def family_to_json(f: WitnessFamily, formula_text: str, structure_json=None) -> dict:
    from .folog import structure_to_json

    return {
        "domain": {"height": f.domain.height, "branching": f.domain.branching},
        "structure": structure_json
        if structure_json is not None
        else structure_to_json(f.structure),
        "formula": formula_text,
        "object_vars": list(f.object_vars),
        "param_vars": list(f.param_vars),
        "params": {node_str(n): list(f.params[n]) for n in f.domain.nodes()},
    }


def family_from_json(data, load_structure=None) -> WitnessFamily:
    """Build a family from its JSON form.

    The "structure" field is either an inline structure object or a string
    resolved through `load_structure` (the CLI passes a file loader).
    """
    needed = {"domain", "structure", "formula", "object_vars", "param_vars", "params"}
    if not isinstance(data, dict) or not needed <= set(data):
        raise SchemaError(f"family JSON needs keys {sorted(needed)}")
    dom = data["domain"]
    if not isinstance(dom, dict) or not {"height", "branching"} <= set(dom):
        raise SchemaError('family domain needs "height" and "branching"')
    domain = TreeDomain(dom["height"], dom["branching"])
    raw = data["structure"]
    if isinstance(raw, str):
        if load_structure is None:
            raise SchemaError("structure path given but no loader available")
        s = load_structure(raw)
    else:
        s = structure_from_json(raw)
    formula = parse_formula(data["formula"])
    object_vars = tuple(data["object_vars"])
    param_vars = tuple(data["param_vars"])
    if not isinstance(data["params"], dict):
        raise SchemaError("params must be an object")
    params = {}
    for key, value in data["params"].items():
        node = parse_node(key)
        if not isinstance(value, list) or any(not isinstance(x, int) for x in value):
            raise SchemaError(f"bad parameter tuple at node {key!r}")
        params[node] = tuple(value)
    return WitnessFamily(domain, s, formula, object_vars, param_vars, params)


def array_to_json(a: ArrayFamily, formula_text: str) -> dict:
    from .folog import structure_to_json

    return {
        "structure": structure_to_json(a.structure),
        "formula": formula_text,
        "object_vars": list(a.object_vars),
        "param_vars": list(a.param_vars),
        "rows": [[list(c0), list(c1)] for c0, c1 in a.rows],
    }


def array_from_json(data, load_structure=None) -> ArrayFamily:
    needed = {"structure", "formula", "object_vars", "param_vars", "rows"}
    if not isinstance(data, dict) or not needed <= set(data):
        raise SchemaError(f"array JSON needs keys {sorted(needed)}")
    raw = data["structure"]
    if isinstance(raw, str):
        if load_structure is None:
            raise SchemaError("structure path given but no loader available")
        s = load_structure(raw)
    else:
        s = structure_from_json(raw)
    rows = []
    if not isinstance(data["rows"], list):
        raise SchemaError("rows must be a list")
    for row in data["rows"]:
        if not (isinstance(row, list) and len(row) == 2):
            raise SchemaError("each row must be a pair of cells")
        rows.append(tuple(tuple(cell) for cell in row))
    return ArrayFamily(
        s,
        parse_formula(data["formula"]),
        tuple(data["object_vars"]),
        tuple(data["param_vars"]),
        tuple(rows),
    )
