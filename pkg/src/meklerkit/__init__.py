"""meklerkit: exact finite-scale checks for graph-built nilpotent groups and
tree-indexed witness combinatorics."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    Graph,
    NicenessReport,
    cycle_graph,
    complete_graph,
    find_nice_graphs,
    graph,
    graph_iso,
    is_nice,
    path_graph,
)
from .group import (  # noqa: F401
    GroupContext,
    GroupElement,
    collect_product,
    commutator,
    inverse,
    is_central,
    mk_context,
    multiply,
    power,
)
from .analysis import (  # noqa: F401
    TypeKind,
    TypeLabel,
    build_transversal,
    centralizer_subspace,
    classify,
    complement_H,
    gamma,
    gamma_roundtrip,
    handle_of,
    is_proper,
    sweep_classification,
    verify_transversal,
)
from .trees import (  # noqa: F401
    Coloring,
    TreeDomain,
    find_cofinal_color,
    gmap,
    incomparable,
    is_distant_siblings,
    level_subsequence_embed,
    lex_less,
    meet,
    meet_closure,
    mono_subtree_sop1,
    mono_subtree_sop2,
    mono_subtree_tp1,
    parse_node,
    prec,
    prec_eq,
    qftp_equal,
    qftp_fingerprint,
)
from .folog import (  # noqa: F401
    FinStructure,
    automorphisms,
    eval_formula,
    orbit_equivalent,
    parse_formula,
    solutions,
    structure,
)
from .witness import (  # noqa: F401
    ArrayFamily,
    CheckReport,
    WitnessFamily,
    branch_family,
    branch_structure,
    check_based_on,
    check_sop1,
    check_sop1_array,
    check_sop2,
    check_strong_indiscernible,
    check_tp1,
    check_weak_ktp1,
    comb_paths,
    restrict_to_binary,
)
