"""Cover decomposition, polychromatic colouring, and sensor scheduling.

Decompose a hypergraph's edge multiset into disjoint set covers (and
dually, colour its vertices so every edge sees every colour) with exact,
verifiable guarantees driven by the minimum degree and maximum edge size.
"""

from .errors import (
    ClaimViolation,
    FlowInfeasible,
    FormatError,
    InfeasibleLP,
    ResampleCapExceeded,
    SearchCapExceeded,
    StructureTheoremViolation,
)
from .hypergraph import (
    CoverDecomposition,
    Hypergraph,
    VertexColouring,
    dual,
    format_hypergraph,
    min_set_cover_size,
    oracle_p,
    oracle_pprime,
    parse_hypergraph,
    shrink_to_degree,
    verify_cover_decomposition,
    verify_polychromatic,
)
from .generators import (
    GenSpec,
    gen_complement_singletons,
    gen_fano,
    gen_kneser_dual,
    gen_ptt,
    gen_random_hypergraph,
    gen_random_tree_paths,
    gen_tary_counterexample,
    generate,
    replicate,
)
from .lll import (
    LllConfig,
    lll_condition_holds,
    lll_target_colours,
    moser_tardos_decompose,
)
from .lp import (
    Constraint,
    ExtremePoint,
    RationalLP,
    RelaxationState,
    fractional_support_rule,
    iterated_relax,
    solve_extreme_point,
)
from .sensor import (
    Schedule,
    SensorInstance,
    sensor_schedule,
    verify_coverage,
    weighted_min_degree,
)
from .split import (
    FlowNetwork,
    SplitPlan,
    beck_fiala_split,
    chernoff_split,
    flow_shrink,
    max_flow,
    recursive_decompose,
    sparse_decompose,
)
from .treepaths import (
    TreePathInstance,
    level_colouring,
    parse_tree_paths,
    path_degree_profile,
    path_hypergraph,
    tree_cover_decompose,
    verify_tree_polychromatic,
)
from .vc import (
    VcReport,
    crossfree_decompose,
    crossfree_polychromatic,
    is_cross_free,
    is_laminar,
    laminar_decompose,
    minimal_clutter,
    vc_dimension,
)

__all__ = [name for name in dir() if not name.startswith("_")]
