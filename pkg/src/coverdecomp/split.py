"""Degree-preserving edge bipartitions and the split-then-resample drivers.

Two ways to split a regular hypergraph's edge multiset into halves whose
minimum degrees stay near delta/2:

* ``beck_fiala_split``: exact and deterministic.  Round the fractional
  balanced point of a small LP (covering and packing constraint per
  vertex) by iterated relaxation, discarding tight constraints with at
  most R fractional variables.  Both sides keep degree at least
  ceil(delta/2) - R.
* ``chernoff_split``: randomized.  Resample the incident edges of any
  vertex whose side-degree falls below d/2 - sqrt(2 d ln(2 e R d)).

``recursive_decompose`` splits (re-shrinking children to regularity)
until a stop rule fires, then runs the resampling decomposer on each leaf
and concatenates the covers.  ``flow_shrink`` reduces max edge size to
beta while keeping degrees at least delta - alpha by routing incidences
through a max-flow instance, which lets the same machinery handle sparse
hypergraphs with large edges.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import ClaimViolation, FlowInfeasible
from .hypergraph import (
    CoverDecomposition,
    Hypergraph,
    shrink_to_degree,
    verify_cover_decomposition,
)
from .lll import LllConfig, ResampleCapExceeded, lll_target_colours, moser_tardos_decompose
from .lp import Constraint, RationalLP, fractional_support_rule, iterated_relax

STRATEGIES = ("beck_fiala", "chernoff")
STOP_RULES = ("range_R_4R", "polylog_T")


# ---------------------------------------------------------------------------
# Beck-Fiala split


def build_split_lp(h: Hypergraph) -> RationalLP:
    """One x_e in [0,1] per edge; per vertex, keep both sides above delta/2.

    Covering: sum over incident x_e >= delta/2.  Packing: <= deg - delta/2
    (coverage of the complementary side).  x = 1/2 everywhere is feasible.
    """
    delta = h.min_degree()
    half = Fraction(delta, 2)
    by_vertex: list[dict[int, Fraction]] = [dict() for _ in range(h.n_vertices)]
    for i, e in enumerate(h.edges):
        for v in e:
            by_vertex[v][i] = Fraction(1)
    deg = h.degrees()
    cons = []
    for v in range(h.n_vertices):
        if not by_vertex[v]:
            continue
        cons.append(Constraint(by_vertex[v], ">=", half, tag=("cov", v)))
        cons.append(Constraint(by_vertex[v], "<=", Fraction(deg[v]) - half, tag=("pack", v)))
    bounds = [(Fraction(0), Fraction(1))] * h.n_edges
    return RationalLP(h.n_edges, bounds, cons)


def beck_fiala_split_ids(h: Hypergraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Edge-id bipartition with both side degrees >= ceil(delta/2) - R."""
    delta = _require_regular(h)
    lp = build_split_lp(h)
    R = h.max_edge_size()
    assignment, _log = iterated_relax(lp, fractional_support_rule(R))
    ones = tuple(i for i, x in enumerate(assignment) if x == 1)
    zeros = tuple(i for i, x in enumerate(assignment) if x == 0)
    floor = max(0, -(-delta // 2) - R)
    for ids in (ones, zeros):
        if _min_degree_of(h, ids) < floor:
            raise ClaimViolation("discrepancy split broke its degree guarantee")
    return ones, zeros


def beck_fiala_split(h: Hypergraph) -> tuple[Hypergraph, Hypergraph]:
    ones, zeros = beck_fiala_split_ids(h)
    return _sub(h, ones), _sub(h, zeros)


def _require_regular(h: Hypergraph) -> int:
    deg = h.degrees()
    if not deg:
        raise ValueError("hypergraph has no vertices")
    if min(deg) != max(deg) or min(deg) < 1:
        raise ValueError("split requires a regular hypergraph with delta >= 1 (shrink first)")
    return deg[0]


def _sub(h: Hypergraph, ids) -> Hypergraph:
    return Hypergraph(h.n_vertices, [h.edges[i] for i in ids])


def _min_degree_of(h: Hypergraph, ids) -> int:
    deg = [0] * h.n_vertices
    for i in ids:
        for v in h.edges[i]:
            deg[v] += 1
    return min(deg) if deg else 0


# ---------------------------------------------------------------------------
# Chernoff split


def chernoff_lambda(d: int, R: int) -> float:
    """Allowed one-side degree slack: sqrt(2 d ln(2 e R d))."""
    return math.sqrt(2.0 * d * math.log(2.0 * math.e * R * d))


def chernoff_split_ids(
    h: Hypergraph, seed: int, cap: int | None = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Random bipartition, resampled per bad vertex until every vertex
    keeps degree >= d/2 - lambda(d) on both sides."""
    d = _require_regular(h)
    m = h.n_edges
    R = h.max_edge_size()
    threshold = d / 2.0 - chernoff_lambda(d, R)
    cap = cap if cap is not None else 1000 * max(m, 1)
    rng = random.Random(seed)
    side = [rng.randrange(2) for _ in range(m)]
    inc = h.incidence_lists()
    deg1 = [0] * h.n_vertices
    for e, s in enumerate(side):
        if s:
            for v in h.edges[e]:
                deg1[v] += 1

    def is_bad(v):
        d1 = deg1[v]
        return d1 < threshold or d - d1 < threshold

    bad = {v for v in range(h.n_vertices) if is_bad(v)}
    resamples = 0
    while bad:
        v = min(bad)
        resamples += 1
        if resamples > cap:
            raise ResampleCapExceeded(
                f"no balanced bipartition after {cap} resampling steps"
            )
        touched = {v}
        for e in inc[v]:
            old = side[e]
            new = rng.randrange(2)
            if new == old:
                continue
            side[e] = new
            for u in h.edges[e]:
                deg1[u] += 1 if new else -1
                touched.add(u)
        for u in touched:
            if is_bad(u):
                bad.add(u)
            else:
                bad.discard(u)
    ones = tuple(i for i, s in enumerate(side) if s == 1)
    zeros = tuple(i for i, s in enumerate(side) if s == 0)
    return ones, zeros


def chernoff_split(h: Hypergraph, seed: int, cap: int | None = None):
    ones, zeros = chernoff_split_ids(h, seed, cap)
    return _sub(h, ones), _sub(h, zeros)


# ---------------------------------------------------------------------------
# Recursive driver


@dataclass(frozen=True)
class SplitPlan:
    """How to split and when to stop.

    ``range_R_4R`` splits while the (regular) degree is at least 4R, so
    every leaf lands in [R, 4R).  ``polylog_T`` runs exactly T split
    rounds, T defaulting to the largest t with delta / 2^t >= ln(R)^3.
    """

    strategy: str = "beck_fiala"
    stop_rule: str = "range_R_4R"
    T: int | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.stop_rule not in STOP_RULES:
            raise ValueError(f"unknown stop rule {self.stop_rule!r}")
        if self.T is not None and self.T < 0:
            raise ValueError("T must be nonnegative")


def polylog_round_count(delta: int, R: int) -> int:
    """Largest T >= 0 with delta / 2^T >= ln(R)^3."""
    if delta < 1:
        raise ValueError("delta must be positive")
    if R < 2:
        raise ValueError("the polylog stop rule needs R >= 2")
    ln3 = math.log(R) ** 3
    T = 0
    while delta / 2 ** (T + 1) >= ln3:
        T += 1
    return T


@dataclass(frozen=True)
class DecomposeStats:
    leaves: int
    splits: int
    parts: int
    min_leaf_degree: int
    max_leaf_degree: int


def recursive_decompose(
    h: Hypergraph, plan: SplitPlan, lll_cfg: LllConfig
) -> CoverDecomposition:
    dec, _stats = recursive_decompose_detailed(h, plan, lll_cfg)
    return dec


def recursive_decompose_detailed(
    h: Hypergraph, plan: SplitPlan, lll_cfg: LllConfig
) -> tuple[CoverDecomposition, DecomposeStats]:
    """Split recursively, decompose each leaf by resampling, concatenate.

    Children are re-shrunk to regularity before recursing.  For the
    Beck-Fiala strategy the waste accounting
    ``delta(child1) + delta(child2) >= delta(parent) - 2R`` is checked on
    every split.  The final decomposition is verified against the
    original hypergraph (covers survive un-shrinking).

    Per-leaf colour targets come from ``lll_cfg.t`` when set, otherwise
    from :func:`lll_target_colours` on the leaf's own R and delta.  Leaf
    and split seeds are derived deterministically from ``lll_cfg.seed``.
    """
    if h.min_degree() < 1:
        raise ValueError("isolated vertex: nothing can cover it")
    T = plan.T
    if plan.stop_rule == "polylog_T" and T is None:
        T = polylog_round_count(h.min_degree(), h.max_edge_size())

    parts: list[list[int]] = []
    counter = [0]
    stats = {"leaves": 0, "splits": 0, "mind": None, "maxd": None}

    def next_seed() -> int:
        counter[0] += 1
        return lll_cfg.seed * 1_000_003 + counter[0]

    def rec(sub: Hypergraph, ids: tuple[int, ...], rounds_left, path: str) -> None:
        d = sub.min_degree()
        if d < 1:
            raise ClaimViolation(
                f"child at {path or 'root'} lost all coverage of some vertex"
            )
        reg = shrink_to_degree(sub, d)
        R = reg.max_edge_size()
        if plan.stop_rule == "range_R_4R":
            split_now = d >= 4 * R
        else:
            split_now = rounds_left > 0
        if not split_now:
            t = lll_cfg.t if lll_cfg.t is not None else lll_target_colours(R, d)
            leaf_cfg = LllConfig(t=t, seed=next_seed(), max_resamples=lll_cfg.max_resamples)
            try:
                dec = moser_tardos_decompose(reg, leaf_cfg)
            except (ResampleCapExceeded, ValueError) as exc:
                raise type(exc)(f"leaf {path or 'root'}: {exc}") from exc
            for members in dec.parts():
                parts.append([ids[i] for i in members])
            stats["leaves"] += 1
            stats["mind"] = d if stats["mind"] is None else min(stats["mind"], d)
            stats["maxd"] = d if stats["maxd"] is None else max(stats["maxd"], d)
            return
        if plan.strategy == "beck_fiala":
            ids1, ids2 = beck_fiala_split_ids(reg)
        else:
            ids1, ids2 = chernoff_split_ids(reg, seed=next_seed())
        stats["splits"] += 1
        c1, c2 = _sub(reg, ids1), _sub(reg, ids2)
        if plan.strategy == "beck_fiala":
            if c1.min_degree() + c2.min_degree() < d - 2 * R:
                raise ClaimViolation("split wasted more than 2R of the parent degree")
        nxt = None if rounds_left is None else rounds_left - 1
        rec(c1, tuple(ids[i] for i in ids1), nxt, path + "0")
        rec(c2, tuple(ids[i] for i in ids2), nxt, path + "1")

    rec(h, tuple(range(h.n_edges)), T, "")

    part_of = [None] * h.n_edges
    for label, members in enumerate(parts):
        for i in members:
            part_of[i] = label
    if any(p is None for p in part_of):
        raise ClaimViolation("split drivers dropped an edge")
    dec = CoverDecomposition(part_of, len(parts))
    if not verify_cover_decomposition(h, dec):
        raise ClaimViolation("recursive decomposition failed final verification")
    return dec, DecomposeStats(
        leaves=stats["leaves"],
        splits=stats["splits"],
        parts=dec.k,
        min_leaf_degree=stats["mind"] or 0,
        max_leaf_degree=stats["maxd"] or 0,
    )


# ---------------------------------------------------------------------------
# Flow-based shrinking


@dataclass(frozen=True)
class FlowNetwork:
    """Tripartite unit-incidence network: source -> vertices -> edges -> sink."""

    n_vertices: int
    n_edges: int
    source_caps: tuple[int, ...]
    incidences: tuple[tuple[int, int], ...]
    sink_caps: tuple[int, ...]

    def __post_init__(self):
        if len(self.source_caps) != self.n_vertices or len(self.sink_caps) != self.n_edges:
            raise ValueError("capacity vectors do not match the node counts")
        if any(c < 0 for c in self.source_caps) or any(c < 0 for c in self.sink_caps):
            raise ValueError("capacities must be nonnegative")
        for v, e in self.incidences:
            if not (0 <= v < self.n_vertices and 0 <= e < self.n_edges):
                raise ValueError(f"incidence {(v, e)} out of range")


def max_flow(net: FlowNetwork) -> tuple[int, dict]:
    """Integral max flow by BFS augmenting paths (deterministic order).

    Returns the value and a map with keys ("source", v), ("incidence",
    v, e) and ("sink", e) giving the flow on each forward arc.
    """
    S, T = -1, -2
    adj: dict[int | tuple, list] = {S: [], T: []}
    capacity: dict[tuple, int] = {}

    def add(u, w, c):
        adj.setdefault(u, []).append(w)
        adj.setdefault(w, []).append(u)
        capacity[(u, w)] = capacity.get((u, w), 0) + c
        capacity.setdefault((w, u), 0)

    for v in range(net.n_vertices):
        add(S, ("v", v), net.source_caps[v])
    for v, e in net.incidences:
        add(("v", v), ("e", e), 1)
    for e in range(net.n_edges):
        add(("e", e), T, net.sink_caps[e])

    flow = {k: 0 for k in capacity}
    value = 0
    while True:
        parent = {S: None}
        q = deque([S])
        while q and T not in parent:
            u = q.popleft()
            for w in adj[u]:
                if w not in parent and capacity[(u, w)] - flow[(u, w)] > 0:
                    parent[w] = u
                    q.append(w)
        if T not in parent:
            break
        bottleneck = None
        w = T
        while parent[w] is not None:
            u = parent[w]
            r = capacity[(u, w)] - flow[(u, w)]
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            w = u
        w = T
        while parent[w] is not None:
            u = parent[w]
            flow[(u, w)] += bottleneck
            flow[(w, u)] -= bottleneck
            w = u
        value += bottleneck

    arc_flows = {}
    for v in range(net.n_vertices):
        arc_flows[("source", v)] = flow[(S, ("v", v))]
    for v, e in net.incidences:
        arc_flows[("incidence", v, e)] = flow[(("v", v), ("e", e))]
    for e in range(net.n_edges):
        arc_flows[("sink", e)] = flow[(("e", e), T)]

    # reachable side of the final residual graph = a minimum cut witness
    reach = {S}
    q = deque([S])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in reach and capacity[(u, w)] - flow[(u, w)] > 0:
                reach.add(w)
                q.append(w)
    arc_flows["_cut_vertices"] = tuple(
        sorted(v for v in range(net.n_vertices) if ("v", v) in reach)
    )
    arc_flows["_cut_edges"] = tuple(
        sorted(e for e in range(net.n_edges) if ("e", e) in reach)
    )
    return value, arc_flows


def shrink_network(h: Hypergraph, alpha: int, beta: int) -> FlowNetwork:
    delta = h.min_degree()
    need = max(0, delta - alpha)
    incidences = tuple((v, i) for i, e in enumerate(h.edges) for v in e)
    return FlowNetwork(
        n_vertices=h.n_vertices,
        n_edges=h.n_edges,
        source_caps=(need,) * h.n_vertices,
        incidences=incidences,
        sink_caps=(beta,) * h.n_edges,
    )


def flow_shrink(h: Hypergraph, alpha: int, beta: int) -> Hypergraph:
    """Shrink edges to size <= beta keeping every degree >= delta - alpha.

    Each kept incidence is one unit of flow from its vertex (supply
    delta - alpha) to its edge (capacity beta).  If the flow saturates
    every source arc, exactly the flow-selected incidences are kept;
    otherwise the max-flow/min-cut witness (V', E') is raised.
    """
    if alpha < 0 or beta < 1:
        raise ValueError("need alpha >= 0 and beta >= 1")
    delta = h.min_degree()
    need = max(0, delta - alpha)
    net = shrink_network(h, alpha, beta)
    value, flows = max_flow(net)
    want = need * h.n_vertices
    if value < want:
        vprime = flows["_cut_vertices"]
        eprime = flows["_cut_edges"]
        vset, eset = set(vprime), set(eprime)
        inc_across = sum(1 for v, e in net.incidences if v in vset and e not in eset)
        cut = need * (h.n_vertices - len(vprime)) + inc_across + beta * len(eprime)
        raise FlowInfeasible(
            f"max flow {value} < required {want}; shrink infeasible",
            value=value,
            vertex_side=vprime,
            edge_side=eprime,
            cut_capacity=cut,
        )
    new_edges = [
        [v for v in e if flows[("incidence", v, i)] == 1]
        for i, e in enumerate(h.edges)
    ]
    return Hypergraph(h.n_vertices, new_edges)


def sparse_decompose(
    h: Hypergraph,
    alpha: int,
    beta: int,
    lll_cfg: LllConfig,
    plan: SplitPlan | None = None,
) -> CoverDecomposition:
    """flow_shrink then recursive_decompose; covers lift to ``h`` unchanged."""
    shrunk = flow_shrink(h, alpha, beta)
    if plan is None:
        plan = SplitPlan(strategy="beck_fiala", stop_rule="range_R_4R")
    dec, _stats = recursive_decompose_detailed(shrunk, plan, lll_cfg)
    if not verify_cover_decomposition(h, dec):
        raise ClaimViolation("shrunk covers failed to lift to the original")
    return dec
