"""VC-dimension, cross-free/laminar recognition, and exact decompositions.

A vertex set S is shattered when every subset of S arises as S
intersected with some edge; the VC-dimension is the largest shattered
size.  A family is cross-free when for every edge pair one of
``S & T``, ``S - T``, ``T - S``, ``V - (S | T)`` is empty, and laminar
when one of the first three is (nested or disjoint).  Cross-free families
decompose into ``floor((delta + 1) / 2)`` covers by peeling pairs whose
union is V and finishing laminar; laminar families achieve exactly
``delta`` covers by peeling the inclusion-maximal layer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ClaimViolation, SearchCapExceeded
from .hypergraph import (
    CoverDecomposition,
    Hypergraph,
    VertexColouring,
    dual,
    verify_cover_decomposition,
    verify_polychromatic,
)

DEFAULT_VC_CAP = 4


@dataclass(frozen=True)
class VcReport:
    vc_dim: int
    witness: tuple[int, ...]
    dual_vc_dim: int
    dual_witness: tuple[int, ...]


def vc_dimension(h: Hypergraph, cap: int = DEFAULT_VC_CAP) -> VcReport:
    """Exact VC-dimension with a shattered witness, primal and dual.

    Subset sizes are enumerated upward; once no set of a size is
    shattered, no larger set can be, so the answer is exact.  If a
    shattered set of size ``cap`` exists while larger sets remain
    unexplored, :class:`SearchCapExceeded` reports the certified lower
    bound instead of guessing.
    """
    d1, w1 = _vc_one_side(h, cap)
    d2, w2 = _vc_one_side(dual(h), cap)
    return VcReport(vc_dim=d1, witness=w1, dual_vc_dim=d2, dual_witness=w2)


def _vc_one_side(h: Hypergraph, cap: int) -> tuple[int, tuple[int, ...]]:
    masks = h.edge_masks()
    n = h.n_vertices
    best, witness = -1, ()
    for size in range(0, min(cap, n) + 1):
        found = None
        for subset in itertools.combinations(range(n), size):
            if _shattered(subset, masks):
                found = subset
                break
        if found is None:
            return best, witness
        best, witness = size, found
    if best == cap and cap < n:
        raise SearchCapExceeded(
            f"VC-dimension is at least {cap}; raise the cap to certify the exact value",
            lower_bound=best,
        )
    return best, witness


def _shattered(subset, masks) -> bool:
    smask = 0
    pos = {}
    for i, v in enumerate(subset):
        smask |= 1 << v
        pos[v] = i
    want = 1 << len(subset)
    seen = set()
    for m in masks:
        trace = 0
        r = m & smask
        while r:
            b = r & -r
            trace |= 1 << pos[b.bit_length() - 1]
            r ^= b
        seen.add(trace)
        if len(seen) == want:
            return True
    return len(seen) == want


def is_cross_free(h: Hypergraph) -> bool:
    full = (1 << h.n_vertices) - 1
    masks = h.edge_masks()
    for a, b in itertools.combinations(masks, 2):
        if a & b and a & ~b and b & ~a and full & ~(a | b):
            return False
    return True


def is_laminar(h: Hypergraph) -> bool:
    masks = h.edge_masks()
    for a, b in itertools.combinations(masks, 2):
        if a & b and a & ~b and b & ~a:
            return False
    return True


def minimal_clutter(h: Hypergraph) -> Hypergraph:
    """One representative (lowest id) per inclusion-minimal edge set.

    A colouring is polychromatic for ``h`` iff it is for the result:
    every edge contains some inclusion-minimal edge.
    """
    masks = h.edge_masks()
    distinct = sorted(set(masks), key=lambda m: masks.index(m))
    minimal = [
        m for m in distinct if not any(o != m and o & m == o for o in distinct)
    ]
    reps = sorted(masks.index(m) for m in minimal)
    return Hypergraph(h.n_vertices, [h.edges[i] for i in reps])


# ---------------------------------------------------------------------------
# Cover decompositions


def laminar_decompose(h: Hypergraph) -> CoverDecomposition:
    """Exactly delta covers from a laminar family.

    Each round takes one copy of every inclusion-maximal edge set among
    the remaining edges; these are pairwise disjoint and cover V, and
    every vertex loses exactly one unit of degree, so delta rounds fit.
    Leftover edges (duplicates below the last layer, empties) join part 0.
    """
    if not is_laminar(h):
        raise ValueError("input is not laminar")
    delta = h.min_degree()
    if delta < 1 or h.n_vertices == 0:
        raise ValueError("laminar decomposition needs min degree >= 1")
    parts, leftovers = _peel_maximal_layers(h, list(range(h.n_edges)), delta)
    parts[0].extend(leftovers)
    return _as_decomposition(h, parts)


def _peel_maximal_layers(h, live, rounds):
    masks = h.edge_masks()
    full = (1 << h.n_vertices) - 1
    live = list(live)
    parts = []
    for _ in range(rounds):
        live_sets = {}
        for i in live:
            live_sets.setdefault(masks[i], i)  # lowest id represents the set
        maximal = [
            m
            for m in live_sets
            if not any(o != m and o & m == m for o in live_sets)
        ]
        reps = sorted(live_sets[m] for m in maximal)
        union = 0
        for i in reps:
            union |= masks[i]
        pairwise = sum(bin(masks[i]).count("1") for i in reps)
        if union != full or pairwise != bin(union).count("1"):
            raise ClaimViolation("maximal layer is not a disjoint cover")
        parts.append(reps)
        live = [i for i in live if i not in set(reps)]
    return parts, live


def crossfree_decompose(h: Hypergraph) -> CoverDecomposition:
    """At least floor((delta + 1) / 2) covers from a cross-free family.

    While two edges with union V exist, the lexicographically first such
    pair is one cover (costing every vertex at most 2 degrees); once no
    such pair remains the residual family is laminar and is peeled
    exactly.
    """
    if not is_cross_free(h):
        raise ValueError("input is not cross-free")
    if h.min_degree() < 1 or h.n_vertices == 0:
        raise ValueError("cover decomposition needs min degree >= 1")
    masks = h.edge_masks()
    full = (1 << h.n_vertices) - 1
    live = list(range(h.n_edges))
    parts: list[list[int]] = []
    while True:
        deg = _live_min_degree(h, live)
        if deg == 0:
            break
        pair = next(
            (
                (i, j)
                for i, j in itertools.combinations(live, 2)
                if masks[i] | masks[j] == full
            ),
            None,
        )
        if pair is None:
            sub_parts, leftovers = _peel_maximal_layers(h, live, deg)
            sub_parts[0].extend(leftovers)
            parts.extend(sub_parts)
            live = []
            break
        parts.append(list(pair))
        live = [i for i in live if i not in pair]
    if live:
        if not parts:
            raise ClaimViolation("no cover emitted despite positive min degree")
        parts[0].extend(live)
    return _as_decomposition(h, parts)


def _live_min_degree(h, live) -> int:
    deg = [0] * h.n_vertices
    for i in live:
        for v in h.edges[i]:
            deg[v] += 1
    return min(deg) if deg else 0


def _as_decomposition(h, parts) -> CoverDecomposition:
    part_of = [0] * h.n_edges
    for label, members in enumerate(parts):
        for i in members:
            part_of[i] = label
    dec = CoverDecomposition(part_of, len(parts))
    if not verify_cover_decomposition(h, dec):
        raise ClaimViolation("decomposition failed cover verification")
    return dec


# ---------------------------------------------------------------------------
# Polychromatic colouring


def crossfree_polychromatic(h: Hypergraph, k: int) -> VertexColouring:
    """Polychromatic k-colouring of a cross-free family with r >= 2k - 1.

    Reduce to the inclusion-minimal clutter.  Its edges are either
    pairwise disjoint (colour inside each edge independently) or pairwise
    unions equal V, i.e. complements of disjoint sets S_i: then k - 1
    rounds each colour a pair of vertices not sharing an S_i, and the
    rest flood with the last colour.  Any other shape of the clutter is a
    dichotomy violation and raises.  The result is verified against the
    original hypergraph.
    """
    if k < 1:
        raise ValueError("need at least one colour")
    if not is_cross_free(h):
        raise ValueError("input is not cross-free")
    if h.min_edge_size() < 2 * k - 1:
        raise ValueError(
            f"min edge size {h.min_edge_size()} is below the required {2 * k - 1}"
        )
    n = h.n_vertices
    if k == 1:
        colouring = VertexColouring([0] * n, 1)
        if not verify_polychromatic(h, colouring):
            raise ClaimViolation("single colour failed despite nonempty edges")
        return colouring

    mc = minimal_clutter(h)
    masks = mc.edge_masks()
    full = (1 << n) - 1
    disjoint = all(a & b == 0 for a, b in itertools.combinations(masks, 2))
    unions = all(a | b == full for a, b in itertools.combinations(masks, 2))
    if not disjoint and not unions:
        raise ClaimViolation("cross-free clutter is neither disjoint nor co-disjoint")

    colour = [0] * n
    if disjoint:
        for e in mc.edges:
            for idx, v in enumerate(e):
                colour[v] = idx % k
    else:
        complements = [full & ~m for m in masks]
        for a, b in itertools.combinations(complements, 2):
            if a & b:
                raise ClaimViolation("complements of the clutter edges overlap")
        owner = [-1] * n
        for i, s in enumerate(complements):
            r = s
            while r:
                b = r & -r
                owner[b.bit_length() - 1] = i
                r ^= b
        unset = [True] * n
        for j in range(k - 1):
            v = next((x for x in range(n) if unset[x]), None)
            v2 = None
            if v is not None:
                v2 = next(
                    (
                        x
                        for x in range(n)
                        if unset[x]
                        and x != v
                        and (owner[v] == -1 or owner[x] != owner[v])
                    ),
                    None,
                )
            if v is None or v2 is None:
                raise ClaimViolation("paired colouring ran out of legal vertices")
            colour[v] = colour[v2] = j
            unset[v] = unset[v2] = False
        for x in range(n):
            if unset[x]:
                colour[x] = k - 1

    result = VertexColouring(colour, k)
    if not verify_polychromatic(h, result):
        raise ClaimViolation("constructed colouring failed verification")
    return result
