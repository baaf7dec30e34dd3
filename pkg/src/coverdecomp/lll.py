"""Randomized cover decomposition by colour resampling.

Colour every edge uniformly at random with t colours; while some vertex
misses a colour among its incident edges, resample all edges containing
the lowest such vertex.  When ``R * delta * t * (1 - 1/t)^delta <= 1/e``
(max edge size R, minimum degree delta) the local lemma guarantees a good
colouring exists and the resampling loop finds one in expected polynomial
time; the colour classes are then t disjoint set covers.

``lll_target_colours`` evaluates the closed-form target
``floor(delta / ln(e * R * delta^2))``; the sufficient condition itself is
decided in exact rational arithmetic so tests cannot be flipped by float
noise at the boundary.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResampleCapExceeded
from .hypergraph import CoverDecomposition, Hypergraph, verify_cover_decomposition

# 50-decimal upper bound on e, used so that `<= 1/e` is decided
# conservatively: true only when the exact inequality really holds.
E_UPPER = Fraction("2.71828182845904523536028747135266249775724709369996")

DEFAULT_RESAMPLE_FACTOR = 1000  # cap = factor * number of edges


@dataclass(frozen=True)
class LllConfig:
    """Target colour count, RNG seed, and the resample cap.

    ``t=None`` lets drivers derive the target from the instance via
    :func:`lll_target_colours`.  ``max_resamples=None`` means
    ``1000 * n_edges``.
    """

    t: int | None = None
    seed: int = 0
    max_resamples: int | None = None

    def __post_init__(self):
        if self.t is not None and self.t < 1:
            raise ValueError("target colour count must be at least 1")
        if self.max_resamples is not None and self.max_resamples < 1:
            raise ValueError("resample cap must be at least 1")


def lll_target_colours(R: int, delta: int) -> int:
    """max(1, floor(delta / ln(e * R * delta^2))).

    Evaluated in floating point with a half-ulp nudge before flooring so a
    value that is mathematically an exact integer is not floored down by
    one stray rounding error.
    """
    if R < 1 or delta < 1:
        raise ValueError("R and delta must be at least 1")
    v = delta / math.log(math.e * R * delta * delta)
    return max(1, math.floor(v + 0.5 * math.ulp(v)))


def lll_condition_holds(R: int, delta: int, t: int) -> bool:
    """Exact test of ``R * delta * t * (1 - 1/t)^delta <= 1/e``.

    For t = 1 this returns True: a single cover always exists once every
    vertex has positive degree.
    """
    if R < 1 or delta < 1 or t < 1:
        raise ValueError("R, delta and t must be at least 1")
    if t == 1:
        return True
    lhs = Fraction(R * delta * t) * Fraction(t - 1, t) ** delta
    return lhs * E_UPPER <= 1


def moser_tardos_decompose(h: Hypergraph, cfg: LllConfig) -> CoverDecomposition:
    """Resample edge colours until every vertex sees all t colours.

    Deterministic for a fixed seed.  Raises :class:`ResampleCapExceeded`
    when the cap is hit, which usually signals that t is too large for
    the instance (check :func:`lll_condition_holds`).  The returned
    decomposition is re-verified before being handed back.
    """
    m = h.n_edges
    delta = h.min_degree()
    if h.n_vertices > 0 and delta < 1:
        raise ValueError("isolated vertex: no cover decomposition exists")
    t = cfg.t if cfg.t is not None else lll_target_colours(h.max_edge_size(), delta)
    if h.n_vertices > 0 and t > delta:
        raise ValueError(f"t={t} colours is impossible: min degree is {delta}")
    if t == 1:
        dec = CoverDecomposition([0] * m, 1)
        if not verify_cover_decomposition(h, dec):
            raise AssertionError("single part failed to cover despite delta >= 1")
        return dec

    cap = cfg.max_resamples if cfg.max_resamples is not None else DEFAULT_RESAMPLE_FACTOR * m
    rng = random.Random(cfg.seed)
    inc = h.incidence_lists()
    colour = [rng.randrange(t) for _ in range(m)]

    counts = [[0] * t for _ in range(h.n_vertices)]
    for e, c in enumerate(colour):
        for v in h.edges[e]:
            counts[v][c] += 1
    missing = [sum(1 for c in range(t) if counts[v][c] == 0) for v in range(h.n_vertices)]
    bad = {v for v in range(h.n_vertices) if missing[v] > 0}

    resamples = 0
    while bad:
        v = min(bad)
        resamples += 1
        if resamples > cap:
            raise ResampleCapExceeded(
                f"no good colouring after {cap} resampling steps at t={t}"
            )
        touched = set()
        for e in inc[v]:
            old = colour[e]
            new = rng.randrange(t)
            colour[e] = new
            if new == old:
                continue
            for u in h.edges[e]:
                cu = counts[u]
                cu[old] -= 1
                if cu[old] == 0:
                    missing[u] += 1
                cu[new] += 1
                if cu[new] == 1:
                    missing[u] -= 1
                touched.add(u)
        touched.add(v)
        for u in touched:
            if missing[u] > 0:
                bad.add(u)
            else:
                bad.discard(u)

    dec = CoverDecomposition(colour, t)
    if not verify_cover_decomposition(h, dec):
        raise AssertionError("resampling terminated on an invalid decomposition")
    return dec
