"""Hypergraph data model, duality, shrinking, verification and exact oracles.

A hypergraph is a ground set of ``n_vertices`` vertices together with an
ordered multiset of hyperedges; each edge is a duplicate-free sorted tuple
of vertex ids.  Edges of size 0 and 1 are legal, and the same edge may
occur several times (duplicates are distinct edges, identified by index).

Two dual quantities drive everything here:

* the polychromatic number ``p``: the largest k such that the vertices can
  be k-coloured with every edge containing all k colours, and
* the cover-decomposition number ``p'``: the largest k such that the edge
  multiset splits into k parts that each cover every vertex.

``oracle_p`` and ``oracle_pprime`` compute them exactly by branch and
bound at desk scale; they are implemented independently of one another so
the transpose identity p'(H) = p(H*) can be used as a cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormatError, SearchCapExceeded

# Exhaustive-search caps; overridable per call.  The oracles are exact up
# to these sizes and refuse bigger inputs instead of silently degrading.
DEFAULT_ORACLE_EDGE_CAP = 16
DEFAULT_ORACLE_VERTEX_CAP = 16
DEFAULT_COVER_EDGE_CAP = 24


@dataclass(frozen=True)
class Hypergraph:
    """Immutable hypergraph; edges normalised to sorted tuples."""

    n_vertices: int
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, n_vertices, edges):
        if n_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        for e in edges:
            e = tuple(sorted(e))
            for v in e:
                if not 0 <= v < n_vertices:
                    raise ValueError(f"vertex id {v} out of range [0, {n_vertices})")
            if len(set(e)) != len(e):
                raise ValueError(f"duplicate vertex in edge {e}")
            norm.append(e)
        object.__setattr__(self, "n_vertices", int(n_vertices))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def incidence_lists(self) -> list[list[int]]:
        """For each vertex, the ascending list of incident edge ids."""
        inc = [[] for _ in range(self.n_vertices)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    def min_degree(self) -> int:
        deg = self.degrees()
        return min(deg) if deg else 0

    def max_degree(self) -> int:
        deg = self.degrees()
        return max(deg) if deg else 0

    def min_edge_size(self) -> int:
        return min((len(e) for e in self.edges), default=0)

    def max_edge_size(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def is_regular(self) -> bool:
        deg = self.degrees()
        return not deg or min(deg) == max(deg)

    def edge_masks(self) -> list[int]:
        """Edges as vertex bitmasks (bit v set iff v in the edge)."""
        return [_mask(e) for e in self.edges]


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class CoverDecomposition:
    """Partition of edge ids into ``k`` labelled parts.

    ``part_of[i]`` is the part label of edge i.  Whether every part is a
    set cover is *not* assumed; use :func:`verify_cover_decomposition`.
    """

    part_of: tuple[int, ...]
    k: int

    def __init__(self, part_of, k):
        k = int(k)
        if k < 1:
            raise ValueError("a decomposition needs at least one part")
        part_of = tuple(int(p) for p in part_of)
        for p in part_of:
            if not 0 <= p < k:
                raise ValueError(f"part label {p} out of range [0, {k})")
        object.__setattr__(self, "part_of", part_of)
        object.__setattr__(self, "k", k)

    def parts(self) -> list[list[int]]:
        out = [[] for _ in range(self.k)]
        for i, p in enumerate(self.part_of):
            out[p].append(i)
        return out


@dataclass(frozen=True)
class VertexColouring:
    """Total map from vertex ids to colours in [0, k)."""

    colour_of: tuple[int, ...]
    k: int

    def __init__(self, colour_of, k):
        k = int(k)
        if k < 1:
            raise ValueError("need at least one colour")
        colour_of = tuple(int(c) for c in colour_of)
        for c in colour_of:
            if not 0 <= c < k:
                raise ValueError(f"colour {c} out of range [0, {k})")
        object.__setattr__(self, "colour_of", colour_of)
        object.__setattr__(self, "k", k)


# ---------------------------------------------------------------------------
# .hg text format


def parse_hypergraph(text) -> Hypergraph:
    """Parse the .hg format.

    Line 1 is ``n m``; then m lines, each ``k v1 ... vk``.  Tokens are
    whitespace-separated (line breaks are not significant beyond comments);
    lines starting with ``#`` are ignored.
    """
    tokens = _tokenize(text)
    it = iter(tokens)

    def take(what):
        try:
            tok = next(it)
        except StopIteration:
            raise FormatError(f"unexpected end of input while reading {what}") from None
        try:
            return int(tok)
        except ValueError:
            raise FormatError(f"expected integer for {what}, got {tok!r}") from None

    n = take("vertex count")
    m = take("edge count")
    if n < 0 or m < 0:
        raise FormatError("vertex and edge counts must be nonnegative")
    edges = []
    for i in range(m):
        k = take(f"size of edge {i}")
        if k < 0:
            raise FormatError(f"edge {i} has negative size")
        e = [take(f"vertex of edge {i}") for _ in range(k)]
        if len(set(e)) != len(e):
            raise FormatError(f"duplicate vertex in edge {i}: {e}")
        for v in e:
            if not 0 <= v < n:
                raise FormatError(f"vertex id {v} out of range in edge {i}")
        edges.append(e)
    leftover = sum(1 for _ in it)
    if leftover:
        raise FormatError(f"{leftover} extra token(s) after the last edge")
    return Hypergraph(n, edges)


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.n_vertices} {h.n_edges}"]
    for e in h.edges:
        lines.append(" ".join(str(x) for x in (len(e), *e)))
    return "\n".join(lines) + "\n"


def _tokenize(text) -> list[str]:
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    tokens = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens.extend(line.split())
    return tokens


# ---------------------------------------------------------------------------
# Duality and shrinking


def dual(h: Hypergraph) -> Hypergraph:
    """Transpose the incidence matrix: vertices and edges swap roles.

    Dual vertex j stands for edge j of ``h``; dual edge v collects the ids
    of the edges of ``h`` containing vertex v.  ``dual(dual(h)) == h``
    with identical index order.
    """
    dual_edges = [[] for _ in range(h.n_vertices)]
    for i, e in enumerate(h.edges):
        for v in e:
            dual_edges[v].append(i)
    return Hypergraph(h.n_edges, dual_edges)


def shrink_to_degree(h: Hypergraph, delta: int) -> Hypergraph:
    """Drop incidences until every vertex has degree exactly ``delta``.

    A vertex above target loses its membership in incident edges from the
    highest edge id downwards, which makes the result deterministic.
    Every output edge is a subset of the same-id input edge, so any cover
    of the result is a cover of ``h``.
    """
    if delta < 0:
        raise ValueError("target degree must be nonnegative")
    deg = h.degrees()
    if deg and min(deg) < delta:
        raise ValueError(f"min degree {min(deg)} is below target {delta}")
    drop = [set() for _ in range(h.n_edges)]
    inc = h.incidence_lists()
    for v in range(h.n_vertices):
        # inc[v] is ascending, so the tail holds the highest edge ids
        for e in inc[v][delta:]:
            drop[e].add(v)
    new_edges = [
        [v for v in e if v not in drop[i]] for i, e in enumerate(h.edges)
    ]
    return Hypergraph(h.n_vertices, new_edges)


# ---------------------------------------------------------------------------
# Verification


def verify_cover_decomposition(h: Hypergraph, d: CoverDecomposition) -> bool:
    """True iff every part of ``d`` covers every vertex of ``h``."""
    if len(d.part_of) != h.n_edges:
        raise ValueError("decomposition does not range over the edge ids of h")
    full = (1 << h.n_vertices) - 1
    covered = [0] * d.k
    masks = h.edge_masks()
    for i, p in enumerate(d.part_of):
        covered[p] |= masks[i]
    return all(c == full for c in covered)


def verify_polychromatic(h: Hypergraph, c: VertexColouring) -> bool:
    """True iff every edge of ``h`` contains every colour in [0, c.k)."""
    if len(c.colour_of) != h.n_vertices:
        raise ValueError("colouring is not total over the vertices of h")
    want = (1 << c.k) - 1
    for e in h.edges:
        seen = 0
        for v in e:
            seen |= 1 << c.colour_of[v]
        if seen != want:
            return False
    return True


# ---------------------------------------------------------------------------
# Exact oracles (branch and bound, desk scale)


def oracle_pprime(h: Hypergraph, cap: int = DEFAULT_ORACLE_EDGE_CAP) -> int:
    """Exact cover-decomposition number by exhaustive partition search.

    Returns 0 when some vertex has degree 0.  Raises for hypergraphs with
    no vertices (every subfamily covers the empty set, so the value is
    unbounded) and for instances above the edge cap.
    """
    if h.n_vertices == 0:
        raise ValueError("cover-decomposition number is unbounded without vertices")
    if h.n_edges > cap:
        raise SearchCapExceeded(
            f"{h.n_edges} edges exceed the exhaustive-search cap {cap}"
        )
    delta = h.min_degree()
    if delta == 0:
        return 0
    best = 1
    upper = min(delta, h.n_edges)
    for k in range(2, upper + 1):
        if _cover_partition_exists(h, k):
            best = k
        else:
            break
    return best


def _cover_partition_exists(h: Hypergraph, k: int) -> bool:
    """Can the edges be partitioned into k covers?  Branch and bound.

    Edges are assigned to parts one by one; part labels are symmetric, so
    an edge may only open one new part.  Prune when some vertex has fewer
    remaining incident edges than parts still missing it.
    """
    n = h.n_vertices
    full = (1 << n) - 1
    masks = [m for m in h.edge_masks() if m]  # empty edges never matter
    if len(masks) < k:
        return False
    # need[v]: parts not yet covering v; rem[v]: unassigned edges with v.
    need = [k] * n
    rem = [0] * n
    for m in masks:
        for v in range(n):
            if m >> v & 1:
                rem[v] += 1
    if any(rem[v] < k for v in range(n)):
        return False
    part_mask = [0] * k

    def assign(idx: int, used: int) -> bool:
        if idx == len(masks):
            return all(pm == full for pm in part_mask)
        m = masks[idx]
        vs = [v for v in range(n) if m >> v & 1]
        # an edge can open at most one fresh part
        for p in range(min(used + 1, k)):
            gained = []
            ok = True
            for v in vs:
                rem[v] -= 1
                if not part_mask[p] >> v & 1:
                    need[v] -= 1
                    gained.append(v)
            old = part_mask[p]
            part_mask[p] = old | m
            for v in vs:
                if need[v] > rem[v]:
                    ok = False
                    break
            if ok and assign(idx + 1, max(used, p + 1)):
                return True
            part_mask[p] = old
            for v in vs:
                rem[v] += 1
            for v in gained:
                need[v] += 1
        return False

    return assign(0, 0)


def oracle_p(h: Hypergraph, cap: int = DEFAULT_ORACLE_VERTEX_CAP) -> int:
    """Exact polychromatic number by exhaustive colouring search.

    Returns 0 when some edge is empty.  Raises for hypergraphs with no
    edges (any number of colours works vacuously) and above the cap.
    """
    if h.n_edges == 0:
        raise ValueError("polychromatic number is unbounded without edges")
    if h.n_vertices > cap:
        raise SearchCapExceeded(
            f"{h.n_vertices} vertices exceed the exhaustive-search cap {cap}"
        )
    if h.min_edge_size() == 0:
        return 0
    best = 1
    upper = min(h.min_edge_size(), h.n_vertices)
    for k in range(2, upper + 1):
        if _polychromatic_exists(h, k):
            best = k
        else:
            break
    return best


def _polychromatic_exists(h: Hypergraph, k: int) -> bool:
    """Is there a k-colouring making every edge contain all k colours?"""
    n = h.n_vertices
    inc = h.incidence_lists()
    missing = [k] * h.n_edges          # colours the edge does not have yet
    uncoloured = [len(e) for e in h.edges]
    seen = [0] * h.n_edges             # bitmask of colours present per edge

    def colour(v: int, used: int) -> bool:
        if v == n:
            return all(m == 0 for m in missing)
        for c in range(min(used + 1, k)):
            bit = 1 << c
            ok = True
            touched = []
            for e in inc[v]:
                uncoloured[e] -= 1
                if not seen[e] & bit:
                    seen[e] |= bit
                    missing[e] -= 1
                    touched.append(e)
            for e in inc[v]:
                if missing[e] > uncoloured[e]:
                    ok = False
                    break
            if ok and colour(v + 1, max(used, c + 1)):
                return True
            for e in touched:
                seen[e] &= ~bit
                missing[e] += 1
            for e in inc[v]:
                uncoloured[e] += 1
        return False

    return colour(0, 0)


# ---------------------------------------------------------------------------
# Minimum set cover


def min_set_cover_size(
    h: Hypergraph, exact: bool = True, cap: int = DEFAULT_COVER_EDGE_CAP
) -> int:
    """Size of a minimum set cover (exact), or a greedy upper bound.

    Exact mode branches on an uncovered vertex with the fewest candidate
    edges; greedy mode repeatedly takes the edge covering the most still
    uncovered vertices and returns the size of the cover it builds.
    """
    n = h.n_vertices
    if n == 0:
        return 0
    deg = h.degrees()
    if min(deg) == 0:
        raise ValueError("no cover exists: some vertex is isolated")
    masks = h.edge_masks()
    full = (1 << n) - 1
    if not exact:
        return _greedy_cover_size(masks, full)
    if h.n_edges > cap:
        raise SearchCapExceeded(
            f"{h.n_edges} edges exceed the exact-cover cap {cap}"
        )
    maxsize = max(len(e) for e in h.edges)
    covering = [[i for i, m in enumerate(masks) if m >> v & 1] for v in range(n)]
    best = [_greedy_cover_size(masks, full)]

    def search(covered: int, used: int) -> None:
        if covered == full:
            best[0] = min(best[0], used)
            return
        remaining = full & ~covered
        # counting bound: every edge covers at most maxsize new vertices
        lb = -(-bin(remaining).count("1") // maxsize)
        if used + lb >= best[0]:
            return
        v = min(
            (x for x in range(n) if remaining >> x & 1),
            key=lambda x: sum(1 for i in covering[x] if masks[i] & remaining),
        )
        for i in covering[v]:
            search(covered | masks[i], used + 1)

    search(0, 0)
    return best[0]


def _greedy_cover_size(masks: list[int], full: int) -> int:
    covered = 0
    size = 0
    while covered != full:
        gain, pick = 0, -1
        for i, m in enumerate(masks):
            g = bin(m & ~covered).count("1")
            if g > gain:
                gain, pick = g, i
        if pick < 0:
            raise ValueError("no cover exists: some vertex is isolated")
        covered |= masks[pick]
        size += 1
    return size
