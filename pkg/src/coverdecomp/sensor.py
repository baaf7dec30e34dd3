"""Sensor-cover scheduling in graphs: coverage at least delta_bar / 8.

Each edge of a multigraph has an integer duration and must be switched on
once, for exactly its duration; every vertex should be covered by some
active incident edge throughout [0, T] with T as large as possible.  T
can never exceed the duration-weighted minimum degree delta_bar, and the
schedule built here always reaches delta_bar / 8:

1. scale durations by 1/delta_bar (min weighted degree becomes 1) and
   round each down to a power of two (losing less than half);
2. any edge with rounded duration >= 1/8 starts at 0 and satisfies both
   endpoints; other edges touching those endpoints are dedicated to
   their remaining endpoint;
3. within each duration class (equal powers of two), cycles are deleted
   by dedicating their edges cyclically, one per cycle vertex, leaving
   forests;
4. vertices whose residual weighted degree drops to <= 1/4 are deleted,
   dedicating their remaining edges to the other endpoints.  A counting
   argument over the forests forces this to consume every vertex, and
   every vertex deleted this way holds dedicated duration >= 1/8;
5. each vertex schedules its dedicated edges back to back from time 0.

Steps 4's two facts are checked at runtime and raise ClaimViolation if
they ever fail.  All arithmetic is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ClaimViolation, FormatError
from .hypergraph import _tokenize

PREPROCESS_THRESHOLD = Fraction(1, 8)
DEGREE_THRESHOLD = Fraction(1, 4)
TARGET = Fraction(1, 8)


@dataclass(frozen=True)
class SensorInstance:
    """Multigraph with positive integer edge durations."""

    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __init__(self, n_vertices, edges):
        n_vertices = int(n_vertices)
        norm = []
        for u, v, d in edges:
            u, v, d = int(u), int(v), int(d)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if d < 1:
                raise ValueError("durations must be positive integers")
            norm.append((u, v, d))
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "edges", tuple(norm))


@dataclass(frozen=True)
class Schedule:
    """Start offset per edge plus the verified achieved coverage."""

    start: tuple[Fraction, ...]
    coverage: Fraction


def weighted_min_degree(g: SensorInstance) -> int:
    """Minimum over vertices of the total duration of incident edges."""
    tot = [0] * g.n_vertices
    for u, v, d in g.edges:
        tot[u] += d
        tot[v] += d
    return min(tot) if tot else 0


def round_down_pow2(x: Fraction) -> Fraction:
    """Largest integer power of two that is <= x; lands in (x/2, x]."""
    if x <= 0:
        raise ValueError("positive values only")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    cand = Fraction(2) ** k
    while cand > x:
        cand /= 2
    while cand * 2 <= x:
        cand *= 2
    return cand


def sensor_schedule(g: SensorInstance) -> Schedule:
    """Build a schedule with coverage at least delta_bar / 8, verified."""
    db = weighted_min_degree(g)
    if g.n_vertices == 0:
        return Schedule((), Fraction(0))
    if db < 1:
        raise ValueError("isolated vertex: coverage is impossible")
    m = len(g.edges)
    rounded = [round_down_pow2(Fraction(d, db)) for _u, _v, d in g.edges]

    deleted = [None] * g.n_vertices  # None | "pre" | "deg"
    dedicated: list[list[int]] = [[] for _ in range(g.n_vertices)]
    start_scaled: list[Fraction | None] = [None] * m
    live = [True] * m

    # 1. big rounded edges start at 0 and settle both endpoints
    for e, (u, v, _d) in enumerate(g.edges):
        if rounded[e] >= PREPROCESS_THRESHOLD:
            start_scaled[e] = Fraction(0)
            live[e] = False
            for w in (u, v):
                if deleted[w] is None:
                    deleted[w] = "pre"
    for e, (u, v, _d) in enumerate(g.edges):
        if not live[e]:
            continue
        du, dv = deleted[u] is not None, deleted[v] is not None
        if du and dv:
            live[e] = False          # both ends already satisfied
            start_scaled[e] = Fraction(0)
        elif du:
            dedicated[v].append(e)
            live[e] = False
        elif dv:
            dedicated[u].append(e)
            live[e] = False

    # 2. cycle deletion per duration class
    classes = sorted({rounded[e] for e in range(m) if live[e]}, reverse=True)
    for value in classes:
        while True:
            cycle = _find_cycle(g, [e for e in range(m) if live[e] and rounded[e] == value])
            if cycle is None:
                break
            for vert, e in cycle:
                dedicated[vert].append(e)
                live[e] = False

    # 3. repeated deletion of weakly covered vertices
    rdeg = [Fraction(0)] * g.n_vertices
    inc: list[list[int]] = [[] for _ in range(g.n_vertices)]
    for e, (u, v, _d) in enumerate(g.edges):
        if live[e]:
            rdeg[u] += rounded[e]
            rdeg[v] += rounded[e]
            inc[u].append(e)
            inc[v].append(e)
    while True:
        v = next(
            (
                x
                for x in range(g.n_vertices)
                if deleted[x] is None and rdeg[x] <= DEGREE_THRESHOLD
            ),
            None,
        )
        if v is None:
            break
        deleted[v] = "deg"
        for e in inc[v]:
            if not live[e]:
                continue
            a, b, _d = g.edges[e]
            other = b if a == v else a
            dedicated[other].append(e)
            live[e] = False
            rdeg[other] -= rounded[e]
            rdeg[v] -= rounded[e]
        got = sum((rounded[e] for e in dedicated[v]), Fraction(0))
        if got < TARGET:
            raise ClaimViolation(
                f"vertex {v} deleted by degree holds only {got} < 1/8 dedicated"
            )

    leftover = [x for x in range(g.n_vertices) if deleted[x] is None]
    if leftover:
        weight = sum(
            (2 * rounded[e] for e in range(m) if live[e]), Fraction(0)
        )
        raise ClaimViolation(
            f"{len(leftover)} vertices survived deletion; residual degree mass "
            f"{weight} should be impossible above {len(leftover)}/4"
        )

    # 4. per-vertex back-to-back placement of the dedicated edges
    for v in range(g.n_vertices):
        if not dedicated[v]:
            continue
        frontier = Fraction(0)
        for e in sorted(dedicated[v], key=lambda e: (-rounded[e], e)):
            start_scaled[e] = frontier
            frontier += rounded[e]
    for e in range(m):
        if start_scaled[e] is None:  # untouched leftovers, e.g. spares
            start_scaled[e] = Fraction(0)

    start = tuple(s * db for s in start_scaled)
    coverage = verify_coverage(g, start)
    if coverage < Fraction(db, 8):
        raise ClaimViolation(
            f"schedule reaches only {coverage} < {Fraction(db, 8)}"
        )
    return Schedule(start, coverage)


def _find_cycle(g: SensorInstance, edge_ids):
    """Deterministic cycle in the multigraph spanned by ``edge_ids``.

    Returns a list of (vertex, edge) pairs dedicating each cycle edge to
    the vertex it leaves in traversal order, starting at the cycle's
    lowest vertex; or None when the edge set is a forest.  Parallel edges
    form 2-cycles.  Adjacency is scanned in ascending edge-id order.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(edge_ids):
        u, v, _d = g.edges[e]
        adj.setdefault(u, []).append((e, v))
        adj.setdefault(v, []).append((e, u))
    visited: set[int] = set()
    for root in sorted(adj):
        if root in visited:
            continue
        stack = [(root, -1)]
        prev: dict[int, tuple[int, int]] = {root: (-1, -1)}
        visited.add(root)
        while stack:
            u, via = stack.pop()
            for e, w in adj[u]:
                if e == via:
                    continue
                if w not in prev:
                    prev[w] = (u, e)
                    visited.add(w)
                    stack.append((w, e))
                else:
                    # found a cycle: walk both endpoints up to their meet
                    path_u = _walk(prev, u)
                    path_w = _walk(prev, w)
                    return _assemble_cycle(prev, u, w, e, path_u, path_w)
    return None


def _walk(prev, x):
    out = [x]
    while prev[x][0] != -1:
        x = prev[x][0]
        out.append(x)
    return out


def _assemble_cycle(prev, u, w, closing_edge, path_u, path_w):
    set_w = {x: i for i, x in enumerate(path_w)}
    meet = next(x for x in path_u if x in set_w)
    leg_u = []  # (vertex, edge towards parent) from u up to meet
    x = u
    while x != meet:
        p, e = prev[x]
        leg_u.append((x, e))
        x = p
    leg_w = []
    x = w
    while x != meet:
        p, e = prev[x]
        leg_w.append((x, e))
        x = p
    # cycle order: meet -> ... -> u -> (closing edge) -> w -> ... -> meet
    vertices = [meet] + [v for v, _e in reversed(leg_u)]
    edges = [e for _v, e in reversed(leg_u)] + [closing_edge] + [e for _v, e in leg_w]
    vertices += [v for v, _e in leg_w]
    # rotate so the lowest vertex leads; dedicate edge i to vertex i
    k = vertices.index(min(vertices))
    vertices = vertices[k:] + vertices[:k]
    edges = edges[k:] + edges[:k]
    return list(zip(vertices, edges))


def verify_coverage(g: SensorInstance, start) -> Fraction:
    """Exact maximal T with every vertex continuously covered on [0, T]."""
    if len(start) != len(g.edges):
        raise ValueError("schedule is not total over the edges")
    best = None
    intervals: list[list[tuple[Fraction, Fraction]]] = [
        [] for _ in range(g.n_vertices)
    ]
    for (u, v, d), s in zip(g.edges, start):
        s = Fraction(s)
        intervals[u].append((s, s + d))
        intervals[v].append((s, s + d))
    for v in range(g.n_vertices):
        frontier = Fraction(0)
        for s, t in sorted(intervals[v]):
            if s > frontier:
                break
            frontier = max(frontier, t)
        best = frontier if best is None else min(best, frontier)
    return best if best is not None else Fraction(0)


# ---------------------------------------------------------------------------
# .sg text format: `n m`, then m lines `u v d`


def parse_sensor_instance(text) -> SensorInstance:
    tokens = _tokenize(text)
    it = iter(tokens)

    def take(what):
        try:
            return int(next(it))
        except StopIteration:
            raise FormatError(f"unexpected end of input while reading {what}") from None
        except ValueError:
            raise FormatError(f"expected integer for {what}") from None

    n = take("vertex count")
    m = take("edge count")
    edges = [(take("u"), take("v"), take("duration")) for _ in range(m)]
    if sum(1 for _ in it):
        raise FormatError("extra tokens after the last edge")
    try:
        return SensorInstance(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_sensor_instance(g: SensorInstance) -> str:
    lines = [f"{g.n_vertices} {len(g.edges)}"]
    lines += [f"{u} {v} {d}" for u, v, d in g.edges]
    return "\n".join(lines) + "\n"
