"""Cover decomposition and colouring for path systems in trees.

The ground set is the edge set of an undirected tree; each hyperedge is
the set of tree edges on the unique path between two endpoints.  With
every tree edge lying on at least delta paths, the paths split into
``1 + floor((delta - 1) / 5)`` covers: each round solves a small exact LP
(one covering and one packing constraint per tree edge), rounds it by
iterated relaxation discarding tight constraints with at most 3
fractional variables, peels off the x = 1 side as one cover, and recurses
on the rest.  Dually, when every path has at least 2k - 1 edges, colouring
tree edges by depth level mod k makes every path contain all k colours.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import ClaimViolation, FormatError
from .hypergraph import (
    CoverDecomposition,
    Hypergraph,
    _tokenize,
    verify_cover_decomposition,
)
from .lp import Constraint, RationalLP, fractional_support_rule, iterated_relax

COVER_GOAL = 3  # the A of each round; the residual keeps B = delta - 3


@dataclass(frozen=True)
class TreePathInstance:
    """A tree plus a multiset of paths, stored as tree-edge-id sets."""

    n_vertices: int
    tree_edges: tuple[tuple[int, int], ...]
    path_endpoints: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]

    @classmethod
    def from_endpoints(cls, n_vertices, tree_edges, path_endpoints) -> "TreePathInstance":
        tree_edges = tuple((int(u), int(v)) for u, v in tree_edges)
        parent, parent_edge, depth = _root_tree(n_vertices, tree_edges)
        paths = []
        for a, b in path_endpoints:
            paths.append(tuple(sorted(_path_edges(a, b, parent, parent_edge, depth))))
        return cls(
            n_vertices=n_vertices,
            tree_edges=tree_edges,
            path_endpoints=tuple((int(a), int(b)) for a, b in path_endpoints),
            paths=tuple(paths),
        )

    @property
    def n_paths(self) -> int:
        return len(self.paths)


def _root_tree(n, tree_edges):
    """Validate the spanning tree and return parent/parent-edge/depth."""
    if n < 1:
        raise ValueError("a tree needs at least one vertex")
    if len(tree_edges) != n - 1:
        raise ValueError(f"a tree on {n} vertices has {n - 1} edges")
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(tree_edges):
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"bad tree edge {(u, v)}")
        adj[u].append((v, i))
        adj[v].append((u, i))
    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [-1] * n
    depth[0] = 0
    q = deque([0])
    seen = 1
    while q:
        u = q.popleft()
        for v, i in adj[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = u
                parent_edge[v] = i
                seen += 1
                q.append(v)
    if seen != n:
        raise ValueError("tree edges do not connect all vertices")
    return parent, parent_edge, depth


def _path_edges(a, b, parent, parent_edge, depth):
    edges = []
    x, y = a, b
    while depth[x] > depth[y]:
        edges.append(parent_edge[x])
        x = parent[x]
    while depth[y] > depth[x]:
        edges.append(parent_edge[y])
        y = parent[y]
    while x != y:
        edges.append(parent_edge[x])
        edges.append(parent_edge[y])
        x, y = parent[x], parent[y]
    return edges


# ---------------------------------------------------------------------------
# .tp text format: `n p`, then n-1 tree edges `u v`, then p endpoint pairs


def parse_tree_paths(text) -> TreePathInstance:
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
    p = take("path count")
    if n < 1 or p < 0:
        raise FormatError("bad counts")
    tree_edges = [(take("tree edge u"), take("tree edge v")) for _ in range(n - 1)]
    endpoints = [(take("path endpoint a"), take("path endpoint b")) for _ in range(p)]
    if sum(1 for _ in it):
        raise FormatError("extra tokens after the last path")
    try:
        return TreePathInstance.from_endpoints(n, tree_edges, endpoints)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_tree_paths(inst: TreePathInstance) -> str:
    lines = [f"{inst.n_vertices} {inst.n_paths}"]
    lines += [f"{u} {v}" for u, v in inst.tree_edges]
    lines += [f"{a} {b}" for a, b in inst.path_endpoints]
    return "\n".join(lines) + "\n"


def path_hypergraph(inst: TreePathInstance) -> Hypergraph:
    """The cover view: vertices are tree-edge ids, edges are the paths."""
    return Hypergraph(len(inst.tree_edges), inst.paths)


def path_degree_profile(inst: TreePathInstance) -> list[int]:
    """For each tree edge, the number of paths containing it."""
    deg = [0] * len(inst.tree_edges)
    for p in inst.paths:
        for e in p:
            deg[e] += 1
    return deg


# ---------------------------------------------------------------------------
# Cover decomposition (iterated LP relaxation)


def tree_cover_decompose(inst: TreePathInstance) -> CoverDecomposition:
    """Partition the paths into 1 + floor((delta - 1)/5) edge covers.

    Each LP round uses covering constraints ``sum x_P >= 3`` and packing
    constraints ``sum x_P <= deg(e) - (delta - 3)`` per tree edge; the
    rounded x = 1 side covers every tree edge at least once and becomes a
    part, while the x = 0 side keeps degree at least delta - 5 everywhere
    and is decomposed recursively (using its measured minimum degree,
    which may beat the guaranteed floor).
    """
    n_edges = len(inst.tree_edges)
    live = list(range(inst.n_paths))
    deg = path_degree_profile(inst)
    if n_edges and (not live or min(deg) < 1):
        raise ValueError("every tree edge must lie on at least one path")
    parts: list[list[int]] = []
    rule = fractional_support_rule(3)
    while True:
        delta = min(deg) if n_edges else 1
        if delta <= 5:
            parts.append(live)
            break
        lp = _round_lp(inst, live, deg, delta)
        assignment, _log = iterated_relax(lp, rule)
        ones = [pid for pid, x in zip(live, assignment) if x == 1]
        zeros = [pid for pid, x in zip(live, assignment) if x == 0]
        cover_deg = _profile(inst, ones, n_edges)
        rest_deg = _profile(inst, zeros, n_edges)
        if min(cover_deg) < COVER_GOAL - 2:
            raise ClaimViolation("rounded x side fails to cover some tree edge")
        if min(rest_deg) < delta - 5:
            raise ClaimViolation("residual side lost more than 5 of its degree")
        parts.append(ones)
        live, deg = zeros, rest_deg

    part_of = [0] * inst.n_paths
    for label, members in enumerate(parts):
        for pid in members:
            part_of[pid] = label
    dec = CoverDecomposition(part_of, len(parts))
    if not verify_tree_cover(inst, dec):
        raise ClaimViolation("decomposition failed final cover verification")
    return dec


def _round_lp(inst, live, deg, delta) -> RationalLP:
    by_edge: dict[int, dict[int, Fraction]] = {e: {} for e in range(len(inst.tree_edges))}
    for local, pid in enumerate(live):
        for e in inst.paths[pid]:
            by_edge[e][local] = Fraction(1)
    cons = []
    for e in range(len(inst.tree_edges)):
        cons.append(Constraint(by_edge[e], ">=", Fraction(COVER_GOAL), tag=("cov", e)))
        cons.append(
            Constraint(
                by_edge[e], "<=", Fraction(deg[e] - (delta - COVER_GOAL)), tag=("pack", e)
            )
        )
    bounds = [(Fraction(0), Fraction(1))] * len(live)
    return RationalLP(len(live), bounds, cons)


def _profile(inst, path_ids, n_edges) -> list[int]:
    deg = [0] * n_edges
    for pid in path_ids:
        for e in inst.paths[pid]:
            deg[e] += 1
    return deg


def verify_tree_cover(inst: TreePathInstance, dec: CoverDecomposition) -> bool:
    """True iff each part of ``dec`` covers every tree edge."""
    return verify_cover_decomposition(path_hypergraph(inst), dec)


# ---------------------------------------------------------------------------
# Level colouring


def level_colouring(inst: TreePathInstance, k: int) -> list[int]:
    """Colour tree edges by depth level mod k (root at vertex 0).

    Requires every path to have at least 2k - 1 edges; then one of the two
    monotone legs of each path spans k consecutive levels, so the path
    sees every colour.
    """
    if k < 1:
        raise ValueError("need at least one colour")
    for idx, p in enumerate(inst.paths):
        if len(p) < 2 * k - 1:
            raise ValueError(
                f"path {idx} has {len(p)} edges, below the required {2 * k - 1}"
            )
    _parent, _parent_edge, depth = _root_tree(inst.n_vertices, inst.tree_edges)
    colours = [0] * len(inst.tree_edges)
    for i, (u, v) in enumerate(inst.tree_edges):
        colours[i] = min(depth[u], depth[v]) % k
    return colours


def verify_tree_polychromatic(inst: TreePathInstance, colouring, k: int) -> bool:
    """True iff every path contains all k colours."""
    if len(colouring) != len(inst.tree_edges):
        raise ValueError("colouring is not total over the tree edges")
    want = set(range(k))
    for p in inst.paths:
        if not want <= {colouring[e] for e in p}:
            return False
    return True
