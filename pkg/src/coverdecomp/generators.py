"""Instance generators: extremal constructions and random test supply.

Everything is deterministic; the random kinds take an explicit seed and
use their own ``random.Random`` stream.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .hypergraph import Hypergraph
from .treepaths import TreePathInstance

MAX_RANDOM_CELLS = 10**8  # reject incidence tables beyond desk scale


def gen_kneser_dual(k: int) -> Hypergraph:
    """Dual of the k-subsets of a (2k-1)-element set.

    One vertex per k-subset S of {0..2k-2}; edge i collects the subsets
    containing i.  The result is k-regular with 2k-1 edges of size
    C(2k-2, k-1), and admits no two disjoint set covers: any cover needs
    at least k of the 2k-1 edges, because the k-subset avoiding a smaller
    collection's complement witnesses an uncovered vertex.
    """
    if k < 1:
        raise ValueError("k must be positive")
    ground = list(itertools.combinations(range(2 * k - 1), k))
    edges = [
        [s for s, subset in enumerate(ground) if i in subset]
        for i in range(2 * k - 1)
    ]
    return Hypergraph(len(ground), edges)


def replicate(h: Hypergraph, mu: int) -> Hypergraph:
    """Duplicate every edge ``mu`` times (copies of an edge stay adjacent)."""
    if mu < 1:
        raise ValueError("mu must be positive")
    edges = [e for e in h.edges for _ in range(mu)]
    return Hypergraph(h.n_vertices, edges)


def gen_fano() -> Hypergraph:
    """The 7-point projective plane, via the difference set {1, 2, 4} mod 7."""
    edges = [sorted(((1 + i) % 7, (2 + i) % 7, (4 + i) % 7)) for i in range(7)]
    return Hypergraph(7, edges)


def gen_ptt(k: int) -> Hypergraph:
    """Sibling/ancestor hypergraph on the k-ary tree with k levels.

    Nodes are numbered in breadth-first order.  Every non-leaf contributes
    the k-set of its children; every leaf contributes the k nodes on its
    path to the root.  Any two distinct edges meet in at most one vertex,
    which caps both the VC-dimension and the dual VC-dimension at 2.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    level_start = [0]
    for i in range(k):
        level_start.append(level_start[-1] + k**i)
    n = level_start[-1]
    first_leaf = level_start[k - 1]

    def children(v):
        return range(v * k + 1, v * k + k + 1)

    def parent(v):
        return (v - 1) // k

    edges = []
    for v in range(first_leaf):  # non-leaves, BFS order
        edges.append(list(children(v)))
    for v in range(first_leaf, n):  # leaves
        path = []
        x = v
        while True:
            path.append(x)
            if x == 0:
                break
            x = parent(x)
        edges.append(path)
    return Hypergraph(n, edges)


def gen_random_hypergraph(R_target: int, delta_target: int, seed: int) -> Hypergraph:
    """Random incidence hypergraph sized so edges average ~R, degrees ~delta.

    n = R^2 * delta vertices, m = R * delta^2 edges, each incidence kept
    independently with probability 1/(R * delta).  The raw realisation is
    returned; callers measure the realised max edge size and min degree.
    """
    if R_target < 2 or delta_target < 2:
        raise ValueError("targets must be at least 2")
    n = R_target * R_target * delta_target
    m = R_target * delta_target * delta_target
    if n * m > MAX_RANDOM_CELLS:
        raise ValueError(f"{n} x {m} incidence table exceeds desk scale")
    p = 1.0 / (R_target * delta_target)
    rng = random.Random(seed)
    edges = []
    for _ in range(m):
        edges.append([v for v in range(n) if rng.random() < p])
    return Hypergraph(n, edges)


def gen_complement_singletons(n: int) -> Hypergraph:
    """n vertices and the n edges V minus one vertex; cross-free, (n-1)-regular."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return Hypergraph(n, [[u for u in range(n) if u != v] for v in range(n)])


def gen_tary_counterexample(k: int) -> TreePathInstance:
    """Complete t-ary tree of height k-1, t = 2 * k^(k-1), with all
    leaf-to-leaf paths through the root as hyperedges (2k-2 tree edges
    each).  No polychromatic k-colouring of the tree edges exists.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    t = 2 * k ** (k - 1)
    height = k - 1
    level_start = [0]
    for i in range(height + 1):
        level_start.append(level_start[-1] + t**i)
    n = level_start[-1]
    if n > 10**6:
        raise ValueError(f"instance with {n} nodes exceeds desk scale")
    tree_edges = [((v - 1) // t, v) for v in range(1, n)]
    first_leaf = level_start[height]
    leaves = range(first_leaf, n)

    def root_child_of(v):
        while (v - 1) // t != 0:
            v = (v - 1) // t
        return v

    subtree = {v: root_child_of(v) for v in leaves}
    endpoints = [
        (a, b)
        for a, b in itertools.combinations(leaves, 2)
        if subtree[a] != subtree[b]
    ]
    return TreePathInstance.from_endpoints(n, tree_edges, endpoints)


def gen_random_tree_paths(
    n: int, n_paths: int, min_len: int, seed: int, max_tries_per_path: int = 1000
) -> TreePathInstance:
    """Random attachment tree plus random endpoint pairs.

    Vertex i attaches to a uniform j < i.  Each path is a uniform vertex
    pair redrawn until its tree path has at least ``min_len`` edges;
    exceeding the retry cap raises.  Tree edges not lying on any sampled
    path are possible; callers filter on the measured degree profile.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    if min_len > n - 1:
        raise ValueError("min_len cannot exceed the edge count of the tree")
    rng = random.Random(seed)
    tree_edges = [(rng.randrange(i), i) for i in range(1, n)]
    parent = {v: u for u, v in tree_edges}
    depth = [0] * n
    for v in range(1, n):
        depth[v] = depth[parent[v]] + 1

    def dist(a, b):
        d = 0
        while depth[a] > depth[b]:
            a, d = parent[a], d + 1
        while depth[b] > depth[a]:
            b, d = parent[b], d + 1
        while a != b:
            a, b, d = parent[a], parent[b], d + 2
        return d

    endpoints = []
    for _ in range(n_paths):
        for _try in range(max_tries_per_path):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b and dist(a, b) >= min_len:
                endpoints.append((a, b))
                break
        else:
            raise ValueError(
                f"could not sample a path of length >= {min_len} "
                f"in {max_tries_per_path} tries"
            )
    return TreePathInstance.from_endpoints(n, tree_edges, endpoints)


# ---------------------------------------------------------------------------
# Declarative front end used by the CLI


KINDS = (
    "kneser_dual",
    "fano",
    "ptt",
    "random",
    "tary_counterexample",
    "complement_singletons",
    "replicate",
    "random_tree_paths",
)


@dataclass(frozen=True)
class GenSpec:
    """A generator invocation: which construction plus its parameters."""

    kind: str
    params: dict = field(default_factory=dict)
    base: Hypergraph | None = None  # input instance for `replicate`

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")


def generate(spec: GenSpec):
    """Run the generator described by ``spec``; returns a Hypergraph or a
    TreePathInstance depending on the kind."""
    p = spec.params
    if spec.kind == "kneser_dual":
        return gen_kneser_dual(p["k"])
    if spec.kind == "fano":
        return gen_fano()
    if spec.kind == "ptt":
        return gen_ptt(p["k"])
    if spec.kind == "random":
        return gen_random_hypergraph(p["R_target"], p["delta_target"], p.get("seed", 0))
    if spec.kind == "tary_counterexample":
        return gen_tary_counterexample(p["k"])
    if spec.kind == "complement_singletons":
        return gen_complement_singletons(p["n"])
    if spec.kind == "replicate":
        if spec.base is None:
            raise ValueError("replicate needs a base hypergraph")
        return replicate(spec.base, p["mu"])
    if spec.kind == "random_tree_paths":
        return gen_random_tree_paths(
            p["n"], p["n_paths"], p.get("min_len", 1), p.get("seed", 0)
        )
    raise AssertionError(spec.kind)
