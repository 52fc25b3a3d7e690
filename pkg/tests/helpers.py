"""Random tree generation and brute-force oracles shared by the tests.

The oracles deliberately avoid the library's own path/distance code: they
go through networkx on a subdivided copy of the tree.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import networkx as nx

from treembed.linf import GeodesicPolyline
from treembed.tree import MetricTree, build_tree


def random_tree(rng: random.Random, leaves: int | None = None, max_den: int = 16) -> MetricTree:
    """Random tree without degree-2 vertices; labels shuffled so sort order is arbitrary."""
    if leaves is None:
        leaves = rng.randint(2, 8)
    names = [f"{rng.choice('abcdefghjk')}{i}" for i in range(2 * leaves)]
    rng.shuffle(names)
    adj = {0: {1}, 1: {0}}
    while sum(1 for v in adj.values() if len(v) == 1) < leaves:
        interior = [x for x in adj if len(adj[x]) >= 2]
        new = len(adj)
        if interior and rng.random() < 0.5:
            x = rng.choice(interior)
            adj[new] = {x}
            adj[x].add(new)
        else:
            x = rng.choice(list(adj))
            y = rng.choice(sorted(adj[x]))
            mid, leaf = new, new + 1
            adj[x].discard(y); adj[y].discard(x)
            adj[mid] = {x, y, leaf}
            adj[x].add(mid); adj[y].add(mid)
            adj[leaf] = {mid}

    def weight():
        return Fraction(rng.randint(1, 3 * max_den), rng.randint(1, max_den))

    return build_tree((names[x], names[y], weight()) for x in adj for y in adj[x] if x < y)


def nx_graph(tree: MetricTree) -> nx.Graph:
    g = nx.Graph()
    for u, v, w in tree.edge_list():
        g.add_edge(u, v, weight=w)
    return g


def nx_distance(tree: MetricTree, a: str, b: str) -> Fraction:
    g = nx_graph(tree)
    path = nx.shortest_path(g, a, b)
    return sum((g[x][y]["weight"] for x, y in zip(path, path[1:])), Fraction(0))


def brute_force_isometric(tree: MetricTree, emb) -> bool:
    """
    Compare all pairs among vertices and edge midpoints: tree distance from
    networkx on the subdivided tree, image distance from the raw norm.
    """
    g = nx.Graph()
    image = {}
    for u, v, w in tree.edge_list():
        m = ("mid", u, v)
        g.add_edge(u, m, weight=w / 2)
        g.add_edge(m, v, weight=w / 2)
        image[m] = tuple((a + b) / 2 for a, b in zip(emb.images[u], emb.images[v]))
    for x in tree.vertices:
        image[x] = emb.images[x]
    lengths = dict(nx.all_pairs_dijkstra_path_length(g))
    for p, q in combinations(list(g.nodes), 2):
        diffs = [abs(a - b) for a, b in zip(image[p], image[q])]
        d = sum(diffs) if emb.norm == "l1" else max(diffs)
        if d != lengths[p][q]:
            return False
    return True


def h_tree() -> MetricTree:
    return build_tree([("a", "b", 1), ("a", "l1", 1), ("a", "l2", 1), ("b", "l3", 1), ("b", "l4", 1)])


def random_geodesic(rng, dim=None, max_points=6):
    dim = dim or rng.randint(1, 4)
    axis, sign = rng.randrange(dim), rng.choice((1, -1))
    pts = [tuple(Fraction(rng.randint(-5, 5)) for _ in range(dim))]
    for _ in range(rng.randint(1, max_points - 1)):
        step = Fraction(rng.randint(1, 12), rng.randint(1, 4))
        delta = [Fraction(rng.randint(-8, 8), 8) * step for _ in range(dim)]
        delta[axis] = sign * step
        pts.append(tuple(a + b for a, b in zip(pts[-1], delta)))
    return GeodesicPolyline(tuple(pts))
