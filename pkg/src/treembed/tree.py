"""
Finite simplicial metric trees with exact rational edge weights.

A :class:`MetricTree` is an immutable, validated weighted tree. Points of the
tree are either vertices or interior points of an edge (:class:`TreePoint`);
distances, paths, medians and betweenness are computed exactly with
:class:`fractions.Fraction`.

Interior vertices of degree 2 are suppressed at build time: their two edges
are merged into one edge of summed weight, and the former vertex is kept in
``MetricTree.suppressed`` as a point on the merged edge.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction, str]


class TreeError(ValueError):
    """Raised for structurally invalid tree input."""


class PointError(ValueError):
    """Raised when a point does not lie on the tree."""


def as_rational(value: Number) -> Fraction:
    """Convert *value* to an exact Fraction. Floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use int, Fraction or str")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Edge(NamedTuple):
    """Undirected edge with ``u < v`` in label order."""

    id: int
    u: str
    v: str
    weight: Fraction

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise PointError(f"{x!r} is not an endpoint of edge {self.id}")


class PathStep(NamedTuple):
    """One edge portion of a path; ``forward`` means traversed from ``u`` toward ``v``."""

    edge: int
    forward: bool
    length: Fraction


@dataclass(frozen=True)
class TreePoint:
    """
    A vertex, or an interior point of an edge.

    Interior points are stored as ``(edge, offset)`` with the offset measured
    from the edge's ``u`` endpoint (the label-smaller one), so equal points
    compare equal. Build them through :meth:`MetricTree.point` which performs
    the canonicalization; a direct ``TreePoint(vertex=...)`` is also fine.
    """

    vertex: str | None = None
    edge: int | None = None
    offset: Fraction | None = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"TreePoint({self.vertex!r})"
        return f"TreePoint(edge={self.edge}, offset={self.offset})"


PointLike = Union[TreePoint, str]


class MetricTree:
    """
    Immutable finite metric tree.

    Build instances with :func:`build_tree`; the constructor expects already
    validated, suppressed input.

    Attributes
    ----------
    vertices : tuple[str, ...]
        Vertex labels, sorted.
    edges : tuple[Edge, ...]
        Edges sorted by ``(u, v)``; ``edges[i].id == i``.
    suppressed : dict[str, TreePoint]
        Degree-2 vertices removed at build time and where they now sit.
    """

    def __init__(self, edges: Iterable[tuple[str, str, Fraction]], suppressed=None):
        norm = sorted((min(a, b), max(a, b), Fraction(w)) for a, b, w in edges)
        self.edges = tuple(Edge(i, u, v, w) for i, (u, v, w) in enumerate(norm))
        self.vertices = tuple(sorted({x for e in self.edges for x in (e.u, e.v)}))
        self._adj: dict[str, list[tuple[str, Edge]]] = {x: [] for x in self.vertices}
        for e in self.edges:
            self._adj[e.u].append((e.v, e))
            self._adj[e.v].append((e.u, e))
        for x in self._adj:
            self._adj[x].sort()
        self._edge_by_ends = {frozenset((e.u, e.v)): e for e in self.edges}
        self.suppressed = dict(suppressed or {})
        self._dist, self._toward = self._all_pairs()

    def _all_pairs(self):
        # BFS from every vertex; _toward[a][b] is the edge leaving b in the direction of a.
        dist: dict[str, dict[str, Fraction]] = {}
        toward: dict[str, dict[str, Edge | None]] = {}
        for root in self.vertices:
            d = {root: Fraction(0)}
            t: dict[str, Edge | None] = {root: None}
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y, e in self._adj[x]:
                    if y not in d:
                        d[y] = d[x] + e.weight
                        t[y] = e
                        queue.append(y)
            dist[root] = d
            toward[root] = t
        return dist, toward

    # ---- structure --------------------------------------------------- #

    def __repr__(self) -> str:
        body = ", ".join(f"({e.u}, {e.v}, {e.weight})" for e in self.edges)
        return f"MetricTree([{body}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, MetricTree) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def degree(self, x: str) -> int:
        return len(self._adj[x])

    def neighbors(self, x: str) -> list[str]:
        return [y for y, _ in self._adj[x]]

    def edge_between(self, a: str, b: str) -> Edge:
        try:
            return self._edge_by_ends[frozenset((a, b))]
        except KeyError:
            raise PointError(f"no edge between {a!r} and {b!r}") from None

    def incident_edges(self, x: str) -> list[Edge]:
        return [e for _, e in self._adj[x]]

    @property
    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges), Fraction(0))

    def edge_list(self) -> list[tuple[str, str, Fraction]]:
        return [(e.u, e.v, e.weight) for e in self.edges]

    # ---- points ------------------------------------------------------ #

    def point(self, a: str, b: str | None = None, offset: Number = 0) -> TreePoint:
        """
        Return the canonical point at distance *offset* from vertex *a*
        along the edge ``a-b``. With ``b`` omitted, the vertex *a* itself.
        """
        if a not in self._adj:
            raise PointError(f"unknown vertex {a!r}")
        if b is None:
            return TreePoint(vertex=a)
        e = self.edge_between(a, b)
        off = as_rational(offset)
        if off < 0 or off > e.weight:
            raise PointError(f"offset {off} outside edge {a}-{b} of weight {e.weight}")
        if off == 0:
            return TreePoint(vertex=a)
        if off == e.weight:
            return TreePoint(vertex=b)
        if a != e.u:
            off = e.weight - off
        return TreePoint(edge=e.id, offset=off)

    def as_point(self, p: PointLike) -> TreePoint:
        if isinstance(p, str):
            return self.point(p)
        if not isinstance(p, TreePoint):
            raise PointError(f"not a tree point: {p!r}")
        if p.is_vertex:
            if p.vertex not in self._adj:
                raise PointError(f"unknown vertex {p.vertex!r}")
            return p
        if p.edge is None or not 0 <= p.edge < len(self.edges):
            raise PointError(f"unknown edge {p.edge!r}")
        e = self.edges[p.edge]
        return self.point(e.u, e.v, p.offset)

    def _dist_to_vertex(self, p: TreePoint, x: str) -> Fraction:
        if p.is_vertex:
            return self._dist[p.vertex][x]
        e = self.edges[p.edge]
        return min(p.offset + self._dist[e.u][x], e.weight - p.offset + self._dist[e.v][x])

    def distance(self, p: PointLike, q: PointLike) -> Fraction:
        """Exact length of the unique path between *p* and *q*."""
        p, q = self.as_point(p), self.as_point(q)
        if q.is_vertex:
            return self._dist_to_vertex(p, q.vertex)
        if p.is_vertex:
            return self._dist_to_vertex(q, p.vertex)
        if p.edge == q.edge:
            return abs(p.offset - q.offset)
        e = self.edges[q.edge]
        return min(q.offset + self._dist_to_vertex(p, e.u),
                   e.weight - q.offset + self._dist_to_vertex(p, e.v))

    def _vertex_path(self, a: str, b: str) -> list[PathStep]:
        steps = []
        x = a
        while x != b:
            e = self._toward[b][x]
            y = e.other(x)
            steps.append(PathStep(e.id, x == e.u, e.weight))
            x = y
        return steps

    def _exit(self, p: TreePoint, q: TreePoint) -> tuple[str, PathStep | None]:
        """Endpoint through which the path from *p* toward *q* leaves p's edge."""
        if p.is_vertex:
            return p.vertex, None
        e = self.edges[p.edge]
        if self._dist_to_vertex(q, e.u) < self._dist_to_vertex(q, e.v):
            return e.u, PathStep(e.id, False, p.offset)
        return e.v, PathStep(e.id, True, e.weight - p.offset)

    def path(self, p: PointLike, q: PointLike) -> list[PathStep]:
        """
        The unique simple path from *p* to *q* as a list of edge portions.

        The traversed lengths sum to ``distance(p, q)``.
        """
        p, q = self.as_point(p), self.as_point(q)
        if p == q:
            return []
        if not p.is_vertex and not q.is_vertex and p.edge == q.edge:
            e = self.edges[p.edge]
            return [PathStep(e.id, q.offset > p.offset, abs(q.offset - p.offset))]
        x, first = self._exit(p, q)
        y, last_rev = self._exit(q, p)
        steps = [first] if first is not None else []
        steps += self._vertex_path(x, y)
        if last_rev is not None:
            steps.append(PathStep(last_rev.edge, not last_rev.forward, last_rev.length))
        return steps

    def point_along(self, p: PointLike, q: PointLike, t: Number) -> TreePoint:
        """The point on the path from *p* to *q* at distance *t* from *p*."""
        p, q = self.as_point(p), self.as_point(q)
        t = as_rational(t)
        total = self.distance(p, q)
        if t < 0 or t > total:
            raise PointError(f"distance {t} outside [0, {total}]")
        if t == 0:
            return p
        if t == total:
            return q
        start = p
        for step in self.path(p, q):
            e = self.edges[step.edge]
            if start.is_vertex:
                origin = Fraction(0) if start.vertex == e.u else e.weight
            else:
                origin = start.offset
            if t <= step.length:
                off = origin + t if step.forward else origin - t
                return self.point(e.u, e.v, off)
            t -= step.length
            start = TreePoint(vertex=e.v if step.forward else e.u)
        raise AssertionError("unreachable: path lengths disagree with distance")

    # ---- structure --------------------------------------------------- #

    def leaves(self) -> list[str]:
        """Degree-1 vertices in label order."""
        return [x for x in self.vertices if len(self._adj[x]) == 1]

    def interior_vertices(self) -> list[str]:
        return [x for x in self.vertices if len(self._adj[x]) > 1]

    def attachment(self, leaf: str) -> str:
        """The unique neighbour of a leaf."""
        if self.degree(leaf) != 1:
            raise TreeError(f"{leaf!r} is not a leaf")
        return self._adj[leaf][0][0]

    def is_star(self) -> bool:
        return len(self.interior_vertices()) == 1

    def is_between(self, x: PointLike, y: PointLike, z: PointLike) -> bool:
        """True iff ``d(x, z) == d(x, y) + d(y, z)``."""
        return self.distance(x, z) == self.distance(x, y) + self.distance(y, z)

    def median(self, x: PointLike, y: PointLike, z: PointLike) -> TreePoint:
        """
        The branch point ``w`` of three points: it lies on all three
        connecting paths, so each pairwise distance splits additively at ``w``.
        """
        dxy, dxz, dyz = self.distance(x, y), self.distance(x, z), self.distance(y, z)
        return self.point_along(x, y, (dxy + dxz - dyz) / 2)


# ---------------------------------------------------------------------- #
# Construction                                                           #
# ---------------------------------------------------------------------- #


def _suppress(edges: dict[frozenset, Fraction], keep: Iterable[str] = ()):
    """
    Merge away degree-2 vertices (other than those in *keep*).

    Returns the new edge dict and, for every suppressed vertex, a triple
    ``(a, b, offset_from_a)`` locating it on the final merged edge ``a-b``.
    """
    edges = dict(edges)
    keep = set(keep)
    adj: dict[str, set[str]] = {}
    for key in edges:
        a, b = tuple(key)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    # (a, b, offset from a) on the current edge a-b
    located: dict[str, tuple[str, str, Fraction]] = {}
    for v in sorted(adj):
        if len(adj[v]) != 2 or v in keep:
            continue
        u, w = sorted(adj[v])
        x = edges.pop(frozenset((u, v)))
        y = edges.pop(frozenset((v, w)))
        edges[frozenset((u, w))] = x + y
        adj[u].discard(v); adj[u].add(w)
        adj[w].discard(v); adj[w].add(u)
        del adj[v]
        for name, (a, b, off) in list(located.items()):
            if {a, b} == {u, v}:
                located[name] = (u, w, off if a == u else x - off)
            elif {a, b} == {v, w}:
                located[name] = (u, w, x + (off if a == v else y - off))
        located[v] = (u, w, x)
    return edges, located


def build_tree(edge_list: Iterable[tuple[str, str, Number]]) -> MetricTree:
    """
    Validate an edge list and return a :class:`MetricTree`.

    Degree-2 interior vertices are suppressed; the suppression is logged and
    recorded in ``tree.suppressed``.

    Raises
    ------
    TreeError
        On an empty, disconnected or cyclic input, a self loop, a duplicate
        edge or a non-positive weight.

    Examples
    --------
    >>> t = build_tree([("a", "b", 1), ("b", "c", "1/2")])
    >>> t.edge_list()
    [('a', 'c', Fraction(3, 2))]
    >>> t.distance("a", t.suppressed["b"])
    Fraction(1, 1)
    """
    edges: dict[frozenset, Fraction] = {}
    for item in edge_list:
        try:
            a, b, w = item
        except (TypeError, ValueError):
            raise TreeError(f"edge must be (label, label, weight), got {item!r}") from None
        a, b = str(a), str(b)
        w = as_rational(w)
        if a == b:
            raise TreeError(f"self loop at {a!r}")
        if w <= 0:
            raise TreeError(f"edge {a}-{b} has non-positive weight {w}")
        key = frozenset((a, b))
        if key in edges:
            raise TreeError(f"duplicate edge {a}-{b}")
        edges[key] = w
    if not edges:
        raise TreeError("a tree needs at least one edge")

    vertices = {x for key in edges for x in key}
    parent = {x: x for x in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for key in sorted(edges, key=sorted):
        a, b = sorted(key)
        ra, rb = find(a), find(b)
        if ra == rb:
            raise TreeError(f"cycle detected through edge {a}-{b}")
        parent[ra] = rb
    if len({find(x) for x in vertices}) != 1:
        raise TreeError("input is disconnected")

    merged, located = _suppress(edges)
    if located:
        logger.info("suppressed degree-2 vertices: %s", ", ".join(sorted(located)))
    tree = MetricTree((*sorted(k), w) for k, w in merged.items())
    tree.suppressed = {v: tree.point(a, b, off) for v, (a, b, off) in located.items()}
    return tree


def remove_leaf_pair_full(tree: MetricTree, a0: str, a1: str):
    """
    Like :func:`remove_leaf_pair`, but also returns the location in the
    reduced tree of every surviving vertex of *tree* (as a TreePoint).
    """
    leaves = tree.leaves()
    for a in (a0, a1):
        if a not in leaves:
            raise TreeError(f"{a!r} is not a leaf")
    if a0 == a1:
        raise TreeError("the two leaves must differ")
    if len(leaves) < 3:
        raise TreeError("need at least 3 leaves to remove a pair")
    edges = {frozenset((e.u, e.v)): e.weight for e in tree.edges if a0 not in (e.u, e.v) and a1 not in (e.u, e.v)}
    merged, located = _suppress(edges)
    reduced = MetricTree((*sorted(k), w) for k, w in merged.items())
    where = {}
    for x in tree.vertices:
        if x in (a0, a1):
            continue
        if x in located:
            a, b, off = located[x]
            where[x] = reduced.point(a, b, off)
        else:
            where[x] = TreePoint(vertex=x)
    return reduced, where


def remove_leaf_pair(tree: MetricTree, a0: str, a1: str) -> tuple[MetricTree, TreePoint, TreePoint]:
    """
    Delete leaves *a0*, *a1* with their edges, suppress emerging degree-2
    vertices, and locate the former attachment vertices in the result.
    """
    reduced, where = remove_leaf_pair_full(tree, a0, a1)
    return reduced, where[tree.attachment(a0)], where[tree.attachment(a1)]


def reducing_leaf_pair(tree: MetricTree) -> tuple[str, str]:
    """
    Deterministic leaf pair whose removal drops the leaf count by two.

    Pairs are scanned from the label-greatest downward; a pair hanging off a
    common degree-3 vertex is skipped, since that vertex would become a leaf.
    With three leaves every pair leaves a path, and the first pair is used.
    """
    leaves = tree.leaves()
    if len(leaves) < 3:
        raise TreeError("need at least 3 leaves")
    pairs = sorted(combinations(leaves, 2), reverse=True)
    if len(leaves) == 3:
        return pairs[0]
    for a0, a1 in pairs:
        b0, b1 = tree.attachment(a0), tree.attachment(a1)
        if b0 != b1 or tree.degree(b0) > 3:
            return a0, a1
    raise AssertionError("no reducing pair; tree has a single degree-3 interior vertex and >3 leaves")


@dataclass(frozen=True)
class StarTree:
    """
    Star with arms of the given lengths around a center.

    ``labels`` names the arm tips; by default ``"1"``, ``"2"``, ...
    """

    arms: tuple[Fraction, ...]
    labels: tuple[str, ...] | None = None
    center: str = "o"

    def __post_init__(self):
        arms = tuple(as_rational(a) for a in self.arms)
        if not arms:
            raise TreeError("a star needs at least one arm")
        if any(a <= 0 for a in arms):
            raise TreeError("arm lengths must be positive")
        object.__setattr__(self, "arms", arms)
        labels = self.labels or tuple(str(i + 1) for i in range(len(arms)))
        if len(labels) != len(arms) or len(set(labels)) != len(labels) or self.center in labels:
            raise TreeError("star labels must be distinct, one per arm, and differ from the center")
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def k(self) -> int:
        return len(self.arms)

    def to_tree(self) -> MetricTree:
        """
        Realize as a MetricTree. With two arms the center has degree 2 and
        is suppressed; it stays reachable via :meth:`center_point`.
        """
        return build_tree((self.center, lab, a) for lab, a in zip(self.labels, self.arms))

    def center_point(self, tree: MetricTree) -> TreePoint:
        if self.center in tree.suppressed:
            return tree.suppressed[self.center]
        return tree.point(self.center)

    def arm_point(self, tree: MetricTree, i: int, t: Number) -> TreePoint:
        """The point ``(i, t)``: distance *t* from the center along arm *i* (0-based)."""
        return tree.point_along(self.center_point(tree), self.labels[i], t)

    @classmethod
    def from_tree(cls, tree: MetricTree) -> "StarTree":
        """Inverse of :meth:`to_tree` for trees with one interior vertex."""
        if not tree.is_star():
            raise TreeError("tree is not a star")
        (c,) = tree.interior_vertices()
        labels = tuple(tree.neighbors(c))
        arms = tuple(tree.edge_between(c, x).weight for x in labels)
        return cls(arms, labels, center=c)


def star_tree(*arms: Number) -> StarTree:
    return StarTree(tuple(arms))
