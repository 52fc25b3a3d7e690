"""
Exhaustive search for isometric embeddings into ``(R^n, d_inf)``.

The unknowns are not point coordinates but one *witness* per leaf pair: an
axis and a sign along which every edge of the pair's path must move at full
slope. Two leaf pairs clash when they force opposite full slopes on the same
edge and axis. A clash-free assignment is turned into an embedding by
integrating the forced slopes from a root vertex (unforced slopes are 0).

Why this is complete: in any isometric embedding each leaf-to-leaf path is a
geodesic, so it has such a witness; the witness condition only involves the
per-edge coordinate deltas, which straight edges reproduce. Hence "no
clash-free assignment" means "no isometric embedding in dimension n".

Axes are interchangeable and each can be reflected, so the search only ever
opens the lowest unused axis, with sign ``+``. This prunes symmetric
branches and keeps the search exhaustive.
"""

from __future__ import annotations

import json
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .embedding import PwaEmbedding
from .tree import MetricTree, as_rational, build_tree
from .verify import SectorIndex, verify_isometry

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 7


class SearchInconclusive(RuntimeError):
    """The node budget ran out before the search finished."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"search gave up after {nodes} nodes (budget {budget}); result unknown")
        self.nodes = nodes
        self.budget = budget


class CounterexampleWarning(UserWarning):
    """A tree within the conjectured leaf bound admitted no embedding."""


@dataclass(frozen=True)
class SlopeCertificate:
    """
    Proof object for an ``l_inf`` isometric embedding.

    ``slopes[(edge_id, axis)]`` is the coordinate slope of the edge traversed
    from its ``u`` end to its ``v`` end (the reverse orientation has the
    negated slope). ``witnesses[(a, b)]`` is the sector of a leaf pair.
    """

    dim: int
    slopes: dict
    witnesses: dict

    def slope(self, edge: int, axis: int, forward: bool = True) -> Fraction:
        s = self.slopes[(edge, axis)]
        return s if forward else -s

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "slopes": {f"{e}:{i + 1}": str(s) for (e, i), s in sorted(self.slopes.items())},
            "witnesses": {f"{a}|{b}": str(w) for (a, b), w in sorted(self.witnesses.items())},
        }


def _leaf_pair_paths(tree: MetricTree):
    pairs = []
    for a, b in combinations(tree.leaves(), 2):
        steps = [(s.edge, 1 if s.forward else -1) for s in tree.path(a, b)]
        pairs.append(((a, b), steps))
    # longest paths first so clashes show up early
    pairs.sort(key=lambda item: (-len(item[1]), item[0]))
    return pairs


class _WitnessSearch:
    def __init__(self, tree: MetricTree, n: int, budget: int):
        if n < 1:
            raise ValueError("dimension must be positive")
        self.tree = tree
        self.n = n
        self.budget = budget
        self.pairs = _leaf_pair_paths(tree)
        self.slope = [[0] * n for _ in tree.edges]
        self.count = [[0] * n for _ in tree.edges]  # how many witnesses pin this entry
        self.choice: list[SectorIndex | None] = [None] * len(self.pairs)
        self.nodes = 0

    def _fits(self, steps, axis: int, sign: int) -> bool:
        slope = self.slope
        return all(slope[e][axis] != -sign * d for e, d in steps)

    def _satisfied(self, steps, axis: int, sign: int) -> bool:
        slope = self.slope
        return all(slope[e][axis] == sign * d for e, d in steps)

    def _apply(self, steps, axis, sign, delta):
        for e, d in steps:
            self.count[e][axis] += delta
            if delta > 0:
                self.slope[e][axis] = sign * d
            elif self.count[e][axis] == 0:
                self.slope[e][axis] = 0

    def _options(self, k: int, used: int):
        steps = self.pairs[k][1]
        opts = [(i, s) for i in range(used) for s in (1, -1)]
        if used < self.n:
            opts.append((used, 1))
        # already-satisfied sectors first; order does not affect completeness
        opts.sort(key=lambda o: (not self._satisfied(steps, *o), o))
        return [o for o in opts if self._fits(steps, *o)]

    def _alive(self, k: int, used: int) -> bool:
        if used < self.n:
            return True
        for _, steps in self.pairs[k:]:
            if not any(self._fits(steps, i, s) for i in range(self.n) for s in (1, -1)):
                return False
        return True

    def _solve(self, k: int, used: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchInconclusive(self.nodes, self.budget)
        if k == len(self.pairs):
            return True
        steps = self.pairs[k][1]
        for axis, sign in self._options(k, used):
            self._apply(steps, axis, sign, +1)
            self.choice[k] = SectorIndex(axis, sign)
            new_used = max(used, axis + 1)
            if self._alive(k + 1, new_used) and self._solve(k + 1, new_used):
                return True
            self._apply(steps, axis, sign, -1)
            self.choice[k] = None
        return False

    def run(self) -> tuple[PwaEmbedding, SlopeCertificate] | None:
        if not self._solve(0, 0):
            return None
        slopes = {(e.id, i): Fraction(self.slope[e.id][i]) for e in self.tree.edges for i in range(self.n)}
        witnesses = {pair: w for (pair, _), w in zip(self.pairs, self.choice)}
        cert = SlopeCertificate(self.n, slopes, dict(sorted(witnesses.items())))
        return integrate_slopes(self.tree, cert), cert


def integrate_slopes(tree: MetricTree, cert: SlopeCertificate) -> PwaEmbedding:
    """Place the first vertex at the origin and walk the tree along the slopes."""
    root = tree.vertices[0]
    images = {root: (Fraction(0),) * cert.dim}
    stack = [root]
    while stack:
        x = stack.pop()
        for e in tree.incident_edges(x):
            y = e.other(x)
            if y in images:
                continue
            forward = x == e.u
            images[y] = tuple(a + e.weight * cert.slope(e.id, i, forward) for i, a in enumerate(images[x]))
            stack.append(y)
    return PwaEmbedding("linf", cert.dim, images)


def search_embed_linf(tree: MetricTree, n: int, *, budget: int = DEFAULT_BUDGET):
    """
    Find an isometric embedding of *tree* into ``(R^n, d_inf)`` or prove
    there is none.

    Returns
    -------
    (PwaEmbedding, SlopeCertificate) or None
        None means the search was exhausted: no embedding exists.

    Raises
    ------
    SearchInconclusive
        If more than *budget* search nodes were needed.

    Examples
    --------
    >>> from treembed.tree import star_tree
    >>> search_embed_linf(star_tree(1, 1, 1, 1, 1).to_tree(), 2) is None
    True
    """
    return _WitnessSearch(tree, n, budget).run()


def check_certificate(tree: MetricTree, cert: SlopeCertificate) -> bool:
    """Independently re-check every invariant of a :class:`SlopeCertificate`."""
    n = cert.dim
    for e in tree.edges:
        row = []
        for i in range(n):
            s = cert.slopes.get((e.id, i))
            if s is None or abs(s) > 1:
                return False
            row.append(s)
        if not any(abs(s) == 1 for s in row):
            return False
    for a, b in combinations(tree.leaves(), 2):
        w = cert.witnesses.get((a, b))
        if w is None or not 0 <= w.axis < n:
            return False
        for step in tree.path(a, b):
            if cert.slope(step.edge, w.axis, step.forward) != w.sign:
                return False
    return True


# ---------------------------------------------------------------------- #
# Tree enumeration                                                       #
# ---------------------------------------------------------------------- #


def _canonical(adj: dict[int, set[int]]) -> str:
    """Rooted AHU string taken at the center (minimum over two centers)."""
    nodes = list(adj)
    if len(nodes) == 1:
        return "()"
    deg = {x: len(adj[x]) for x in nodes}
    layer = [x for x in nodes if deg[x] <= 1]
    remaining = len(nodes)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for x in layer:
            for y in adj[x]:
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt

    def enc(x, parent):
        return "(" + "".join(sorted(enc(y, x) for y in adj[x] if y != parent)) + ")"

    return min(enc(c, None) for c in layer)


def _series_reduced(max_leaves: int) -> list[tuple[str, dict]]:
    """All topologies with 2..max_leaves leaves and no degree-2 vertex."""
    base = {0: {1}, 1: {0}}
    frontier = {_canonical(base): base}
    seen = dict(frontier)
    for _ in range(3, max_leaves + 1):
        grown = {}
        for adj in frontier.values():
            for x in adj:
                if len(adj[x]) >= 2:
                    new = {k: set(v) for k, v in adj.items()}
                    leaf = len(new)
                    new[leaf] = {x}
                    new[x].add(leaf)
                    grown.setdefault(_canonical(new), new)
            for x in adj:
                for y in adj[x]:
                    if x < y:
                        new = {k: set(v) for k, v in adj.items()}
                        mid, leaf = len(new), len(new) + 1
                        new[x].discard(y); new[y].discard(x)
                        new[mid] = {x, y, leaf}
                        new[x].add(mid); new[y].add(mid)
                        new[leaf] = {mid}
                        grown.setdefault(_canonical(new), new)
        frontier = grown
        seen.update(frontier)

    def key(item):
        code, adj = item
        return (sum(1 for v in adj.values() if len(v) == 1), len(adj), code)

    return sorted(seen.items(), key=key)


def _labelled_edges(code: str, adj: dict[int, set[int]]) -> list[tuple[str, str]]:
    """Deterministic labels: leaves l1.., interior vertices v1.., in canonical order."""
    root = min((x for x in adj), key=lambda c: (_rooted(adj, c, None) != code, c))
    order = []

    def walk(x, parent):
        order.append(x)
        for y in sorted((y for y in adj[x] if y != parent), key=lambda y: (_rooted(adj, y, x), y)):
            walk(y, x)

    walk(root, None)
    names, nl, ni = {}, 0, 0
    for x in order:
        if len(adj[x]) == 1:
            nl += 1
            names[x] = f"l{nl}"
        else:
            ni += 1
            names[x] = f"v{ni}"
    return sorted((min(names[x], names[y]), max(names[x], names[y])) for x in adj for y in adj[x] if x < y)


def _rooted(adj, x, parent) -> str:
    return "(" + "".join(sorted(_rooted(adj, y, x) for y in adj[x] if y != parent)) + ")"


@dataclass(frozen=True)
class Topology:
    id: str
    leaves: int
    edges: tuple  # tuple[tuple[str, str], ...]


def enumerate_topologies(max_leaves: int) -> list[Topology]:
    if max_leaves < 2:
        raise ValueError("max_leaves must be at least 2")
    out = []
    for code, adj in _series_reduced(max_leaves):
        leaves = sum(1 for v in adj.values() if len(v) == 1)
        out.append(Topology(code, leaves, tuple(_labelled_edges(code, adj))))
    return out


def enumerate_trees(max_leaves: int, weight_grid: Sequence) -> Iterator[MetricTree]:
    """
    Every topology with at most *max_leaves* leaves, with every assignment
    of grid weights to its edges.
    """
    for topo, tree in enumerate_weighted(max_leaves, weight_grid):
        yield tree


def enumerate_weighted(max_leaves: int, weight_grid: Sequence) -> Iterator[tuple[Topology, MetricTree]]:
    grid = [as_rational(w) for w in weight_grid]
    if not grid or any(w <= 0 for w in grid):
        raise ValueError("weight grid must be nonempty and positive")
    for topo in enumerate_topologies(max_leaves):
        for ws in product(grid, repeat=len(topo.edges)):
            yield topo, build_tree((u, v, w) for (u, v), w in zip(topo.edges, ws))


# ---------------------------------------------------------------------- #
# Conjecture sweep                                                       #
# ---------------------------------------------------------------------- #

FOUND, NONE, INCONCLUSIVE = "found", "exhausted-none", "inconclusive"


@dataclass
class SweepRecord:
    topology: str
    edges: list  # [(u, v, weight), ...]
    leaves: int
    dim: int
    outcome: str
    nodes: int

    @property
    def counterexample(self) -> bool:
        return self.outcome == NONE and self.leaves <= 2 ** self.dim

    def to_dict(self) -> dict:
        return {
            "topology": self.topology,
            "weights": [str(w) for _, _, w in self.edges],
            "tree": [f"{u} {v} {w}" for u, v, w in self.edges],
            "leaves": self.leaves,
            "dimension": self.dim,
            "outcome": self.outcome,
            "nodes": self.nodes,
            "counterexample_candidate": self.counterexample,
        }


@dataclass
class SweepReport:
    dim: int
    max_leaves: int
    grid: list
    records: list[SweepRecord] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[SweepRecord]:
        return [r for r in self.records if r.counterexample]

    def counts(self) -> dict[str, int]:
        out = {FOUND: 0, NONE: 0, INCONCLUSIVE: 0}
        for r in self.records:
            out[r.outcome] += 1
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.records)


def _sweep_one(args) -> tuple[str, int]:
    edges, n, budget = args
    tree = build_tree(edges)
    search = _WitnessSearch(tree, n, budget)
    try:
        found = search.run()
    except SearchInconclusive as exc:
        return INCONCLUSIVE, exc.nodes
    if found is None:
        return NONE, search.nodes
    emb, cert = found
    if not verify_isometry(tree, emb, samples=50).passed or not check_certificate(tree, cert):
        raise AssertionError(f"search returned an unverifiable embedding for {tree!r}")
    return FOUND, search.nodes


def conjecture_sweep(n: int, max_leaves: int, weight_grid: Sequence, *,
                     budget: int = DEFAULT_BUDGET, n_jobs: int = 1) -> SweepReport:
    """
    Search every enumerated tree with at most ``max_leaves <= 2**n`` leaves
    for an ``l_inf`` embedding in dimension *n*.

    Exhausted searches are counterexample candidates for the leaf-bound
    conjecture and are raised as :class:`CounterexampleWarning`.
    """
    if max_leaves > 2 ** n:
        raise ValueError(f"max_leaves={max_leaves} exceeds 2**{n}; the conjecture does not apply")
    grid = [as_rational(w) for w in weight_grid]
    items = list(enumerate_weighted(max_leaves, grid))
    jobs = [(tree.edge_list(), n, budget) for _, tree in items]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            outcomes = list(pool.map(_sweep_one, jobs, chunksize=8))
    else:
        outcomes = [_sweep_one(j) for j in jobs]
    report = SweepReport(n, max_leaves, grid)
    for (topo, tree), (outcome, nodes) in zip(items, outcomes):
        rec = SweepRecord(topo.id, tree.edge_list(), len(tree.leaves()), n, outcome, nodes)
        report.records.append(rec)
        if rec.counterexample:
            warnings.warn(f"COUNTEREXAMPLE CANDIDATE: {tree!r} has no embedding in dimension {n}",
                          CounterexampleWarning, stacklevel=2)
        elif outcome == INCONCLUSIVE:
            logger.warning("search inconclusive for %r", tree)
    return report
