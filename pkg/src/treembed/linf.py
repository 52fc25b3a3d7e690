"""
Constructions and geometry in ``(R^n, d_inf)``.

Sectors: ``q`` lies in sector ``(i, +)`` of ``p`` when the maximum
coordinate gap ``d_inf(p, q)`` is attained as ``q_i - p_i`` (and ``(i, -)``
for ``p_i - q_i``). A path is a ``d_inf`` geodesic iff it stays in one fixed
sector of each of its earlier points; for polylines this reduces to every
segment moving at full slope, with one sign, along a shared coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .embedding import PwaEmbedding, add, dist, norm, scale, sub
from .l1 import DimensionError
from .tree import MetricTree, StarTree, TreeError, as_rational
from .verify import SectorIndex, verify_isometry


class NotGeodesicError(ValueError):
    """Raised when an operation requires a geodesic polyline and gets another path."""


class DirectionConflict(AssertionError):
    """Two leaf directions of a verified embedding are positively proportional."""


def sign_vectors(n: int) -> list[tuple[Fraction, ...]]:
    """All of ``{+1, -1}^n`` in binary-counting order, ``+1`` before ``-1``."""
    return [tuple(Fraction(s) for s in v) for v in product((1, -1), repeat=n)]


def star_embed_linf(star: StarTree, n: int) -> PwaEmbedding:
    """
    Send the center to the origin and arm ``i`` along the ``i``-th sign
    vector, so every tip sits on a vertex of a scaled unit cube.

    Raises
    ------
    DimensionError
        If the star has more than ``2**n`` arms.
    """
    if n < 1:
        raise DimensionError("dimension must be positive")
    if star.k > 2 ** n:
        raise DimensionError(
            f"a star with {star.k} arms embeds in (R^{n}, dinf) iff it has at most {2 ** n} arms")
    vs = sign_vectors(n)
    if star.k == 2:
        # the center is suppressed, so both arms must lie on one line
        vs = [vs[0], vs[-1]]
    images = {lab: scale(a, vs[i]) for i, (lab, a) in enumerate(zip(star.labels, star.arms))}
    if star.k != 2:
        images[star.center] = (Fraction(0),) * n
    return PwaEmbedding("linf", n, images)


def kuratowski_embed_linf(tree: MetricTree) -> PwaEmbedding:
    """``x -> (d(x, l_1), ..., d(x, l_L))`` over the leaves in label order."""
    leaves = tree.leaves()
    images = {x: tuple(tree.distance(x, leaf) for leaf in leaves) for x in tree.vertices}
    return PwaEmbedding("linf", len(leaves), images)


def min_dim_linf_bounds(tree: MetricTree) -> tuple[int, int]:
    """
    ``(lower, upper)`` for the least ``n`` admitting an isometric embedding
    into ``(R^n, d_inf)``.

    The lower bound ``ceil(log2 L)`` is exact for stars and paths; for other
    trees the best known upper bound is the leaf count.
    """
    count = len(tree.leaves())
    lower = max(1, math.ceil(math.log2(count)))
    while 2 ** lower < count:  # guard against float rounding in log2
        lower += 1
    upper = lower if count <= 2 or tree.is_star() else count
    return lower, upper


# ---------------------------------------------------------------------- #
# Sectors and geodesics                                                  #
# ---------------------------------------------------------------------- #


def in_sector(p: Sequence[Fraction], q: Sequence[Fraction], s: SectorIndex) -> bool:
    """True iff ``s.sign * (q_i - p_i) == d_inf(p, q)``."""
    d = dist(p, q, "linf")
    if not 0 <= s.axis < len(p):
        raise IndexError(f"axis {s.axis} out of range for dimension {len(p)}")
    return s.sign * (q[s.axis] - p[s.axis]) == d


@dataclass(frozen=True)
class GeodesicPolyline:
    """Piecewise-affine path through rational breakpoints, parametrized by ``d_inf`` arclength."""

    breakpoints: tuple

    def __post_init__(self):
        pts = tuple(tuple(as_rational(a) if not isinstance(a, Fraction) else a for a in p)
                    for p in self.breakpoints)
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two breakpoints")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("breakpoints have mixed dimensions")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ValueError("consecutive breakpoints must differ")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def dim(self) -> int:
        return len(self.breakpoints[0])

    def segment_lengths(self) -> list[Fraction]:
        return [dist(p, q, "linf") for p, q in zip(self.breakpoints, self.breakpoints[1:])]

    @property
    def length(self) -> Fraction:
        return sum(self.segment_lengths(), Fraction(0))

    def at(self, t) -> tuple:
        """Point at arclength *t*."""
        t = as_rational(t)
        if t < 0 or t > self.length:
            raise ValueError(f"arclength {t} outside [0, {self.length}]")
        for p, q, w in zip(self.breakpoints, self.breakpoints[1:], self.segment_lengths()):
            if t <= w:
                return add(p, scale(t / w, sub(q, p)))
            t -= w
        return self.breakpoints[-1]


def is_geodesic_polyline(poly: GeodesicPolyline) -> SectorIndex | None:
    """
    A sector ``(i, sign)`` containing every later breakpoint from every
    earlier one, or None if the polyline is not a ``d_inf`` geodesic.

    Any sector that works is accepted; the first in ``(axis, +/-)`` order is
    returned.
    """
    pts = poly.breakpoints
    for i in range(poly.dim):
        for sign in (1, -1):
            s = SectorIndex(i, sign)
            if all(in_sector(p, q, s) for p, q in zip(pts, pts[1:])):
                return s
    return None


def shorten_geodesic(poly: GeodesicPolyline, c, d) -> GeodesicPolyline:
    """
    Cut the stretch between arclengths *c* and *d* out of a geodesic and
    translate the tail back so it starts at ``poly.at(c)``.

    The result has length ``length - (d - c)`` and is again a geodesic.
    """
    c, d = as_rational(c), as_rational(d)
    total = poly.length
    if not 0 < c < d < total:
        raise ValueError(f"need 0 < c < d < {total}, got c={c}, d={d}")
    if is_geodesic_polyline(poly) is None:
        raise NotGeodesicError("input polyline is not a d_inf geodesic")
    shift = sub(poly.at(c), poly.at(d))
    head, tail = [], []
    t = Fraction(0)
    for p, w in zip(poly.breakpoints, [Fraction(0)] + poly.segment_lengths()):
        t += w
        if t < c:
            head.append(p)
        elif t > d:
            tail.append(add(p, shift))
    pts = head + [poly.at(c)] + tail
    dedup = [pts[0]]
    for p in pts[1:]:
        if p != dedup[-1]:
            dedup.append(p)
    return GeodesicPolyline(tuple(dedup))


# ---------------------------------------------------------------------- #
# Leaf-direction star                                                    #
# ---------------------------------------------------------------------- #


def positively_proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """True iff ``u == t * v`` for some ``t > 0`` (both nonzero)."""
    j = next((i for i, a in enumerate(v) if a != 0), None)
    if j is None or not any(u):
        return False
    t = u[j] / v[j]
    return t > 0 and all(a == t * b for a, b in zip(u, v))


def leaf_direction_star(tree: MetricTree, emb: PwaEmbedding) -> tuple[StarTree, PwaEmbedding]:
    """
    Collapse a verified embedding onto its leaf edges.

    Each leaf ``a`` with attachment ``b`` contributes an arm of length
    ``w(a, b)`` embedded as ``t -> t * (F(a) - F(b)) / w``; the arms share
    the origin as center. The result is the star of leaf-edge weights with
    an isometric embedding in the same space, which is why a tree can have no
    more leaves than a star can have arms.

    Raises
    ------
    ValueError
        If *emb* does not verify.
    DirectionConflict
        If two leaf directions are positively proportional.
    """
    report = verify_isometry(tree, emb, samples=0)
    if not report.passed:
        raise ValueError(f"embedding is not isometric: {report.failures[:3]}")
    labels, arms, dirs = [], [], []
    for a in tree.leaves():
        b = tree.attachment(a)
        labels.append(a)
        arms.append(tree.edge_between(a, b).weight)
        dirs.append(sub(emb.images[a], emb.images[b]))
    for (i, u), (j, v) in combinations(enumerate(dirs), 2):
        if positively_proportional(u, v):
            raise DirectionConflict(f"leaf directions of {labels[i]} and {labels[j]} coincide")
    center = "o"
    while center in labels:
        center += "_"
    star = StarTree(tuple(arms), tuple(labels), center=center)
    images = dict(zip(labels, dirs))
    if star.k != 2:
        images[center] = (Fraction(0),) * emb.dim
    for lab, arm, vec in zip(labels, arms, dirs):
        assert norm(vec, emb.norm) == arm
    return star, PwaEmbedding(emb.norm, emb.dim, images)
