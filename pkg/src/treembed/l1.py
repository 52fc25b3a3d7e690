"""
Isometric embeddings into ``(R^n, d_1)``.

``embed_l1`` embeds any tree with ``L`` leaves into ``ceil(L/2)`` dimensions,
which is optimal. It peels off two leaves at a time: the reduced tree is
embedded recursively, one fresh coordinate is appended, and the two removed
leaf edges are sent along that coordinate in opposite directions from the
images of their attachment points.
"""

from __future__ import annotations

from fractions import Fraction

from .embedding import PwaEmbedding, eval_embedding
from .tree import MetricTree, StarTree, TreeError, reducing_leaf_pair, remove_leaf_pair_full


class DimensionError(ValueError):
    """Raised when the requested dimension is below the provable minimum."""


def l1_directions(n: int) -> list[tuple[Fraction, ...]]:
    """The ``2n`` vertices of the unit ``l1`` ball: +e1, -e1, +e2, -e2, ..."""
    out = []
    for i in range(n):
        for s in (1, -1):
            out.append(tuple(Fraction(s if j == i else 0) for j in range(n)))
    return out


def star_embed_l1(star: StarTree, n: int) -> PwaEmbedding:
    """
    Send the center to the origin and arm ``i`` along the ``i``-th signed
    basis direction.

    Raises
    ------
    DimensionError
        If the star has more than ``2n`` arms; no isometric embedding exists then.
    """
    if n < 1:
        raise DimensionError("dimension must be positive")
    if star.k > 2 * n:
        raise DimensionError(
            f"a star with {star.k} arms embeds in (R^{n}, d1) iff it has at most {2 * n} arms")
    dirs = l1_directions(n)
    images = {lab: tuple(a * x for x in dirs[i]) for i, (lab, a) in enumerate(zip(star.labels, star.arms))}
    if star.k != 2:
        images[star.center] = (Fraction(0),) * n
    return PwaEmbedding("l1", n, images)


def min_dim_l1(tree: MetricTree) -> int:
    """Least ``n`` such that *tree* embeds isometrically into ``(R^n, d_1)``."""
    return max(1, -(-len(tree.leaves()) // 2))


def _embed_path(tree: MetricTree) -> PwaEmbedding:
    # two leaves: a single edge after suppression
    (e,) = tree.edges
    return PwaEmbedding("l1", 1, {e.u: (Fraction(0),), e.v: (e.weight,)})


def embed_l1(tree: MetricTree) -> PwaEmbedding:
    """
    Isometric embedding of *tree* into ``(R^n, d_1)`` with ``n = ceil(L/2)``.

    The first leaf of the removed pair goes along the negative half of the
    new axis, the second along the positive half.

    >>> from treembed.tree import build_tree
    >>> t = build_tree([("o", x, 1) for x in "wxyz"])
    >>> sorted(embed_l1(t).images.items())[:2]
    [('o', (Fraction(1, 1), Fraction(0, 1))), ('w', (Fraction(0, 1), Fraction(0, 1)))]
    """
    leaves = tree.leaves()
    if len(leaves) <= 2:
        return _embed_path(tree)
    a0, a1 = reducing_leaf_pair(tree)
    reduced, where = remove_leaf_pair_full(tree, a0, a1)
    inner = embed_l1(reduced)
    if len(reduced.leaves()) not in (len(leaves) - 2, 2):
        raise TreeError(f"leaf pair {a0},{a1} did not reduce the leaf count by two")

    b0, b1 = tree.attachment(a0), tree.attachment(a1)
    images = {}
    for x, p in where.items():
        images[x] = eval_embedding(reduced, inner, p) + (Fraction(0),)
    w0 = tree.edge_between(a0, b0).weight
    w1 = tree.edge_between(a1, b1).weight
    images[a0] = images[b0][:-1] + (-w0,)
    images[a1] = images[b1][:-1] + (w1,)
    return PwaEmbedding("l1", inner.dim + 1, images)
