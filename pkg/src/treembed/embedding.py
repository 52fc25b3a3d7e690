"""Piecewise-affine embeddings and the two norms they live in."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .tree import MetricTree, PointLike, PointError

NORMS = ("l1", "linf")

Vector = tuple  # tuple[Fraction, ...]


class EmbeddingError(ValueError):
    """Raised for malformed embeddings (missing images, mixed dimensions)."""


def sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(p, q))


def add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(p, q))


def scale(t: Fraction, p: Sequence[Fraction]) -> Vector:
    return tuple(t * a for a in p)


def norm(v: Sequence[Fraction], kind: str) -> Fraction:
    if kind == "l1":
        return sum((abs(a) for a in v), Fraction(0))
    if kind == "linf":
        return max((abs(a) for a in v), default=Fraction(0))
    raise ValueError(f"unknown norm {kind!r}; expected one of {NORMS}")


def dist(p: Sequence[Fraction], q: Sequence[Fraction], kind: str) -> Fraction:
    if len(p) != len(q):
        raise EmbeddingError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return norm(sub(p, q), kind)


@dataclass(frozen=True)
class PwaEmbedding:
    """
    Vertex images of a piecewise-affine map into ``(R^n, d_norm)``.

    Edges are understood to map affinely onto the segment between their
    endpoint images; :func:`treembed.verify.eval_embedding` evaluates the
    map anywhere on the tree.
    """

    norm: str
    dim: int
    images: Mapping[str, Vector] = field(default_factory=dict)

    def __post_init__(self):
        if self.norm not in NORMS:
            raise ValueError(f"unknown norm {self.norm!r}; expected one of {NORMS}")
        if self.dim < 1:
            raise EmbeddingError("dimension must be positive")
        fixed = {}
        for label, vec in self.images.items():
            vec = tuple(Fraction(a) for a in vec)
            if len(vec) != self.dim:
                raise EmbeddingError(
                    f"image of {label!r} has {len(vec)} coordinates, expected {self.dim}")
            fixed[label] = vec
        object.__setattr__(self, "images", dict(sorted(fixed.items())))

    def __getitem__(self, label: str) -> Vector:
        return self.images[label]

    def translated(self, shift: Sequence[Fraction]) -> "PwaEmbedding":
        if len(shift) != self.dim:
            raise EmbeddingError("shift has wrong dimension")
        return PwaEmbedding(self.norm, self.dim, {k: add(v, shift) for k, v in self.images.items()})

    def padded(self, dim: int) -> "PwaEmbedding":
        """Append zero coordinates up to *dim*; isometry is preserved."""
        if dim < self.dim:
            raise EmbeddingError("cannot pad to a smaller dimension")
        extra = (Fraction(0),) * (dim - self.dim)
        return PwaEmbedding(self.norm, dim, {k: v + extra for k, v in self.images.items()})

    def with_image(self, label: str, vec: Sequence[Fraction]) -> "PwaEmbedding":
        images = dict(self.images)
        images[label] = tuple(vec)
        return PwaEmbedding(self.norm, self.dim, images)

    def check_covers(self, tree: MetricTree) -> None:
        missing = [x for x in tree.vertices if x not in self.images]
        if missing:
            raise EmbeddingError(f"no image for vertices {missing}")


def eval_embedding(tree: MetricTree, emb: PwaEmbedding, p: PointLike) -> Vector:
    """
    Image of the tree point *p*: the stored image for a vertex, otherwise the
    affine combination of the edge's endpoint images at the offset fraction.
    """
    p = tree.as_point(p)
    if p.is_vertex:
        try:
            return emb.images[p.vertex]
        except KeyError:
            raise EmbeddingError(f"no image for vertex {p.vertex!r}") from None
    e = tree.edges[p.edge]
    try:
        fu, fv = emb.images[e.u], emb.images[e.v]
    except KeyError as exc:
        raise EmbeddingError(f"no image for vertex {exc.args[0]!r}") from None
    lam = p.offset / e.weight
    return tuple(a + lam * (b - a) for a, b in zip(fu, fv))


__all__ = [
    "NORMS", "EmbeddingError", "PwaEmbedding", "eval_embedding",
    "norm", "dist", "add", "sub", "scale", "PointError",
]
