"""
Exact isometry checks for piecewise-affine tree embeddings.

For a piecewise-affine map it is enough to look at edges and leaf pairs:

* every edge image must have norm equal to the edge weight;
* under ``l1``, along each leaf-to-leaf path every coordinate must move
  monotonically (no sign change of the per-edge deltas);
* under ``linf``, along each leaf-to-leaf path some coordinate must move at
  full slope with a constant sign.

Any pair of tree points lies on some leaf-to-leaf path, so the leaf-pair
certificates cover all pairs. A seeded random spot check over interior
points runs on top of this as a cross-check of the implementation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .embedding import EmbeddingError, PwaEmbedding, dist, eval_embedding
from .tree import MetricTree, TreePoint

DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 0


@dataclass(frozen=True, order=True)
class SectorIndex:
    """Coordinate ``axis`` (0-based) and direction ``sign`` (+1 or -1)."""

    axis: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.axis < 0:
            raise ValueError("axis must be non-negative")

    def __str__(self) -> str:
        return f"{self.axis + 1}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class Failure:
    p: object
    q: object
    tree_distance: Fraction
    image_distance: Fraction
    reason: str


@dataclass
class VerificationReport:
    """
    Outcome of :func:`verify_isometry`.

    ``certificates`` maps each leaf pair ``(a, b)`` (label order) to either a
    tuple of per-coordinate directions (``l1``: +1, -1 or 0 for a coordinate
    that does not move) or a :class:`SectorIndex` (``linf``).
    """

    norm: str
    failures: list[Failure] = field(default_factory=list)
    certificates: dict = field(default_factory=dict)
    leaf_pairs: int = 0
    samples: int = 0

    @property
    def verdict(self) -> str:
        return "exact-pass" if self.passed else "fail"

    @property
    def passed(self) -> bool:
        return not self.failures and len(self.certificates) == self.leaf_pairs

    def __bool__(self) -> bool:
        return self.passed

    def failing_pairs(self) -> list[tuple]:
        return [(f.p, f.q) for f in self.failures]

    def to_dict(self) -> dict:
        def cert(c):
            if isinstance(c, SectorIndex):
                return {"axis": c.axis + 1, "sign": "+" if c.sign > 0 else "-"}
            return ["+" if s > 0 else "-" if s < 0 else "0" for s in c]

        def pt(p):
            if isinstance(p, TreePoint):
                return p.vertex if p.is_vertex else {"edge": p.edge, "offset": str(p.offset)}
            return p

        return {
            "verdict": self.verdict,
            "norm": self.norm,
            "leaf_pairs": self.leaf_pairs,
            "samples": self.samples,
            "failures": [
                {"pair": [pt(f.p), pt(f.q)], "tree_distance": str(f.tree_distance),
                 "image_distance": str(f.image_distance), "reason": f.reason}
                for f in self.failures
            ],
            "certificates": {f"{a}|{b}": cert(c) for (a, b), c in sorted(self.certificates.items())},
        }


def _signed_deltas(tree: MetricTree, emb: PwaEmbedding, a: str, b: str):
    """Per-edge image deltas along the path a -> b, with edge weights."""
    out = []
    for step in tree.path(a, b):
        e = tree.edges[step.edge]
        start, end = (e.u, e.v) if step.forward else (e.v, e.u)
        out.append((e.weight, tuple(y - x for x, y in zip(emb.images[start], emb.images[end]))))
    return out


def l1_certificate(deltas, dim: int):
    """Per-coordinate direction if every coordinate is monotone, else None."""
    signs = []
    for i in range(dim):
        pos = any(d[i] > 0 for _, d in deltas)
        neg = any(d[i] < 0 for _, d in deltas)
        if pos and neg:
            return None
        signs.append(1 if pos else -1 if neg else 0)
    return tuple(signs)


def linf_certificate(deltas, dim: int):
    """First (axis, sign) along which every delta has full slope, else None."""
    for i in range(dim):
        for sign in (1, -1):
            if all(sign * d[i] == w for w, d in deltas):
                return SectorIndex(i, sign)
    return None


def random_point(tree: MetricTree, rng: random.Random) -> TreePoint:
    """A vertex or an interior point at a small-denominator rational offset."""
    if rng.random() < 0.2:
        return tree.point(rng.choice(tree.vertices))
    e = rng.choice(tree.edges)
    den = rng.randint(2, 12)
    return tree.point(e.u, e.v, e.weight * Fraction(rng.randint(1, den - 1), den))


def verify_isometry(tree: MetricTree, emb: PwaEmbedding, *, samples: int = DEFAULT_SAMPLES,
                    seed: int = DEFAULT_SEED) -> VerificationReport:
    """
    Exactly decide whether *emb* is an isometric embedding of *tree*.

    Parameters
    ----------
    tree : MetricTree
    emb : PwaEmbedding
        Must have an image for every vertex of *tree*.
    samples : int
        Number of random point pairs for the additional spot check.
    seed : int
        Seed for the spot check.

    Raises
    ------
    EmbeddingError
        If a vertex has no image.
    """
    emb.check_covers(tree)
    kind = emb.norm
    report = VerificationReport(norm=kind)

    for e in tree.edges:
        got = dist(emb.images[e.u], emb.images[e.v], kind)
        if got != e.weight:
            report.failures.append(Failure(e.u, e.v, e.weight, got, "edge length"))

    pairs = list(combinations(tree.leaves(), 2))
    report.leaf_pairs = len(pairs)
    make_cert = l1_certificate if kind == "l1" else linf_certificate
    for a, b in pairs:
        cert = make_cert(_signed_deltas(tree, emb, a, b), emb.dim)
        want, got = tree.distance(a, b), dist(emb.images[a], emb.images[b], kind)
        if cert is None or want != got:
            report.failures.append(Failure(a, b, want, got, "leaf pair"))
        else:
            report.certificates[(a, b)] = cert

    rng = random.Random(seed)
    for _ in range(samples):
        p, q = random_point(tree, rng), random_point(tree, rng)
        want = tree.distance(p, q)
        got = dist(eval_embedding(tree, emb, p), eval_embedding(tree, emb, q), kind)
        if want != got:
            report.failures.append(Failure(p, q, want, got, "sampled pair"))
    report.samples = samples

    report.failures.sort(key=lambda f: (f.reason, str(f.p), str(f.q)))
    return report


__all__ = [
    "SectorIndex", "Failure", "VerificationReport", "verify_isometry",
    "eval_embedding", "random_point", "EmbeddingError",
]
