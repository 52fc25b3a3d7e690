"""
Estimator-style wrappers around the embedding constructions.

Each embedder is fitted on a metric tree (anything :func:`check_tree`
accepts) and then maps tree points to exact coordinates::

    >>> emb = L1TreeEmbedder().fit("a b 1\\nb c 2\\nb d 3")
    >>> emb.transform(["a", "c"]).tolist()
    [[Fraction(0, 1), Fraction(0, 1)], [Fraction(1, 1), Fraction(-2, 1)]]

``transform`` returns an object ndarray of :class:`fractions.Fraction`, one
row per point. Passing the fitted tree itself returns all vertex images in
label order, so ``fit_transform(tree)`` gives the full coordinate table.
Fitting always verifies the result; ``report_`` holds the verification.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .embedding import PwaEmbedding, eval_embedding
from .l1 import DimensionError, embed_l1, min_dim_l1, star_embed_l1
from .linf import kuratowski_embed_linf, min_dim_linf_bounds, star_embed_linf
from .search import DEFAULT_BUDGET, _WitnessSearch
from .tree import MetricTree, StarTree
from .validation import check_dimension, check_tree
from .verify import DEFAULT_SAMPLES, DEFAULT_SEED, verify_isometry


class _TreeEmbedderBase(TransformerMixin, BaseEstimator):
    def _finish(self, tree: MetricTree, emb: PwaEmbedding):
        report = verify_isometry(tree, emb, samples=self.samples, seed=self.seed)
        if not report.passed:
            raise AssertionError(f"construction failed verification: {report.failures[:3]}")
        self.tree_ = tree
        self.embedding_ = emb
        self.report_ = report
        self.n_components_ = emb.dim
        self.n_leaves_ = len(tree.leaves())
        return self

    def transform(self, X):
        """
        Coordinates of tree points.

        Parameters
        ----------
        X : MetricTree or sequence of TreePoint / vertex label
            The fitted tree (all vertices, label order) or a list of points.

        Returns
        -------
        ndarray of shape (n_points, n_components_), dtype object
        """
        check_is_fitted(self, "embedding_")
        if isinstance(X, MetricTree) or isinstance(X, StarTree) or isinstance(X, str) and "\n" in X:
            tree = check_tree(X)
            if tree != self.tree_:
                raise ValueError("transform got a different tree than the one fitted")
            X = list(self.tree_.vertices)
        rows = [list(eval_embedding(self.tree_, self.embedding_, p)) for p in X]
        out = np.empty((len(rows), self.n_components_), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "embedding_")
        return np.array([f"x{i}" for i in range(self.n_components_)], dtype=object)


class L1TreeEmbedder(_TreeEmbedderBase):
    """
    Isometric embedding into ``(R^n, d_1)``.

    Parameters
    ----------
    n_components : int or None
        Target dimension; None uses the optimum ``ceil(L/2)``. Larger values
        pad with zero coordinates.
    samples, seed : int
        Spot-check settings passed to the verifier.
    """

    def __init__(self, n_components=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
        self.n_components = n_components
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        tree = check_tree(X)
        best = min_dim_l1(tree)
        n = best if self.n_components is None else check_dimension(self.n_components)
        if n < best:
            raise DimensionError(
                f"a tree with {len(tree.leaves())} leaves needs at least {best} l1 dimensions")
        return self._finish(tree, embed_l1(tree).padded(n))


class L1StarEmbedder(_TreeEmbedderBase):
    """Star embedding along signed basis vectors; requires ``k <= 2n``."""

    def __init__(self, n_components=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
        self.n_components = n_components
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        star = X if isinstance(X, StarTree) else StarTree.from_tree(check_tree(X))
        n = -(-star.k // 2) if self.n_components is None else check_dimension(self.n_components)
        return self._finish(star.to_tree(), star_embed_l1(star, n))


class LinfStarEmbedder(_TreeEmbedderBase):
    """Star embedding along sign vectors; requires ``k <= 2**n``."""

    def __init__(self, n_components=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
        self.n_components = n_components
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        star = X if isinstance(X, StarTree) else StarTree.from_tree(check_tree(X))
        if self.n_components is None:
            n = min_dim_linf_bounds(star.to_tree())[0]
        else:
            n = check_dimension(self.n_components)
        return self._finish(star.to_tree(), star_embed_linf(star, n))


class KuratowskiEmbedder(_TreeEmbedderBase):
    """Distances to the leaves as coordinates in ``(R^L, d_inf)``."""

    def __init__(self, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        tree = check_tree(X)
        return self._finish(tree, kuratowski_embed_linf(tree))


class LinfSearchEmbedder(_TreeEmbedderBase):
    """
    Exhaustive witness search for an embedding into ``(R^n, d_inf)``.

    After ``fit``, ``outcome_`` is ``"found"`` or ``"exhausted-none"``; on
    ``"exhausted-none"`` no embedding exists and ``embedding_`` is unset, so
    ``transform`` raises ``NotFittedError``. A blown node budget raises
    :class:`~treembed.search.SearchInconclusive` from ``fit``.
    """

    def __init__(self, n_components=2, budget=DEFAULT_BUDGET, samples=DEFAULT_SAMPLES,
                 seed=DEFAULT_SEED):
        self.n_components = n_components
        self.budget = budget
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        tree = check_tree(X)
        n = check_dimension(self.n_components)
        search = _WitnessSearch(tree, n, self.budget)
        try:
            found = search.run()
        finally:
            self.n_nodes_ = search.nodes
        self.tree_ = tree
        if found is None:
            self.outcome_ = "exhausted-none"
            self.certificate_ = None
            for attr in ("embedding_", "report_"):
                self.__dict__.pop(attr, None)
            return self
        self.outcome_ = "found"
        emb, self.certificate_ = found
        return self._finish(tree, emb)
