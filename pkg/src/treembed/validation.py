"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import os

from .tree import MetricTree, StarTree, build_tree


def check_tree(X) -> MetricTree:
    """
    Coerce *X* into a :class:`MetricTree`.

    Accepts a MetricTree, a StarTree, an iterable of ``(label, label,
    weight)`` triples, edge-list or Newick text, or a path to a file holding
    either format.
    """
    from .io import parse_tree, read_tree

    if isinstance(X, MetricTree):
        return X
    if isinstance(X, StarTree):
        return X.to_tree()
    if isinstance(X, os.PathLike):
        return read_tree(os.fspath(X))
    if isinstance(X, str):
        if "\n" not in X and os.path.isfile(X):
            return read_tree(X)
        return parse_tree(X)
    try:
        return build_tree(list(X))
    except TypeError:
        raise TypeError(f"cannot interpret {type(X).__name__} as a metric tree") from None


def check_dimension(n, minimum: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"dimension must be an int, got {n!r}")
    if n < minimum:
        raise ValueError(f"dimension must be at least {minimum}, got {n}")
    return n
