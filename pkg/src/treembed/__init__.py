"""Exact isometric embeddings of finite metric trees into (R^n, d_1) and (R^n, d_inf)."""

from .embedding import EmbeddingError, PwaEmbedding, eval_embedding
from .estimators import (
    KuratowskiEmbedder,
    L1StarEmbedder,
    L1TreeEmbedder,
    LinfSearchEmbedder,
    LinfStarEmbedder,
)
from .l1 import DimensionError, embed_l1, min_dim_l1, star_embed_l1
from .linf import (
    GeodesicPolyline,
    in_sector,
    is_geodesic_polyline,
    kuratowski_embed_linf,
    leaf_direction_star,
    min_dim_linf_bounds,
    shorten_geodesic,
    star_embed_linf,
)
from .search import (
    SearchInconclusive,
    SlopeCertificate,
    check_certificate,
    conjecture_sweep,
    enumerate_trees,
    search_embed_linf,
)
from .tree import (
    MetricTree,
    StarTree,
    TreeError,
    TreePoint,
    build_tree,
    remove_leaf_pair,
    star_tree,
)
from .validation import check_tree
from .verify import SectorIndex, VerificationReport, verify_isometry

__version__ = "0.1.0"
