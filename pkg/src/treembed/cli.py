"""
Command line interface.

    treembed bounds TREE
    treembed embed TREE --norm {l1,linf} [--dim N | --search-dim N] [--out PATH]
    treembed verify TREE COORDS --norm {l1,linf}
    treembed sweep --dim N --max-leaves N --grid a,b,c [--budget N] [--out PATH]

Exit codes: 0 success, 2 bad input, 3 impossible / bound violated,
4 verification failed, 5 search inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from .embedding import EmbeddingError, PwaEmbedding
from .io import (
    ParseError, dumps, embedding_from_dict, embedding_to_dict, format_rational,
    parse_rational, read_tree, write_atomic,
)
from .l1 import DimensionError, embed_l1, min_dim_l1, star_embed_l1
from .linf import kuratowski_embed_linf, min_dim_linf_bounds, star_embed_linf
from .search import DEFAULT_BUDGET, SearchInconclusive, conjecture_sweep, search_embed_linf
from .tree import StarTree
from .verify import DEFAULT_SAMPLES, DEFAULT_SEED, verify_isometry

EXIT_OK, EXIT_PARSE, EXIT_IMPOSSIBLE, EXIT_VERIFY, EXIT_INCONCLUSIVE = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return read_tree(path)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_PARSE) from exc


def cmd_bounds(args) -> int:
    tree = _load(args.tree)
    lower, upper = min_dim_linf_bounds(tree)
    doc = {
        "leaves": len(tree.leaves()),
        "l1_min_dim": min_dim_l1(tree),
        "linf_lower": lower,
        "linf_upper": upper,
        "is_star": tree.is_star(),
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _construct(args, tree):
    """Returns (embedding, extra document fields)."""
    extra = {}
    if args.norm == "l1":
        best = min_dim_l1(tree)
        n = args.dim or best
        if n < best:
            raise CliError(
                f"impossible: a tree with {len(tree.leaves())} leaves embeds in (R^n, d1) "
                f"only for n >= {best}", EXIT_IMPOSSIBLE)
        extra["method"] = "leaf-pair induction"
        return embed_l1(tree).padded(n), extra

    lower, _ = min_dim_linf_bounds(tree)
    search_dim = args.search_dim
    if len(tree.leaves()) == 2 and search_dim is None:
        # a path: arclength coordinates, where d_1 and d_inf agree
        emb = embed_l1(tree)
        extra["method"] = "arclength"
        return PwaEmbedding("linf", 1, emb.images).padded(args.dim or 1), extra
    if tree.is_star() and search_dim is None:
        n = args.dim or lower
        try:
            emb = star_embed_linf(StarTree.from_tree(tree), n)
        except DimensionError as exc:
            raise CliError(f"impossible: {exc}", EXIT_IMPOSSIBLE) from exc
        extra["method"] = "star sign vectors"
        return emb, extra
    if search_dim is None and args.dim is not None and args.dim != len(tree.leaves()):
        search_dim = args.dim
    if search_dim is None:
        extra["method"] = "distances to leaves"
        return kuratowski_embed_linf(tree), extra
    if search_dim < lower:
        raise CliError(
            f"impossible: a tree with {len(tree.leaves())} leaves needs at least {lower} "
            f"dimensions under d_inf", EXIT_IMPOSSIBLE)
    try:
        found = search_embed_linf(tree, search_dim, budget=args.budget)
    except SearchInconclusive as exc:
        raise CliError(f"inconclusive: {exc}", EXIT_INCONCLUSIVE) from exc
    if found is None:
        raise CliError(f"impossible: exhaustive search found no embedding in dimension {search_dim}",
                       EXIT_IMPOSSIBLE)
    emb, cert = found
    extra["method"] = "witness search"
    extra["certificate"] = cert.to_dict()
    return emb, extra


def cmd_embed(args) -> int:
    tree = _load(args.tree)
    emb, extra = _construct(args, tree)
    report = verify_isometry(tree, emb, samples=args.samples, seed=args.seed)
    if not report.passed:
        # never write unverified coordinates
        sys.stderr.write(dumps(report.to_dict()))
        raise CliError("internal error: construction failed verification", EXIT_VERIFY)
    doc = embedding_to_dict(emb)
    doc.update(extra)
    doc["verification"] = report.to_dict()
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    tree = _load(args.tree)
    try:
        with open(args.coords, encoding="utf-8") as fh:
            doc = json.load(fh)
        emb = embedding_from_dict(doc, args.norm)
    except OSError as exc:
        raise CliError(f"{args.coords}: {exc.strerror}", EXIT_PARSE) from exc
    except (json.JSONDecodeError, ParseError, EmbeddingError) as exc:
        raise CliError(f"{args.coords}: {exc}", EXIT_PARSE) from exc
    missing = sorted(set(tree.vertices) - set(emb.images))
    extra = sorted(set(emb.images) - set(tree.vertices))
    if missing or extra:
        raise CliError(f"label mismatch: missing {missing}, unknown {extra}", EXIT_PARSE)
    report = verify_isometry(tree, emb, samples=args.samples, seed=args.seed)
    _emit(dumps(report.to_dict()), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sweep(args) -> int:
    if args.dim is None:
        raise CliError("--dim is required for sweep", EXIT_PARSE)
    if args.max_leaves > 2 ** args.dim:
        raise CliError(f"refused: --max-leaves {args.max_leaves} exceeds 2^{args.dim}", EXIT_IMPOSSIBLE)
    try:
        grid = [parse_rational(g) for g in args.grid.split(",")]
    except ParseError as exc:
        raise CliError(f"--grid: {exc}", EXIT_PARSE) from exc
    if any(g <= 0 for g in grid):
        raise CliError("--grid weights must be positive", EXIT_PARSE)
    report = conjecture_sweep(args.dim, args.max_leaves, grid, budget=args.budget, n_jobs=args.jobs)
    _emit(report.to_jsonl(), args.out)
    for rec in report.counterexamples:
        sys.stderr.write(
            "!" * 72 + "\n"
            f"!!! CONJECTURE COUNTEREXAMPLE CANDIDATE: {rec.leaves} leaves, no embedding "
            f"into (R^{rec.dim}, d_inf)\n!!! tree: {'; '.join(rec.to_dict()['tree'])}\n" + "!" * 72 + "\n")
    counts = report.counts()
    sys.stderr.write(" ".join(f"{k}={v}" for k, v in counts.items()) + "\n")
    if counts["inconclusive"]:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treembed", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output here (atomically) instead of stdout")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="spot-check seed")
        sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="spot-check pairs")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")

    sp = sub.add_parser("bounds", help="leaf count and dimension bounds")
    sp.add_argument("tree")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("embed", help="construct and verify an isometric embedding")
    sp.add_argument("tree")
    sp.add_argument("--norm", choices=("l1", "linf"), required=True)
    sp.add_argument("--dim", type=int)
    sp.add_argument("--search-dim", type=int)
    common(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("verify", help="check a coordinates document against a tree")
    sp.add_argument("tree")
    sp.add_argument("coords")
    sp.add_argument("--norm", choices=("l1", "linf"), required=True)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="search all small trees for l_inf embeddings")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--max-leaves", type=int, required=True)
    sp.add_argument("--grid", default="1")
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    for attr in ("dim", "search_dim"):
        val = getattr(args, attr, None)
        if val is not None and val < 1:
            sys.stderr.write(f"treembed: --{attr.replace('_', '-')} must be positive\n")
            return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"treembed: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
