"""Text formats: edge lists, Newick with branch lengths, and JSON documents."""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction

from .embedding import PwaEmbedding
from .tree import MetricTree, TreeError, build_tree


class ParseError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_RATIONAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$|^[+-]?\d+/\d+$")


def parse_rational(text: str, line: int | None = None) -> Fraction:
    """Parse ``p/q``, an integer or a decimal literal, exactly."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ParseError(f"not a rational number: {text!r}", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line) from None


def format_rational(x: Fraction) -> str:
    """``"p/q"``, or ``"p"`` for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_edge_list(text: str) -> list[tuple[str, str, Fraction]]:
    """
    Parse ``LABEL LABEL WEIGHT`` lines. ``#`` starts a comment; blank lines
    are skipped.
    """
    edges = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'LABEL LABEL WEIGHT', got {body!r}", no)
        edges.append((parts[0], parts[1], parse_rational(parts[2], no)))
    return edges


def parse_newick(text: str) -> list[tuple[str, str, Fraction]]:
    """
    Edge list of a Newick tree. Every non-root node needs a branch length;
    unnamed internal nodes become ``n0``, ``n1``, ... in order of appearance.
    """
    s = "".join(text.split())
    if not s.endswith(";"):
        raise ParseError("Newick string must end with ';'")
    s = s[:-1]
    pos = 0
    counter = 0
    edges: list[tuple[str, str, Fraction]] = []
    names: set[str] = set()

    def name_token():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos] not in "(),:;":
            pos += 1
        return s[start:pos]

    def length_token():
        nonlocal pos
        if pos < len(s) and s[pos] == ":":
            pos += 1
            start = pos
            while pos < len(s) and s[pos] not in "(),;":
                pos += 1
            return parse_rational(s[start:pos])
        return None

    def node():
        nonlocal pos, counter
        children = []
        if pos < len(s) and s[pos] == "(":
            pos += 1
            while True:
                children.append(node())
                if pos < len(s) and s[pos] == ",":
                    pos += 1
                    continue
                if pos < len(s) and s[pos] == ")":
                    pos += 1
                    break
                raise ParseError(f"unexpected character at position {pos} in Newick input")
        label = name_token()
        if not label:
            if not children:
                raise ParseError(f"unnamed leaf at position {pos} in Newick input")
            while f"n{counter}" in names or f"n{counter}" in s:
                counter += 1
            label = f"n{counter}"
            counter += 1
        if label in names:
            raise ParseError(f"duplicate Newick label {label!r}")
        names.add(label)
        length = length_token()
        for child, clen in children:
            if clen is None:
                raise ParseError(f"missing branch length above {child!r}")
            edges.append((label, child, clen))
        return label, length

    node()
    if pos != len(s):
        raise ParseError(f"trailing characters in Newick input at position {pos}")
    return edges


def parse_tree(text: str) -> MetricTree:
    """Auto-detect Newick (ends with ``;``) versus edge-list text."""
    stripped = text.strip()
    edges = parse_newick(stripped) if stripped.endswith(";") else parse_edge_list(text)
    try:
        return build_tree(edges)
    except TreeError as exc:
        raise ParseError(str(exc)) from exc


def read_tree(path: str) -> MetricTree:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


def format_edge_list(tree: MetricTree) -> str:
    return "".join(f"{e.u} {e.v} {format_rational(e.weight)}\n" for e in tree.edges)


def embedding_to_dict(emb: PwaEmbedding) -> dict:
    return {
        "norm": emb.norm,
        "dimension": emb.dim,
        "coordinates": {k: [format_rational(a) for a in v] for k, v in sorted(emb.images.items())},
    }


def embedding_from_dict(doc: dict, norm: str | None = None) -> PwaEmbedding:
    """
    Rebuild an embedding from a coordinates document. *norm* overrides the
    document's own norm tag.
    """
    try:
        coords = doc["coordinates"]
    except (KeyError, TypeError):
        raise ParseError("coordinates document has no 'coordinates' object") from None
    kind = norm or doc.get("norm")
    if kind is None:
        raise ParseError("no norm given")
    images = {}
    dims = set()
    for label, vec in coords.items():
        if not isinstance(vec, list):
            raise ParseError(f"coordinates of {label!r} must be a list")
        images[label] = tuple(parse_rational(str(a)) for a in vec)
        dims.add(len(vec))
    if len(dims) != 1:
        raise ParseError(f"dimension mismatch: vectors of lengths {sorted(dims)}")
    (dim,) = dims
    if "dimension" in doc and doc["dimension"] != dim:
        raise ParseError(f"dimension mismatch: header says {doc['dimension']}, vectors have {dim}")
    return PwaEmbedding(kind, dim, images)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename over *path*."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
