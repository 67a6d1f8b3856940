"""
Datasets, gold standards, score matrices and their text formats.

All tables are tab separated. Expression tables carry a header line; gold
standards are DREAM style edge lists ``G1<TAB>G2<TAB>1``; score files are
either an edge list or a full matrix, optionally preceded by ``#`` metadata
lines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .exceptions import (
    ConstantVariableError,
    DimensionError,
    ParseError,
    UnknownLabelError,
)

Layout = Literal["samples-in-rows", "variables-in-rows"]
ScoreFormat = Literal["edge-list", "matrix"]

LAYOUTS = ("samples-in-rows", "variables-in-rows")
SCORE_FORMATS = ("edge-list", "matrix")


def format_float(x: float) -> str:
    """Shortest decimal text that reads back as the same double."""
    return repr(float(x))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """n samples of p named variables, samples in rows.

    Parameters
    ----------
    values : array_like, shape (n, p)
        Finite real values.
    names : sequence of str, optional
        Unique variable labels. Defaults to ``X1 .. Xp``.
    """

    values: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise DimensionError(f"values must be 2-D, got shape {values.shape}")
        n, p = values.shape
        names = tuple(self.names) if len(self.names) else tuple(f"X{i + 1}" for i in range(p))
        if len(names) != p:
            raise DimensionError(f"{len(names)} names for {p} variables")
        if len(set(names)) != p:
            dup = sorted({x for x in names if names.count(x) > 1})
            raise ValueError(f"duplicate variable names: {dup}")
        if n < 3:
            raise DimensionError(f"need at least 3 samples, got n={n}")
        if p < 2:
            raise DimensionError(f"need at least 2 variables, got p={p}")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset contains non-finite values")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]


@dataclass(frozen=True)
class GoldStandard:
    """Undirected reference network over named nodes."""

    nodes: tuple[str, ...]
    edges: frozenset[frozenset[str]] = frozenset()

    def __post_init__(self):
        nodes = tuple(self.nodes)
        known = set(nodes)
        edges = set()
        for e in self.edges:
            pair = frozenset(e)
            if len(pair) != 2:
                raise ValueError(f"self-pair or malformed edge: {tuple(e)}")
            for label in pair:
                if label not in known:
                    raise UnknownLabelError(f"unknown node label {label!r}")
            edges.add(pair)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_pairs(cls, nodes: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "GoldStandard":
        return cls(tuple(nodes), frozenset(frozenset(p) for p in pairs))

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def adjacency(self, names: Sequence[str] | None = None) -> np.ndarray:
        """Boolean adjacency matrix in the order of ``names`` (default: nodes)."""
        names = list(self.nodes if names is None else names)
        index = {x: i for i, x in enumerate(names)}
        adj = np.zeros((len(names), len(names)), dtype=bool)
        for e in self.edges:
            a, b = tuple(e)
            adj[index[a], index[b]] = adj[index[b], index[a]] = True
        return adj


@dataclass(frozen=True)
class ScoreMatrix:
    """Symmetric edge scores produced by one method.

    The diagonal is forced to zero. ``metadata`` holds method parameters
    (shrinkage intensity, bin count, conditioning scheme, ...) and is
    written as header lines by :func:`write_scores`.
    """

    scores: np.ndarray
    names: tuple[str, ...]
    method: str = ""
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.scores, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise DimensionError(f"scores must be square, got shape {s.shape}")
        names = tuple(self.names)
        if len(names) != s.shape[0]:
            raise DimensionError(f"{len(names)} names for a {s.shape[0]}x{s.shape[0]} matrix")
        if len(set(names)) != len(names):
            raise ValueError("duplicate node names")
        np.fill_diagonal(s, 0.0)
        if not np.all(np.isfinite(s)):
            raise ValueError("score matrix contains non-finite entries")
        if not np.array_equal(s, s.T):
            raise ValueError("score matrix is not symmetric")
        object.__setattr__(self, "scores", _readonly(s))
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def p(self) -> int:
        return len(self.names)

    def score(self, a: str, b: str) -> float:
        return float(self.scores[self.names.index(a), self.names.index(b)])

    def pairs(self):
        """Yield ``(i, j, score)`` for every unordered pair ``i < j``."""
        p = self.p
        for i in range(p):
            for j in range(i + 1, p):
                yield i, j, float(self.scores[i, j])


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Average with the transpose so that floating point asymmetry vanishes."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


# ---------------------------------------------------------------------------
# reading


def _read_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return text.replace("\r\n", "\n").replace("\r", "\n").split("\n")


def _parse_float(token: str, line: int, col: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"line {line}, column {col}: non-numeric cell {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {line}, column {col}: non-finite cell {token!r}")
    return value


def read_dataset(path, layout: Layout = "samples-in-rows") -> Dataset:
    """Read a tab separated expression table.

    With ``layout="samples-in-rows"`` (DREAM style) the header line holds
    the variable names and every further line is one sample. With
    ``layout="variables-in-rows"`` every body line is
    ``name<TAB>v1<TAB>...<TAB>vn`` and the header holds sample labels
    (optionally preceded by a corner label); it is only used for the
    column count.
    """
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}, got {layout!r}")
    lines = _read_lines(path)
    rows = [(k + 1, ln.split("\t")) for k, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header_line, header = rows[0]
    header = [h.strip() for h in header]
    body = rows[1:]

    if layout == "samples-in-rows":
        width = len(header)
        values = []
        for line, tokens in body:
            if len(tokens) != width:
                raise ParseError(f"line {line}: expected {width} fields, found {len(tokens)}")
            values.append([_parse_float(t, line, c + 1) for c, t in enumerate(tokens)])
        names = header
        arr = np.array(values, dtype=float).reshape(len(values), width)
    else:
        names, values = [], []
        width = None
        for line, tokens in body:
            if width is None:
                width = len(tokens)
                if width - 1 not in (len(header), len(header) - 1):
                    raise ParseError(
                        f"line {line}: {width - 1} values do not match "
                        f"{len(header)} header labels (line {header_line})"
                    )
            if len(tokens) != width:
                raise ParseError(f"line {line}: expected {width} fields, found {len(tokens)}")
            names.append(tokens[0].strip())
            values.append([_parse_float(t, line, c + 2) for c, t in enumerate(tokens[1:])])
        arr = np.array(values, dtype=float).reshape(len(values), (width or 1) - 1).T
    if arr.shape[0] < 3:
        raise DimensionError(f"{path}: need at least 3 samples after layout normalization, got n={arr.shape[0]}")
    return Dataset(arr, tuple(names))


def write_dataset(d: Dataset, path) -> None:
    """Write ``d`` as a samples-in-rows table readable by :func:`read_dataset`."""
    out = ["\t".join(d.names)]
    out.extend("\t".join(format_float(v) for v in row) for row in d.values)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_gold_standard(path, node_names: Sequence[str]) -> GoldStandard:
    """Read a DREAM edge list; directed duplicates collapse to one undirected edge."""
    known = set(node_names)
    pairs = []
    for k, raw in enumerate(_read_lines(path)):
        if not raw.strip() or raw.startswith("#"):
            continue
        tokens = raw.split("\t")
        if len(tokens) != 3:
            raise ParseError(f"line {k + 1}: expected 3 tab-separated fields, found {len(tokens)}")
        a, b, flag = (t.strip() for t in tokens)
        if flag not in ("0", "1"):
            raise ParseError(f"line {k + 1}: third field must be 0 or 1, got {flag!r}")
        for label in (a, b):
            if label not in known:
                raise UnknownLabelError(f"line {k + 1}: unknown node label {label!r}")
        if flag == "1":
            if a == b:
                raise ParseError(f"line {k + 1}: self edge {a!r}")
            pairs.append((a, b))
    return GoldStandard.from_pairs(node_names, pairs)


def write_gold_standard(g: GoldStandard, path) -> None:
    """Write the edges of ``g`` as ``a<TAB>b<TAB>1`` lines in node order."""
    order = {x: i for i, x in enumerate(g.nodes)}
    edges = sorted(
        (tuple(sorted(e, key=order.__getitem__)) for e in g.edges),
        key=lambda e: (order[e[0]], order[e[1]]),
    )
    text = "".join(f"{a}\t{b}\t1\n" for a, b in edges)
    Path(path).write_text(text, encoding="utf-8")


def edge_order(m: ScoreMatrix) -> list[tuple[int, int, float]]:
    """Unordered pairs by descending ``|score|``; ties by sorted name pair."""
    names = m.names
    items = list(m.pairs())
    items.sort(key=lambda t: (-abs(t[2]), tuple(sorted((names[t[0]], names[t[1]])))))
    return items


def _metadata_lines(m: ScoreMatrix) -> list[str]:
    lines = [f"# method\t{m.method}"] if m.method else []
    for key in sorted(m.metadata):
        value = m.metadata[key]
        if isinstance(value, float):
            value = format_float(value)
        lines.append(f"# {key}\t{value}")
    lines.append("# names\t" + "\t".join(m.names))
    return lines


def format_scores(m: ScoreMatrix, format: ScoreFormat = "edge-list") -> str:
    """Text of :func:`write_scores`."""
    if format not in SCORE_FORMATS:
        raise ValueError(f"format must be one of {SCORE_FORMATS}, got {format!r}")
    lines = _metadata_lines(m)
    if format == "edge-list":
        for i, j, s in edge_order(m):
            lines.append(f"{m.names[i]}\t{m.names[j]}\t{format_float(s)}")
    else:
        lines.append("\t".join(("",) + m.names))
        for name, row in zip(m.names, m.scores):
            lines.append("\t".join([name] + [format_float(v) for v in row]))
    return "\n".join(lines) + "\n"


def write_scores(m: ScoreMatrix, path, format: ScoreFormat = "edge-list") -> None:
    """Write a score matrix as an edge list or as a full matrix with header.

    Metadata is emitted first as ``# key<TAB>value`` lines, then the body:
    ``a<TAB>b<TAB>score`` lines by descending ``|score|``, or a header row
    of names followed by one labelled row per variable.
    """
    Path(path).write_text(format_scores(m, format), encoding="utf-8")


def read_scores(path) -> ScoreMatrix:
    """Read a file produced by :func:`write_scores` (either format).

    Edge lists without a ``# names`` line take node names in order of first
    appearance; pairs absent from the list score 0.
    """
    meta: dict[str, str] = {}
    body: list[tuple[int, list[str]]] = []
    for k, raw in enumerate(_read_lines(path)):
        if not raw.strip():
            continue
        if raw.startswith("#"):
            key, _, value = raw[1:].strip().partition("\t")
            meta[key] = value
            continue
        body.append((k + 1, raw.split("\t")))
    method = meta.pop("method", "")
    names_field = meta.pop("names", None)
    names = names_field.split("\t") if names_field else None

    if body and body[0][1][0] == "" and len(body[0][1]) > 1:
        header = body[0][1][1:]
        names = header
        p = len(names)
        scores = np.zeros((p, p))
        if len(body) - 1 != p:
            raise ParseError(f"matrix has {len(body) - 1} rows for {p} columns")
        for r, (line, tokens) in enumerate(body[1:]):
            if len(tokens) != p + 1:
                raise ParseError(f"line {line}: expected {p + 1} fields, found {len(tokens)}")
            if tokens[0] != names[r]:
                raise ParseError(f"line {line}: row label {tokens[0]!r} != column label {names[r]!r}")
            scores[r] = [_parse_float(t, line, c + 2) for c, t in enumerate(tokens[1:])]
    else:
        if names is None:
            names = []
            for _, tokens in body:
                for t in tokens[:2]:
                    if t not in names:
                        names.append(t)
        index = {x: i for i, x in enumerate(names)}
        scores = np.zeros((len(names), len(names)))
        for line, tokens in body:
            if len(tokens) != 3:
                raise ParseError(f"line {line}: expected 3 fields, found {len(tokens)}")
            a, b = tokens[0], tokens[1]
            if a not in index or b not in index:
                raise UnknownLabelError(f"line {line}: unknown node label {(a if a not in index else b)!r}")
            s = _parse_float(tokens[2], line, 3)
            scores[index[a], index[b]] = scores[index[b], index[a]] = s
    return ScoreMatrix(scores, tuple(names), method, meta)


def standardize_columns(d: Dataset) -> Dataset:
    """Center each column and scale it to unit sample standard deviation (n - 1)."""
    x = d.values
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    for name, s in zip(d.names, sd):
        if not s > 0:
            raise ConstantVariableError(name)
    return Dataset((x - mean) / sd, d.names)
