"""Graph and seed-file formats.

Two graph formats are supported:

* ``dense_csv`` -- n rows of n comma-separated reals;
* ``edge_list`` -- one ``u<TAB>v<TAB>w`` line per edge with 0-based vertex
  ids; the symmetric closure is applied on load and duplicate edges are
  summed.

Seed files are CSV lines ``v_in_g1,v_in_g2``.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .graphs import Graph

GRAPH_FORMATS = ("dense_csv", "edge_list")

_ASYMMETRY_TOL = 1e-9


def _dense_from_text(path: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: non-numeric entry ({exc})") from None
    if not rows:
        raise FormatError(f"{path}: empty dense matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width != len(rows):
        raise FormatError(f"{path}: dense matrix must be square")
    return np.array(rows, dtype=np.float64)


def _load_dense(path: str) -> Graph:
    m = _dense_from_text(path)
    if np.abs(m - m.T).max() > _ASYMMETRY_TOL:
        raise FormatError(f"{path}: matrix is asymmetric beyond {_ASYMMETRY_TOL}")
    if (m < 0).any():
        raise FormatError(f"{path}: negative weights are not allowed")
    if np.diagonal(m).any():
        raise FormatError(f"{path}: nonzero diagonal (self-loop)")
    m = (m + m.T) / 2.0  # make symmetry exact
    return Graph(m)


def _load_edge_list(path: str) -> Graph:
    edges = []
    max_vertex = -1
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 'u<TAB>v<TAB>w'")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: bad edge line ({exc})") from None
            if u < 0 or v < 0:
                raise FormatError(f"{path}:{lineno}: vertex ids must be nonnegative")
            if u == v:
                raise FormatError(f"{path}:{lineno}: self-loop on vertex {u}")
            if w < 0:
                raise FormatError(f"{path}:{lineno}: negative weight {w}")
            edges.append((u, v, w))
            max_vertex = max(max_vertex, u, v)
    if max_vertex < 0:
        raise FormatError(f"{path}: empty edge list, vertex count unknown")
    n = max_vertex + 1
    adj = np.zeros((n, n))
    for u, v, w in edges:
        adj[u, v] += w
        adj[v, u] += w
    return Graph(adj)


def load_graph(path: str, fmt: str = "dense_csv") -> Graph:
    """Read a graph file; raises :class:`FormatError` on any schema violation."""
    if fmt == "dense_csv":
        return _load_dense(path)
    if fmt == "edge_list":
        return _load_edge_list(path)
    raise FormatError(f"unknown graph format {fmt!r} (choose from {GRAPH_FORMATS})")


def write_graph(g: Graph, path: str, fmt: str = "dense_csv") -> None:
    """Write a graph; dense entries use repr so a round-trip is exact."""
    if fmt == "dense_csv":
        with open(path, "w") as fh:
            for row in g.adj:
                fh.write(",".join(repr(float(x)) for x in row))
                fh.write("\n")
        return
    if fmt == "edge_list":
        iu, ju = np.nonzero(np.triu(g.adj, k=1))
        with open(path, "w") as fh:
            for u, v in zip(iu, ju):
                fh.write(f"{u}\t{v}\t{float(g.adj[u, v])!r}\n")
        return
    raise FormatError(f"unknown graph format {fmt!r} (choose from {GRAPH_FORMATS})")


def load_seeds(path: str) -> np.ndarray:
    """Read seed pairs ``v_in_g1,v_in_g2`` into an (s, 2) int array."""
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'v_in_g1,v_in_g2'")
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: vertex ids must be integers") from None
    out = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    for col, side in ((0, "first"), (1, "second")):
        if len(np.unique(out[:, col])) != len(out):
            raise FormatError(f"{path}: duplicate {side}-graph vertex in seed list")
    return out


def write_seeds(pairs: np.ndarray, path: str) -> None:
    with open(path, "w") as fh:
        for u, v in np.asarray(pairs, dtype=np.int64).reshape(-1, 2):
            fh.write(f"{u},{v}\n")
