"""Graph containers, the correlated pair generator, and disagreement counters.

Conventions used throughout the package:

* graphs are simple and undirected, stored as dense symmetric float64
  matrices with a zero diagonal;
* seeds occupy the index prefix ``0..s-1`` of both graphs and are matched
  identically in order, nonseeds are ``s..s+m-1``;
* permutations over nonseeds are int64 index arrays of length ``m``
  (``psi[i] = j`` matches nonseed slot ``i`` of the first graph to nonseed
  slot ``j`` of the second).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# Counter-based PRNG backing all random draws; recorded in output metadata.
PRNG_ALGORITHM = "philox4x64"


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph as a dense symmetric adjacency matrix.

    Entries are arbitrary nonnegative weights; graphs produced by
    :func:`generate_correlated_pair` are binary. The stored array is a
    read-only copy, so instances can be shared freely across threads.
    """

    adj: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adj, dtype=np.float64)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ParameterError("adjacency must be a square matrix")
        if adj.shape[0] < 1:
            raise ParameterError("graph needs at least one vertex")
        if not np.isfinite(adj).all():
            raise ParameterError("adjacency entries must be finite")
        if (adj < 0).any():
            raise ParameterError("adjacency entries must be nonnegative")
        if not np.array_equal(adj, adj.T):
            raise ParameterError("adjacency must be symmetric")
        if np.diagonal(adj).any():
            raise ParameterError("self-loops are not allowed")
        adj = adj.copy()
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def is_binary(self) -> bool:
        return bool(((self.adj == 0.0) | (self.adj == 1.0)).all())

    def edge_count(self) -> float:
        return float(np.count_nonzero(self.adj) // 2)

    def degrees(self) -> np.ndarray:
        return (self.adj != 0).sum(axis=1)


@dataclass(frozen=True)
class Seeding:
    """Seed/nonseed split: ``s`` seeded prefix vertices, ``m`` nonseeds."""

    s: int
    m: int

    def __post_init__(self):
        if self.s < 0:
            raise ParameterError("seed count must be nonnegative")
        if self.m < 1:
            raise ParameterError("need at least one nonseed vertex")

    @property
    def n(self) -> int:
        return self.s + self.m

    @classmethod
    def for_pair(cls, g1: Graph, g2: Graph, s: int) -> "Seeding":
        if g1.n != g2.n:
            raise ParameterError(f"graphs differ in size: {g1.n} vs {g2.n}")
        if not 0 <= s <= g1.n - 1:
            raise ParameterError(f"seed count {s} outside [0, {g1.n - 1}]")
        return cls(s, g1.n - s)


@dataclass(frozen=True)
class DisagreementBreakdown:
    """Edge-disagreement counters for one candidate alignment.

    ``total`` splits into ``plus`` (pair nonadjacent in the first graph but
    adjacent in the permuted second) and ``minus`` (the reverse).
    ``zero_plus``/``zero_minus`` additionally condition on the first graph's
    adjacency at the permuted pair; they drive the exact difference
    identities tested at small scale.
    """

    total: int
    plus: int
    minus: int
    zero_plus: int
    zero_minus: int

    def __post_init__(self):
        if self.total != self.plus + self.minus:
            raise ParameterError("total must equal plus + minus")
        if min(self.total, self.plus, self.minus, self.zero_plus, self.zero_minus) < 0:
            raise ParameterError("counters must be nonnegative")


@dataclass(frozen=True)
class CorrelatedPairSpec:
    """Parameters of the correlated Bernoulli graph-pair model."""

    n: int
    p: float
    rho: float
    rng_seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("vertex count must be positive")
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"edge probability p={self.p} must lie in (0, 1)")
        if not 0.0 <= self.rho <= 1.0:
            raise ParameterError(f"correlation rho={self.rho} must lie in [0, 1]")


# ---------------------------------------------------------------------------
# permutation helpers


def is_permutation(arr: np.ndarray) -> bool:
    arr = np.asarray(arr)
    if arr.ndim != 1 or arr.size == 0:
        return False
    if not np.issubdtype(arr.dtype, np.integer):
        return False
    return bool(np.array_equal(np.sort(arr), np.arange(arr.size)))


def as_permutation(arr, size: int | None = None) -> np.ndarray:
    """Validate and return ``arr`` as an int64 permutation array."""
    out = np.asarray(arr, dtype=np.int64)
    if not is_permutation(out):
        raise ParameterError("not a permutation: each index must appear exactly once")
    if size is not None and out.size != size:
        raise ParameterError(f"permutation has length {out.size}, expected {size}")
    return out


def identity_permutation(m: int) -> np.ndarray:
    return np.arange(m, dtype=np.int64)


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    perm = as_permutation(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=np.int64)
    return inv


def compose_permutations(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Return the permutation mapping ``i -> outer[inner[i]]``."""
    outer = as_permutation(outer)
    inner = as_permutation(inner, outer.size)
    return outer[inner]


def random_permutation(m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(m).astype(np.int64)


# ---------------------------------------------------------------------------
# generation and relabeling


def generate_correlated_pair(spec: CorrelatedPairSpec) -> tuple[Graph, Graph]:
    """Draw a correlated graph pair with the identity as latent alignment.

    For each unordered vertex pair, in lexicographic order, the first
    graph's edge indicator is Bernoulli(p); conditionally on it, the second
    graph's indicator is Bernoulli(p + rho*(1-p)) when the first edge is
    present and Bernoulli(p*(1-rho)) otherwise. Exactly one uniform is
    consumed per indicator (two per pair), so output is bit-reproducible
    given ``rng_seed`` regardless of caller threading.
    """
    n, p, rho = spec.n, spec.p, spec.rho
    rng = np.random.Generator(np.random.Philox(key=spec.rng_seed))
    npairs = n * (n - 1) // 2
    u = rng.random((npairs, 2))
    edge1 = u[:, 0] < p
    threshold = np.where(edge1, p + rho * (1.0 - p), p * (1.0 - rho))
    edge2 = u[:, 1] < threshold

    iu = np.triu_indices(n, k=1)  # row-major upper triangle == lexicographic
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    a[iu] = edge1
    b[iu] = edge2
    a += a.T
    b += b.T
    return Graph(a), Graph(b)


def permute_vertices(g: Graph, perm: np.ndarray) -> Graph:
    """Relabel vertices so that old vertex ``i`` becomes ``perm[i]``."""
    perm = as_permutation(perm, g.n)
    out = np.empty_like(g.adj)
    out[np.ix_(perm, perm)] = g.adj
    return Graph(out)


# ---------------------------------------------------------------------------
# disagreement counting


def _require_binary(g: Graph, name: str) -> None:
    if not g.is_binary():
        raise ParameterError(
            f"{name} has non-binary weights; disagreement counts are defined "
            "only for unweighted graphs (use the trace objective instead)"
        )


def _full_permutation(seeding: Seeding, psi: np.ndarray) -> np.ndarray:
    """Extend a nonseed permutation by the identity on the seed prefix."""
    return np.concatenate([np.arange(seeding.s, dtype=np.int64), seeding.s + psi])


def count_disagreements(
    g1: Graph, g2: Graph, seeding: Seeding, psi: np.ndarray
) -> DisagreementBreakdown:
    """Count edge disagreements over all unordered vertex pairs.

    ``psi`` permutes nonseed slots and acts as the identity on seeds.
    Both graphs must be binary.
    """
    _require_binary(g1, "g1")
    _require_binary(g2, "g2")
    if g1.n != g2.n or g1.n != seeding.n:
        raise ParameterError("graphs and seeding sizes must agree")
    psi = as_permutation(psi, seeding.m)
    pi = _full_permutation(seeding, psi)

    iu = np.triu_indices(g1.n, k=1)
    e1 = g1.adj[iu] != 0
    e1_shift = g1.adj[np.ix_(pi, pi)][iu] != 0  # first graph at the permuted pair
    e2_shift = g2.adj[np.ix_(pi, pi)][iu] != 0  # second graph at the permuted pair

    plus = int(np.count_nonzero(~e1 & e2_shift))
    minus = int(np.count_nonzero(e1 & ~e2_shift))
    zero_plus = int(np.count_nonzero(~e1 & e1_shift & ~e2_shift))
    zero_minus = int(np.count_nonzero(e1 & ~e1_shift & e2_shift))
    return DisagreementBreakdown(plus + minus, plus, minus, zero_plus, zero_minus)


def count_restricted_disagreements(
    g1: Graph, g2: Graph, seeding: Seeding, psi: np.ndarray
) -> DisagreementBreakdown:
    """Count disagreements over ordered (nonseed, seed) pairs only."""
    _require_binary(g1, "g1")
    _require_binary(g2, "g2")
    if g1.n != g2.n or g1.n != seeding.n:
        raise ParameterError("graphs and seeding sizes must agree")
    psi = as_permutation(psi, seeding.m)
    s = seeding.s

    a21 = g1.adj[s:, :s] != 0
    b21 = g2.adj[s:, :s] != 0
    a21_shift = a21[psi]
    b21_shift = b21[psi]

    plus = int(np.count_nonzero(~a21 & b21_shift))
    minus = int(np.count_nonzero(a21 & ~b21_shift))
    zero_plus = int(np.count_nonzero(~a21 & a21_shift & ~b21_shift))
    zero_minus = int(np.count_nonzero(a21 & ~a21_shift & b21_shift))
    return DisagreementBreakdown(plus + minus, plus, minus, zero_plus, zero_minus)


def accuracy(psi: np.ndarray) -> float:
    """Fraction of nonseed slots mapped to their own index (seeds never count)."""
    psi = as_permutation(psi)
    return float(np.count_nonzero(psi == np.arange(psi.size)) / psi.size)
