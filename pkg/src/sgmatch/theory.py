"""Brute-force matching oracles and analytic tail-bound utilities.

The oracles enumerate every bijection at small scale and report exact
optimum/argmin statistics; they are the ground truth the solvers are tested
against. The analytic side provides the Bernoulli Kullback-Leibler
divergence, a Stirling-type lower bound on binomial upper tails, and the
closed-form seed-count constants derived from it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import ParameterError, ResourceLimitError
from .graphs import Graph, Seeding, _require_binary

MAX_ENUM_FULL = 9  # n! enumeration cap for full matching
MAX_ENUM_NONSEED = 9  # m! enumeration cap for restricted matching
_BATCH = 40320  # permutations scored per vectorized block


@dataclass(frozen=True)
class OracleReport:
    """Exhaustive-enumeration statistics for one graph pair.

    ``better_than_identity`` counts bijections with strictly fewer
    disagreements than the identity labeling (the planted alignment in
    generated pairs); ``identity_is_unique_argmin`` records whether the
    identity is the one and only optimum.
    """

    optimum: int
    argmin_count: int
    identity_is_unique_argmin: bool
    better_than_identity: int

    def __post_init__(self):
        if self.argmin_count < 1 or self.better_than_identity < 0:
            raise ParameterError("malformed oracle report")
        if self.identity_is_unique_argmin and self.better_than_identity != 0:
            raise ParameterError("unique identity argmin contradicts a better bijection")


@lru_cache(maxsize=4)
def _permutation_table(k: int) -> np.ndarray:
    """All k! permutations of range(k) in lexicographic order (identity first)."""
    return np.array(list(itertools.permutations(range(k))), dtype=np.int64)


def _report(deltas: np.ndarray, delta_identity: int) -> OracleReport:
    optimum = int(deltas.min())
    argmin_count = int(np.count_nonzero(deltas == optimum))
    better = int(np.count_nonzero(deltas < delta_identity))
    unique = optimum == delta_identity and argmin_count == 1
    return OracleReport(optimum, argmin_count, unique, better)


def brute_force_gm(g1: Graph, g2: Graph) -> OracleReport:
    """Enumerate all n! vertex bijections and score total edge disagreements.

    The identity labeling plays the role of the planted alignment, as in
    pairs from :func:`sgmatch.graphs.generate_correlated_pair`.
    """
    _require_binary(g1, "g1")
    _require_binary(g2, "g2")
    if g1.n != g2.n:
        raise ParameterError("graphs must have the same vertex count")
    n = g1.n
    if n > MAX_ENUM_FULL:
        raise ResourceLimitError(
            f"full enumeration is capped at n <= {MAX_ENUM_FULL} (got n = {n})"
        )
    a = g1.adj != 0
    b = g2.adj != 0
    perms = _permutation_table(n)
    deltas = np.empty(len(perms), dtype=np.int64)
    for start in range(0, len(perms), _BATCH):
        blk = perms[start : start + _BATCH]
        b_shift = b[blk[:, :, None], blk[:, None, :]]
        # symmetric difference double-counts each unordered pair
        deltas[start : start + len(blk)] = (a != b_shift).sum(axis=(1, 2)) // 2
    delta_identity = int((a != b).sum() // 2)
    return _report(deltas, delta_identity)


def brute_force_rgm(g1: Graph, g2: Graph, seeding: Seeding) -> OracleReport:
    """Enumerate all m! nonseed bijections and score nonseed-seed disagreements."""
    _require_binary(g1, "g1")
    _require_binary(g2, "g2")
    if g1.n != g2.n or g1.n != seeding.n:
        raise ParameterError("graphs and seeding sizes must agree")
    m, s = seeding.m, seeding.s
    if m > MAX_ENUM_NONSEED:
        raise ResourceLimitError(
            f"restricted enumeration is capped at m <= {MAX_ENUM_NONSEED} (got m = {m})"
        )
    a21 = g1.adj[s:, :s] != 0
    b21 = g2.adj[s:, :s] != 0
    perms = _permutation_table(m)
    deltas = np.empty(len(perms), dtype=np.int64)
    for start in range(0, len(perms), _BATCH):
        blk = perms[start : start + _BATCH]
        deltas[start : start + len(blk)] = (a21[None, :, :] != b21[blk]).sum(axis=(1, 2))
    delta_identity = int((a21 != b21).sum())
    return _report(deltas, delta_identity)


# ---------------------------------------------------------------------------
# analytic functions


def kl_divergence_bernoulli(r: float, q: float) -> float:
    """Kullback-Leibler divergence between Bernoulli(r) and Bernoulli(q), in nats.

    Nonnegative, zero exactly at r == q. Both arguments must lie strictly
    inside (0, 1).
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"r={r} must lie strictly inside (0, 1)")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q={q} must lie strictly inside (0, 1)")
    return r * math.log(r / q) + (1.0 - r) * math.log((1.0 - r) / (1.0 - q))


def binomial_tail_lower_bound(eta: int, q: float, r: float) -> float:
    """Stirling-type lower bound on P(X >= eta*r) for X ~ Binomial(eta, q).

    Valid for 0 < q < r < 1 - 1/eta; the bound is
    ``(sqrt(pi)/e^3) * sqrt((1-r)/r) * eta^{-1/2} * q * exp(-eta * KL(r, q))``
    and is always strictly positive on its domain.
    """
    if eta < 1:
        raise ParameterError("eta must be a positive integer")
    if not 0.0 < q < r:
        raise ParameterError(f"need 0 < q < r (got q={q}, r={r})")
    if not r < 1.0 - 1.0 / eta:
        raise ParameterError(f"need r < 1 - 1/eta (got r={r}, eta={eta})")
    h = kl_divergence_bernoulli(r, q)
    return (
        (math.sqrt(math.pi) / math.exp(3.0))
        * math.sqrt((1.0 - r) / r)
        * q
        / math.sqrt(eta)
        * math.exp(-eta * h)
    )


def tail_threshold(eta: int, r: float) -> int:
    """Smallest integer k with k >= eta*r, guarding against float drift."""
    return max(0, math.ceil(eta * r - 1e-9))


def exact_binomial_tail(eta: int, q: float, k: int) -> float:
    """P(X >= k) for X ~ Binomial(eta, q), by direct high-precision summation.

    Terms are accumulated from the smallest (j = eta downward), with no
    normal approximation, so the result is trustworthy even deep in the
    tail at small eta.
    """
    if eta < 1:
        raise ParameterError("eta must be a positive integer")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q={q} must lie strictly inside (0, 1)")
    if k <= 0:
        return 1.0
    if k > eta:
        return 0.0
    with mpmath.workdps(50):
        qq = mpmath.mpf(q)
        total = mpmath.mpf(0)
        for j in range(eta, k - 1, -1):
            total += mpmath.binomial(eta, j) * qq**j * (1 - qq) ** (eta - j)
        return float(total)


def seed_threshold_constants(p: float, rho: float, eps: float) -> tuple[float, float]:
    """Closed-form constants bracketing the logarithmic seed requirement.

    Returns ``(c5_lower, c6_upper)``: any coefficient above ``c5_lower``
    (for a chosen slack ``eps`` in (0, 2)) suffices for exact recovery via
    restricted-focus matching, while coefficients below ``c6_upper`` leave
    the expected number of spuriously better bijections divergent. Both are
    expressed through the Bernoulli divergence at the conditional miss
    probabilities ``q1 = (1-p)(1-rho)`` and ``q2 = p(1-rho)``.
    """
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p={p} must lie strictly inside (0, 1)")
    if not 0.0 < rho < 1.0:
        raise ParameterError(f"rho={rho} must lie strictly inside (0, 1)")
    if not 0.0 < eps < 2.0:
        raise ParameterError(f"eps={eps} must lie strictly inside (0, 2)")
    q1 = (1.0 - p) * (1.0 - rho)
    q2 = p * (1.0 - rho)
    r1 = q1 + rho / 2.0
    r2 = q2 + rho / 2.0
    if not (0.0 < r1 < 1.0 and 0.0 < r2 < 1.0):
        raise ParameterError("shifted probabilities q_i + rho/2 must lie inside (0, 1)")
    h1 = kl_divergence_bernoulli(r1, q1)
    h2 = kl_divergence_bernoulli(r2, q2)
    pq = p * (1.0 - p)
    c5_lower = max(
        2.0 / (h1 * pq * (2.0 - eps)),
        2.0 / (h2 * pq * (2.0 - eps)),
        16.0 / (eps**2 * pq),
    )
    c6_upper = 1.0 / (4.0 * (h1 + h2) * pq)
    return c5_lower, c6_upper
