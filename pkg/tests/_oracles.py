"""Independent reference implementations used as test oracles.

Everything here is written the slow, obvious way (double loops, full
enumeration) and deliberately shares no code with the package internals.
"""

import itertools

import numpy as np


def random_binary_graph(n, p, rng):
    from sgmatch.graphs import Graph

    a = np.triu((rng.random((n, n)) < p).astype(float), k=1)
    return Graph(a + a.T)


def random_weighted_graph(n, rng, scale=1.0):
    from sgmatch.graphs import Graph

    a = np.triu(rng.random((n, n)) * scale, k=1)
    return Graph(a + a.T)


def naive_disagreement_counts(g1, g2, s, psi):
    """Five counters over all unordered pairs, by explicit double loop."""
    n = g1.n
    full = list(range(s)) + [s + int(x) for x in psi]
    e1 = g1.adj != 0
    e2 = g2.adj != 0
    plus = minus = zp = zm = 0
    for v in range(n):
        for w in range(v + 1, n):
            in1 = e1[v, w]
            in1_shift = e1[full[v], full[w]]
            in2_shift = e2[full[v], full[w]]
            if not in1 and in2_shift:
                plus += 1
            if in1 and not in2_shift:
                minus += 1
            if not in1 and in1_shift and not in2_shift:
                zp += 1
            if in1 and not in1_shift and in2_shift:
                zm += 1
    return plus + minus, plus, minus, zp, zm


def naive_restricted_counts(g1, g2, s, psi):
    """Five counters over ordered (nonseed, seed) pairs, by double loop."""
    e1 = g1.adj != 0
    e2 = g2.adj != 0
    m = g1.n - s
    plus = minus = zp = zm = 0
    for i in range(m):
        w = s + i
        w_shift = s + int(psi[i])
        for u in range(s):
            in1 = e1[w, u]
            in1_shift = e1[w_shift, u]
            in2_shift = e2[w_shift, u]
            if not in1 and in2_shift:
                plus += 1
            if in1 and not in2_shift:
                minus += 1
            if not in1 and in1_shift and not in2_shift:
                zp += 1
            if in1 and not in1_shift and in2_shift:
                zm += 1
    return plus + minus, plus, minus, zp, zm


def enumerate_max_trace(score):
    """Exhaustive assignment maximum: best objective over all permutations."""
    score = np.asarray(score, dtype=float)
    n = score.shape[0]
    best = -np.inf
    for perm in itertools.permutations(range(n)):
        val = sum(score[i, perm[i]] for i in range(n))
        if val > best:
            best = val
    return best


def enumerate_min_cost(cost):
    return -enumerate_max_trace(-np.asarray(cost, dtype=float))


def enumerate_min_restricted(g1, g2, s):
    """Exhaustive minimum of restricted disagreements over nonseed bijections."""
    m = g1.n - s
    best = None
    for perm in itertools.permutations(range(m)):
        val = naive_restricted_counts(g1, g2, s, perm)[0]
        if best is None or val < best:
            best = val
    return best


def sinkhorn_doubly_stochastic(m, rng, iters=300):
    """Random doubly stochastic matrix by alternating row/column scaling."""
    x = rng.random((m, m)) + 0.1
    for _ in range(iters):
        x /= x.sum(axis=1, keepdims=True)
        x /= x.sum(axis=0, keepdims=True)
    return x


def quadratic_objective(g1, g2, s, p):
    """Straightforward transcription of the matching objective for testing."""
    a, b = g1.adj, g2.adj
    a11, a21, a22 = a[:s, :s], a[s:, :s], a[s:, s:]
    b11, b21, b22 = b[:s, :s], b[s:, :s], b[s:, s:]
    p = np.asarray(p, dtype=float)
    return (
        np.trace(a11 @ b11)
        + 2.0 * np.trace(p.T @ (a21 @ b21.T))
        + np.trace(a22 @ p @ b22 @ p.T)
    )
