"""Matching procedures: exact restricted-focus matching and Frank-Wolfe matching.

Both operate on a seed-prefix pair (see :mod:`sgmatch.graphs`) with blocks

    adj = [[X11, X21^T],
           [X21, X22 ]]

where ``X11`` is seed-seed, ``X21`` nonseed-seed, and ``X22``
nonseed-nonseed adjacency. ``rgm_match`` maximizes the linear score
``trace(P^T A21 B21^T)`` exactly via one assignment solve. ``sgm_match``
maximizes the quadratic objective

    f(P) = trace(A11 B11) + 2 trace(P^T A21 B21^T) + trace(A22 P B22 P^T)

over doubly stochastic P by Frank-Wolfe iterations (assignment-solved
linearizations plus exact line search), then projects the final iterate to
the nearest permutation. With zero seeds the seed terms vanish and
``sgm_match`` reduces to plain seedless Frank-Wolfe matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lap
from .errors import ParameterError
from .graphs import Graph, Seeding, as_permutation

ROW_SUM_TOL = 1e-9
NEGATIVITY_TOL = 1e-12


@dataclass
class SgmConfig:
    """Frank-Wolfe knobs: iteration cap, stopping tolerance, start point.

    ``tol`` is compared against the Frobenius norm of the iterate change.
    ``init`` is either ``"barycenter"`` or an explicit doubly stochastic
    matrix (research use; the barycenter is the default and the only start
    used by the harness).
    """

    max_iters: int = 20
    tol: float = 1e-6
    init: str | np.ndarray = "barycenter"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ParameterError("max_iters must be at least 1")
        if self.tol < 0:
            raise ParameterError("tol must be nonnegative")


@dataclass
class MatchResult:
    """Outcome of one matching run.

    ``objective`` is the quadratic objective evaluated at the returned
    permutation; ``objective_trace`` logs the (fractional) objective at each
    Frank-Wolfe iterate and is nondecreasing by construction of the exact
    line search. ``converged`` is True when the run stopped on the iterate
    change tolerance rather than the iteration cap.
    """

    permutation: np.ndarray
    objective: float
    iterations: int
    objective_trace: list[float] = field(default_factory=list)
    converged: bool = True


def _blocks(g: Graph, s: int):
    a = g.adj
    return a[:s, :s], a[s:, :s], a[s:, s:]


def _check_pair(g1: Graph, g2: Graph, seeding: Seeding) -> None:
    if g1.n != g2.n:
        raise ParameterError(f"graphs differ in size: {g1.n} vs {g2.n}")
    if seeding.n != g1.n:
        raise ParameterError("seeding does not cover the graphs")


def barycenter(m: int) -> np.ndarray:
    """The m-by-m doubly stochastic matrix with all entries 1/m."""
    if m < 1:
        raise ParameterError("dimension must be positive")
    return np.full((m, m), 1.0 / m)


def is_doubly_stochastic(p: np.ndarray, row_sum_tol: float = ROW_SUM_TOL) -> bool:
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        return False
    ok_rows = np.abs(p.sum(axis=1) - 1.0).max() <= row_sum_tol
    ok_cols = np.abs(p.sum(axis=0) - 1.0).max() <= row_sum_tol
    return bool(ok_rows and ok_cols and p.min() >= -NEGATIVITY_TOL)


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    perm = as_permutation(perm)
    out = np.zeros((perm.size, perm.size))
    out[np.arange(perm.size), perm] = 1.0
    return out


def sgm_objective(g1: Graph, g2: Graph, seeding: Seeding, p: np.ndarray) -> float:
    """Evaluate the quadratic matching objective f at ``p`` (any m-by-m matrix)."""
    _check_pair(g1, g2, seeding)
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (seeding.m, seeding.m):
        raise ParameterError(f"p has shape {p.shape}, expected ({seeding.m}, {seeding.m})")
    a11, a21, a22 = _blocks(g1, seeding.s)
    b11, b21, b22 = _blocks(g2, seeding.s)
    seed_term = float(np.sum(a11 * b11))  # trace(A11 B11), both symmetric
    cross = a21 @ b21.T
    return seed_term + 2.0 * float(np.sum(p * cross)) + float(np.sum((a22 @ p @ b22) * p))


def sgm_gradient(g1: Graph, g2: Graph, seeding: Seeding, p: np.ndarray) -> np.ndarray:
    """Gradient of f: ``2 A21 B21^T + 2 A22 p B22`` (blocks are symmetric)."""
    _check_pair(g1, g2, seeding)
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (seeding.m, seeding.m):
        raise ParameterError(f"p has shape {p.shape}, expected ({seeding.m}, {seeding.m})")
    _, a21, a22 = _blocks(g1, seeding.s)
    _, b21, b22 = _blocks(g2, seeding.s)
    return 2.0 * (a21 @ b21.T) + 2.0 * (a22 @ p @ b22)


def fw_linearization_step(
    g1: Graph, g2: Graph, seeding: Seeding, p: np.ndarray
) -> np.ndarray:
    """Maximize the linearized objective at ``p`` over permutations.

    The score matrix is the sum of the seed-information term
    ``A21 B21^T`` (alone it reproduces restricted-focus matching) and the
    seedless term ``A22 p B22`` (alone it reproduces the seed-ignoring
    step); the assignment solver handles their sum exactly.
    """
    _check_pair(g1, g2, seeding)
    p = np.asarray(p, dtype=np.float64)
    _, a21, a22 = _blocks(g1, seeding.s)
    _, b21, b22 = _blocks(g2, seeding.s)
    score = a21 @ b21.T + a22 @ p @ b22
    perm, _ = lap.solve_max_trace(score)
    return perm


def line_search(
    g1: Graph, g2: Graph, seeding: Seeding, p: np.ndarray, y: np.ndarray
) -> float:
    """Exactly maximize the objective on the segment from ``p`` to ``y``.

    With D = Y - P the objective along the segment is the quadratic
    a*lam^2 + b*lam + c; the maximizer over [0, 1] is returned with
    deterministic endpoint preferences (ties go to 1, a zero direction
    returns 0).
    """
    _check_pair(g1, g2, seeding)
    p = np.asarray(p, dtype=np.float64)
    d = permutation_matrix(as_permutation(y, seeding.m)) - p
    if not d.any():
        return 0.0
    _, a21, a22 = _blocks(g1, seeding.s)
    _, b21, b22 = _blocks(g2, seeding.s)
    cross = a21 @ b21.T
    a22_d_b22 = a22 @ d @ b22
    a = float(np.sum(a22_d_b22 * d))
    b = (
        2.0 * float(np.sum(d * cross))
        + float(np.sum(a22_d_b22 * p))
        + float(np.sum((a22 @ p @ b22) * d))
    )
    if a < 0.0:
        return float(np.clip(-b / (2.0 * a), 0.0, 1.0))
    if a > 0.0:
        return 1.0 if a + b >= 0.0 else 0.0  # best endpoint, ties to 1
    return 1.0 if b >= 0.0 else 0.0


def project_to_permutation(q: np.ndarray) -> np.ndarray:
    """Nearest permutation to ``q`` in Frobenius norm (max-trace assignment)."""
    q = np.asarray(q, dtype=np.float64)
    perm, _ = lap.solve_max_trace(q)
    return perm


def rgm_match(g1: Graph, g2: Graph, seeding: Seeding) -> MatchResult:
    """Exactly minimize nonseed-to-seed disagreements via one assignment solve.

    Equivalent to minimizing ``||A21 - P B21||_F``; the reported objective is
    the maximized trace ``trace(P^T A21 B21^T)``.
    """
    _check_pair(g1, g2, seeding)
    if seeding.s < 1:
        raise ParameterError("restricted-focus matching needs at least one seed")
    _, a21, _ = _blocks(g1, seeding.s)
    _, b21, _ = _blocks(g2, seeding.s)
    perm, objective = lap.solve_max_trace(a21 @ b21.T)
    return MatchResult(perm, objective, iterations=1, objective_trace=[objective])


def sgm_match(
    g1: Graph, g2: Graph, seeding: Seeding, cfg: SgmConfig | None = None
) -> MatchResult:
    """Frank-Wolfe matching from the barycenter (or a supplied start).

    Iterates ``P <- P + lam (Y - P)`` until the iterate change drops below
    ``cfg.tol`` in Frobenius norm or ``cfg.max_iters`` steps have run, then
    projects onto permutations. ``objective`` is evaluated at the projected
    permutation; the fractional per-iterate values live in
    ``objective_trace``.
    """
    _check_pair(g1, g2, seeding)
    cfg = cfg or SgmConfig()
    m = seeding.m
    if isinstance(cfg.init, str):
        if cfg.init != "barycenter":
            raise ParameterError(f"unknown init {cfg.init!r}")
        p = barycenter(m)
    else:
        p = np.array(cfg.init, dtype=np.float64)
        if p.shape != (m, m) or not is_doubly_stochastic(p):
            raise ParameterError("init must be an m-by-m doubly stochastic matrix")

    trace = [sgm_objective(g1, g2, seeding, p)]
    converged = False
    iterations = 0
    for _ in range(cfg.max_iters):
        y = fw_linearization_step(g1, g2, seeding, p)
        lam = line_search(g1, g2, seeding, p, y)
        p_next = (1.0 - lam) * p + lam * permutation_matrix(y)
        change = float(np.linalg.norm(p_next - p))
        p = p_next
        iterations += 1
        trace.append(sgm_objective(g1, g2, seeding, p))
        if change < cfg.tol:
            converged = True
            break

    perm = project_to_permutation(p)
    objective = sgm_objective(g1, g2, seeding, permutation_matrix(perm))
    return MatchResult(perm, objective, iterations, trace, converged)
