"""Exact linear assignment on square score matrices.

The O(n^3) kernel lives in a compiled extension when available; a
pure-numpy twin is selected at import time otherwise (or when the
``SGMATCH_PURE_PYTHON`` environment variable is set to a nonempty value).
Both produce identical output, including tie-breaking.
"""

from __future__ import annotations

import os

import numpy as np

from . import _lap_py
from .errors import ParameterError

# Inputs are pre-scaled so max |entry| <= _SCALE_CAP before the dual update
# loop; the optimality certificate is then checked to _DUAL_ATOL.
_SCALE_CAP = 1e6
_DUAL_ATOL = 1e-9


def _select_kernel():
    if os.environ.get("SGMATCH_PURE_PYTHON"):
        return _lap_py, "python"
    try:
        from . import _lap_core

        return _lap_core, "cython"
    except ImportError:
        return _lap_py, "python"


_KERNEL, _BACKEND = _select_kernel()


def backend() -> str:
    """Name of the active kernel: ``"cython"`` or ``"python"``."""
    return _BACKEND


def available_backends() -> dict[str, object]:
    """All importable kernels, keyed by backend name (for benchmarks/tests)."""
    out = {"python": _lap_py}
    try:
        from . import _lap_core

        out["cython"] = _lap_core
    except ImportError:
        pass
    return out


def _validated(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ParameterError("score matrix must be square and nonempty")
    if not np.isfinite(m).all():
        raise ParameterError("score matrix entries must be finite")
    return m


def _solve_min(cost: np.ndarray, kernel) -> np.ndarray:
    scaled = cost
    max_abs = np.abs(cost).max()
    if max_abs > _SCALE_CAP:
        scaled = cost * (_SCALE_CAP / max_abs)
    perm, u, v = kernel.solve(np.ascontiguousarray(scaled))
    slack = scaled - u[:, None] - v[None, :]
    if slack.min() < -_DUAL_ATOL:
        raise RuntimeError("assignment kernel produced infeasible duals")
    return perm


def solve_min_cost(cost, *, kernel=None) -> tuple[np.ndarray, float]:
    """Exactly minimize ``sum(cost[i, perm[i]])`` over permutations.

    Returns the optimal permutation (deterministic tie-breaking; an
    all-constant matrix yields the identity) and the objective evaluated on
    the unscaled input.
    """
    cost = _validated(cost)
    perm = _solve_min(cost, kernel or _KERNEL)
    objective = float(cost[np.arange(cost.shape[0]), perm].sum())
    return perm, objective


def solve_max_trace(score, *, kernel=None) -> tuple[np.ndarray, float]:
    """Exactly maximize ``trace(P^T score) = sum(score[i, perm[i]])``."""
    score = _validated(score)
    perm = _solve_min(-score, kernel or _KERNEL)
    objective = float(score[np.arange(score.shape[0]), perm].sum())
    return perm, objective
