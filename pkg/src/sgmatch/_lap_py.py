"""Pure-numpy assignment kernel: shortest augmenting paths with dual potentials.

Fallback twin of the compiled kernel in ``_lap_core.pyx``. Both perform the
same floating-point operations in the same order, so they return identical
assignments and potentials bit for bit; keep the two in sync when editing.
"""

import numpy as np


def solve(cost):
    """Minimize ``sum(cost[i, perm[i]])`` over permutations.

    Returns ``(row_to_col, u, v)`` where ``u``/``v`` are optimal row/column
    dual potentials. Column index ``n`` is a virtual root used while growing
    alternating trees. Ties are broken deterministically: among columns at
    minimum reduced distance the first unassigned one is taken, else the
    lowest index, so an all-constant matrix yields the identity.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    n = cost.shape[0]
    u = np.zeros(n)
    v = np.zeros(n + 1)
    link = np.full(n + 1, -1, dtype=np.int64)  # column -> assigned row
    way = np.full(n, n, dtype=np.int64)  # column -> predecessor column
    cols = np.arange(n)

    for i in range(n):
        link[n] = i
        j0 = n
        minv = np.full(n, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = link[j0]
            unused = ~used[:n]

            cur = cost[i0, unused] - u[i0] - v[:n][unused]
            sub = minv[unused]
            better = cur < sub
            sub[better] = cur[better]
            minv[unused] = sub
            way_sub = way[unused]
            way_sub[better] = j0
            way[unused] = way_sub

            delta = sub.min()
            ties = cols[unused][sub == delta]
            free = ties[link[ties] == -1]
            j1 = int(free[0]) if free.size else int(ties[0])

            used_cols = np.flatnonzero(used)
            u[link[used_cols]] += delta
            v[used_cols] -= delta
            minv[unused] -= delta

            j0 = j1
            if link[j0] == -1:
                break
        while j0 != n:
            j_prev = way[j0]
            link[j0] = link[j_prev]
            j0 = j_prev

    row_to_col = np.empty(n, dtype=np.int64)
    row_to_col[link[:n]] = cols
    return row_to_col, u, v[:n]
