# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assignment kernel: shortest augmenting paths with dual potentials.

Must stay operation-for-operation identical to ``_lap_py.solve`` so both
backends return bitwise-equal assignments and potentials.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


cdef void _kernel(double[:, ::1] cost, double[::1] u, double[::1] v,
                  cnp.int64_t[::1] link, cnp.int64_t[::1] way,
                  double[::1] minv, cnp.uint8_t[::1] used) noexcept nogil:
    cdef Py_ssize_t n = cost.shape[0]
    cdef Py_ssize_t i, j, i0, j0, j1, jfree, jprev
    cdef double cur, delta

    for i in range(n):
        link[n] = i
        j0 = n
        for j in range(n):
            minv[j] = INFINITY
            used[j] = 0
        used[n] = 0
        while True:
            used[j0] = 1
            i0 = link[j0]

            delta = INFINITY
            for j in range(n):
                if not used[j]:
                    cur = cost[i0, j] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]

            # first unassigned column among the minimizers, else lowest index
            j1 = -1
            jfree = -1
            for j in range(n):
                if not used[j] and minv[j] == delta:
                    if j1 < 0:
                        j1 = j
                    if link[j] < 0:
                        jfree = j
                        break
            if jfree >= 0:
                j1 = jfree

            for j in range(n + 1):
                if used[j]:
                    u[link[j]] += delta
                    v[j] -= delta
                elif j < n:
                    minv[j] -= delta

            j0 = j1
            if link[j0] < 0:
                break
        while j0 != n:
            jprev = way[j0]
            link[j0] = link[jprev]
            j0 = jprev


def solve(cost):
    """Minimize ``sum(cost[i, perm[i]])``; returns ``(row_to_col, u, v)``."""
    cost_arr = np.ascontiguousarray(cost, dtype=np.float64)
    n = cost_arr.shape[0]
    u_arr = np.zeros(n)
    v_arr = np.zeros(n + 1)
    link_arr = np.full(n + 1, -1, dtype=np.int64)
    way_arr = np.full(n, n, dtype=np.int64)

    # bind memoryviews while the GIL is held
    cdef double[:, ::1] c = cost_arr
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef cnp.int64_t[::1] link = link_arr
    cdef cnp.int64_t[::1] way = way_arr
    cdef double[::1] minv = np.empty(n)
    cdef cnp.uint8_t[::1] used = np.zeros(n + 1, dtype=np.uint8)

    with nogil:
        _kernel(c, u, v, link, way, minv, used)

    row_to_col = np.empty(n, dtype=np.int64)
    row_to_col[link_arr[:n]] = np.arange(n)
    return row_to_col, u_arr, v_arr[:n]
