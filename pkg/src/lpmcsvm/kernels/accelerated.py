"""Numba-compiled kernels: the default backend for the solver hot loop.

Mirrors lpmcsvm.kernels.reference; loops are written out so the whole sweep
compiles to machine code and releases the GIL (grid-search cells run in
threads).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _row_qp(g, a, u, tol, delta, bp):
    c = g.shape[0]
    sum_u = 0.0
    for j in range(c):
        sum_u += u[j]
    if sum_u <= 0.0:
        for j in range(c):
            delta[j] = u[j]
        return

    for j in range(c):
        bp[j] = g[j] - a[j] * u[j]
    order = np.argsort(bp)
    SA = 0.0
    SB = 0.0
    for j in range(c):
        SA += g[j] / a[j]
        SB += 1.0 / a[j]
    SU = 0.0
    hi = np.inf
    lam = 0.0
    found = False
    for k in range(c - 1, -1, -1):
        j = order[k]
        lo = bp[j]
        if SB > 0.0:
            cand = (SA + SU) / SB
            if cand >= lo and cand <= hi:
                lam = cand
                found = True
                break
        SA -= g[j] / a[j]
        SB -= 1.0 / a[j]
        SU += u[j]
        hi = lo
    if not found:
        lo_b = bp[order[0]] - 1.0
        hi_b = g[0]
        for j in range(1, c):
            if g[j] > hi_b:
                hi_b = g[j]
        hi_b += 1.0
        for _ in range(200):
            mid = 0.5 * (lo_b + hi_b)
            s = 0.0
            for j in range(c):
                dj = (g[j] - mid) / a[j]
                if dj > u[j]:
                    dj = u[j]
                s += dj
            if abs(s) <= tol:
                lo_b = mid
                hi_b = mid
                break
            if s > 0.0:
                lo_b = mid
            else:
                hi_b = mid
        lam = 0.5 * (lo_b + hi_b)

    for j in range(c):
        dj = (g[j] - lam) / a[j]
        delta[j] = u[j] if dj > u[j] else dj
    r = 0.0
    for j in range(c):
        r += delta[j]
    if r != 0.0:
        jb = 0
        slack_b = u[0] - delta[0]
        for j in range(1, c):
            sl = u[j] - delta[j]
            if sl > slack_b:
                slack_b = sl
                jb = j
        if delta[jb] - r <= u[jb]:
            delta[jb] -= r


@njit(cache=True, nogil=True)
def _solve_row_qp(g, a, u, tol):
    delta = np.empty(g.shape[0], dtype=np.float64)
    bp = np.empty(g.shape[0], dtype=np.float64)
    _row_qp(g, a, u, tol, delta, bp)
    return delta


def solve_row_qp(g: np.ndarray, a: np.ndarray, u: np.ndarray,
                 tol: float) -> np.ndarray:
    """Exact maximizer of -0.5*sum(a*d^2) + g.d over {d <= u, sum(d) = 0}."""
    return _solve_row_qp(
        np.ascontiguousarray(g, dtype=np.float64),
        np.ascontiguousarray(a, dtype=np.float64),
        np.ascontiguousarray(u, dtype=np.float64),
        float(tol),
    )


@njit(cache=True, nogil=True)
def sweep_epoch(indptr, indices, data, labels, self_k, C, beta, alpha, v,
                perm, skip_tol, qp_tol):
    """One dual-coordinate-ascent pass; see kernels.reference.sweep_epoch."""
    c = beta.shape[0]
    g = np.empty(c, dtype=np.float64)
    u = np.empty(c, dtype=np.float64)
    aq = np.empty(c, dtype=np.float64)
    old = np.empty(c, dtype=np.float64)
    delta = np.empty(c, dtype=np.float64)
    bp = np.empty(c, dtype=np.float64)
    max_viol = 0.0
    for t in range(perm.shape[0]):
        i = perm[t]
        kii = self_k[i]
        if kii <= 0.0:
            continue
        y = labels[i]
        lo = indptr[i]
        hi = indptr[i + 1]

        for j in range(c):
            acc = 0.0
            for t2 in range(lo, hi):
                acc += v[j, indices[t2]] * data[t2]
            g[j] = (1.0 if j == y else 0.0) - beta[j] * acc

        gfree = -np.inf
        gmin = np.inf
        for j in range(c):
            u[j] = (C if j == y else 0.0) - alpha[i, j]
            if u[j] > 0.0 and g[j] > gfree:
                gfree = g[j]
            if g[j] < gmin:
                gmin = g[j]
        viol = gfree - gmin
        if viol < 0.0:
            viol = 0.0
        if viol > max_viol:
            max_viol = viol
        if viol <= skip_tol:
            continue

        for j in range(c):
            aq[j] = beta[j] * kii
        _row_qp(g, aq, u, qp_tol, delta, bp)

        for j in range(c):
            old[j] = alpha[i, j]
            alpha[i, j] += delta[j]
        s_others = 0.0
        for j in range(c):
            if j != y:
                if alpha[i, j] > 0.0:
                    alpha[i, j] = 0.0
                s_others += alpha[i, j]
        ay = -s_others
        if ay > C:
            ay = C
        alpha[i, y] = ay
        for j in range(c):
            dj = alpha[i, j] - old[j]
            if dj != 0.0:
                for t2 in range(lo, hi):
                    v[j, indices[t2]] += dj * data[t2]
    return max_viol
