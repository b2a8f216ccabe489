"""Pure-numpy kernels: the fallback backend when numba is unavailable or
disabled via LPMCSVM_BACKEND=numpy.

Semantics match lpmcsvm.kernels.accelerated exactly up to floating-point
reduction order. Both backends are deterministic for a fixed visit order.
"""

from __future__ import annotations

import numpy as np


def solve_row_qp(g: np.ndarray, a: np.ndarray, u: np.ndarray,
                 tol: float) -> np.ndarray:
    """Exact maximizer of -0.5*sum(a*d^2) + g.d over {d <= u, sum(d) = 0}.

    Requires a > 0 elementwise and sum(u) >= 0. Solved by locating the
    multiplier lam with sum_j min(u_j, (g_j - lam)/a_j) = 0: the sum is
    piecewise linear and nonincreasing in lam, so the segment between sorted
    breakpoints g_j - a_j*u_j containing the root is solved in closed form,
    with a bisection fallback if rounding pushes the root off every segment.
    """
    c = g.shape[0]
    sum_u = 0.0
    for j in range(c):
        sum_u += u[j]
    if sum_u <= 0.0:
        return u.astype(np.float64).copy()

    bp = g - a * u
    order = np.argsort(bp)
    SA = float(np.sum(g / a))
    SB = float(np.sum(1.0 / a))
    SU = 0.0
    hi = np.inf
    lam = 0.0
    found = False
    for k in range(c - 1, -1, -1):
        j = order[k]
        lo = bp[j]
        if SB > 0.0:
            cand = (SA + SU) / SB
            if lo <= cand <= hi:
                lam = cand
                found = True
                break
        SA -= g[j] / a[j]
        SB -= 1.0 / a[j]
        SU += u[j]
        hi = lo
    if not found:
        lo_b = float(bp[order[0]]) - 1.0
        hi_b = float(np.max(g)) + 1.0
        for _ in range(200):
            mid = 0.5 * (lo_b + hi_b)
            s = float(np.sum(np.minimum(u, (g - mid) / a)))
            if abs(s) <= tol:
                lo_b = hi_b = mid
                break
            if s > 0.0:
                lo_b = mid
            else:
                hi_b = mid
        lam = 0.5 * (lo_b + hi_b)

    delta = np.minimum(u, (g - lam) / a)
    r = float(delta.sum())
    if r != 0.0:
        jb = int(np.argmax(u - delta))
        if delta[jb] - r <= u[jb]:
            delta[jb] -= r
    return delta


def sweep_epoch(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray,
                labels: np.ndarray, self_k: np.ndarray, C: float,
                beta: np.ndarray, alpha: np.ndarray, v: np.ndarray,
                perm: np.ndarray, skip_tol: float, qp_tol: float) -> float:
    """One dual-coordinate-ascent pass over the rows listed in perm.

    For each row: score the classes against the running class feature sums v,
    measure the KKT violation of the row's dual block, and if above skip_tol
    solve the row subproblem exactly and apply the step to alpha and v in
    place. Rows with zero self-kernel are skipped. Returns the largest
    pre-update violation seen.
    """
    c = beta.shape[0]
    max_viol = 0.0
    for i in perm:
        kii = self_k[i]
        if kii <= 0.0:
            continue
        y = labels[i]
        lo, hi = indptr[i], indptr[i + 1]
        cols = indices[lo:hi]
        vals = data[lo:hi]

        g = -(beta * (v[:, cols] @ vals))
        g[y] += 1.0

        row = alpha[i]
        u = -row
        u[y] += C
        free = u > 0.0
        viol = float(np.max(g[free]) - np.min(g))
        if viol < 0.0:
            viol = 0.0
        if viol > max_viol:
            max_viol = viol
        if viol <= skip_tol:
            continue

        delta = solve_row_qp(g, beta * kii, u, qp_tol)

        old = row.copy()
        row += delta
        # exact bound enforcement, then repair the zero row sum through the
        # label coordinate so feasibility never drifts
        np.minimum(row, 0.0, out=row)
        row[y] = 0.0
        s_others = float(row.sum())
        row[y] = min(C, -s_others)
        applied = row - old
        nz = np.nonzero(applied)[0]
        if nz.size:
            v[np.ix_(nz, cols)] += np.outer(applied[nz], vals)
    return max_viol
