"""Decreasing Lipschitz surrogate losses and the pieces the dual solver needs.

Two losses are provided: the hinge (1 - t)_+ used by the training objective,
and the clipped margin loss used by the generalization-bound calculator. Both
upper-bound the 0-1 loss and have a finite zero point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LossSpec:
    """A surrogate loss with its Lipschitz constant, zero point and value bound."""

    kind: str  # "hinge" or "margin"
    rho: float  # margin width; unused for hinge
    lipschitz: float
    zero_point: float
    bound: float  # sup of the loss over margins; inf for hinge


def hinge() -> LossSpec:
    return LossSpec(kind="hinge", rho=1.0, lipschitz=1.0, zero_point=1.0,
                    bound=math.inf)


def margin_loss(rho: float) -> LossSpec:
    if not (rho > 0.0 and math.isfinite(rho)):
        raise ValueError("margin width must be positive and finite")
    return LossSpec(kind="margin", rho=rho, lipschitz=1.0 / rho, zero_point=rho,
                    bound=1.0)


def eval_loss(loss: LossSpec, t: float) -> float:
    """Loss value at margin t."""
    if loss.kind == "hinge":
        return max(1.0 - t, 0.0)
    if loss.kind == "margin":
        if t <= 0.0:
            return 1.0
        if t <= loss.rho:
            return 1.0 - t / loss.rho
        return 0.0
    raise ValueError(f"unknown loss kind {loss.kind!r}")


def conjugate_hinge(s: float) -> float:
    """Fenchel conjugate of the hinge: s on [-1, 0], +inf elsewhere."""
    if -1.0 <= s <= 0.0:
        return s
    return math.inf


def margin_of(h_values: np.ndarray, y: int) -> float:
    """True-class score minus the best competing score; <= 0 iff misclassified."""
    h = np.asarray(h_values, dtype=np.float64)
    if h.size < 2:
        raise ValueError("need at least two classes to form a margin")
    if not (0 <= y < h.size):
        raise ValueError("label out of range")
    rival = np.max(np.delete(h, y))
    return float(h[y] - rival)
