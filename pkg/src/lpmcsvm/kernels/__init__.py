"""Backend selection for the solver hot loop.

The env var LPMCSVM_BACKEND picks the implementation at import time:
  auto  (default) numba if importable, else pure numpy
  numba           require the compiled kernels
  numpy           force the pure-numpy fallback
"""

from __future__ import annotations

import os


def _resolve():
    choice = os.environ.get("LPMCSVM_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise RuntimeError(
            f"LPMCSVM_BACKEND={choice!r}: expected auto, numba or numpy"
        )
    if choice in ("auto", "numba"):
        try:
            from . import accelerated
            return accelerated, "numba"
        except ImportError:
            if choice == "numba":
                raise
    from . import reference
    return reference, "numpy"


_impl, BACKEND = _resolve()

solve_row_qp = _impl.solve_row_qp
sweep_epoch = _impl.sweep_epoch

__all__ = ["BACKEND", "solve_row_qp", "sweep_epoch"]
