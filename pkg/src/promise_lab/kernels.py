"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
fallback.  Set ``PROMISE_LAB_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

if os.environ.get("PROMISE_LAB_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"


def _i64(values) -> np.ndarray:
    return np.ascontiguousarray(values, dtype=np.int64)


def lkn_labels(primes, start: int, count: int) -> np.ndarray:
    """Label codes for m in [start, start+count): 0 unpromised, 1 yes, 2 no."""
    return _impl.lkn_labels(_i64(primes), int(start), int(count))


def divisor_counts(primes, start: int, count: int) -> np.ndarray:
    """How many of ``primes`` divide each m in [start, start+count)."""
    return _impl.divisor_counts(_i64(primes), int(start), int(count))


def dfa_trace(nxt, start_state: int, accepting, count: int) -> np.ndarray:
    """Decision (0/1) of a DFA after m steps, for m in [0, count)."""
    acc = np.ascontiguousarray(accepting, dtype=np.uint8)
    return _impl.dfa_trace(_i64(nxt), int(start_state), acc, int(count))


def bottom_sccs(indptr, indices):
    return _impl.bottom_sccs(_i64(indptr), _i64(indices))


def component_period(indptr, indices, comp, root: int):
    return _impl.component_period(_i64(indptr), _i64(indices), _i64(comp), int(root))


__all__ = [
    "BACKEND",
    "lkn_labels",
    "divisor_counts",
    "dfa_trace",
    "bottom_sccs",
    "component_period",
]
