"""NumPy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used
when the extension is not built or ``ARROWHEAD_PURE_PYTHON`` is set.
"""

import numpy as np

# unit steps on the triangular lattice, basis e1 = (1, 0), e2 = (1/2, sqrt(3)/2)
_DIRS = np.array([[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]], dtype=np.int64)


def turtle_walk(program, start_dir):
    program = np.asarray(program, dtype=np.uint8)
    turn = np.zeros(program.shape[0], dtype=np.int64)
    turn[program == 1] = -1
    turn[program == 2] = 1
    heading = (start_dir + np.cumsum(turn)) % 6
    steps = _DIRS[heading[program == 0]]
    out = np.zeros((steps.shape[0] + 1, 2), dtype=np.int64)
    np.cumsum(steps, axis=0, out=out[1:])
    return out


def _count_below(diag, offsq, x, pivmin=1e-300):
    """Vectorized over the shifts ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    q = diag[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    cnt = (q < 0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - offsq[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        cnt += q < 0
    return cnt


def sturm_count(diag, offsq, x):
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    offsq = np.ascontiguousarray(offsq, dtype=np.float64)
    return int(_count_below(diag, offsq, x)[0])


def tridiag_eigvalsh(diag, off, tol=1e-14, max_iter=200):
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    n = diag.shape[0]
    if n == 0:
        return np.empty(0)
    radius = np.zeros(n)
    radius[1:] += np.abs(off)
    radius[:-1] += np.abs(off)
    lo = np.full(n, np.min(diag - radius))
    hi = np.full(n, np.max(diag + radius))
    offsq = off**2
    k = np.arange(n)
    for _ in range(max_iter):
        active = hi - lo > tol
        mid = 0.5 * (lo + hi)
        active &= (mid != lo) & (mid != hi)
        if not active.any():
            break
        above = _count_below(diag, offsq, mid[active]) > k[active]
        idx = np.flatnonzero(active)
        hi[idx[above]] = mid[active][above]
        lo[idx[~above]] = mid[active][~above]
    else:
        raise ArithmeticError("bisection did not converge")
    return 0.5 * (lo + hi)
