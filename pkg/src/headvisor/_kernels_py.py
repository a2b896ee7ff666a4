"""Pure-Python/numpy implementations of the hot kernels.

Both functions mirror ``_kernels.pyx`` exactly; the compiled module is
preferred at import time and this one is used when it is unavailable or
when ``HEADVISOR_PURE=1`` is set.
"""

import numpy as np

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITERATION_LIMIT = 2


def _membership(x, b, p, e):
    if x < p:
        if b == -np.inf:
            return 1.0
        if x <= b:
            return 0.0
        return (x - b) / (p - b)
    if e == np.inf:
        return 1.0
    if x >= e:
        return 0.0
    if e == p:
        return 1.0
    return (e - x) / (e - p)


def clipped_centroid(begin, peak, end, act, lo, hi):
    """Return ``(area, moment)`` of ``max_k min(act[k], mf_k(x))`` on [lo, hi].

    The aggregate is piecewise linear; every kink lies at a breakpoint of some
    membership function or at an intersection of two of the linear pieces
    (edges and clip levels), so integrating exactly between consecutive
    candidate points is exact.
    """
    k = len(act)
    slopes = []
    icepts = []
    points = [lo, hi]
    for i in range(k):
        b, p, e, a = begin[i], peak[i], end[i], act[i]
        if a <= 0.0:
            continue
        for v in (b, p, e):
            if lo < v < hi:
                points.append(v)
        if b != -np.inf and p > b:
            slopes.append(1.0 / (p - b))
            icepts.append(-b / (p - b))
        if e != np.inf and e > p:
            slopes.append(-1.0 / (e - p))
            icepts.append(e / (e - p))
        slopes.append(0.0)
        icepts.append(a)
    s = np.asarray(slopes)
    c = np.asarray(icepts)
    if s.size:
        ds = s[:, None] - s[None, :]
        dc = c[None, :] - c[:, None]
        iu = np.triu_indices(s.size, 1)
        ds = ds[iu]
        dc = dc[iu]
        ok = ds != 0.0
        xs = dc[ok] / ds[ok]
        points.extend(xs[(xs > lo) & (xs < hi)].tolist())
    xs = np.unique(np.asarray(points, dtype=float))
    ys = np.empty_like(xs)
    for j, x in enumerate(xs):
        best = 0.0
        for i in range(k):
            a = act[i]
            if a <= best:
                continue
            m = _membership(x, begin[i], peak[i], end[i])
            v = m if m < a else a
            if v > best:
                best = v
        ys[j] = best
    x0, x1 = xs[:-1], xs[1:]
    y0, y1 = ys[:-1], ys[1:]
    dx = x1 - x0
    area = float(np.sum(0.5 * dx * (y0 + y1)))
    moment = float(np.sum(dx / 6.0 * (x0 * (2.0 * y0 + y1) + x1 * (y0 + 2.0 * y1))))
    return area, moment


def _pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    nz = np.nonzero(col)[0]
    if nz.size:
        T[nz] -= np.outer(col[nz], T[r])


def simplex_iterate(T, basis, ncols, tol, max_iter):
    """Run Bland's-rule primal simplex on tableau ``T`` in place.

    ``T`` is ``(m + 1) x (n + 1)``: constraint rows, then the reduced-cost row;
    the last column is the right-hand side. Only columns ``< ncols`` may
    enter. Returns ``(status, iterations)``.
    """
    m = T.shape[0] - 1
    it = 0
    while it < max_iter:
        red = T[m, :ncols]
        cand = np.nonzero(red < -tol)[0]
        if cand.size == 0:
            return STATUS_OPTIMAL, it
        col = int(cand[0])
        colv = T[:m, col]
        rows = np.nonzero(colv > tol)[0]
        if rows.size == 0:
            return STATUS_UNBOUNDED, it
        ratios = T[rows, -1] / colv[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(tied[np.argmin(basis[tied])])
        _pivot(T, row, col)
        basis[row] = col
        it += 1
    return STATUS_ITERATION_LIMIT, it
