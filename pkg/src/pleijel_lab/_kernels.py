"""Compiled inner loops: Sturm counts for symmetric tridiagonals and grid labelling."""

from __future__ import annotations

import numpy as np
from numba import njit

_PIVOT_FLOOR = 1e-300


@njit(cache=True, nogil=True)
def sturm_count(diag, off2, sigma):
    """Number of eigenvalues of T strictly below sigma.

    ``off2`` holds the squared off-diagonal. The count is the number of
    negative pivots in the LDL^T factorisation of T - sigma I.
    """
    n = diag.shape[0]
    q = diag[0] - sigma
    c = 1 if q < 0 else 0
    for i in range(1, n):
        if q == 0.0:
            q = -_PIVOT_FLOOR
        q = diag[i] - sigma - off2[i - 1] / q
        if q < 0:
            c += 1
    return c


@njit(cache=True, nogil=True)
def gershgorin(diag, off):
    n = diag.shape[0]
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        rad = 0.0
        if i > 0:
            rad += abs(off[i - 1])
        if i < n - 1:
            rad += abs(off[i])
        lo = min(lo, diag[i] - rad)
        hi = max(hi, diag[i] + rad)
    return lo, hi


@njit(cache=True, nogil=True)
def sturm_counts(diag, off2, sigmas, active):
    """Sturm counts at several shifts in one pass over the matrix.

    The independent pivot recurrences are interleaved, which keeps the
    floating-point divider busy instead of waiting on one dependent chain.
    """
    m = sigmas.shape[0]
    q = np.empty(m)
    c = np.zeros(m, dtype=np.int64)
    for j in range(m):
        q[j] = diag[0] - sigmas[j]
        if q[j] < 0:
            c[j] = 1
    for i in range(1, diag.shape[0]):
        d = diag[i]
        e = off2[i - 1]
        for j in range(m):
            if not active[j]:
                continue
            qj = q[j]
            if qj == 0.0:
                qj = -_PIVOT_FLOOR
            qj = d - sigmas[j] - e / qj
            q[j] = qj
            if qj < 0:
                c[j] += 1
    return c


@njit(cache=True, nogil=True)
def eigenvalues_by_index(diag, off2, n_eig, lo, hi, guesses, rel_width, atol):
    """The n_eig smallest eigenvalues, bisected simultaneously.

    When ``guesses`` is non-empty the k-th search starts from a bracket of
    relative half-width ``rel_width`` around ``guesses[k]`` and falls back to
    the global interval [lo, hi] only if the counts show the bracket is wrong.
    """
    a = np.full(n_eig, lo)
    b = np.full(n_eig, hi)
    active = np.ones(n_eig, dtype=np.bool_)
    if guesses.shape[0] >= n_eig:
        ga = np.empty(n_eig)
        gb = np.empty(n_eig)
        for k in range(n_eig):
            w = rel_width * max(1.0, abs(guesses[k]))
            ga[k] = max(guesses[k] - w, lo)
            gb[k] = min(guesses[k] + w, hi)
        ca = sturm_counts(diag, off2, ga, active)
        cb = sturm_counts(diag, off2, gb, active)
        for k in range(n_eig):
            if ca[k] <= k < cb[k]:
                a[k] = ga[k]
                b[k] = gb[k]
    # invariant per k: count(a) <= k < count(b)
    mid = np.empty(n_eig)
    while True:
        n_active = 0
        for k in range(n_eig):
            mid[k] = 0.5 * (a[k] + b[k])
            done = b[k] - a[k] <= atol or mid[k] <= a[k] or mid[k] >= b[k]
            active[k] = not done
            if not done:
                n_active += 1
        if n_active == 0:
            break
        cnt = sturm_counts(diag, off2, mid, active)
        for k in range(n_eig):
            if active[k]:
                if cnt[k] > k:
                    b[k] = mid[k]
                else:
                    a[k] = mid[k]
    return 0.5 * (a + b)


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def _union(parent, rank, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if rank[ra] < rank[rb]:
        parent[ra] = rb
    elif rank[ra] > rank[rb]:
        parent[rb] = ra
    else:
        parent[rb] = ra
        rank[ra] += 1


@njit(cache=True)
def _join_row(row, parent, rank, offset, pole):
    if pole == 0:
        return
    first = -1
    for p in range(row.shape[0]):
        if row[p] == pole:
            if first < 0:
                first = offset + p
            else:
                _union(parent, rank, first, offset + p)


@njit(cache=True)
def label_sign_grid(sign, wrap_last, pole_first, pole_last):
    """Connected components of same-sign cells on a (radial, ..., angular) grid.

    ``sign`` is an int8 array of shape (nr, na) or (nr, nt, np) holding -1, 0
    or +1; zero cells belong to no component. Neighbours are joined along each
    axis, the last axis wraps around, and in 3-D the first/last polar rows are
    joined across the pole with the sign given by ``pole_first``/``pole_last``
    (one entry per radial index, 0 meaning the function vanishes on the axis).
    In 2-D ``pole_first[0]`` is the sign at the origin and joins the innermost
    ring.

    Returns (labels, n_components) with labels -1 on zero cells.
    """
    flat = sign.ravel()
    n = flat.size
    parent = np.arange(n)
    rank = np.zeros(n, dtype=np.int32)
    shape = sign.shape
    if sign.ndim == 2:
        nr, na = shape[0], shape[1]
        for i in range(nr):
            for j in range(na):
                s = sign[i, j]
                if s == 0:
                    continue
                idx = i * na + j
                if i + 1 < nr and sign[i + 1, j] == s:
                    _union(parent, rank, idx, idx + na)
                jn = j + 1
                if jn == na:
                    if not wrap_last:
                        continue
                    jn = 0
                if sign[i, jn] == s:
                    _union(parent, rank, idx, i * na + jn)
        # innermost ring cells meet at the origin only if u(0) is nonzero
        _join_row(sign[0], parent, rank, 0, pole_first[0])
    else:
        nr, nt, nphi = shape[0], shape[1], shape[2]
        for i in range(nr):
            for t in range(nt):
                for p in range(nphi):
                    s = sign[i, t, p]
                    if s == 0:
                        continue
                    idx = (i * nt + t) * nphi + p
                    if i + 1 < nr and sign[i + 1, t, p] == s:
                        _union(parent, rank, idx, idx + nt * nphi)
                    if t + 1 < nt and sign[i, t + 1, p] == s:
                        _union(parent, rank, idx, idx + nphi)
                    pn = p + 1
                    if pn == nphi:
                        if not wrap_last:
                            continue
                        pn = 0
                    if sign[i, t, pn] == s:
                        _union(parent, rank, idx, (i * nt + t) * nphi + pn)
            # cells touching the polar axis meet there only if u is nonzero on it
            _join_row(sign[i, 0], parent, rank, (i * nt) * nphi, pole_first[i])
            _join_row(sign[i, nt - 1], parent, rank, (i * nt + nt - 1) * nphi, pole_last[i])

    labels = np.full(n, -1, dtype=np.int64)
    roots = np.full(n, -1, dtype=np.int64)
    count = 0
    for i in range(n):
        if flat[i] == 0:
            continue
        r = _find(parent, i)
        if roots[r] < 0:
            roots[r] = count
            count += 1
        labels[i] = roots[r]
    return labels.reshape(shape), count
