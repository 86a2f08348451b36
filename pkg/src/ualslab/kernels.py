"""Hot loops of the norm oracles.

Each kernel has a numba-compiled loop version and a vectorized numpy
version.  Exact kernels run on integer-scaled coefficients: int64 when the
worst-case magnitude fits (``fits_int64``), otherwise numpy object arrays
holding Python ints, which only the numpy versions accept.
"""
from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, njit

INT64_SAFE = 1 << 62


def fits_int64(ints):
    s = sum(abs(v) for v in ints)
    return s * s < INT64_SAFE


# James: suffix DP over disjoint blocks --------------------------------------------
@njit
def _james_suffix_nb(a):
    k = a.shape[0]
    s = np.zeros(k + 1, dtype=np.int64)
    for i in range(k):
        s[i + 1] = s[i] + a[i]
    suf = np.zeros(k + 1, dtype=np.int64)
    for i in range(k - 1, -1, -1):
        best = suf[i + 1]
        for e in range(i, k):
            d = s[e + 1] - s[i]
            v = d * d + suf[e + 1]
            if v > best:
                best = v
        suf[i] = best
    return suf


def _james_suffix_np(a):
    k = a.shape[0]
    s = np.zeros(k + 1, dtype=a.dtype)
    s[1:] = np.cumsum(a)
    suf = np.zeros(k + 1, dtype=a.dtype)
    for i in range(k - 1, -1, -1):
        d = s[i + 1:] - s[i]
        cand = d * d + suf[i + 1:]
        suf[i] = max(suf[i + 1], cand.max())
    return suf


def james_suffix(a, use_numba=None):
    """suf[i] = best sum of squared block sums using a[i:]."""
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if a.dtype == np.int64 and use_numba and HAVE_NUMBA:
        return _james_suffix_nb(a)
    return _james_suffix_np(a)


# JT: tree DP over (node, chain start) -----------------------------------------------
@njit
def _jt_dp_nb(order, depth, c0, c1, P, pathP, maxd):
    n = P.shape[0]
    f = np.zeros((n, maxd + 1), dtype=np.int64)
    g = np.zeros(n, dtype=np.int64)
    for idx in range(order.shape[0]):
        v = order[idx]
        d = depth[v]
        G = 0
        if c0[v] >= 0:
            G += g[c0[v]]
        if c1[v] >= 0:
            G += g[c1[v]]
        for t in range(d + 1):
            q = 0
            if t > 0:
                q = pathP[v, t - 1]
            w = P[v] - q
            best = w * w + G
            if c0[v] >= 0:
                cand = f[c0[v], t] + G - g[c0[v]]
                if cand > best:
                    best = cand
            if c1[v] >= 0:
                cand = f[c1[v], t] + G - g[c1[v]]
                if cand > best:
                    best = cand
            f[v, t] = best
        g[v] = G if G > f[v, d] else f[v, d]
    return f, g


def _jt_dp_np(order, depth, c0, c1, P, pathP, maxd):
    n = P.shape[0]
    f = np.zeros((n, maxd + 1), dtype=P.dtype)
    g = np.zeros(n, dtype=P.dtype)
    for v in order:
        d = depth[v]
        kids = [c for c in (c0[v], c1[v]) if c >= 0]
        G = g[kids[0]] * 0 if kids else P[v] * 0
        for c in kids:
            G = G + g[c]
        q = np.zeros(d + 1, dtype=P.dtype)
        q[1:] = pathP[v, :d]
        w = P[v] - q
        best = w * w + G
        for c in kids:
            best = np.maximum(best, f[c, :d + 1] + (G - g[c]))
        f[v, :d + 1] = best
        g[v] = max(G, f[v, d])
    return f, g


def jt_dp(order, depth, c0, c1, P, pathP, maxd, use_numba=None):
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if P.dtype == np.int64 and use_numba and HAVE_NUMBA:
        return _jt_dp_nb(order, depth, c0, c1, P, pathP, maxd)
    return _jt_dp_np(order, depth, c0, c1, P, pathP, maxd)


# mixed norms: grouped power sums ----------------------------------------------------
@njit
def _powsum_nb(vals, ids, n, p):
    out = np.zeros(n, dtype=np.float64)
    for t in range(vals.shape[0]):
        out[ids[t]] += abs(vals[t]) ** p
    return out


@njit
def _maxabs_nb(vals, ids, n):
    out = np.zeros(n, dtype=np.float64)
    for t in range(vals.shape[0]):
        v = abs(vals[t])
        if v > out[ids[t]]:
            out[ids[t]] = v
    return out


def _powsum_np(vals, ids, n, p):
    return np.bincount(ids, weights=np.abs(vals) ** p, minlength=n)


def _maxabs_np(vals, ids, n):
    out = np.zeros(n, dtype=np.float64)
    np.maximum.at(out, ids, np.abs(vals))
    return out


def group_norms(vals, ids, n, p, use_numba=None):
    """l_p norm of vals within each group id (p = inf allowed)."""
    if use_numba is None:
        use_numba = HAVE_NUMBA
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    ids = np.ascontiguousarray(ids, dtype=np.int64)
    fast = use_numba and HAVE_NUMBA
    if np.isinf(p):
        return (_maxabs_nb if fast else _maxabs_np)(vals, ids, n)
    # scale by the max to keep powers finite
    top = float(np.abs(vals).max()) if vals.size else 0.0
    if top == 0.0:
        return np.zeros(n)
    sums = (_powsum_nb if fast else _powsum_np)(vals / top, ids, n, float(p))
    return top * sums ** (1.0 / p)
