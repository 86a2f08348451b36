"""James Tree space JT: sup of sum of squared segment sums over disjoint segments."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import kernels
from ..core import DYADIC, FinVec, Segment, is_prefix
from .james import NormResult, int_array, scale_to_ints


def _check_dyadic(x):
    if x.scheme != DYADIC:
        raise ValueError(f"JT norm needs a vector over dyadic nodes, got {x.scheme.kind}")


def closure(nodes):
    """All ancestors-or-self of the given nodes, sorted by (depth, string)."""
    out = set()
    for s in nodes:
        for d in range(len(s) + 1):
            out.add(s[:d])
    return sorted(out, key=lambda s: (len(s), s))


def seg_key(seg):
    return (len(seg.top), seg.top, len(seg.bottom), seg.bottom)


class _Tree:
    """Array form of the support closure, children before parents in ``order``."""

    def __init__(self, x, ints):
        nodes = closure(x.support())
        self.nodes = nodes
        pos = {s: t for t, s in enumerate(nodes)}
        n = len(nodes)
        self.depth = np.array([len(s) for s in nodes], dtype=np.int64)
        self.maxd = int(self.depth.max())
        self.c0 = np.full(n, -1, dtype=np.int64)
        self.c1 = np.full(n, -1, dtype=np.int64)
        for s in nodes[1:]:
            p = pos[s[:-1]]
            if s[-1] == "0":
                self.c0[p] = pos[s]
            else:
                self.c1[p] = pos[s]
        val = dict(zip(x.support(), ints))
        big = not kernels.fits_int64(ints)
        dt = object if big else np.int64
        self.P = np.zeros(n, dtype=dt)
        self.pathP = np.zeros((n, self.maxd + 1), dtype=dt)
        for t, s in enumerate(nodes):
            par = pos[s[:-1]] if s else -1
            base = self.P[par] if par >= 0 else 0
            self.P[t] = base + val.get(s, 0)
            if par >= 0:
                self.pathP[t, :] = self.pathP[par, :]
            self.pathP[t, len(s)] = self.P[t]
        self.order = np.array(sorted(range(n), key=lambda t: -len(nodes[t])), dtype=np.int64)

    def q(self, v, t):
        return 0 if t == 0 else self.pathP[v, t - 1]


def jt_norm_sq(x: FinVec, method="dp", use_numba=None) -> NormResult:
    """Exact squared JT norm and a witness list of disjoint segments.

    ``method="dp"`` runs a tree DP over (node, chain start) on the support
    closure; ``method="bnb"`` is branch and bound over the minimal segments
    spanned by pairs of support nodes.
    """
    _check_dyadic(x)
    if not x:
        return NormResult(Fraction(0), ())
    if method == "bnb":
        return _jt_bnb(x)
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    d, ints = scale_to_ints([c for _, c in x.items()])
    tree = _Tree(x, ints)
    f, g = kernels.jt_dp(tree.order, tree.depth, tree.c0, tree.c1, tree.P, tree.pathP, tree.maxd, use_numba)
    witness = _reconstruct(tree, f, g)
    return NormResult(Fraction(int(g[0]), d * d), witness)


def _reconstruct(tree, f, g):
    # deterministic: prefer leaving a node free, then ending a chain, then the 0-child
    nodes = tree.nodes
    segs = []
    stack = [("free", 0, 0)]
    while stack:
        kind, v, t = stack.pop()
        kids = [c for c in (int(tree.c0[v]), int(tree.c1[v])) if c >= 0]
        G = sum(int(g[c]) for c in kids)
        if kind == "free":
            if int(g[v]) == G:
                stack.extend(("free", c, 0) for c in reversed(kids))
            else:
                stack.append(("chain", v, int(tree.depth[v])))
            continue
        w = int(tree.P[v]) - int(tree.q(v, t))
        if int(f[v, t]) == w * w + G:
            if w:
                top = nodes[v][:t]
                segs.append(Segment(top, nodes[v]))
            stack.extend(("free", c, 0) for c in reversed(kids))
            continue
        for c in kids:
            if int(f[v, t]) == int(f[c, t]) + G - int(g[c]):
                stack.append(("chain", c, t))
                stack.extend(("free", o, 0) for o in kids if o != c)
                break
        else:  # pragma: no cover - DP tables are self-consistent
            raise AssertionError("witness reconstruction failed")
    return tuple(sorted(segs, key=seg_key))


def _jt_bnb(x):
    supp = x.support()
    vals = dict(x.items())
    order = sorted(supp, key=lambda s: (len(s), s))
    absrest = [Fraction(0)] * (len(order) + 1)
    for t in range(len(order) - 1, -1, -1):
        absrest[t] = absrest[t + 1] + abs(vals[order[t]])
    # candidate bottoms for each top: support descendants-or-self
    below = {s: [t for t in order if is_prefix(s, t)] for s in order}
    best = [Fraction(-1), ()]

    def path(s, t):
        return [t[:dd] for dd in range(len(s), len(t) + 1)]

    def rec(t, used, acc, chosen):
        if acc + absrest[t] * absrest[t] <= best[0]:
            return
        if t == len(order):
            best[0], best[1] = acc, tuple(chosen)
            return
        s = order[t]
        if s in used:
            rec(t + 1, used, acc, chosen)
            return
        for b in below[s]:
            p = path(s, b)
            if any(node in used for node in p):
                continue
            val = sum((vals.get(node, 0) for node in p), Fraction(0))
            if not val:
                continue
            rec(t + 1, used | set(p), acc + val * val, chosen + [Segment(s, b)])
        rec(t + 1, used, acc, chosen)

    rec(0, frozenset(), Fraction(0), [])
    return NormResult(best[0], tuple(sorted(best[1], key=seg_key)))


def jt_norm_sq_brute(x: FinVec) -> Fraction:
    """Exhaustive search over groupings of the support into chains.

    A collection of disjoint segments meets the support in disjoint chains,
    and its value only depends on those chains.  Conversely chains whose
    spans [min, max] are pairwise disjoint and hold no other support node
    form a segment collection.  Every assignment of support nodes to
    "uncovered" or to a chain is tried.
    """
    _check_dyadic(x)
    supp = sorted(x.support(), key=lambda s: (len(s), s))
    supp_set = set(supp)
    best = Fraction(0)

    def spans_disjoint(groups):
        seen = set()
        for g in groups:
            top, bottom = g[0], g[-1]
            span = {bottom[:d] for d in range(len(top), len(bottom) + 1)}
            if span & seen or (span & supp_set) != set(g):
                return False
            seen |= span
        return True

    def rec(t, groups):
        nonlocal best
        if t == len(supp):
            if spans_disjoint(groups):
                val = sum((sum((x[s] for s in g), Fraction(0)) ** 2 for g in groups), Fraction(0))
                best = max(best, val)
            return
        s = supp[t]
        rec(t + 1, groups)
        for i, g in enumerate(groups):
            if is_prefix(g[-1], s):  # supp is sorted by depth, so s extends the chain downward
                rec(t + 1, groups[:i] + [g + [s]] + groups[i + 1:])
        rec(t + 1, groups + [[s]])

    rec(0, [])
    return best


def jt_norm_sq_closure_brute(x: FinVec) -> Fraction:
    """Exhaustive search over disjoint segment collections inside the closure.

    Every node of the closure is either uncovered, the top of a segment, or
    inside a segment whose top was decided earlier; all segments between
    closure nodes are tried, not only those spanned by support nodes.
    """
    _check_dyadic(x)
    nodes = closure(x.support())
    best = Fraction(0)

    def rec(t, used, acc):
        nonlocal best
        if t == len(nodes):
            best = max(best, acc)
            return
        s = nodes[t]
        if s in used:
            rec(t + 1, used, acc)
            return
        rec(t + 1, used, acc)
        for b in nodes[t:]:
            if not is_prefix(s, b):
                continue
            p = [b[:dd] for dd in range(len(s), len(b) + 1)]
            if any(node in used for node in p):
                continue
            val = sum((x[node] for node in p), Fraction(0))
            rec(t + 1, used | set(p), acc + val * val)

    rec(0, frozenset(), Fraction(0))
    return best


def segment_value(seg, x):
    return seg.value(x)
