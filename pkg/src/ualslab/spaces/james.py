"""James space J: sup of sum of squared interval sums over disjoint intervals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm

import numpy as np

from .. import kernels
from ..core import NATURAL, FinVec, interleaved


@dataclass(frozen=True)
class NormResult:
    value: Fraction
    witness: tuple

    def __iter__(self):
        yield self.value
        yield self.witness


def scale_to_ints(coeffs):
    """Common denominator D and the integers c*D."""
    d = 1
    for c in coeffs:
        d = lcm(d, c.denominator)
    return d, [int(c * d) for c in coeffs]


def int_array(ints):
    if kernels.fits_int64(ints):
        return np.array(ints, dtype=np.int64)
    arr = np.empty(len(ints), dtype=object)
    arr[:] = ints
    return arr


def _check_natural(x):
    if x.scheme != NATURAL:
        raise ValueError(f"James norm needs a vector over the naturals, got {x.scheme.kind}")


def james_norm_sq(x: FinVec, use_numba=None) -> NormResult:
    """Exact squared James norm with a witness of disjoint intervals.

    Only the support matters: disjoint intervals cut the ordered support
    into disjoint contiguous blocks.  The witness is the lexicographically
    least optimal list of blocks with nonzero sums, reported as
    (first index, last index) pairs.
    """
    _check_natural(x)
    items = x.items()
    if not items:
        return NormResult(Fraction(0), ())
    idx = [i for i, _ in items]
    d, ints = scale_to_ints([c for _, c in items])
    a = int_array(ints)
    suf = kernels.james_suffix(a, use_numba)
    suf = [int(v) for v in suf]
    s = [0]
    for v in ints:
        s.append(s[-1] + v)
    k = len(ints)
    witness = []
    i = 0
    while i < k and suf[i]:
        for e in range(i, k):
            blk = s[e + 1] - s[i]
            if blk and blk * blk + suf[e + 1] == suf[i]:
                witness.append((idx[i], idx[e]))
                i = e + 1
                break
        else:
            i += 1
    return NormResult(Fraction(suf[0], d * d), tuple(witness))


BRUTE_SPAN = 14
_LABELS = {}


def _labelings(n):
    """All labelings of n points: 0 uncovered, 1 starts an interval, 2 continues one."""
    if n not in _LABELS:
        lab = np.array(list(product((0, 1, 2), repeat=n)), dtype=np.int8).reshape(-1, n)
        ok = lab[:, 0] != 2
        for t in range(1, n):
            ok &= ~((lab[:, t] == 2) & (lab[:, t - 1] == 0))
        _LABELS[n] = lab[ok]
    return _LABELS[n]


def james_norm_sq_brute(x: FinVec) -> Fraction:
    """Exhaustive search over all collections of disjoint intervals.

    Every collection of disjoint intervals inside the integer range spanned
    by the support is a labeling of its points, so all labelings are
    scored at once; this does not rely on the block reduction used above.
    """
    _check_natural(x)
    if not x:
        return Fraction(0)
    lo, hi = min(x.support()), max(x.support())
    n = hi - lo + 1
    if n > BRUTE_SPAN:
        raise ValueError(f"brute force limited to a span of {BRUTE_SPAN} points")
    d, ints = scale_to_ints([x[i] for i in range(lo, hi + 1)])
    v = int_array(ints)
    dtype = v.dtype
    lab = _labelings(n)
    run = np.zeros(len(lab), dtype=dtype)
    total = np.zeros(len(lab), dtype=dtype)
    for t in range(n):
        run = np.where(lab[:, t] == 2, run, 0) + (lab[:, t] > 0).astype(dtype) * v[t]
        ends = lab[:, t] > 0
        if t + 1 < n:
            ends &= lab[:, t + 1] != 2
        total = total + np.where(ends, run * run, 0)
    return Fraction(int(total.max()), d * d)


def james_norm_sq_blocks(x: FinVec) -> Fraction:
    """Second brute force: every way of cutting the support into kept blocks."""
    vals = [c for _, c in x.items()]
    k = len(vals)
    best = Fraction(0)
    for r in range(0, k + 1):
        for cuts in combinations(range(1, k), r):
            bounds = (0,) + cuts + (k,)
            blocks = [sum(vals[bounds[t]:bounds[t + 1]], Fraction(0)) for t in range(len(bounds) - 1)]
            # dropping a block never helps less than keeping it squared, so keep all
            best = max(best, sum((b * b for b in blocks), Fraction(0)))
    return best


def james_example_pair(n_max):
    """The two sequences e^1_n = e_{2n} + e_1, e^2_n = e_{2n+1} - e_1, n <= n_max.

    Returned as dicts keyed by (i, n) so they plug into generators keyed
    over the interleaved scheme; the vectors live in the naturals.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = {}
    for n in range(1, n_max + 1):
        out[(1, n)] = FinVec(NATURAL, {2 * n: 1, 1: 1})
        out[(2, n)] = FinVec(NATURAL, {2 * n + 1: 1, 1: -1})
    return out


def realize_pair(x: FinVec) -> FinVec:
    """Map a vector over interleaved(2) to J via the example pair."""
    if x.scheme != interleaved(2):
        raise ValueError("expected a vector over the interleaved(2) scheme")
    out = {}
    for (i, n), c in x.items():
        pos = 2 * n if i == 1 else 2 * n + 1
        out[pos] = out.get(pos, 0) + c
        out[1] = out.get(1, 0) + (c if i == 1 else -c)
    return FinVec(NATURAL, out)
