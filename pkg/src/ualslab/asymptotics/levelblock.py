"""Level block families in JT and the finite form of their separation hypotheses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from ..core import DYADIC, Band, FinVec
from ..spaces.jtree import closure, jt_norm_sq
from ..spaces.mixed import QuadSurd


class HypothesisError(ValueError):
    """A level block family violates one of its defining conditions."""

    def __init__(self, condition, detail):
        super().__init__(f"{condition}: {detail}")
        self.condition = condition


@dataclass(frozen=True)
class LevelBlockFamily:
    bands: tuple           # Band per family index
    F: tuple               # tuple of tuples of FinVec over DYADIC
    eps_seq: tuple         # decreasing positive Fractions, one per band
    eps: Fraction          # target slack in the upper bound
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return len(self.bands)

    def certificate(self):
        """Finite value of sum_n 2^q_n sum_{i>=n} (i+1) eps_i, tail taken as zero."""
        total = Fraction(0)
        for n, band in enumerate(self.bands, start=1):
            inner = sum(((i + 1) * self.eps_seq[i - 1] for i in range(n, self.n + 1)), Fraction(0))
            total += 2 ** band.hi * inner
        return total

    def check(self):
        """Raise HypothesisError naming the first violated condition; else return a summary."""
        if len(self.F) != self.n or len(self.eps_seq) != self.n:
            raise HypothesisError("shape", "bands, vector sets and eps sequence differ in length")
        for a, b in zip(self.bands, self.bands[1:]):
            if a.hi >= b.lo:
                raise HypothesisError("successive bands", f"[{a.lo},{a.hi}] and [{b.lo},{b.hi}] overlap or are out of order")
        for n, (band, fs) in enumerate(zip(self.bands, self.F), start=1):
            if not fs:
                raise HypothesisError("(i)", f"F_{n} is empty")
            for x in fs:
                if x.scheme != DYADIC:
                    raise HypothesisError("(i)", f"F_{n} holds a vector outside JT")
                if any(s not in band for s in x.support()):
                    raise HypothesisError("(i)", f"a vector of F_{n} leaves its band")
                if jt_norm_sq(x).value != 1:
                    raise HypothesisError("(i)", f"a vector of F_{n} is not normalized")
        eps = self.eps_seq
        if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
            raise HypothesisError("eps sequence", "must be positive and strictly decreasing")
        self._check_separation()
        cert = self.certificate()
        if not cert < self.eps:
            raise HypothesisError("hypothesis (ii)", f"budget value {cert} is not below eps={self.eps}")
        return {"certificate": cert, "eps": self.eps}

    def _check_separation(self):
        # initial segments that matter end at nodes of the support closure
        nodes = closure([s for fs in self.F for x in fs for s in x.support()])
        # top[m][v] = max over x in F_m of |S_v^*(x)|, S_v the segment from the root to v
        top = []
        for fs in self.F:
            best = {}
            for x in fs:
                acc = {}
                for v in nodes:
                    acc[v] = (acc[v[:-1]] if v else 0) + x[v]
                for v, s in acc.items():
                    if abs(s) > best.get(v, 0):
                        best[v] = abs(s)
            top.append(best)
        for n in range(1, self.n + 1):
            e = self.eps_seq[n - 1]
            for v in nodes:
                hits = [m for m in range(n + 1, self.n + 1) if top[m - 1].get(v, 0) >= e]
                if len(hits) > 1:
                    raise HypothesisError(
                        "hypothesis (i)",
                        f"initial segment ending at {v or 'root'!r} reaches eps_{n}={e} on F_{hits[0]} and F_{hits[1]}")


def build_level_block_family(depth_budget=9, n_families=3, l=2, seed=0, eps=None):
    """Bands on single levels; each vector is +-2^-r on 4^r nodes of its level.

    Band n sits on level 2(n-1) + ceil(log2 l) and its l vectors use disjoint
    node sets, so every vector is an antichain vector of norm one and any
    initial segment meets it in at most one node.  The eps sequence is the
    smallest dyadic choice meeting the separation hypothesis; eps defaults to
    the next power of two above the budget value.
    """
    if n_families < 1 or l < 1:
        raise ValueError("n_families and l must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    shift = (l - 1).bit_length()
    levels = [2 * (n - 1) + shift for n in range(1, n_families + 1)]
    if levels[-1] > depth_budget:
        raise ValueError(f"budget too small: {n_families} bands with l={l} need depth {levels[-1]}")
    bands, F = [], []
    for n, p in enumerate(levels, start=1):
        r = n - 1
        size = 4 ** r
        picks = rng.permutation(2 ** p)[: l * size]
        fs = []
        for i in range(l):
            chunk = sorted(int(v) for v in picks[i * size:(i + 1) * size])
            signs = rng.integers(0, 2, size=size)
            val = Fraction(1, 2 ** r)
            fs.append(FinVec(DYADIC, {format(v, f"0{p}b") if p else "": (val if sg else -val)
                                      for v, sg in zip(chunk, signs)}))
        bands.append(Band(p, p))
        F.append(tuple(fs))
    N = n_families
    eps_seq = []
    for n in range(1, N + 1):
        if n + 2 <= N:
            e = Fraction(3, 2 ** (n + 2))  # 3/2 * 2^-r_{n+2}, r_m = m - 1
        else:
            prev = eps_seq[-1] if eps_seq else Fraction(1, 2)
            e = prev / 1024
        eps_seq.append(e)
    fam = LevelBlockFamily(tuple(bands), tuple(F), tuple(eps_seq), Fraction(1), {"seed": seed, "l": l})
    cert = fam.certificate()
    if eps is None:
        eps = Fraction(1)
        while eps <= cert:
            eps *= 2
    fam = LevelBlockFamily(tuple(bands), tuple(F), tuple(eps_seq), Fraction(eps),
                           {"seed": seed, "l": l, "certificate": cert})
    fam.check()
    return fam


@dataclass(frozen=True)
class LevelBlockResult:
    lower: Fraction
    upper: Fraction
    bound: QuadSurd  # (sqrt 2 + eps)^2
    ok: bool
    selections: int


def level_block_check(fam: LevelBlockFamily, coeffs, check=True):
    """Extreme ratios ||sum a_i x_i||^2 / sum a_i^2 over one x_i per F_i, exactly."""
    if check:
        fam.check()
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != fam.n:
        raise ValueError(f"need {fam.n} coefficients, got {len(coeffs)}")
    den = sum((c * c for c in coeffs), Fraction(0))
    if not den:
        raise ValueError("all-zero coefficients")
    lo = hi = None
    count = 0
    for pick in product(*fam.F):
        y = FinVec(DYADIC, {})
        for c, x in zip(coeffs, pick):
            if c:
                y = y + x * c
        r = jt_norm_sq(y).value / den
        lo = r if lo is None or r < lo else lo
        hi = r if hi is None or r > hi else hi
        count += 1
    root2 = QuadSurd.sqrt(2)
    bound = (root2 + fam.eps) * (root2 + fam.eps)
    ok = lo >= 1 and QuadSurd.rational(hi) <= bound
    return LevelBlockResult(lo, hi, bound, ok, count)
