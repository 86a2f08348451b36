"""Run-length vectors on the two lines N1 (odd naturals) and N2 (even naturals).

Positions are counted inside a line starting at 1, so position p of N1 is
the natural 2p-1 and position q of N2 is 2q.  Starts and lengths may be
:class:`~ualslab.core.tower.Tower` values.  A run's coefficient is
``coeff / 2**(2**shift)`` when ``shift`` is set, which is how weights with
astronomically large scale factors stay exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import tower as tw
from .finvec import FinVec, as_fraction
from .schemes import MRLINE

EXPAND_LIMIT = 10**6


@dataclass(frozen=True)
class Run:
    line: int
    start: object
    length: object
    coeff: Fraction
    shift: object = None

    def __post_init__(self):
        if self.line not in (1, 2):
            raise ValueError(f"line must be 1 or 2, got {self.line!r}")
        if tw.cmp(self.start, 1) < 0 or tw.cmp(self.length, 1) < 0:
            raise ValueError("runs need start >= 1 and length >= 1")
        object.__setattr__(self, "coeff", as_fraction(self.coeff))

    @property
    def end(self):
        """One past the last position."""
        return tw.add(self.start, self.length)

    def scale_value(self):
        """The coefficient as a Fraction, or None if the scale is not materializable."""
        if self.shift is None:
            return self.coeff
        if isinstance(self.shift, int) and self.shift <= tw.EXP_CAP:
            return self.coeff / tw.atom(self.shift)
        return None


@dataclass(frozen=True)
class LineInterval:
    line: int
    start: object
    count: object

    def __post_init__(self):
        if self.line not in (1, 2):
            raise ValueError(f"line must be 1 or 2, got {self.line!r}")


def to_natural(line, pos):
    return 2 * pos - 1 if line == 1 else 2 * pos


def from_natural(n):
    return (1, (n + 1) // 2) if n % 2 else (2, n // 2)


def overlap(a_start, a_len, b_start, b_len):
    lo = tw.tmax(a_start, b_start)
    hi = tw.tmin(tw.add(a_start, a_len), tw.add(b_start, b_len))
    d = tw.add(hi, tw.neg(lo))
    return d if tw.sign(d) > 0 else 0


class RleVec:
    __slots__ = ("runs",)
    scheme = MRLINE

    def __init__(self, runs):
        runs = [r if isinstance(r, Run) else Run(*r) for r in runs]
        runs = [r for r in runs if r.coeff]
        for line in (1, 2):
            mine = [r for r in runs if r.line == line]
            for a, b in zip(mine, mine[1:]):
                if tw.cmp(a.end, b.start) > 0:
                    raise ValueError(f"runs in line {line} overlap or are out of order")
        self.runs = tuple(runs)

    def line_runs(self, line):
        return [r for r in self.runs if r.line == line]

    def total_length(self):
        total = 0
        for r in self.runs:
            total = tw.add(total, r.length)
        return total

    def scale(self, s):
        s = as_fraction(s)
        return RleVec([Run(r.line, r.start, r.length, r.coeff * s, r.shift) for r in self.runs])

    def __add__(self, other):
        return rle_sum([self, other])

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, RleVec) and self.runs == other.runs

    def __hash__(self):
        return hash(self.runs)

    def __repr__(self):
        return f"RleVec({list(self.runs)!r})"

    def to_finvec(self, limit=EXPAND_LIMIT):
        total = self.total_length()
        if not isinstance(total, int) or total > limit:
            raise OverflowError("run-length vector too large to expand")
        out = {}
        for r in self.runs:
            c = r.scale_value()
            if c is None or not isinstance(r.start, int):
                raise OverflowError("run coefficient or position not materializable")
            for p in range(r.start, r.start + r.length):
                out[to_natural(r.line, p)] = c
        return FinVec(MRLINE, out)

    @classmethod
    def from_finvec(cls, v):
        if v.scheme != MRLINE:
            raise ValueError("expected a vector over the mrline scheme")
        runs = []
        for n, c in v.items():
            line, p = from_natural(n)
            runs.append(Run(line, p, 1, c))
        runs.sort(key=lambda r: (r.line, r.start))
        merged = []
        for r in runs:
            last = merged[-1] if merged else None
            if last and last.line == r.line and last.end == r.start and last.coeff == r.coeff:
                merged[-1] = Run(r.line, last.start, last.length + 1, r.coeff)
            else:
                merged.append(r)
        return cls(merged)


def rle_sum(vectors):
    """Sum of run-length vectors whose runs are pairwise disjoint."""
    runs = [r for v in vectors for r in v.runs]
    runs.sort(key=lambda r: (r.line, _SortKey(r.start)))
    return RleVec(runs)


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return tw.cmp(self.v, other.v) < 0


def rle_restrict(x, positions):
    """Exact sum of the coefficients of x over a set of positions in one line.

    ``positions`` is a :class:`LineInterval` or an iterable of naturals that
    all lie in the same line.
    """
    if isinstance(positions, LineInterval):
        return _interval_sum(x, positions.line, positions.start, positions.count)
    pts = sorted(set(positions))
    if not pts:
        return Fraction(0)
    lines = {from_natural(n)[0] for n in pts}
    if len(lines) > 1:
        raise ValueError("positions straddle both lines")
    total = Fraction(0)
    for n in pts:
        line, p = from_natural(n)
        total += _interval_sum(x, line, p, 1)
    return total


def _interval_sum(x, line, start, count):
    total = Fraction(0)
    for r in x.line_runs(line):
        o = overlap(r.start, r.length, start, count)
        if not o:
            continue
        c = r.scale_value()
        if c is None or not isinstance(o, int):
            raise OverflowError("intersection value not representable as a rational")
        total += c * o
    return total
