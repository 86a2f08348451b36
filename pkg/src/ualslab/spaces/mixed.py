"""Mixed direct sums: the space calX and the (sum l_p)_q family."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
import numpy as np
from sympy import factorint

from .. import kernels
from ..core import MIXED, FinVec


# exact sums of square roots ------------------------------------------------------
def squarefree_split(n):
    """n = s*s*f with f squarefree; returns (s, f)."""
    if n == 0:
        return 0, 1
    s = f = 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            f *= p
    return s, f


class QuadSurd:
    """Exact a_1 sqrt(f_1) + ... with rational a_i and distinct squarefree f_i."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {f: Fraction(c) for f, c in (terms or {}).items() if c}

    @classmethod
    def rational(cls, q):
        return cls({1: Fraction(q)})

    @classmethod
    def sqrt(cls, q):
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if not q:
            return cls()
        # sqrt(p/r) = sqrt(p*r)/r
        s, f = squarefree_split(q.numerator * q.denominator)
        return cls({f: Fraction(s, q.denominator)})

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for f, c in other.terms.items():
            out[f] = out.get(f, 0) + c
        return QuadSurd(out)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd({f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for f1, c1 in self.terms.items():
            for f2, c2 in other.terms.items():
                g = f1 * f2
                s, f = squarefree_split(g)
                out[f] = out.get(f, 0) + c1 * c2 * s
        return QuadSurd(out)

    __rmul__ = __mul__

    def is_rational(self):
        return set(self.terms) <= {1}

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("value is irrational")
        return self.terms.get(1, Fraction(0))

    def mp(self, dps=40):
        with mpmath.workdps(dps):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(f)
                               for f, c in self.terms.items())

    def __float__(self):
        return float(self.mp(30))

    def sign(self):
        if not self.terms:
            return 0
        # distinct squarefree radicals are independent over Q, so a nonzero
        # canonical form is a nonzero number and refinement terminates
        dps = 30
        while True:
            with mpmath.workdps(dps):
                iv = mpmath.iv
                iv.dps = dps
                tot = iv.mpf(0)
                for f, c in self.terms.items():
                    tot += iv.mpf(c.numerator) / c.denominator * iv.sqrt(iv.mpf(f))
                if tot.a > 0:
                    return 1
                if tot.b < 0:
                    return -1
            dps *= 2

    def __eq__(self, other):
        try:
            other = _lift(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        return (self - _lift(other)).sign() < 0

    def __le__(self, other):
        return (self - _lift(other)).sign() <= 0

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def decimal(self, digits=12):
        return mpmath.nstr(self.mp(digits + 20), digits)

    def to_json(self):
        return [[f, f"{c.numerator}/{c.denominator}"] for f, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for f, c in sorted(self.terms.items()):
            parts.append(str(c) if f == 1 else f"{c}*sqrt({f})")
        return " + ".join(parts)


def _lift(v):
    if isinstance(v, QuadSurd):
        return v
    if isinstance(v, (int, Fraction)):
        return QuadSurd.rational(v)
    raise TypeError(f"cannot combine QuadSurd with {type(v).__name__}")


def exact_sqrt(q):
    """sqrt(q) as a Fraction when q is a rational square, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


# calX -------------------------------------------------------------------------------
def _check_mixed(x):
    if x.scheme != MIXED:
        raise ValueError(f"expected a vector over the mixed scheme, got {x.scheme.kind}")


def slot_norms_sq(x: FinVec):
    """{(n, part, j): squared l2 norm of that slot}."""
    _check_mixed(x)
    out = {}
    for (n, part, j, m), c in x.items():
        key = (n, part, j)
        out[key] = out.get(key, Fraction(0)) + c * c
    return out


@dataclass(frozen=True)
class CalxNorm:
    value: QuadSurd

    def decimal(self, digits=12):
        return self.value.decimal(digits)


def calx_norm_sq(x: FinVec) -> CalxNorm:
    """Squared norm: sum over n of (sum_j |x_n(j)|)^2 + (max_j |y_n(j)|)^2."""
    sq = slot_norms_sq(x)
    total = QuadSurd()
    levels = sorted({n for n, _, _ in sq})
    for n in levels:
        xs = [v for (nn, part, _), v in sq.items() if nn == n and part == "X"]
        ys = [v for (nn, part, _), v in sq.items() if nn == n and part == "Y"]
        s = QuadSurd()
        for v in xs:
            s = s + QuadSurd.sqrt(v)
        total = total + s * s
        if ys:
            total = total + max(ys)
    return CalxNorm(total)


# (sum l_p)_q --------------------------------------------------------------------------
@dataclass(frozen=True)
class MixedValue:
    value: float
    error: float
    exact: object = None

    def __float__(self):
        return self.value


def _check_exponent(p):
    if p == "inf" or (isinstance(p, float) and np.isinf(p)):
        return float("inf")
    p = Fraction(p)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    if p < 1:
        raise ValueError(f"exponent must be >= 1 for a norm, got {p}")
    return p


def _layout(x):
    """Group ids for slots and levels; float values in support order."""
    items = x.items()
    slots = {}
    levels = {}
    vals, sid = [], []
    for (n, part, j, m), c in items:
        key = (n, part, j)
        if key not in slots:
            slots[key] = len(slots)
        vals.append(float(c))
        sid.append(slots[key])
    for (n, part, j) in slots:
        if (n, part) not in levels:
            levels[(n, part)] = len(levels)
    return items, slots, levels, np.array(vals), np.array(sid, dtype=np.int64)


def mixed_norm_float(x, inner, x_outer, y_outer, total, use_numba=None):
    """Fast float path through the grouped-power kernel."""
    _check_mixed(x)
    inner, x_outer, y_outer, total = (_check_exponent(p) for p in (inner, x_outer, y_outer, total))
    if not x:
        return 0.0
    _, slots, levels, vals, sid = _layout(x)
    sn = kernels.group_norms(vals, sid, len(slots), float(inner), use_numba)
    lvl_ids = np.empty(len(slots), dtype=np.int64)
    for (n, part, j), t in slots.items():
        lvl_ids[t] = levels[(n, part)]
    xs = [t for (n, part, j), t in slots.items() if part == "X"]
    ys = [t for (n, part, j), t in slots.items() if part == "Y"]
    lv = np.zeros(len(levels))
    for part_ids, p in ((xs, x_outer), (ys, y_outer)):
        if part_ids:
            sub = np.array(part_ids)
            res = kernels.group_norms(sn[sub], lvl_ids[sub], len(levels), float(p), use_numba)
            mask = np.zeros(len(levels), dtype=bool)
            mask[np.unique(lvl_ids[sub])] = True
            lv[mask] = res[mask]
    return float(kernels.group_norms(lv, np.zeros(len(lv), dtype=np.int64), 1, float(total), use_numba)[0])


def mixed_norm_mp(x, inner, x_outer, y_outer, total, dps=40):
    """High precision reference path written directly from the definition."""
    _check_mixed(x)
    inner, x_outer, y_outer, total = (_check_exponent(p) for p in (inner, x_outer, y_outer, total))

    def lp(values, p):
        values = list(values)
        if not values:
            return mpmath.mpf(0)
        if p == float("inf"):
            return max(abs(v) for v in values)
        p = mpmath.mpf(p.numerator) / p.denominator
        return mpmath.fsum(abs(v) ** p for v in values) ** (1 / p)

    with mpmath.workdps(dps):
        slots = {}
        for (n, part, j, m), c in x.items():
            slots.setdefault((n, part, j), []).append(mpmath.mpf(c.numerator) / c.denominator)
        per_level = {}
        for (n, part, j), vs in slots.items():
            per_level.setdefault((n, part), []).append(lp(vs, inner))
        lv = [lp(vs, x_outer if part == "X" else y_outer) for (n, part), vs in per_level.items()]
        return +lp(lv, total)


def mixed_norm(x, inner, x_outer, y_outer, total, use_numba=None) -> MixedValue:
    inner, x_outer, y_outer, total = (_check_exponent(p) for p in (inner, x_outer, y_outer, total))
    ref = mixed_norm_mp(x, inner, x_outer, y_outer, total)
    fast = mixed_norm_float(x, inner, x_outer, y_outer, total, use_numba)
    val = float(ref)
    err = abs(fast - val) + abs(val) * 2.0**-52
    exact = None
    ps = {inner, x_outer, y_outer, total}
    if ps <= {Fraction(1), float("inf")}:
        exact = QuadSurd.rational(_exact_l1inf(x, inner, x_outer, y_outer, total))
    elif ps <= {Fraction(2)}:
        exact = QuadSurd.sqrt(sum((c * c for _, c in x.items()), Fraction(0)))
    return MixedValue(val, err, exact)


def _exact_l1inf(x, inner, x_outer, y_outer, total):
    def lp(vs, p):
        vs = [abs(v) for v in vs]
        if not vs:
            return Fraction(0)
        return max(vs) if p == float("inf") else sum(vs, Fraction(0))

    slots = {}
    for (n, part, j, m), c in x.items():
        slots.setdefault((n, part, j), []).append(c)
    per_level = {}
    for (n, part, j), vs in slots.items():
        per_level.setdefault((n, part), []).append(lp(vs, inner))
    lv = [lp(vs, x_outer if part == "X" else y_outer) for (n, part), vs in per_level.items()]
    return lp(lv, total)


def mixed_pq_norm(x, p, q, use_numba=None) -> MixedValue:
    """Norm in (sum X_n + Y_n)_q with X_n = (sum l_p)_p and Y_n = (sum l_p)_q."""
    return mixed_norm(x, p, p, q, q, use_numba)
