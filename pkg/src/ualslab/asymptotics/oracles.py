"""Norm values and ambient norm oracles for the estimators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from ..core import DYADIC, NATURAL, FinVec, IndexScheme, fmt_rational
from ..spaces.james import james_norm_sq
from ..spaces.jtree import jt_norm_sq
from ..spaces.mixed import QuadSurd


@dataclass(frozen=True)
class Norm:
    """A nonnegative real: sqrt(sq) exactly when sq is set, else the float fl."""

    sq: Fraction | None = None
    fl: float | None = None

    @classmethod
    def of_sq(cls, q):
        return cls(sq=Fraction(q))

    @classmethod
    def of_float(cls, v):
        return cls(fl=float(v))

    @property
    def exact(self):
        return self.sq is not None

    def __float__(self):
        if self.exact:
            return float(mpmath.sqrt(mpmath.mpf(self.sq.numerator) / self.sq.denominator))
        return self.fl

    def surd(self):
        return QuadSurd.sqrt(self.sq)

    def key(self):
        # order-preserving; exact values compare through their squares
        return self.sq if self.exact else Fraction(self.fl) ** 2

    def is_zero(self):
        return (self.sq == 0) if self.exact else self.fl == 0.0

    def ratio(self, other):
        """self / other."""
        if self.exact and other.exact:
            return Norm.of_sq(self.sq / other.sq)
        return Norm.of_float(float(self) / float(other))

    def to_json(self):
        if self.exact:
            return {"sq": fmt_rational(self.sq), "decimal": float(self)}
        return {"decimal": self.fl}


def spread(lo: Norm, hi: Norm):
    """hi - lo as an exact QuadSurd when both are exact, else a float."""
    if lo.exact and hi.exact:
        return hi.surd() - lo.surd()
    return float(hi) - float(lo)


def below(value, bound):
    """value < bound for a QuadSurd or float value and a rational bound."""
    if isinstance(value, QuadSurd):
        return value < Fraction(bound)
    return value < float(bound)


@dataclass(frozen=True)
class Oracle:
    name: str
    scheme: IndexScheme
    fn: Callable[[FinVec], Norm]

    def __call__(self, x: FinVec) -> Norm:
        if x.scheme != self.scheme:
            raise ValueError(f"oracle {self.name} works over {self.scheme.kind}, got {x.scheme.kind}")
        return self.fn(x)


def _lp(p):
    p = Fraction(p) if p != "inf" else p

    def fn(x):
        vals = [abs(c) for _, c in x.items()]
        if not vals:
            return Norm.of_sq(0)
        if p == "inf":
            return Norm.of_sq(max(vals) ** 2)
        if p == 1:
            return Norm.of_sq(sum(vals, Fraction(0)) ** 2)
        if p == 2:
            return Norm.of_sq(sum((v * v for v in vals), Fraction(0)))
        with mpmath.workdps(40):
            pp = mpmath.mpf(p.numerator) / p.denominator
            s = mpmath.fsum((mpmath.mpf(v.numerator) / v.denominator) ** pp for v in vals)
            return Norm.of_float(s ** (1 / pp))

    return fn


def lp_oracle(p):
    label = "inf" if p == "inf" else fmt_rational(p)
    return Oracle(f"l{label}", NATURAL, _lp(p))


JAMES = Oracle("james", NATURAL, lambda x: Norm.of_sq(james_norm_sq(x).value))
JT = Oracle("jt", DYADIC, lambda x: Norm.of_sq(jt_norm_sq(x).value))
