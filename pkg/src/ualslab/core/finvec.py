"""Finitely supported vectors with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType

from .schemes import IndexScheme, NATURAL


def as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_rational(v)
    raise TypeError(f"inexact coefficient {v!r}; use Fraction or a 'p/q' string")


def parse_rational(text):
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def fmt_rational(v):
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


class FinVec:
    """Immutable sparse vector; zero coefficients are never stored."""

    __slots__ = ("scheme", "_entries", "_hash")

    def __init__(self, scheme: IndexScheme, entries=None):
        self.scheme = scheme
        clean = {}
        for idx, c in (entries or {}).items():
            c = as_fraction(c)
            if c:
                clean[scheme.check(idx)] = c
        self._entries = clean
        self._hash = None

    @classmethod
    def _trusted(cls, scheme, entries):
        obj = object.__new__(cls)
        obj.scheme = scheme
        obj._entries = entries
        obj._hash = None
        return obj

    @classmethod
    def unit(cls, scheme, idx, coeff=1):
        return cls(scheme, {idx: coeff})

    @property
    def entries(self):
        return MappingProxyType(self._entries)

    def items(self):
        """(index, coefficient) pairs in the scheme's natural order."""
        key = self.scheme.order_key
        return sorted(self._entries.items(), key=lambda kv: key(kv[0]))

    def support(self):
        return [i for i, _ in self.items()]

    def __getitem__(self, idx):
        return self._entries.get(idx, Fraction(0))

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __iter__(self):
        return iter(self.support())

    # arithmetic -----------------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, FinVec):
            return NotImplemented
        if other.scheme != self.scheme:
            raise ValueError(f"scheme mismatch: {self.scheme} vs {other.scheme}")
        return other

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return combine(self, other, 1, 1)

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return combine(self, other, 1, -1)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def scale(self, s):
        s = as_fraction(s)
        if not s:
            return FinVec._trusted(self.scheme, {})
        return FinVec._trusted(self.scheme, {i: c * s for i, c in self._entries.items()})

    def restrict(self, keep):
        """Coordinate restriction to the indices where keep(index) is true."""
        return FinVec._trusted(self.scheme, {i: c for i, c in self._entries.items() if keep(i)})

    def map_indices(self, scheme, f):
        out = {}
        for i, c in self._entries.items():
            j = scheme.check(f(i))
            if j in out:
                raise ValueError(f"index map is not injective at {j!r}")
            out[j] = c
        return FinVec._trusted(scheme, out)

    def __eq__(self, other):
        if not isinstance(other, FinVec):
            return NotImplemented
        return self.scheme == other.scheme and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.scheme, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{i!r}: {c}" for i, c in self.items())
        return f"FinVec({self.scheme.kind}, {{{body}}})"


def combine(a, b, alpha, beta):
    """alpha*a + beta*b, zeros pruned."""
    if a.scheme != b.scheme:
        raise ValueError(f"scheme mismatch: {a.scheme} vs {b.scheme}")
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    out = {}
    if alpha:
        for i, c in a._entries.items():
            out[i] = alpha * c
    if beta:
        for i, c in b._entries.items():
            v = out.get(i, 0) + beta * c
            if v:
                out[i] = v
            else:
                out.pop(i, None)
    return FinVec._trusted(a.scheme, out)


def vec_arith(a, b, scalars=(1, 1)):
    alpha, beta = scalars
    return combine(a, b, alpha, beta)


def linear_combination(vectors, scalars, scheme=None):
    vectors = list(vectors)
    if not vectors:
        return FinVec(scheme or NATURAL)
    sch = scheme or vectors[0].scheme
    out = {}
    for v, s in zip(vectors, scalars, strict=True):
        if v.scheme != sch:
            raise ValueError(f"scheme mismatch: {v.scheme} vs {sch}")
        s = as_fraction(s)
        if not s:
            continue
        for i, c in v._entries.items():
            out[i] = out.get(i, 0) + s * c
    return FinVec._trusted(sch, {i: c for i, c in out.items() if c})


def natural(coeffs, start=1):
    """Convenience: FinVec over the naturals from a coefficient list."""
    return FinVec(NATURAL, {start + t: c for t, c in enumerate(coeffs) if c})
