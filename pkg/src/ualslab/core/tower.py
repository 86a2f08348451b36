"""Exact integers built from double-exponential atoms.

A value is either a plain ``int`` or a :class:`Tower`, which stands for

    const + sum_t coeff_t * 2**(2**exp_t)

with every ``exp_t`` above :data:`EXP_CAP` (smaller atoms are folded into
``const``).  Exponents may themselves be towers.  Because
``2**(2**(e+1)) == (2**(2**e))**2`` the leading atom dominates everything
below it, which gives exact comparisons without materializing anything.
"""
from __future__ import annotations

import re

EXP_CAP = 16

def atom(e):
    """2**(2**e) for an int or tower exponent e >= 0."""
    if isinstance(e, int):
        if e < 0:
            raise ValueError("negative tower exponent")
        if e <= EXP_CAP:
            return 1 << (1 << e)
    elif not isinstance(e, Tower):
        raise TypeError(f"bad exponent {e!r}")
    elif sign(e) < 0:
        raise ValueError("negative tower exponent")
    return Tower._make(0, {e: 1})


def _key(e):
    # exponents are compared with cmp(); wrap for sorting
    return _Cmp(e)


class _Cmp:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return cmp(self.v, other.v) < 0


class Tower:
    __slots__ = ("const", "terms", "_hash")

    def __init__(self, *a, **k):
        raise TypeError("use atom() and arithmetic to build towers")

    @classmethod
    def _make(cls, const, terms):
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return const
        obj = object.__new__(cls)
        obj.const = const
        obj.terms = tuple(sorted(terms.items(), key=lambda t: _key(t[0]), reverse=True))
        obj._hash = None
        return obj

    # arithmetic -----------------------------------------------------------
    def _parts(self):
        return self.const, dict(self.terms)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __neg__(self):
        return neg(self)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return scale(self, k)

    __rmul__ = __mul__

    # ordering -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Tower)):
            return cmp(self, other) == 0
        return NotImplemented

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("tower", self.const, self.terms))
        return self._hash

    def __repr__(self):
        return f"Tower({to_str(self)})"

    def __str__(self):
        return to_str(self)


def _split(x):
    if isinstance(x, Tower):
        return x._parts()
    if isinstance(x, int):
        return x, {}
    raise TypeError(f"not an exact integer: {x!r}")


def add(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    ca, ta = _split(a)
    cb, tb = _split(b)
    merged = dict(ta)
    for e, c in tb.items():
        # dict lookup relies on hash/eq of normal forms
        merged[e] = merged.get(e, 0) + c
    return Tower._make(ca + cb, merged)


def neg(a):
    if isinstance(a, int):
        return -a
    c, t = _split(a)
    return Tower._make(-c, {e: -v for e, v in t.items()})


def scale(a, k):
    if isinstance(a, int):
        return a * k
    c, t = _split(a)
    return Tower._make(c * k, {e: v * k for e, v in t.items()})


def sign(a):
    if isinstance(a, int):
        return (a > 0) - (a < 0)
    c, terms = a.const, a.terms
    lead_e, lead_c = terms[0]
    rest = terms[1:]
    if rest:
        e2 = rest[0][0]
        budget = sum(abs(v) for _, v in rest) + 1
        # rest <= budget * atom(e2) and |const| < atom(e2); atom(lead) >= atom(e2)**2
        if budget.bit_length() + 1 >= 1 << EXP_CAP or abs(c).bit_length() > 1 << (EXP_CAP + 1):
            raise OverflowError("tower dominance cannot be certified")
    elif abs(c).bit_length() > 1 << (EXP_CAP + 1):
        raise OverflowError("tower dominance cannot be certified")
    return 1 if lead_c > 0 else -1


def cmp(a, b):
    return sign(add(a, neg(b)))


def tmin(a, b):
    return a if cmp(a, b) <= 0 else b


def tmax(a, b):
    return a if cmp(a, b) >= 0 else b


def is_small(a):
    return isinstance(a, int)


# text form -----------------------------------------------------------------
def to_str(a):
    if isinstance(a, int):
        return str(a)
    parts = []
    for e, c in a.terms:
        body = f"2^^({to_str(e)})"
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    if a.const:
        parts.append(str(a.const))
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def from_str(text):
    """Parse the text form written by :func:`to_str`."""
    text = text.replace(" ", "")

    def term(i):
        m = re.match(r"(\d+)\*(?=2\^\^\()", text[i:])
        coeff = 1
        if m:
            coeff = int(m.group(1))
            i += m.end()
        if text.startswith("2^^(", i):
            inner, i = expr(i + 4)
            if not text.startswith(")", i):
                raise ValueError(f"bad tower literal {text!r}")
            return scale(atom(inner), coeff), i + 1
        m = re.match(r"\d+", text[i:])
        if not m:
            raise ValueError(f"bad tower literal {text!r}")
        return int(m.group(0)), i + m.end()

    def expr(i):
        sgn = 1
        if text.startswith("-", i):
            sgn, i = -1, i + 1
        val, i = term(i)
        total = scale(val, sgn)
        while i < len(text) and text[i] in "+-":
            sgn = 1 if text[i] == "+" else -1
            val, i = term(i + 1)
            total = add(total, scale(val, sgn))
        return total, i

    val, pos = expr(0)
    if pos != len(text):
        raise ValueError(f"bad tower literal {text!r}")
    return val
