"""Index schemes and their natural orders."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

KINDS = ("natural", "dyadic", "interleaved", "mixed", "mrline")


class SchemeError(ValueError):
    """An index does not belong to its scheme."""


@dataclass(frozen=True)
class IndexScheme:
    kind: str
    l: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.kind == "interleaved":
            if not isinstance(self.l, int) or self.l < 1:
                raise ValueError("interleaved scheme needs l >= 1")
        elif self.l is not None:
            raise ValueError(f"scheme {self.kind} takes no parameter")

    # validation -------------------------------------------------------------
    def check(self, idx):
        """Return idx in canonical (hashable) form or raise SchemeError."""
        k = self.kind
        if k in ("natural", "mrline"):
            if isinstance(idx, bool) or not isinstance(idx, int) or idx < 1:
                raise SchemeError(f"{k} index must be an integer >= 1, got {idx!r}")
            return idx
        if k == "dyadic":
            if not isinstance(idx, str) or any(ch not in "01" for ch in idx):
                raise SchemeError(f"dyadic index must be a binary string, got {idx!r}")
            return idx
        if k == "interleaved":
            if (not isinstance(idx, (tuple, list)) or len(idx) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in idx)):
                raise SchemeError(f"interleaved index must be a pair (i, n), got {idx!r}")
            i, n = idx
            if not 1 <= i <= self.l or n < 1:
                raise SchemeError(f"interleaved index {idx!r} outside 1<=i<={self.l}, n>=1")
            return (i, n)
        # mixed: (n, part, j, m)
        if not isinstance(idx, (tuple, list)) or len(idx) != 4:
            raise SchemeError(f"mixed index must be (n, part, j, m), got {idx!r}")
        n, part, j, m = idx
        ints = all(isinstance(v, int) and not isinstance(v, bool) for v in (n, j, m))
        if not ints or part not in ("X", "Y"):
            raise SchemeError(f"malformed mixed index {idx!r}")
        if n < 1 or m < 1 or not 1 <= j <= 2 * n:
            raise SchemeError(f"mixed index {idx!r} needs n>=1, 1<=j<=2n, m>=1")
        return (n, part, j, m)

    def order_key(self, idx):
        """Sort key realizing the scheme's natural order."""
        k = self.kind
        if k == "dyadic":
            return (len(idx), idx)
        if k == "interleaved":
            return (idx[1], idx[0])
        return idx

    # serialization ------------------------------------------------------------
    def to_json(self):
        if self.kind == "interleaved":
            return {"tag": "interleaved", "l": self.l}
        return self.kind

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            if ":" in obj:
                tag, _, par = obj.partition(":")
                return cls(tag, int(par))
            return cls(obj)
        if isinstance(obj, dict):
            tag = obj.get("tag")
            return cls(tag, obj.get("l"))
        raise ValueError(f"bad scheme descriptor {obj!r}")

    def index_to_json(self, idx):
        if isinstance(idx, tuple):
            return list(idx)
        return idx

    def index_from_json(self, obj):
        if isinstance(obj, list):
            obj = tuple(obj)
        return self.check(obj)


NATURAL = IndexScheme("natural")
DYADIC = IndexScheme("dyadic")
MIXED = IndexScheme("mixed")
MRLINE = IndexScheme("mrline")


def interleaved(l):
    return IndexScheme("interleaved", l)


# dyadic tree helpers -----------------------------------------------------------
def is_prefix(s, t):
    """s is an ancestor-or-equal of t."""
    return t.startswith(s)


def comparable(s, t):
    return t.startswith(s) or s.startswith(t)


@dataclass(frozen=True)
class Segment:
    top: str
    bottom: str

    def __post_init__(self):
        if not is_prefix(self.top, self.bottom):
            raise ValueError(f"{self.top!r} is not a prefix of {self.bottom!r}")

    def nodes(self):
        return [self.bottom[:d] for d in range(len(self.top), len(self.bottom) + 1)]

    def __contains__(self, node):
        return is_prefix(self.top, node) and is_prefix(node, self.bottom)

    def value(self, x):
        """S*(x): sum of the coefficients of x on the segment."""
        return sum((c for s, c in x.items() if s in self), Fraction(0))

    def describe(self):
        return (self.top, self.bottom)


@dataclass(frozen=True)
class Band:
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError("band needs 0 <= lo <= hi")

    def __contains__(self, node):
        return self.lo <= len(node) <= self.hi

    def nodes(self):
        out = []
        for d in range(self.lo, self.hi + 1):
            out.extend(format(v, f"0{d}b") if d else "" for v in range(1 << d))
        return out
