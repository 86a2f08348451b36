"""Plegma families: validation, enumeration, shifts and a finite Ramsey search."""
from __future__ import annotations

from dataclasses import dataclass

from .core import FinVec, interleaved


@dataclass(frozen=True)
class PlegmaFamily:
    rows: tuple
    strict: bool = True

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        ok, why = plegma_validate(rows, self.strict)
        if not ok:
            raise ValueError(why)

    @property
    def l(self):
        return len(self.rows)

    @property
    def k(self):
        return len(self.rows[0]) if self.rows else 0

    def __call__(self, i, j):
        return self.rows[i - 1][j - 1]

    def elements(self):
        return sorted(v for r in self.rows for v in r)

    def first(self):
        return self.rows[0][0]

    def compose(self, t):
        """(t o s)_i(j) = t_i(s_i(j)); needs every s-value within t's k."""
        rows = tuple(tuple(t.rows[i][v - 1] for v in r) for i, r in enumerate(self.rows))
        return PlegmaFamily(rows, self.strict and t.strict)

    def text(self):
        return ";".join(",".join(str(v) for v in r) for r in self.rows)


def parse_rows(text):
    rows = []
    for part in text.strip().split(";"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty row in {text!r}")
        rows.append(tuple(int(v) for v in part.split(",")))
    return tuple(rows)


def plegma_validate(rows, strict=True):
    """(True, None) or (False, reason naming the violated condition)."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return False, "no rows"
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise ValueError("ragged rows")
    for i, r in enumerate(rows, start=1):
        if any(a >= b for a, b in zip(r, r[1:])):
            return False, f"row {i} is not strictly increasing"
    l = len(rows)
    # (i): everything in column j lies below everything in column j+1
    for j in range(k - 1):
        hi = max(r[j] for r in rows)
        lo = min(r[j + 1] for r in rows)
        if hi >= lo:
            i1 = max(range(l), key=lambda i: rows[i][j]) + 1
            i2 = min(range(l), key=lambda i: rows[i][j + 1]) + 1
            return False, f"condition (i) fails: s_{i1}({j + 1}) >= s_{i2}({j + 2})"
    for j in range(k):
        for i in range(l - 1):
            a, b = rows[i][j], rows[i + 1][j]
            if a > b or (strict and a == b):
                rel = "<" if strict else "<="
                return False, f"condition (ii) fails at j={j + 1}: need s_{i + 1}({j + 1}) {rel} s_{i + 2}({j + 1})"
    return True, None


def plegma_enumerate(ground, l, k, strict=True):
    """All plegma families over ground, lexicographic in the concatenated rows."""
    M = sorted(set(ground))
    if l < 1 or k < 1:
        return iter(())
    rows = [[0] * k for _ in range(l)]

    def bounds(i, j):
        # rows are filled row-major; use only entries already placed
        lo = None
        if j > 0:
            lo = max(rows[t][j - 1] for t in range(i + 1)) + 1
        if i > 0:
            b = rows[i - 1][j] + (1 if strict else 0)
            lo = b if lo is None else max(lo, b)
        hi = rows[0][j + 1] - 1 if i > 0 and j + 1 < k else None
        return lo, hi

    def rec(pos):
        if pos == l * k:
            fam = tuple(tuple(r) for r in rows)
            if plegma_validate(fam, strict)[0]:
                yield PlegmaFamily(fam, strict)
            return
        i, j = divmod(pos, k)
        lo, hi = bounds(i, j)
        for v in M:
            if lo is not None and v < lo:
                continue
            if hi is not None and v > hi:
                break
            rows[i][j] = v
            yield from rec(pos + 1)

    return rec(0)


def plegma_count(ground, l, k, strict=True):
    return sum(1 for _ in plegma_enumerate(ground, l, k, strict))


def plegma_count_brute(ground, l, k, strict=True):
    """Independent count: filter all l-tuples of k-subsets."""
    from itertools import combinations, product

    subsets = list(combinations(sorted(set(ground)), k))
    return sum(1 for rows in product(subsets, repeat=l) if plegma_validate(rows, strict)[0])


def plegma_shift(x: FinVec, s: PlegmaFamily) -> FinVec:
    """Relabel (i, j) -> (i, s_i(j))."""
    if x.scheme.kind != "interleaved":
        raise ValueError("plegma shifts act on vectors over an interleaved scheme")
    if x.scheme.l > s.l:
        raise ValueError(f"vector has {x.scheme.l} rows, family only {s.l}")
    for (i, j) in x.support():
        if j > s.k:
            raise ValueError(f"support index (i={i}, j={j}) exceeds the family's k={s.k}")
    return x.map_indices(x.scheme, lambda ij: (ij[0], s(ij[0], ij[1])))


def natural_order(l, pairs):
    """Sort (i, n) pairs by (n, i)."""
    out = []
    for i, n in pairs:
        if not 1 <= i <= l:
            raise ValueError(f"pair {(i, n)} outside 1<=i<={l}")
        out.append((i, n))
    return sorted(out, key=lambda p: (p[1], p[0]))


# finite Ramsey search ------------------------------------------------------------------
BUILTIN_COLORINGS = {}


def coloring(name):
    def deco(fn):
        BUILTIN_COLORINGS[name] = fn
        return fn
    return deco


@coloring("constant")
def _constant(fam):
    return "c"


@coloring("parity")
def _parity(fam):
    return "even" if sum(v for r in fam.rows for v in r) % 2 == 0 else "odd"


@coloring("threshold")
def _threshold(fam):
    return "true" if fam.first() > 10 else "false"


@coloring("mod3")
def _mod3(fam):
    return str(sum(v for r in fam.rows for v in r) % 3)


@coloring("gap")
def _gap(fam):
    # parity of the spread between the first and last element
    el = fam.elements()
    return "even" if (el[-1] - el[0]) % 2 == 0 else "odd"


@dataclass(frozen=True)
class RamseyResult:
    status: str  # "found" | "none" | "budget"
    L: tuple | None
    color: object
    nodes: int


def ramsey_search(color, ground, l, k, target_len, budget=2_000_000):
    """First L (colex order) of size target_len with every strict family in it one color."""
    if isinstance(color, str):
        if color not in BUILTIN_COLORINGS:
            raise KeyError(f"unknown coloring {color!r}")
        color = BUILTIN_COLORINGS[color]
    if target_len < l * k:
        raise ValueError("target_len must be at least l*k")
    M = sorted(set(ground))
    nodes = 0
    exhausted = False

    def families_with(chosen, newest):
        # strict families over chosen that use newest (the smallest element so far)
        for fam in plegma_enumerate(chosen, l, k, strict=True):
            if fam.first() == newest:
                yield fam

    def rec(chosen, upper, col):
        # chosen holds the largest elements, descending; add smaller ones
        nonlocal nodes, exhausted
        if len(chosen) == target_len:
            return tuple(sorted(chosen)), col
        need = target_len - len(chosen)
        for t in range(need - 1, upper):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return None
            v = M[t]
            cand = chosen + [v]
            c = col
            ok = True
            for fam in families_with(sorted(cand), v):
                fc = color(fam)
                if c is None:
                    c = fc
                elif fc != c:
                    ok = False
                    break
            if ok:
                res = rec(cand, t, c)
                if res is not None:
                    return res
            if exhausted:
                return None
        return None

    # colex: smallest possible maximum first, then recursively smaller elements
    for top in range(target_len - 1, len(M)):
        res = rec([M[top]], top, None)
        if res is not None:
            L, col = res
            if col is None:
                fams = list(plegma_enumerate(L, l, k, True))
                col = color(fams[0]) if fams else None
            return RamseyResult("found", L, col, nodes)
        if exhausted:
            return RamseyResult("budget", None, None, nodes)
    return RamseyResult("none", None, None, nodes)


def interleaved_vec(l, coeffs):
    """FinVec over interleaved(l) from {(i, j): coefficient}."""
    return FinVec(interleaved(l), coeffs)
