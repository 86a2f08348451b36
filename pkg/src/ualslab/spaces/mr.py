"""The Maurey-Rosenthal type space on two lines, N1 = odds and N2 = evens.

Weights follow m_j = 4**(2**j) = 2**(2**(j+1)) and mu_j = m_j**2, so in
tower notation m_j = atom(j+1) and mu_j = atom(j+2).  Special-sequence
cardinalities produced by the injection sigma are far too large to write
down and are carried as :mod:`~ualslab.core.tower` values.
"""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import MRLINE, FinVec, RleVec, Run, canonical_json, rle_sum, to_natural
from ..core import tower as tw
from ..core.rle import overlap

# any weight whose m_j is not materialized has m_j >= atom(EXP_CAP + 1) > 2**64
TINY = Fraction(1, 2**64)


class RegistryConflict(ValueError):
    """A sigma value disagrees with the registry, or the registry is not injective."""


# weights ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MuCertificate:
    prefix: Fraction
    tail: Fraction
    total: Fraction
    I: int
    J: int

    @property
    def ok(self):
        return self.total <= Fraction(1, 2)


class MuSequence:
    """m_j = 4**(2**j) by default; ``m_rule`` swaps in another closed form.

    Only the default rule supports symbolic (tower) indices.  The certificate
    needs the ratios q_j = m_j/m_{j+1} to satisfy q_{j+1} <= q_I * q_j from
    j = I on; for the default rule q_{j+1} = q_j**2.
    """

    def __init__(self, m_rule=None, name="tower"):
        self._rule = m_rule
        self.name = name if m_rule is not None else "tower"

    @property
    def symbolic(self):
        return self._rule is None

    def m(self, j):
        if self._rule is None:
            return tw.atom(tw.add(j, 1))
        if not isinstance(j, int):
            raise TypeError("custom weight rules take integer indices only")
        return self._rule(j)

    def mu(self, j):
        if self._rule is None:
            return tw.atom(tw.add(j, 2))
        return self.m(j) ** 2

    def m_shift(self, j):
        """Tower exponent e with m_j = atom(e) (default rule only)."""
        if self._rule is not None:
            raise TypeError("shift exponents exist only for the tower rule")
        return tw.add(j, 1)

    def representable(self, j):
        return isinstance(self.m(j), int)

    def rho_upper(self, a, b):
        """Upper bound for m_min/m_max, a != b; exact when both are materialized."""
        ma, mb = self.m(a), self.m(b)
        if isinstance(ma, int) and isinstance(mb, int):
            return Fraction(min(ma, mb), max(ma, mb))
        lo = tw.tmin(a, b)
        mlo = self.m(lo)
        return Fraction(1, mlo) if isinstance(mlo, int) else TINY

    def below_sum_upper(self, w):
        """Upper bound for sum_{k<w} m_k/m_w."""
        mw = self.m(w)
        if isinstance(mw, int) and isinstance(w, int):
            return sum((Fraction(self.m(k), mw) for k in range(1, w)), Fraction(0))
        # sum_{k<w} m_k <= 2 m_{w-1} and m_{w-1}/m_w = 1/m_{w-1} for the tower rule
        return 2 * TINY

    def certificate(self, I=4, J=6):
        """Certified upper bound for sum_i sum_{j>i} m_i/m_j.

        Exact over i < I, j <= J; the rest is bounded with q_j = m_j/m_{j+1}:
        for j > J, m_i/m_j <= (m_i/m_J) q_J**(j-J); for i >= I,
        sum_{j>i} m_i/m_j <= q_i/(1-q_i) and sum_{i>=I} q_i <= q_I/(1-q_I).
        """
        if not 1 <= I <= J:
            raise ValueError("need 1 <= I <= J")
        ms = {j: self.m(j) for j in range(1, J + 3)}
        q = {j: Fraction(ms[j], ms[j + 1]) for j in range(1, J + 2)}
        for j in range(I, J + 1):
            if not q[j + 1] <= q[I] * q[j]:
                raise ValueError(f"weight rule {self.name} violates the tail hypothesis at j={j}")
        if not q[I] < 1:
            raise ValueError("weights must increase")
        prefix = sum((Fraction(ms[i], ms[j]) for i in range(1, I) for j in range(i + 1, J + 1)), Fraction(0))
        tail_a = sum((Fraction(ms[i], ms[J]) for i in range(1, I)), Fraction(0)) * q[J] / (1 - q[J])
        tail_b = q[I] / (1 - q[I]) / (1 - q[I])
        tail = tail_a + tail_b
        return MuCertificate(prefix, tail, prefix + tail, I, J)

    def cross_bound(self):
        return self.certificate().total


DEFAULT_MU = MuSequence()


# sigma registry --------------------------------------------------------------------------
@dataclass(frozen=True)
class LineSet:
    """Positions start .. start+count-1 of one line."""

    line: int
    start: object
    count: object

    def canon(self):
        return f"{self.line}:{tw.to_str(self.start)}:{tw.to_str(self.count)}"

    @property
    def end(self):
        return tw.add(self.start, self.count)

    def first_natural(self):
        return to_natural(self.line, self.start)

    def last_natural(self):
        return to_natural(self.line, tw.add(self.end, -1))


def canon_prefix(sets):
    return "|".join(s.canon() for s in sets)


class SigmaRegistry:
    """Append-only realization of the injection sigma.

    A new prefix P receives max #E over P + 1 + (insertion rank), bumped
    until unused.  With a path the log is persisted as JSON lines and
    replayed on load.
    """

    def __init__(self, path=None):
        self.path = path
        self._map = {}
        self._values = set()
        self._lines = []
        self.lock = threading.Lock()
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    for raw in fh:
                        if raw.strip():
                            rec = json.loads(raw)
                            self._install(rec["prefix"], tw.from_str(rec["sigma"]), rec.get("max"), raw.rstrip("\n"))
            except FileNotFoundError:
                pass

    def _install(self, key, value, max_card, line):
        if key in self._map:
            raise RegistryConflict(f"prefix registered twice: {key[:60]}")
        if value in self._values:
            raise RegistryConflict(f"sigma value {tw.to_str(value)[:60]} reused")
        if max_card is not None and tw.cmp(value, tw.from_str(max_card)) <= 0:
            raise RegistryConflict("sigma value does not exceed the prefix cardinalities")
        self._map[key] = value
        self._values.add(value)
        self._lines.append(line)

    def __len__(self):
        return len(self._map)

    def lookup(self, sets):
        return self._map.get(canon_prefix(sets))

    def sigma(self, sets):
        """sigma of a prefix given as a sequence of LineSets, assigning if new."""
        key = canon_prefix(sets)
        with self.lock:
            if key in self._map:
                return self._map[key]
            biggest = 0
            for s in sets:
                biggest = tw.tmax(biggest, s.count)
            value = tw.add(biggest, 1 + len(self._map))
            while value in self._values:
                value = tw.add(value, 1)
            line = canonical_json({"max": tw.to_str(biggest), "prefix": key, "sigma": tw.to_str(value)})
            self._install(key, value, tw.to_str(biggest), line)
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
            return value

    def check(self, sets, value):
        got = self.lookup(sets)
        if got is not None and got != value:
            raise RegistryConflict(
                f"registry has sigma={tw.to_str(got)[:40]} but {tw.to_str(value)[:40]} was required")
        return got is not None

    def snapshot_hash(self):
        h = hashlib.sha256()
        for line in self._lines:
            h.update(line.encode() + b"\n")
        return h.hexdigest()

    def dump(self):
        return "\n".join(self._lines) + ("\n" if self._lines else "")


# special sequences ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SpecialSequence:
    levels: tuple  # ((E1, E2), ...) LineSets in N1, N2
    weights: tuple

    @property
    def n(self):
        return len(self.levels)

    def sets(self, upto=None):
        out = []
        for e1, e2 in self.levels[:upto]:
            out.extend((e1, e2))
        return out

    def validate(self, mu, reg):
        prev_last = 0
        for k, ((e1, e2), j) in enumerate(zip(self.levels, self.weights), start=1):
            if e1.line != 1 or e2.line != 2:
                raise ValueError("special sequence sets must alternate N1, N2")
            if e1.count != mu.mu(j) or e2.count != mu.mu(j):
                raise ValueError(f"level {k}: cardinalities differ from mu_j")
            for s in (e1, e2):
                if tw.cmp(s.first_natural(), prev_last) <= 0:
                    raise ValueError(f"level {k}: sets are not successive")
                prev_last = s.last_natural()
            if k > 1:
                reg.check(self.sets(k - 1), j)
                if reg.lookup(self.sets(k - 1)) is None:
                    raise RegistryConflict(f"level {k}: prefix missing from the registry")
        return True


def build_special_sequence(n, mu=DEFAULT_MU, reg=None, j1=1, start=1):
    """Tightly packed special sequence of length n starting at N1 position start."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not mu.symbolic:
        raise ValueError("special sequences need the tower weight rule")
    if not 1 <= j1 <= 256:
        raise ValueError("j1 must lie in 1..256 so it is never a sigma value")
    reg = reg if reg is not None else SigmaRegistry()
    levels, weights = [], []
    a, j = start, j1
    for k in range(n):
        if k:
            j = reg.sigma([s for lvl in levels for s in lvl])
        size = mu.mu(j)
        # last odd of E1 is 2(a+size-1)-1, first even of E2 must be above it
        b = tw.add(a, tw.add(size, -1))
        levels.append((LineSet(1, a, size), LineSet(2, b, size)))
        weights.append(j)
        a = tw.add(b, size)
    return SpecialSequence(tuple(levels), tuple(weights))


def special_combination(seq, coeffs, mu=DEFAULT_MU):
    """sum_k c1_k x^1_k + c2_k x^2_k, x^i_k = (1/m_{j_k}) 1_{E^i_k}."""
    runs = []
    for ((e1, e2), j), (c1, c2) in zip(zip(seq.levels, seq.weights), coeffs):
        sh = mu.m_shift(j)
        if c1:
            runs.append(Run(1, e1.start, e1.count, Fraction(c1), sh))
        if c2:
            runs.append(Run(2, e2.start, e2.count, Fraction(c2), sh))
    return rle_sum([RleVec(runs)])


def build_special_vectors(n, mu=DEFAULT_MU, reg=None, **kw):
    """(plus, alternating, seq): sum x^i_k and sum (-1)**i x^i_k."""
    seq = build_special_sequence(n, mu, reg, **kw)
    plus = special_combination(seq, [(1, 1)] * n, mu)
    alt = special_combination(seq, [(-1, 1)] * n, mu)
    return plus, alt, seq


# functionals -----------------------------------------------------------------------------------
@dataclass(frozen=True)
class Block:
    start: object
    count: object
    sign: int


@dataclass(frozen=True)
class W0:
    line: int
    pos: object
    sign: int = 1


@dataclass(frozen=True)
class W1:
    weight: object
    line: int
    blocks: tuple

    def size(self):
        total = 0
        for b in self.blocks:
            total = tw.add(total, b.count)
        return total


@dataclass(frozen=True)
class W2:
    pairs: tuple  # ((W1 on N1, W1 on N2), ...)


@dataclass(frozen=True)
class Cut:
    """The natural number at a line position (inclusive projection endpoint)."""

    line: int
    pos: object


@dataclass(frozen=True)
class MrFunctional:
    body: object
    lo: Cut | None = None
    hi: Cut | None = None

    def describe(self):
        return describe(self)


def _tstr(v):
    return tw.to_str(v)


def describe(f):
    b = f.body if isinstance(f, MrFunctional) else f
    if isinstance(b, W0):
        out = {"W0": [b.line, _tstr(b.pos), b.sign]}
    elif isinstance(b, W1):
        out = {"W1": _w1_doc(b)}
    else:
        out = {"W2": [[_w1_doc(p), _w1_doc(q)] for p, q in b.pairs]}
    if isinstance(f, MrFunctional) and f.lo is not None:
        out["proj"] = [[f.lo.line, _tstr(f.lo.pos)], [f.hi.line, _tstr(f.hi.pos)]]
    return out


def _w1_doc(w):
    return {"weight": _tstr(w.weight), "line": w.line,
            "blocks": [[_tstr(b.start), _tstr(b.count), b.sign] for b in w.blocks]}


def _line_window(f, line):
    """Positions [first, last+1) of `line` kept by the projection, or None for all."""
    if f.lo is None:
        return None
    lo, hi = f.lo, f.hi
    if lo.line == line:
        first = lo.pos
    elif line == 1:
        first = tw.add(lo.pos, 1)
    else:
        first = lo.pos
    if hi.line == line:
        last = hi.pos
    elif line == 1:
        last = hi.pos
    else:
        last = tw.add(hi.pos, -1)
    return first, tw.add(last, 1)


def _clip(start, count, window):
    if window is None:
        return start, count
    first, stop = window
    lo = tw.tmax(start, first)
    hi = tw.tmin(tw.add(start, count), stop)
    c = tw.add(hi, tw.neg(lo))
    return lo, (c if tw.sign(c) > 0 else 0)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __add__(self, other):
        return Interval(self.lo + other.lo, self.hi + other.hi)

    @property
    def exact(self):
        return self.lo == self.hi


ZERO = Interval(Fraction(0), Fraction(0))


def _term(mu, o, j, run, sign):
    """sign * run-coefficient * o / m_j as an Interval."""
    r = run.coeff * sign
    mj = mu.m(j)
    if run.shift is None or isinstance(run.shift, int) and run.shift <= tw.EXP_CAP:
        c = run.scale_value() * sign
        if isinstance(mj, int) and isinstance(o, int):
            v = c * o / mj
            return Interval(v, v)
        b = abs(c) * o * TINY if isinstance(o, int) else None
        if b is None:
            raise OverflowError("functional value on a plain run is not bounded")
        return Interval(-b, b)
    # weighted run: coefficient r / atom(shift), length <= atom(shift)**2
    w = tw.add(run.shift, -1)
    if tw.cmp(w, j) == 0:
        mu_w = mu.mu(j)
        if o == mu_w:
            return Interval(r, r)
        d = tw.add(o, tw.neg(mu_w))
        if isinstance(mu_w, int) and isinstance(o, int):
            v = r * Fraction(o, mu_w)
            return Interval(v, v)
        if isinstance(d, int):
            # r (1 + d/mu_w) with |d/mu_w| <= |d| * TINY
            spread = abs(r) * abs(d) * TINY
            return Interval(r - spread, r + spread)
        if isinstance(o, int):
            b = abs(r) * o * TINY
            return Interval(-b, b)
        return Interval(-abs(r), abs(r))
    b = abs(r) * mu.rho_upper(w, j)
    return Interval(-b, b)


def evaluate(f, x, mu=DEFAULT_MU):
    """f(x) as an exact Interval (lo == hi whenever it is a materializable rational)."""
    if isinstance(x, FinVec):
        x = RleVec.from_finvec(x)
    if not isinstance(f, MrFunctional):
        f = MrFunctional(f)
    body = f.body
    if isinstance(body, W0):
        win = _line_window(f, body.line)
        s, c = _clip(body.pos, 1, win)
        if not c:
            return ZERO
        for run in x.line_runs(body.line):
            if overlap(run.start, run.length, s, 1):
                v = run.scale_value()
                if v is None:
                    b = abs(run.coeff) * TINY
                    return Interval(-b, b)
                return Interval(v * body.sign, v * body.sign)
        return ZERO
    comps = [body] if isinstance(body, W1) else [w for pair in body.pairs for w in pair]
    total = ZERO
    for w in comps:
        win = _line_window(f, w.line)
        for blk in w.blocks:
            s, c = _clip(blk.start, blk.count, win)
            if not c:
                continue
            for run in x.line_runs(w.line):
                o = overlap(run.start, run.length, s, c)
                if o:
                    total = total + _term(mu, o, w.weight, run, blk.sign)
    return total


def check_functional(f, mu=DEFAULT_MU, seq=None):
    """Structural validity of a functional; raises ValueError when malformed."""
    body = f.body if isinstance(f, MrFunctional) else f
    if isinstance(body, W0):
        return True
    comps = [body] if isinstance(body, W1) else [w for pair in body.pairs for w in pair]
    for w in comps:
        if w.size() != mu.mu(w.weight):
            raise ValueError("W1 component does not have exactly mu_j elements")
    if isinstance(body, W2):
        for (p, q) in body.pairs:
            if p.line != 1 or q.line != 2 or p.weight != q.weight:
                raise ValueError("W2 pairs must be (N1, N2) with a common weight")
            if [b.sign for b in p.blocks] != [b.sign for b in q.blocks] or \
                    [b.count for b in p.blocks] != [b.count for b in q.blocks]:
                raise ValueError("W2 pair is not consistent")
    return True


# bounds ------------------------------------------------------------------------------------------
@dataclass
class MrBounds:
    lower: Fraction
    upper: Fraction
    witness: MrFunctional | None
    upper_case: str
    exact: bool = False
    notes: list = field(default_factory=list)

    def __iter__(self):
        yield self.lower
        yield self.upper
        yield self.witness


def _profile(x, mu):
    """Split runs into plain (materialized) and weighted (r / m_w on <= mu_w points)."""
    plain, weighted = [], []
    for r in x.runs:
        v = r.scale_value()
        if v is not None and isinstance(r.length, int):
            plain.append((r, v))
            continue
        if r.shift is None:
            raise ValueError("runs of unbounded length need a weight scale")
        w = tw.add(r.shift, -1)
        if tw.cmp(r.length, mu.mu(w)) > 0:
            raise ValueError("weighted run longer than its weight allows")
        weighted.append((r, w))
    return plain, weighted


def _greedy_bins(values_lengths, mu, max_bins=8):
    """Best sum over bins k>=1 (capacity mu_k, multiplier 1/m_k) of a plain line."""
    items = sorted(values_lengths, key=lambda t: -abs(t[0]))
    total = Fraction(0)
    k, room = 1, mu.mu(1)
    for v, length in items:
        left = length
        while left:
            if k > max_bins:
                # every later bin has multiplier below TINY
                total += abs(v) * left * TINY
                break
            take = min(left, room)
            total += abs(v) * take / mu.m(k)
            left -= take
            room -= take
            if not room:
                k += 1
                room = mu.mu(k) if k <= max_bins else 0
    return total


def _general_upper(plain, weighted, mu):
    w0 = Fraction(0)
    for r, v in plain:
        w0 = max(w0, abs(v))
    for r, w in weighted:
        mw = mu.m(w)
        w0 = max(w0, abs(r.coeff) / mw if isinstance(mw, int) else abs(r.coeff) * TINY)
    lines = Fraction(0)
    for line in (1, 2):
        lines += _greedy_bins([(v, r.length) for r, v in plain if r.line == line], mu)
        for r, w in weighted:
            if r.line == line:
                lines += abs(r.coeff) * (1 + mu.below_sum_upper(w))
    return max(w0, lines)


def _matched(c1, c2, k0, n):
    """Bound on the coinciding-weight part of a W2 functional with first mismatch at k0."""
    if k0 == 1:
        return max((abs(c1[k]) + abs(c2[k]) for k in range(1, n)), default=Fraction(0))
    K = k0 - 2  # identical levels 0..K-1 (0-based), special level K
    full = [abs(c1[k] + c2[k]) for k in range(K)]
    left = [max(abs(c1[k] + c2[k]), abs(c2[k])) for k in range(K)]
    right = [max(abs(c1[k] + c2[k]), abs(c1[k])) for k in range(K)]
    both = [abs(c1[k]) + abs(c2[k]) for k in range(K)]
    special = abs(c1[K]) + abs(c2[K])
    best = special
    for s in range(K):
        run = left[s]
        best = max(best, both[s], run + special)
        for e in range(s + 1, K):
            best = max(best, run + right[e])
            run += full[e]
            best = max(best, run + special)
    return best


def structural_upper(seq, coeffs, mu=DEFAULT_MU):
    """Upper bound for a combination over a special sequence, all of W.

    Coinciding weights are bounded case by case: identical levels cancel
    to |c1+c2| (or the one-sided values when a projection cuts the pair),
    the last coinciding level contributes at most |c1|+|c2|.  Mismatched
    weights contribute at most max|c| * C per line and functional kind,
    C being the certified double-sum bound of the weight sequence.
    """
    n = seq.n
    c1 = [Fraction(a) for a, _ in coeffs]
    c2 = [Fraction(b) for _, b in coeffs]
    C = mu.cross_bound()
    top1 = max(abs(v) for v in c1)
    top2 = max(abs(v) for v in c2)
    m1 = mu.m(seq.weights[0])
    w0 = max(top1, top2) / m1 if isinstance(m1, int) else max(top1, top2) * TINY
    w1 = max(top1, top2) * (1 + C)
    w2 = max(_matched(c1, c2, k0, n) for k0 in range(1, n + 2)) + 2 * C * (top1 + top2)
    return max(w0, w1, w2), {"W0": w0, "W1": w1, "W2": w2}


def _plain_w1_candidates(plain, mu, line):
    runs = [(r, v) for r, v in plain if r.line == line]
    if not runs:
        return []
    count = sum(r.length for r, _ in runs)
    end = runs[0][0].end
    for r, _ in runs:
        end = tw.tmax(end, r.end)
    out = []
    j = 1
    while True:
        size = mu.mu(j)
        blocks, room = [], size
        for r, v in sorted(runs, key=lambda t: (-abs(t[1]), t[0].start)):
            take = min(room, r.length)
            if take:
                blocks.append(Block(r.start, take, 1 if v > 0 else -1))
                room -= take
        if room:
            blocks.append(Block(end, room, 1))
        out.append(MrFunctional(W1(j, line, tuple(blocks))))
        if size >= count:
            break
        j += 1
    return out


def _weighted_w1_candidates(weighted, mu):
    out = []
    for r, w in weighted:
        blocks = [Block(r.start, r.length, 1 if r.coeff > 0 else -1)]
        room = tw.add(mu.mu(w), tw.neg(r.length))
        if tw.sign(room) > 0:
            blocks.append(Block(r.end, room, 1))
        out.append(MrFunctional(W1(w, r.line, tuple(blocks))))
    return out


def _w2_candidates(seq, coeffs, mu):
    """Aligned W2 functionals restricted to windows of whole components."""
    n = seq.n
    comps = []
    for k, (e1, e2) in enumerate(seq.levels):
        comps.append((k, 0, e1))
        comps.append((k, 1, e2))
    out = []
    for a in range(len(comps)):
        for b in range(a, len(comps)):
            inside = comps[a:b + 1]
            sums = [Fraction(0)] * n
            for k, i, _ in inside:
                sums[k] += Fraction(coeffs[k][i])
            last = inside[-1][0]
            pairs = []
            for k in range(last + 1):
                e1, e2 = seq.levels[k]
                sg = -1 if sums[k] < 0 else 1
                j = seq.weights[k]
                pairs.append((W1(j, 1, (Block(e1.start, e1.count, sg),)),
                              W1(j, 2, (Block(e2.start, e2.count, sg),))))
            first_set, last_set = comps[a][2], comps[b][2]
            lo = Cut(first_set.line, first_set.start)
            hi = Cut(last_set.line, tw.add(last_set.end, -1))
            out.append(MrFunctional(W2(tuple(pairs)), lo, hi))
    return out


def detect_special(x, mu=DEFAULT_MU, reg=None):
    """Recognize x as a combination over a registered special sequence.

    Returns (seq, coeffs) or None.  Each level must carry runs exactly on
    its two sets with the level's weight scale.
    """
    if reg is None or not mu.symbolic:
        return None
    runs = sorted(x.runs, key=lambda r: (_NatKey(to_natural(r.line, r.start))))
    if not runs or len(runs) % 2:
        return None
    levels, weights, coeffs = [], [], []
    for t in range(0, len(runs), 2):
        r1, r2 = runs[t], runs[t + 1]
        if r1.line != 1 or r2.line != 2 or r1.shift is None or r2.shift is None:
            return None
        if r1.shift != r2.shift:
            return None
        j = tw.add(r1.shift, -1)
        size = mu.mu(j)
        if r1.length != size or r2.length != size:
            return None
        levels.append((LineSet(1, r1.start, size), LineSet(2, r2.start, size)))
        weights.append(j)
        coeffs.append((r1.coeff, r2.coeff))
    seq = SpecialSequence(tuple(levels), tuple(weights))
    if not (isinstance(weights[0], int) and 1 <= weights[0] <= 256):
        return None
    try:
        seq.validate(mu, reg)
    except RegistryConflict:
        return None
    except ValueError:
        return None
    return seq, coeffs


class _NatKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return tw.cmp(self.v, other.v) < 0


SMALL_NATURAL = 512  # 2 * mu_1


def mr_norm_bounds(x, mu=DEFAULT_MU, reg=None, seq=None):
    """Certified lower <= ||x|| <= upper with the functional attaining lower.

    If seq is given, x must be a combination over it and the registry must
    agree with its weights (RegistryConflict otherwise).
    """
    if isinstance(x, FinVec):
        if x.scheme != MRLINE:
            raise ValueError("expected a vector over the mrline scheme")
        x = RleVec.from_finvec(x)
    if not x.runs:
        return MrBounds(Fraction(0), Fraction(0), None, "zero", True)
    plain, weighted = _profile(x, mu)
    coeffs = None
    if seq is not None:
        if reg is None:
            raise ValueError("a registry is required with an explicit special sequence")
        seq.validate(mu, reg)
        found = detect_special(x, mu, reg)
        if found is None or found[0] != seq:
            raise ValueError("vector is not a combination over the given special sequence")
        coeffs = found[1]
    else:
        found = detect_special(x, mu, reg)
        if found is not None:
            seq, coeffs = found

    cands = []
    for r, v in plain:
        cands.append(MrFunctional(W0(r.line, r.start, 1 if v > 0 else -1)))
    for line in (1, 2):
        cands.extend(_plain_w1_candidates(plain, mu, line))
    cands.extend(_weighted_w1_candidates(weighted, mu))
    if seq is not None:
        cands.extend(_w2_candidates(seq, coeffs, mu))
    lower, witness = Fraction(0), None
    for f in cands:
        val = evaluate(f, x, mu).lo
        if val > lower:
            lower, witness = val, f

    small = not weighted and all(
        isinstance(r.start, int) and to_natural(r.line, r.start + r.length - 1) < SMALL_NATURAL for r, _ in plain)
    if small and mu.symbolic:
        # every W2 component beyond level one's N1 set lies above 2*mu_1,
        # so on this support W reduces to W0 and weight-one W1 functionals
        return MrBounds(lower, lower, witness, "exact", True)
    upper = _general_upper(plain, weighted, mu)
    case = "greedy"
    if seq is not None:
        su, _ = structural_upper(seq, coeffs, mu)
        if su < upper:
            upper, case = su, "structural"
    return MrBounds(lower, max(upper, lower), witness, case, upper == lower)
