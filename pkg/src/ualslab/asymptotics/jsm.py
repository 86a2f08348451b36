"""Finite estimation of joint spreading models over gated strict plegma families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from ..core import fmt_rational
from ..plegma import PlegmaFamily, plegma_enumerate
from ..spaces.mixed import QuadSurd
from .generators import SequenceGenerator
from .oracles import Norm, below, spread


# coefficient nets and schedules -------------------------------------------------------
@dataclass(frozen=True)
class CoeffNet:
    """Sign patterns (with zeros while they fit under cap) plus seeded random matrices."""

    n_random: int = 200
    seed: int = 0
    cap: int = 64
    max_den: int = 8

    def matrices(self, l, k):
        size = l * k
        if 3 ** size - 1 <= self.cap:
            pats = [p for p in product((1, 0, -1), repeat=size) if any(p)]
        else:
            pats = list(product((1, -1), repeat=size))[: self.cap]
        out = [self._shape(p, l, k) for p in pats]
        rng = np.random.Generator(np.random.PCG64([self.seed, l, k]))
        while len(out) < len(pats) + self.n_random:
            nums = rng.integers(-self.max_den, self.max_den + 1, size=size)
            if nums.any():
                out.append(self._shape([Fraction(int(v), self.max_den) for v in nums], l, k))
        return out

    @staticmethod
    def _shape(flat, l, k):
        flat = [Fraction(v) for v in flat]
        return tuple(tuple(flat[i * k:(i + 1) * k]) for i in range(l))


def default_schedule(k_max):
    return tuple(Fraction(1, 2 ** k) for k in range(1, k_max + 1))


def check_schedule(sched):
    sched = tuple(Fraction(d) for d in sched)
    if any(d <= 0 for d in sched) or any(a <= b for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be positive and strictly decreasing")
    return sched


def matrix_text(a):
    return ";".join(",".join(fmt_rational(v) for v in row) for row in a)


# the estimate -------------------------------------------------------------------------
@dataclass
class TableRow:
    k: int
    coeffs: tuple
    norm: Norm
    family: PlegmaFamily
    lo: Norm
    hi: Norm
    families: int

    @property
    def oscillation(self):
        return spread(self.lo, self.hi)


@dataclass
class JsmEstimate:
    generator: str
    l: int
    k_max: int
    L: tuple
    rows: list
    schedule: tuple
    status: str                      # "ok" | "failed" | "no gated families"
    failure: dict | None = None
    nodes: int = 0
    missing: tuple = ()              # k with no gated families
    notes: list = field(default_factory=list)

    def oscillation(self, k):
        """Largest oscillation at k over the table (exact when norms are)."""
        vals = [r.oscillation for r in self.rows if r.k == k]
        if not vals:
            return None
        best = vals[0]
        for v in vals[1:]:
            exact = isinstance(v, QuadSurd) and isinstance(best, QuadSurd)
            if (best < v) if exact else float(v) > float(best):
                best = v
        return best


def _vector(gen, fam, a):
    out = None
    for i, row in enumerate(a, start=1):
        for j, c in enumerate(row, start=1):
            if c:
                term = gen(i, fam(i, j)) * c
                out = term if out is None else out + term
    if out is None:
        out = gen(1, fam(1, 1)) * 0
    return out


def _gated_new(L, l, k, newest):
    if len(L) < k:
        return []
    gate = L[k - 1]
    pool = [m for m in L if m >= gate]
    return [f for f in plegma_enumerate(pool, l, k, strict=True) if f.rows[-1][-1] == newest]


class _State:
    def __init__(self, gen, l, k_max, nets, sched):
        self.gen, self.l, self.k_max, self.nets, self.sched = gen, l, k_max, nets, sched
        self.stats = {}   # (k, a) -> [rep, rep_fam, lo, hi, count, lo_fam, hi_fam]
        self.evals = 0

    def try_add(self, L, m):
        """Stats after adding m to L, or (None, violation)."""
        L2 = L + [m]
        stats = {key: list(v) for key, v in self.stats.items()}
        for k in range(1, self.k_max + 1):
            delta = self.sched[k - 1]
            for fam in _gated_new(L2, self.l, k, m):
                for a in self.nets[k]:
                    nv = self.gen.oracle(_vector(self.gen, fam, a))
                    self.evals += 1
                    st = stats.get((k, a))
                    if st is None:
                        stats[(k, a)] = [nv, fam, nv, nv, 1, fam, fam]
                        continue
                    st[4] += 1
                    if nv.key() < st[2].key():
                        st[2], st[5] = nv, fam
                    elif nv.key() > st[3].key():
                        st[3], st[6] = nv, fam
                    else:
                        continue
                    if st[2].key() != st[3].key() and not below(spread(st[2], st[3]), delta):
                        return None, {"k": k, "coeffs": matrix_text(a),
                                      "families": [st[5].text(), st[6].text()],
                                      "norms": [st[2].to_json(), st[3].to_json()],
                                      "delta": fmt_rational(delta)}
        return stats, None


def jsm_estimate(gen: SequenceGenerator, l=None, k_max=2, net: CoeffNet | None = None, sched=None,
                 ground=range(1, 13), min_len=None, budget=20000) -> JsmEstimate:
    """Thin ground to L with all gated families' norms within delta_k per coefficient matrix.

    Greedy left-to-right retention first; if that keeps fewer than min_len
    elements, a depth-first search over retain/skip decisions runs under the
    node budget.  Failure is reported with the first violating pair of families.
    """
    l = gen.l if l is None else l
    if l > gen.l:
        raise ValueError(f"generator has {gen.l} sequences, asked for l={l}")
    net = net or CoeffNet()
    sched = check_schedule(sched or default_schedule(k_max))
    if len(sched) < k_max:
        raise ValueError("schedule shorter than k_max")
    ground = sorted(set(ground))
    if min_len is None:
        min_len = l * k_max + k_max - 1
    nets = {k: net.matrices(l, k) for k in range(1, k_max + 1)}
    state = _State(gen, l, k_max, nets, sched)

    L, first_fail = [], None
    for m in ground:
        stats, fail = state.try_add(L, m)
        if stats is None:
            first_fail = first_fail or fail
            continue
        L.append(m)
        state.stats = stats
    nodes = len(ground)

    if len(L) < min_len:
        best = {"L": None}

        def rec(pos, cur, stats):
            nonlocal nodes
            if len(cur) >= min_len:
                best["L"], best["stats"] = list(cur), stats
                return True
            if len(cur) + len(ground) - pos < min_len or nodes >= budget:
                return False
            nodes += 1
            state.stats = stats
            s2, fail = state.try_add(cur, ground[pos])
            if s2 is not None and rec(pos + 1, cur + [ground[pos]], s2):
                return True
            return rec(pos + 1, cur, stats)

        if rec(0, [], {}):
            L, state.stats = best["L"], best["stats"]

    rows = []
    for k in range(1, k_max + 1):
        for a in nets[k]:
            st = state.stats.get((k, a))
            if st is not None:
                rows.append(TableRow(k, a, st[0], st[1], st[2], st[3], st[4]))
    missing = tuple(k for k in range(1, k_max + 1) if not any(r.k == k for r in rows))
    if len(L) < min_len:
        status = "failed"
    elif missing:
        status = "no gated families"
    else:
        status = "ok"
    est = JsmEstimate(gen.name, l, k_max, tuple(L), rows, sched, status,
                      first_fail if status == "failed" else None, nodes, missing)
    if first_fail and status == "ok":
        est.notes.append(f"thinning dropped elements; first conflict at k={first_fail['k']}")
    return est


# constants ---------------------------------------------------------------------------
def lp_norm_of(coeffs, p):
    vals = [abs(Fraction(c)) for c in coeffs]
    if p == "inf":
        return Norm.of_sq(max(vals) ** 2)
    p = Fraction(p)
    if p == 1:
        return Norm.of_sq(sum(vals, Fraction(0)) ** 2)
    if p == 2:
        return Norm.of_sq(sum((v * v for v in vals), Fraction(0)))
    return Norm.of_float(sum(float(v) ** float(p) for v in vals) ** (1 / float(p)))


def _max_norm(vals):
    best = None
    for v in vals:
        if best is None:
            best = v
        elif v.exact and best.exact:
            best = v if v.sq > best.sq else best
        elif float(v) > float(best):
            best = v
    return best


def equivalence_constant(est: JsmEstimate, p=2) -> Norm:
    """max over the table of max(||a||_p / N(a), N(a) / ||a||_p)."""
    if not est.rows:
        raise ValueError("empty table")
    out = []
    for r in est.rows:
        flat = [c for row in r.coeffs for c in row]
        ap = lp_norm_of(flat, p)
        if r.norm.is_zero():
            out.append(Norm.of_float(float("inf")))
            continue
        q1, q2 = ap.ratio(r.norm), r.norm.ratio(ap)
        out.append(_max_norm([q1, q2]))
    return _max_norm(out)


def suppression_constant(vectors, oracle, net=None, seed=0, n_random=50) -> Norm:
    """max over proper nonempty subsets F and coefficient rows of ||P_F y|| / ||y||."""
    vectors = list(vectors)
    m = len(vectors)
    if not 1 <= m <= 16:
        raise ValueError("suppression_constant takes between 1 and 16 vectors")
    if net is None:
        net = [p for p in product((1, -1), repeat=m) if p[0] == 1][:64]
        rng = np.random.Generator(np.random.PCG64(seed))
        for _ in range(n_random):
            net.append(tuple(Fraction(int(v), 8) for v in rng.integers(-8, 9, size=m)))
    best = Norm.of_sq(0) if m == 1 else None
    for a in net:
        a = [Fraction(c) for c in a]
        if len(a) != m:
            raise ValueError("coefficient row length differs from the number of vectors")
        if not any(a):
            raise ValueError("all-zero coefficient row")
        terms = [v * c for v, c in zip(vectors, a)]
        full = oracle(_sum(terms))
        if full.is_zero():
            continue
        for mask in range(1, 2 ** m - 1):
            part = [t for b, t in enumerate(terms) if mask >> b & 1]
            r = oracle(_sum(part)).ratio(full)
            best = r if best is None else _max_norm([best, r])
    if best is None:
        best = Norm.of_sq(1)
    return best


def _sum(vs):
    out = vs[0]
    for v in vs[1:]:
        out = out + v
    return out
