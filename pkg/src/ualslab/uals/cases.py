"""End-to-end verifiers for the finite UALS counterexamples."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..core import MIXED, NATURAL, FinVec, fmt_rational
from ..spaces.mixed import mixed_pq_norm
from .models import (
    INF,
    ConvexCombination,
    OperatorModel,
    coordinate_codomain,
    minimax_gap,
    pigeonhole_witness,
    pointwise_gap,
    rationalize,
    residual_norm,
    slot_codomain,
)

SCHEMA = "ualslab.gapreport/1"
CASES = ("ell1", "calx", "mixed", "rank-one")


def _num(v):
    if isinstance(v, Fraction):
        return fmt_rational(v)
    return float(v)


@dataclass
class GapReport:
    case: str
    params: dict
    pointwise: list = field(default_factory=list)
    pointwise_max: object = None
    pointwise_bound: object = None
    lower: object = None
    lower_witnesses: list = field(default_factory=list)
    upper: object = None
    upper_combination: list = field(default_factory=list)
    exact: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.lower is not None and self.upper is not None and float(self.lower) > float(self.upper) + 1e-9:
            raise ValueError("gap report with lower > upper")

    def to_json(self):
        self._validate()
        return {
            "schema": SCHEMA,
            "case": self.case,
            "params": self.params,
            "pointwise": [_num(v) for v in self.pointwise],
            "pointwise_max": None if self.pointwise_max is None else _num(self.pointwise_max),
            "pointwise_bound": None if self.pointwise_bound is None else _num(self.pointwise_bound),
            "lower": None if self.lower is None else _num(self.lower),
            "lower_witnesses": self.lower_witnesses,
            "upper": None if self.upper is None else _num(self.upper),
            "upper_combination": self.upper_combination,
            "exact": self.exact,
            "checks": self.checks,
            "extra": self.extra,
            "passed": self.passed,
        }

    def summary(self):
        lines = [f"case {self.case} {self.params}"]
        for name, ok in self.checks.items():
            lines.append(f"  {'PASS' if ok else 'FAIL'}  {name}")
        if self.pointwise_max is not None:
            lines.append(f"  max pointwise gap {_num(self.pointwise_max)} (bound {_num(self.pointwise_bound)})")
        if self.lower is not None:
            lines.append(f"  subspace gap in [{_num(self.lower)}, {_num(self.upper) if self.upper is not None else '?'}]")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def _max(vals):
    return max(vals, key=float) if vals else None


# l1 example ------------------------------------------------------------------------
def ell1_model(m=50):
    """A and the eight extreme operators B^+-_{+-e_r} on coordinates 1..2m."""
    cod = coordinate_codomain("l1", 1)
    dom = range(1, 2 * m + 1)
    e = {1: FinVec(NATURAL, {1: 1}), 2: FinVec(NATURAL, {2: 1})}
    A = OperatorModel("A", NATURAL, NATURAL, {c: e[1] if c % 2 else e[2] for c in dom}, cod)
    hull = []
    for kind in "+-":
        for r in (1, 2):
            for sg in (1, -1):
                z = e[r] * sg
                cols = {c: z if (kind == "+" or c % 2) else -z for c in dom}
                hull.append(OperatorModel(f"B{kind}_{'+' if sg > 0 else '-'}e{r}", NATURAL, NATURAL, cols, cod))
    return A, hull


def ell1_selector(x, hull):
    """B_z^+ or B_z^- with z = A(x)/(a1 +- a2), as weights on the extreme operators."""
    a1 = sum((c for i, c in x.items() if i % 2), Fraction(0))
    a2 = sum((c for i, c in x.items() if not i % 2), Fraction(0))
    w = {B.name: Fraction(0) for B in hull}
    if not a1 and not a2:
        w["B+_+e1"] = w["B+_-e1"] = Fraction(1, 2)  # z = 0
    else:
        kind, d = ("+", a1 + a2) if abs(a1 + a2) >= abs(a1 - a2) else ("-", a1 - a2)
        z = (a1 / d, a2 / d)
        for r, zr in zip((1, 2), z):
            if zr:
                w[f"B{kind}_{'+' if zr > 0 else '-'}e{r}"] += abs(zr)
        s = sum(w.values(), Fraction(0))
        if s != 1:  # only when |z| < 1, which the choice of d rules out
            raise AssertionError("selector left the hull")
    return ConvexCombination(tuple(hull), tuple(w[B.name] for B in hull))


def _rand_l1_unit(rng, dom_size, max_supp=8):
    supp = rng.choice(np.arange(1, dom_size + 1), size=int(rng.integers(1, max_supp + 1)), replace=False)
    coeffs = {int(i): int(rng.integers(1, 10)) * (1 if rng.integers(0, 2) else -1) for i in supp}
    tot = sum(abs(v) for v in coeffs.values())
    return FinVec(NATURAL, {i: Fraction(v, tot) for i, v in coeffs.items()})


def _random_simplex(rng, k, den=60):
    raw = [int(v) for v in rng.integers(0, den + 1, size=k)]
    if not any(raw):
        raw[0] = 1
    s = sum(raw)
    return [Fraction(v, s) for v in raw]


def verify_ell1(m=50, probes=200, samples=100, seed=0):
    rng = _rng(seed)
    A, hull = ell1_model(m)
    gaps = []
    for _ in range(probes):
        x = _rand_l1_unit(rng, 2 * m)
        gaps.append(residual_norm(A, ell1_selector(x, hull), x))
    k = m // 2
    wp = FinVec(NATURAL, {2 * k - 1: Fraction(1, 2), 2 * k: Fraction(1, 2)})
    wm = FinVec(NATURAL, {2 * k - 1: Fraction(1, 2), 2 * k: Fraction(-1, 2)})
    lp = minimax_gap(A, hull, [wp, wm], method="lp")
    sampled, pair_ok = [], True
    plus = [i for i, B in enumerate(hull) if B.name.startswith("B+")]
    for _ in range(samples):
        comb = ConvexCombination(tuple(hull), tuple(_random_simplex(rng, len(hull))))
        gp, gm = residual_norm(A, comb, wp), residual_norm(A, comb, wm)
        mass = sum((comb.weights[i] for i in plus), Fraction(0))
        pair_ok &= gp >= 1 - mass and gm >= mass
        sampled.append(max(gp, gm))
    # operator norm of (A - B) on the tail span{e_c : c >= 2k-1} at the LP combination
    upper = max(A.codomain.norm(A.columns[c] - lp.combination.apply(FinVec(NATURAL, {c: 1})))
                for c in (2 * k - 1, 2 * k))
    half = Fraction(1, 2)
    return GapReport(
        "ell1", {"m": m, "probes": probes, "samples": samples, "seed": seed},
        pointwise=gaps, pointwise_max=_max(gaps), pointwise_bound=Fraction(0),
        lower=lp.value, lower_witnesses=[f"(e{2 * k - 1}+e{2 * k})/2", f"(e{2 * k - 1}-e{2 * k})/2"],
        upper=upper, upper_combination=lp.combination.to_json(),
        exact={"pointwise": True, "lower": lp.exact, "upper": True},
        checks={
            "pointwise gaps all exactly 0": all(g == 0 for g in gaps),
            "LP minimax over the tail witness pair >= 1/2": lp.value >= half,
            "sampled combinations: max over witness pair >= 1/2": all(v >= half for v in sampled),
            "per-combination witness-pair inequalities": pair_ok,
        },
        extra={"sampled_min": fmt_rational(min(sampled))},
    )


# calX and the mixed (p, q) family -----------------------------------------------------
def slot_model(n, d, cod):
    """A_n = I_{1..2n} and the hull points I_G (#G = n) from X_n to Y_n."""
    dom = [(n, "X", j, t) for j in range(1, 2 * n + 1) for t in range(1, d + 1)]

    def I(G):
        cols = {idx: FinVec(MIXED, {(n, "Y", idx[2], idx[3]): 1} if idx[2] in G else {}) for idx in dom}
        rule = (lambda x, G=G: FinVec(MIXED, {(n, "Y", j, t): c for (_, _, j, t), c in x.items() if j in G}))
        return OperatorModel(f"I_{{{','.join(map(str, sorted(G)))}}}", MIXED, MIXED, cols, cod, rule)

    A = I(set(range(1, 2 * n + 1)))
    hull_sets = [frozenset(G) for G in combinations(range(1, 2 * n + 1), n)]
    return A, [I(G) for G in hull_sets], hull_sets


def _unit_direction(rng, d):
    """Random rational unit vector in l_2^d (inverse stereographic projection)."""
    t = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in range(d - 1)]
    s = sum((v * v for v in t), Fraction(0))
    return [2 * v / (s + 1) for v in t] + [(s - 1) / (s + 1)]


def _calx_probe(rng, n, d):
    raw = [int(v) if rng.random() < 0.8 else 0 for v in rng.integers(0, 20, size=2 * n)]
    if not any(raw):
        raw[int(rng.integers(0, 2 * n))] = 1
    tot = sum(raw)
    out = {}
    for j, r in enumerate(raw, start=1):
        if r:
            for t, u in enumerate(_unit_direction(rng, d), start=1):
                if u:
                    out[(n, "X", j, t)] = Fraction(r, tot) * u
    return FinVec(MIXED, out)


def _slot_sizes(x, p):
    cod = slot_codomain("X", p, 1)
    return {sid[2]: cod.slot_norm(c) for sid, c in cod.slots(x).items()}


def greedy_set(x, n, p):
    """Top-n slots by norm, ties to the lower slot index."""
    sizes = _slot_sizes(x, p)
    order = sorted(range(1, 2 * n + 1), key=lambda j: (-float(sizes.get(j, 0)), j))
    return frozenset(order[:n])


def _slot_units(n, d=1):
    return [FinVec(MIXED, {(n, "X", j, 1): 1}) for j in range(1, 2 * n + 1)]


def _subspace_checks(A, hull, hull_sets, n, rng, samples):
    lp = minimax_gap(A, hull, _slot_units(n), method="lp")
    pig_ok = True
    for _ in range(samples):
        lam = _random_simplex(rng, len(hull))
        ph = pigeonhole_witness(zip(hull_sets, lam), n)
        comb = ConvexCombination(tuple(hull), tuple(lam))
        g = residual_norm(A, comb, _slot_units(n)[ph.slot - 1])
        pig_ok &= ph.coverage <= Fraction(1, 2) and g == 1 - ph.coverage and g >= Fraction(1, 2)
    lam = lp.combination.weights
    cov = pigeonhole_witness(zip(hull_sets, lam), n).coverages
    upper = max(1 - c for c in cov)  # norm of the diagonal operator A - B from X_n to Y_n
    return lp, pig_ok, upper


def verify_calx(n=3, d=3, probes=200, lp_probes=50, samples=100, seed=0):
    rng = _rng(seed)
    cod = slot_codomain("Y", 2, INF)
    A, hull, hull_sets = slot_model(n, d, cod)
    rules_ok = all(B.check_rule() for B in [A] + hull)
    xs = _slot_units(n) + [_calx_probe(rng, n, d) for _ in range(probes)]
    bound = Fraction(1, n + 1)
    gaps, lp_ok = [], True
    for t, x in enumerate(xs):
        G = greedy_set(x, n, 2)
        B = hull[hull_sets.index(G)]
        g = residual_norm(A, ConvexCombination((B,), (1,)), x)
        gaps.append(g)
        if t < lp_probes + 2 * n:
            lp = pointwise_gap(A, hull, x, method="lp")
            lp_ok &= lp.value <= g
    mm, pig_ok, upper = _subspace_checks(A, hull, hull_sets, n, rng, samples)
    half = Fraction(1, 2)
    return GapReport(
        "calx", {"n": n, "d": d, "probes": probes, "seed": seed},
        pointwise=gaps, pointwise_max=_max(gaps), pointwise_bound=bound,
        lower=mm.value, lower_witnesses=[f"slot {j} unit vector" for j in range(1, 2 * n + 1)],
        upper=upper, upper_combination=mm.combination.to_json(),
        exact={"pointwise": True, "lower": mm.exact, "upper": True},
        checks={
            "structured rules match matrices": rules_ok,
            f"greedy pointwise gap <= 1/{n + 1}": all(g <= bound for g in gaps),
            "exact LP pointwise gap <= greedy gap": lp_ok,
            "minimax over slot witnesses >= 1/2": mm.value >= half,
            "pigeonhole slot found for sampled combinations": pig_ok,
        },
    )


def verify_mixed(p=Fraction(3, 2), q=Fraction(3), n=4, d=3, probes=200, samples=100, seed=0, tol=1e-9):
    p, q = Fraction(p), Fraction(q)
    if not 1 < p < q:
        raise ValueError("need 1 < p < q")
    rng = _rng(seed)
    cod = slot_codomain("Y", p, q)
    A, hull, hull_sets = slot_model(n, d, cod)
    r = (q - p) / (p * q)
    bound = float(n) ** (-float(r))
    xs = _slot_units(n) + [_calx_probe(rng, n, d) for _ in range(probes)]
    gaps = []
    for x in xs:
        G = greedy_set(x, n, p)
        res = A.apply(x) - hull[hull_sets.index(G)].apply(x)
        num = mixed_pq_norm(res, p, q).value if res else 0.0
        gaps.append(num / mixed_pq_norm(x, p, q).value)
    mm, pig_ok, upper = _subspace_checks(A, hull, hull_sets, n, rng, samples)
    return GapReport(
        "mixed", {"p": fmt_rational(p), "q": fmt_rational(q), "n": n, "d": d, "probes": probes, "seed": seed},
        pointwise=gaps, pointwise_max=max(gaps), pointwise_bound=bound,
        lower=mm.value, lower_witnesses=[f"slot {j} unit vector" for j in range(1, 2 * n + 1)],
        upper=upper, upper_combination=mm.combination.to_json(),
        exact={"pointwise": False, "lower": mm.exact, "upper": True},
        checks={
            f"greedy pointwise gap <= n^-r + {tol:g}": all(g <= bound + tol for g in gaps),
            "minimax over slot witnesses >= 1/2 - 1e-6": float(mm.value) >= 0.5 - 1e-6,
            "pigeonhole slot found for sampled combinations": pig_ok,
        },
        extra={"r": fmt_rational(r)},
    )


# rank-one example ---------------------------------------------------------------------
VERTICES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def rank_one_model():
    """Identity on (R^2, l_inf) and the eight extreme rank-one operators e_i* (x) v."""
    cod = coordinate_codomain("linf", INF)
    I = OperatorModel("I", NATURAL, NATURAL, {1: FinVec(NATURAL, {1: 1}), 2: FinVec(NATURAL, {2: 1})}, cod)
    hull = []
    for i in (1, 2):
        for v in VERTICES:
            vec = FinVec(NATURAL, {1: v[0], 2: v[1]})
            cols = {c: vec if c == i else FinVec(NATURAL, {}) for c in (1, 2)}
            hull.append(OperatorModel(f"e{i}*(x)({v[0]:+d},{v[1]:+d})", NATURAL, NATURAL, cols, cod))
    return I, hull


def rank_one_selector(y, hull):
    """x* norming y, x = y/||y||: weights on the extreme operators."""
    vals = {1: y[1], 2: y[2]}
    i = 1 if abs(vals[1]) >= abs(vals[2]) else 2
    top = abs(vals[i])
    s = 1 if vals[i] > 0 else -1
    x = (vals[1] / top, vals[2] / top)
    w = {}
    for v in VERTICES:
        mu = (1 + v[0] * x[0]) * (1 + v[1] * x[1]) / 4
        sv = (s * v[0], s * v[1])
        w[f"e{i}*(x)({sv[0]:+d},{sv[1]:+d})"] = w.get(f"e{i}*(x)({sv[0]:+d},{sv[1]:+d})", 0) + mu
    return ConvexCombination(tuple(hull), tuple(w.get(B.name, Fraction(0)) for B in hull))


def op_norm_inf(I, comb):
    """||I - B|| on (R^2, l_inf): largest absolute row sum, exact."""
    M = {c: I.columns[c] - comb.apply(FinVec(NATURAL, {c: 1})) for c in (1, 2)}
    return max(abs(M[1][r]) + abs(M[2][r]) for r in (1, 2))


def verify_rank_one(probes=500, samples=100, descents=20, seed=0, tol=1e-9):
    rng = _rng(seed)
    I, hull = rank_one_model()
    gaps = []
    for _ in range(probes):
        while True:
            y = FinVec(NATURAL, {1: Fraction(int(rng.integers(-12, 13)), 12),
                                 2: Fraction(int(rng.integers(-12, 13)), 12)})
            if y:
                break
        gaps.append(residual_norm(I, rank_one_selector(y, hull), y))
    fifth = Fraction(1, 5)
    sampled = [op_norm_inf(I, ConvexCombination(tuple(hull), tuple(_random_simplex(rng, len(hull)))))
               for _ in range(samples)]
    # ||I - B|| is the max over the l_inf extreme points (1, 1), (1, -1)
    wit = [FinVec(NATURAL, {1: 1, 2: 1}), FinVec(NATURAL, {1: 1, 2: -1})]
    lp = minimax_gap(I, hull, wit, method="lp")
    descended = []
    for t in range(descents):
        res = minimax_gap(I, hull, wit, method="descent", seeds=1, seed=seed * 1000 + t)
        descended.append((res.value, op_norm_inf(I, res.combination)))
    return GapReport(
        "rank-one", {"probes": probes, "samples": samples, "descents": descents, "seed": seed},
        pointwise=gaps, pointwise_max=_max(gaps), pointwise_bound=Fraction(0),
        lower=lp.value, lower_witnesses=["(1,1)", "(1,-1)"],
        upper=lp.value, upper_combination=lp.combination.to_json(),
        exact={"pointwise": True, "lower": True, "upper": True},
        checks={
            "pointwise gaps all exactly 0": all(g == 0 for g in gaps),
            "sampled hull points: ||I-B|| >= 1/5": all(v >= fifth for v in sampled),
            "descent-optimized hull points: ||I-B|| >= 1/5 - tol": all(float(v) >= 0.2 - tol for _, v in descended),
            "exact LP minimum of ||I-B|| >= 1/5": lp.value >= fifth,
        },
        extra={"sampled_min": fmt_rational(min(sampled)),
               "descent_values": [float(v) for v, _ in descended]},
    )


def verify_case(name, **kw) -> GapReport:
    if name == "ell1":
        return verify_ell1(**kw)
    if name == "calx":
        return verify_calx(**kw)
    if name == "mixed":
        return verify_mixed(**kw)
    if name in ("rank-one", "rank_one"):
        return verify_rank_one(**kw)
    raise ValueError(f"unknown case {name!r}; choose from {', '.join(CASES)}")
