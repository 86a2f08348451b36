"""Operator models, convex hulls and approximation gaps on finite truncations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np
from scipy.optimize import linprog, minimize

from ..core import FinVec, IndexScheme, fmt_rational
from ..spaces.mixed import exact_sqrt
from .lp import solve_lp

INF = "inf"


# codomain norms ----------------------------------------------------------------------
@dataclass(frozen=True)
class Codomain:
    """Norm: inner l_p inside each slot, outer l_q across slots."""

    name: str
    slot_of: Callable
    inner: object = 1
    outer: object = 1

    def slots(self, v: FinVec):
        out = {}
        for idx, c in v.items():
            out.setdefault(self.slot_of(idx), {})[idx] = c
        return out

    def slot_norm(self, coords):
        """Exact Fraction when possible, else float."""
        vals = [abs(c) for c in coords.values()]
        if not vals:
            return Fraction(0)
        p = self.inner
        if len(vals) == 1:
            return vals[0]
        if p == INF:
            return max(vals)
        if p == 1:
            return sum(vals, Fraction(0))
        if p == 2:
            r = exact_sqrt(sum((v * v for v in vals), Fraction(0)))
            if r is not None:
                return r
        return _lp_float(vals, p)

    def norm(self, v: FinVec):
        parts = [self.slot_norm(c) for c in self.slots(v).values()]
        if not parts:
            return Fraction(0)
        q = self.outer
        if len(parts) == 1:
            return parts[0]
        if all(isinstance(x, Fraction) for x in parts):
            if q == INF:
                return max(parts)
            if q == 1:
                return sum(parts, Fraction(0))
            if q == 2:
                r = exact_sqrt(sum((x * x for x in parts), Fraction(0)))
                if r is not None:
                    return r
        if q == INF:
            return max(float(x) for x in parts)
        return _lp_float(parts, q)


def _lp_float(vals, p):
    with mpmath.workdps(40):
        pp = mpmath.mpf(Fraction(p).numerator) / Fraction(p).denominator
        return float(mpmath.fsum(_mp(v) ** pp for v in vals) ** (1 / pp))


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(abs(v.numerator)) / v.denominator
    return mpmath.mpf(abs(v))


def coordinate_codomain(name, q):
    return Codomain(name, lambda idx: idx, 1, q)


def slot_codomain(name, p, q):
    """Slots of a mixed index (n, part, j, m) are the (n, part, j) triples."""
    return Codomain(name, lambda idx: idx[:3], p, q)


# operators --------------------------------------------------------------------------
@dataclass(frozen=True)
class OperatorModel:
    name: str
    dom: IndexScheme
    cod: IndexScheme
    columns: dict                   # domain index -> FinVec image
    codomain: Codomain
    rule: Callable | None = field(default=None, compare=False)

    def apply(self, x: FinVec) -> FinVec:
        if x.scheme != self.dom:
            raise ValueError(f"{self.name}: domain is {self.dom.kind}, got {x.scheme.kind}")
        out = FinVec(self.cod, {})
        for idx, c in x.items():
            col = self.columns.get(idx)
            if col is None:
                raise ValueError(f"{self.name}: index {idx!r} outside the truncated domain")
            out = out + col * c
        return out

    def check_rule(self):
        """Structured rule agrees with the matrix on every truncation basis vector."""
        if self.rule is None:
            return True
        return all(self.rule(FinVec(self.dom, {idx: 1})) == col for idx, col in self.columns.items())


@dataclass(frozen=True)
class ConvexCombination:
    points: tuple
    weights: tuple

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != len(self.points):
            raise ValueError("one weight per hull point")
        if any(v < 0 for v in w) or sum(w, Fraction(0)) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    def apply(self, x):
        out = None
        for B, w in zip(self.points, self.weights):
            if w:
                y = B.apply(x) * w
                out = y if out is None else out + y
        return out if out is not None else self.points[0].apply(x) * 0

    def to_json(self):
        return [{"op": B.name, "weight": fmt_rational(w)} for B, w in zip(self.points, self.weights) if w]


def rationalize(lam, max_den=10**9):
    """Float simplex weights -> exact weights summing to 1."""
    lam = [max(float(v), 0.0) for v in lam]
    fr = [Fraction(v).limit_denominator(max_den) for v in lam]
    s = sum(fr, Fraction(0))
    if not s:
        fr = [Fraction(1)] + [Fraction(0)] * (len(fr) - 1)
        s = Fraction(1)
    return [v / s for v in fr]


# the optimization program ---------------------------------------------------------
@dataclass
class _Slot:
    kind: str                # "sum" | "max" | "nonlinear"
    terms: list              # (weight, a0, b) with |a0 - b.lam| * weight
    vecs: tuple = ()         # nonlinear: (a0 vector, B matrix) over slot coords


def _structure(A, hull, x, cod):
    """Residual r(lam) = A x - sum lam_i B_i x, grouped into norm-ready slots."""
    v0 = A.apply(x)
    vs = [B.apply(x) for B in hull]
    slot_ids = set(cod.slots(v0))
    for v in vs:
        slot_ids |= set(cod.slots(v))
    k = len(hull)
    slots = []
    for sid in sorted(slot_ids, key=repr):
        coords = sorted({i for v in [v0] + vs for i in v.support() if cod.slot_of(i) == sid}, key=repr)
        a0 = [v0[i] for i in coords]
        B = [[v[i] for v in vs] for i in coords]
        if len(coords) == 1 or cod.inner in (1, INF):
            kind = "sum" if (cod.inner == 1 or len(coords) == 1) else "max"
            slots.append(_Slot(kind, [(Fraction(1), a0[t], B[t]) for t in range(len(coords))]))
            continue
        # collinear residual: every column a multiple of one direction u
        cols = [a0] + [[B[t][i] for t in range(len(coords))] for i in range(k)]
        u = next((c for c in cols if any(c)), None)
        piv = next(t for t, c in enumerate(u) if c)
        mult = []
        for c in cols:
            f = c[piv] / u[piv]
            if any(ci != f * ui for ci, ui in zip(c, u)):
                mult = None
                break
            mult.append(f)
        if mult is not None:
            w = Codomain("u", lambda i: 0, cod.inner, 1).slot_norm(dict(enumerate(u)))
            slots.append(_Slot("sum", [(w, mult[0], mult[1:])]))
        else:
            slots.append(_Slot("nonlinear", [], (a0, B)))
    return slots


@dataclass(frozen=True)
class GapResult:
    value: object            # Fraction when exact, else float
    combination: ConvexCombination
    exact: bool
    method: str


def _program(k, per_witness, outer):
    """Linear epigraph pieces; returns (c, A_ub, b_ub, A_eq, b_eq, nvar, nonlinear)."""
    rows, rhs, nonlin = [], [], []
    nvar = k + 1  # lam, t
    aux_rows = []  # (row dict, rhs)

    def new_var():
        nonlocal nvar
        nvar += 1
        return nvar - 1

    for slots in per_witness:
        nonpoly = any(s.kind == "nonlinear" for s in slots) or (
            outer not in (1, INF) and len([s for s in slots if _nonzero(s)]) > 1)
        slot_vars = []
        for s in slots:
            if s.kind == "nonlinear":
                nvar_s = new_var()
                nonlin.append(("slot", nvar_s, s.vecs))
                slot_vars.append(nvar_s)
                continue
            if not nonpoly and outer == INF and s.kind == "max":
                for w, a0, b in s.terms:
                    aux_rows += _abs_le(w, a0, b, {k: Fraction(-1)})
                continue
            if s.kind == "sum":
                us = []
                for w, a0, b in s.terms:
                    u = new_var()
                    aux_rows += _abs_le(Fraction(1), a0, b, {u: Fraction(-1)})
                    us.append((w, u))
                if not nonpoly and outer == INF:
                    aux_rows.append(({**{u: w for w, u in us}, k: Fraction(-1)}, Fraction(0)))
                    continue
                sv = new_var()
                aux_rows.append(({**{u: w for w, u in us}, sv: Fraction(-1)}, Fraction(0)))
                slot_vars.append(sv)
            else:  # max inside, sum or nonlinear outside
                sv = new_var()
                for w, a0, b in s.terms:
                    aux_rows += _abs_le(w, a0, b, {sv: Fraction(-1)})
                slot_vars.append(sv)
        if not slot_vars:
            continue
        if nonpoly:
            nonlin.append(("outer", k, slot_vars))
        elif outer == 1:
            aux_rows.append(({**{v: Fraction(1) for v in slot_vars}, k: Fraction(-1)}, Fraction(0)))
        else:
            for v in slot_vars:
                aux_rows.append(({v: Fraction(1), k: Fraction(-1)}, Fraction(0)))
    for row, b in aux_rows:
        dense = [Fraction(0)] * nvar
        for j, v in row.items():
            dense[j] = v
        rows.append(dense)
        rhs.append(b)
    c = [Fraction(0)] * nvar
    c[k] = Fraction(1)
    A_eq = [[Fraction(1)] * k + [Fraction(0)] * (nvar - k)]
    return c, rows, rhs, A_eq, [Fraction(1)], nvar, nonlin


def _nonzero(s):
    if s.kind == "nonlinear":
        return True
    return any(a0 or any(b) for _, a0, b in s.terms)


def _abs_le(w, a0, b, extra):
    """w*|a0 - b.lam| <= (linear form in extra)  as two rows  +-w(a0 - b.lam) + extra <= 0."""
    out = []
    for sg in (1, -1):
        row = {i: -sg * w * bi for i, bi in enumerate(b) if bi}
        for j, v in extra.items():
            row[j] = row.get(j, 0) + v
        out.append((row, -sg * w * a0))
    return out


def _solve(k, per_witness, cod, method, seeds, rng):
    c, A_ub, b_ub, A_eq, b_eq, nvar, nonlin = _program(k, per_witness, cod.outer)
    floats = any(isinstance(v, float) for row in A_ub for v in row) or any(isinstance(v, float) for v in b_ub)
    if method == "auto":
        method = "descent" if nonlin else ("lp-float" if floats else "lp")
    if method == "lp":
        if nonlin or floats:
            raise ValueError("exact LP needs a polyhedral program with rational data")
        res = solve_lp(c, A_ub, b_ub, A_eq, b_eq)
        if res.status != "optimal":
            raise RuntimeError(f"LP {res.status}")
        return res.value, list(res.x[:k]), True, "lp"
    if method == "lp-float":
        if nonlin:
            raise ValueError("float LP needs a polyhedral program")
        res = linprog(np.array(c, float), A_ub=np.array(A_ub, float), b_ub=np.array(b_ub, float),
                      A_eq=np.array(A_eq, float), b_eq=np.array(b_eq, float),
                      bounds=[(0, None)] * nvar, method="highs")
        if res.status != 0:
            raise RuntimeError(f"float LP failed: {res.message}")
        return float(res.fun), list(res.x[:k]), False, "lp-float"
    if method == "descent":
        val, lam = _descent(c, A_ub, b_ub, nvar, k, nonlin, _outer_pair(cod), seeds, rng)
        return val, lam, False, "descent"
    raise ValueError(f"unknown method {method!r}")


def _descent(c, A_ub, b_ub, nvar, k, nonlin, outer, seeds, rng):
    """SLSQP on the epigraph form from several random simplex starts."""
    A = np.array(A_ub, float).reshape(-1, nvar) if A_ub else np.zeros((0, nvar))
    b = np.array(b_ub, float)
    cons = [{"type": "eq", "fun": lambda z: np.sum(z[:k]) - 1.0}]
    if len(A):
        cons.append({"type": "ineq", "fun": lambda z: b - A @ z, "jac": lambda z: -A})
    p_in, q_out = outer
    for kind, var, data in nonlin:
        if kind == "slot":
            a0, B = np.array(data[0], float), np.array(data[1], float).reshape(len(data[0]), k)
            cons.append({"type": "ineq",
                         "fun": (lambda z, a0=a0, B=B, var=var: z[var] - _pnorm(a0 - B @ z[:k], p_in))})
        else:
            cons.append({"type": "ineq",
                         "fun": (lambda z, var=var, vs=tuple(data): z[var] - _pnorm(z[list(vs)], q_out))})
    best = None
    for _ in range(seeds):
        lam0 = rng.dirichlet(np.ones(k))
        z0 = np.zeros(nvar)
        z0[:k] = lam0
        z0[k:] = 10.0
        res = minimize(lambda z: z[k], z0, jac=lambda z: np.eye(nvar)[k], constraints=cons,
                       bounds=[(0, None)] * nvar, method="SLSQP", options={"ftol": 1e-13, "maxiter": 1000})
        if best is None or res.fun < best.fun:
            best = res
    return float(best.fun), list(best.x[:k])


def _pnorm(v, p):
    v = np.abs(v)
    if p == INF:
        return float(v.max()) if v.size else 0.0
    p = float(p)
    return float(np.sum(v ** p) ** (1 / p)) if v.size else 0.0


def _outer_pair(cod):
    return (cod.inner if cod.inner == INF else float(cod.inner), cod.outer if cod.outer == INF else float(cod.outer))


def _finish(hull, val, lam, exact, method):
    if exact:
        comb = ConvexCombination(tuple(hull), tuple(lam))
    else:
        comb = ConvexCombination(tuple(hull), tuple(rationalize(lam)))
    return GapResult(val, comb, exact, method)


def pointwise_gap(A: OperatorModel, hull, x: FinVec, method="auto", seeds=20, seed=0) -> GapResult:
    """min over the hull of ||(A - B)x||."""
    return minimax_gap(A, hull, [x], method, seeds, seed)


def minimax_gap(A: OperatorModel, hull, witnesses, method="auto", seeds=20, seed=0) -> GapResult:
    """min over the simplex of the max over witnesses of ||(A - sum lam_i B_i) x||."""
    hull = list(hull)
    witnesses = list(witnesses)
    if not witnesses:
        raise ValueError("empty witness set")
    if not hull:
        raise ValueError("empty hull")
    for B in hull:
        if B.dom != A.dom or B.cod != A.cod:
            raise ValueError(f"dimension mismatch between {A.name} and {B.name}")
    cod = A.codomain
    per = [_structure(A, hull, w, cod) for w in witnesses]
    rng = np.random.Generator(np.random.PCG64(seed))
    val, lam, exact, used = _solve(len(hull), per, cod, method, seeds, rng)
    return _finish(hull, val, lam, exact, used)


def residual_norm(A, comb: ConvexCombination, x):
    """Exact (or float) ||(A - B)x|| for a concrete combination B."""
    return A.codomain.norm(A.apply(x) - comb.apply(x))


# pigeonhole ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Pigeonhole:
    slot: int
    coverage: Fraction
    coverages: tuple


def pigeonhole_witness(combination, n) -> Pigeonhole:
    """Least slot j in 1..2n with sum lam_i [j in G_i] <= 1/2.

    combination: iterable of (G, lam) with #G = n and G within 1..2n.
    """
    combination = [(frozenset(G), Fraction(w)) for G, w in combination]
    for G, w in combination:
        if len(G) != n or not all(isinstance(j, int) and 1 <= j <= 2 * n for j in G):
            raise ValueError(f"malformed G {sorted(G)}: need {n} slots within 1..{2 * n}")
        if w < 0:
            raise ValueError("negative weight")
    if sum((w for _, w in combination), Fraction(0)) != 1:
        raise ValueError("weights must sum to 1")
    cov = tuple(sum((w for G, w in combination if j in G), Fraction(0)) for j in range(1, 2 * n + 1))
    assert sum(cov, Fraction(0)) == n  # mean coverage is exactly 1/2
    j = next(j for j in range(1, 2 * n + 1) if cov[j - 1] <= Fraction(1, 2))
    return Pigeonhole(j, cov[j - 1], cov)
