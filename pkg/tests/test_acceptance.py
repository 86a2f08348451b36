"""Acceptance criteria, one test each, at the stated tolerances and time budgets.

Run alone with ``pytest tests/test_acceptance.py``; the summary section lists
one PASS/FAIL line per criterion.
"""
import json
import os
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from ualslab.asymptotics import (
    CoeffNet,
    build_level_block_family,
    james_pair,
    jsm_estimate,
    jt_level_blocks,
    level_block_check,
    lp_basis,
    lp_blocks,
    suppression_constant,
)
from ualslab.cli import run
from ualslab.core import DYADIC, NATURAL, FinVec, vec_write
from ualslab.plegma import interleaved_vec, plegma_count, plegma_count_brute, plegma_enumerate, plegma_shift, ramsey_search
from ualslab.spaces import (
    DEFAULT_MU,
    QuadSurd,
    SigmaRegistry,
    build_special_vectors,
    evaluate,
    james_norm_sq,
    james_norm_sq_brute,
    jt_norm_sq,
    jt_norm_sq_brute,
    mr_norm_bounds,
    realize_pair,
)
from ualslab.uals import verify_case

SEED = 20240601


def rng(*extra):
    return np.random.Generator(np.random.PCG64([SEED, *extra]))


def rand_q(g):
    return Fraction(int(g.integers(-9, 10)), int(g.integers(1, 7)))


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_c01_norm_oracles_exact(criterion):
    g = rng(1)

    def james():
        bad = 0
        for _ in range(1000):
            idx = g.choice(np.arange(1, 11), size=int(g.integers(1, 11)), replace=False)
            x = FinVec(NATURAL, {int(i): rand_q(g) for i in idx})
            bad += james_norm_sq(x).value != james_norm_sq_brute(x)
        return bad

    nodes = [format(v, f"0{d}b") if d else "" for d in range(5) for v in range(2 ** d)]

    def jt():
        bad = 0
        for _ in range(500):
            idx = g.choice(len(nodes), size=int(g.integers(1, 9)), replace=False)
            x = FinVec(DYADIC, {nodes[int(i)]: rand_q(g) for i in idx})
            res = jt_norm_sq(x)
            bad += res.value != jt_norm_sq_brute(x)
            bad += sum(s.value(x) ** 2 for s in res.witness) != res.value
        return bad

    bj, tj = timed(james)
    bt, tt = timed(jt)
    ok = bj == 0 and bt == 0 and tj < 60 and tt < 120
    criterion(1, "norm oracles equal brute force", ok,
              f"james 1000 vectors: {bj} mismatches in {tj:.1f}s; jt 500 vectors: {bt} mismatches in {tt:.1f}s")
    assert ok


def test_c02_plegma_counts(criterion):
    cases = [(4, 2, 1), (4, 2, 2), (6, 2, 2), (6, 3, 2)]
    got = {}

    def work():
        for m, l, k in cases:
            for strict in (True, False):
                got[(m, l, k, strict)] = (plegma_count(range(1, m + 1), l, k, strict),
                                          plegma_count_brute(range(1, m + 1), l, k, strict))

    _, t = timed(work)
    ok = all(a == b for a, b in got.values()) and t < 10
    detail = ", ".join(f"{m, l, k}: {got[(m, l, k, True)][0]}" for m, l, k in cases)
    criterion(2, "plegma counts match the filter oracle", ok, f"strict counts {detail}; {t:.2f}s")
    assert ok


def test_c03_james_plegma_shift_isometry(criterion):
    g = rng(3)

    def work():
        total = bad = 0
        for k in (1, 2, 3):
            fams = list(plegma_enumerate(range(1, 9), 2, k, True))
            for _ in range(200):
                x = interleaved_vec(2, {(i, j): rand_q(g) for i in (1, 2) for j in range(1, k + 1)})
                base = james_norm_sq(realize_pair(x)).value
                for f in fams:
                    total += 1
                    bad += james_norm_sq(realize_pair(plegma_shift(x, f))).value != base
        return total, bad

    (total, bad), t = timed(work)
    ok = bad == 0 and t < 60
    criterion(3, "plegma shifts are isometries on the James pair", ok, f"{total} shifted vectors, {bad} mismatches, {t:.1f}s")
    assert ok


def test_c04_maurey_rosenthal_bounds(criterion):
    def work():
        rows = []
        for n in (1, 2, 3):
            reg = SigmaRegistry()
            plus, alt, seq = build_special_vectors(n, reg=reg)
            bp = mr_norm_bounds(plus, reg=reg, seq=seq)
            ba = mr_norm_bounds(alt, reg=reg, seq=seq)
            attained = evaluate(bp.witness, plus).lo == bp.lower
            rows.append((n, bp.lower, ba.upper, attained))
        return rows

    rows, t = timed(work)
    cert = DEFAULT_MU.certificate()
    ok = all(lo >= 2 * n and up <= 5 and att for n, lo, up, att in rows) and cert.total <= Fraction(1, 2) and t < 120
    detail = "; ".join(f"n={n}: plus >= {lo}, alt <= {float(up):.4f}" for n, lo, up, _ in rows)
    criterion(4, "special vectors: plus >= 2n, alternating <= 5, mu certificate <= 1/2", ok,
              f"{detail}; certificate {float(cert.total):.3g}; {t:.1f}s")
    assert ok


def test_c05_jt_level_block_bounds(criterion):
    cap = 2 * Fraction(105, 100) ** 2
    g = rng(5)

    def work():
        out = []
        for t in range(20):
            l, bands = 1 + t % 2, 2 + t % 3
            fam = build_level_block_family(2 * bands + 1, bands, l, seed=SEED + t)
            coeffs = [tuple(s) for s in product((1, -1), repeat=bands)]
            while len(coeffs) < 2 ** bands + 100:
                v = tuple(Fraction(int(c), 8) for c in g.integers(-8, 9, size=bands))
                if any(v):
                    coeffs.append(v)
            lo = min(level_block_check(fam, a, check=(a is coeffs[0])).lower for a in coeffs)
            hi = max(level_block_check(fam, a, check=False).upper for a in coeffs)
            out.append((l, bands, lo, hi, fam.eps))
        return out

    rows, t = timed(work)
    lo = min(r[2] for r in rows)
    hi = max(r[3] for r in rows)
    equiv = max(hi, 1 / lo)
    equiv_root = float(QuadSurd.sqrt(equiv))
    ok = lo >= 1 and hi <= cap and equiv_root <= 2 ** 0.5 + 0.1 and t < 300
    criterion(5, "JT level block families: 1 <= ratio <= 2(1.05)^2", ok,
              f"20 families, ratio in [{float(lo):.4f}, {float(hi):.4f}], equivalence {equiv_root:.4f}, "
              f"eps used up to {max(r[4] for r in rows)}; {t:.1f}s")
    assert ok


def test_c06_jt_norming_cardinality(criterion):
    g = rng(6)
    nodes = [format(v, f"0{d}b") if d else "" for d in range(6) for v in range(2 ** d)]

    def work():
        worst = {e: 0 for e in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))}
        bad = 0
        for _ in range(200):
            idx = g.choice(len(nodes), size=int(g.integers(1, 16)), replace=False)
            x = FinVec(DYADIC, {nodes[int(i)]: rand_q(g) for i in idx})
            res = jt_norm_sq(x)
            # with y = x/||x||: |S*(y)| >= eps  <=>  S*(x)^2 >= eps^2 ||x||^2
            for e in worst:
                big = sum(1 for s in res.witness if s.value(x) ** 2 >= e * e * res.value)
                worst[e] = max(worst[e], big)
                bad += big > 1 / (e * e)
        return worst, bad

    (worst, bad), t = timed(work)
    ok = bad == 0 and t < 60
    detail = ", ".join(f"eps={e}: max {w} <= {int(1 / (e * e))}" for e, w in worst.items())
    criterion(6, "JT witness segments with |S*(x)| >= eps number at most 1/eps^2", ok, f"{detail}; {t:.1f}s")
    assert ok


def _case(number, title, name, budget, **kw):
    rep, t = timed(lambda: verify_case(name, seed=SEED, **kw))
    ok = rep.passed and t < budget
    return rep, t, ok


def test_c07_ell1_counterexample(criterion):
    rep, t, ok = _case(7, "", "ell1", 60, m=50, probes=200, samples=100)
    criterion(7, "l1 counterexample: pointwise gap 0, subspace gap >= 1/2", ok,
              f"max pointwise {rep.pointwise_max}, LP minimax {rep.lower}, "
              f"sampled min {rep.extra['sampled_min']}; {t:.1f}s")
    assert ok, rep.summary()


def test_c08_calx_counterexample(criterion):
    rep, t, ok = _case(8, "", "calx", 120, n=3, probes=200)
    criterion(8, "calX counterexample n=3: greedy gap <= 1/4, pigeonhole gap >= 1/2", ok,
              f"max greedy gap {rep.pointwise_max} over {len(rep.pointwise)} probes, minimax {rep.lower}; {t:.1f}s")
    assert ok, rep.summary()


def test_c09_mixed_counterexample(criterion):
    rep, t, ok = _case(9, "", "mixed", 120, p=Fraction(3, 2), q=Fraction(3), n=4, probes=200)
    criterion(9, "mixed (3/2, 3) counterexample n=4: gap <= n^-r, subspace gap >= 1/2", ok,
              f"max gap {rep.pointwise_max:.6f} <= {rep.pointwise_bound:.6f}, minimax {rep.lower}; {t:.1f}s")
    assert ok, rep.summary()


def test_c10_rank_one_example(criterion):
    rep, t, ok = _case(10, "", "rank-one", 30, probes=500, samples=100, descents=20)
    criterion(10, "rank-one example: pointwise gap 0, ||I-B|| >= 1/5", ok,
              f"sampled min {rep.extra['sampled_min']}, descent min {min(rep.extra['descent_values']):.6f}, "
              f"exact LP min {rep.lower}; {t:.1f}s")
    assert ok, rep.summary()


def test_c11_stabilization(criterion):
    zero = QuadSurd.rational(0)

    def work():
        out = {}
        for name, gen in (("l2", lp_basis(2, 2)), ("l1", lp_blocks(1, 2, 2)), ("james", james_pair())):
            est = jsm_estimate(gen, k_max=3, net=CoeffNet(seed=SEED), ground=range(1, 11))
            out[name] = (est.status, [est.oscillation(k) for k in (1, 2, 3)], len(est.rows))
        return out

    res, t = timed(work)
    ok = all(st == "ok" and all(o == zero for o in osc) for st, osc, _ in res.values()) and t < 60
    detail = ", ".join(f"{n}: {st}, {rows} rows, osc {[str(o) for o in osc]}" for n, (st, osc, rows) in res.items())
    criterion(11, "joint spreading estimates stabilize with oscillation 0 (k <= 3)", ok, f"{detail}; {t:.1f}s")
    assert ok


def test_c12_suppression_unconditional(criterion):
    def work():
        out = {}
        for p in (Fraction(3, 2), Fraction(2), Fraction(3)):
            gen = lp_basis(p, 2)
            vecs = [gen(i, n) for n in (1, 2) for i in (1, 2)]
            out[f"l{p}"] = float(suppression_constant(vecs, gen.oracle, seed=SEED))
        gen = jt_level_blocks(l=2, n_bands=4, seed=SEED)
        vecs = [gen(i, n) for n in (1, 2) for i in (1, 2)]
        out["jt-level"] = float(suppression_constant(vecs, gen.oracle, seed=SEED))
        return out

    res, t = timed(work)
    ok = all(v <= 1.1 for v in res.values()) and t < 120
    criterion(12, "suppression constant <= 1.1 at l=2, k=2", ok,
              ", ".join(f"{k}: {v:.6f}" for k, v in res.items()) + f"; {t:.1f}s")
    assert ok


def test_c13_ramsey_desk_search(criterion):
    res, t = timed(lambda: ramsey_search("parity", range(1, 31), 2, 1, 5))
    consts = [ramsey_search("constant", range(1, 13), l, k, T).L == tuple(range(1, T + 1))
              for l, k, T in ((2, 1, 5), (2, 2, 6), (3, 1, 4))]
    ok = res.status == "found" and len(res.L) == 5 and t < 10 and all(consts)
    fams = list(plegma_enumerate(res.L, 2, 1, True)) if res.L else []
    mono = len({sum(v for r in f.rows for v in r) % 2 for f in fams}) == 1
    ok = ok and mono
    criterion(13, "Ramsey search: parity over 1..30 gives a length-5 set; constant gives first colex set", ok,
              f"L = {res.L} ({res.color}, {len(fams)} families, {res.nodes} nodes, {t:.3f}s)")
    assert ok


def test_c14_determinism(criterion, tmp_path):
    reg_path = str(tmp_path / "reg.jsonl")
    plus, _, _ = build_special_vectors(2, reg=SigmaRegistry(reg_path))
    vec_write(plus, tmp_path / "plus.json")
    vec_write(FinVec(NATURAL, {1: 3, 2: Fraction(-1, 2), 7: 2}), tmp_path / "nat.json")
    vec_write(FinVec(DYADIC, {"": 1, "0": Fraction(2, 3), "10": -1}), tmp_path / "tree.json")
    commands = [
        ["norm", "--space", "james", "--vec", str(tmp_path / "nat.json"), "--witness"],
        ["norm", "--space", "jt", "--vec", str(tmp_path / "tree.json"), "--witness"],
        ["norm", "--space", "mr", "--vec", str(tmp_path / "plus.json"), "--registry", reg_path, "--witness"],
        ["plegma", "enum", "--ground", "1..6", "--l", "3", "--k", "2"],
        ["ramsey", "--color", "parity", "--ground", "1..30", "--len", "5"],
        ["jsm", "--gen", "james-pair", "--kmax", "2", "--ground", "1..8", "--n-random", "20", "--seed", "5"],
        ["ucs", "--gen", "jt-level", "--l", "2", "--k", "2", "--seed", "5"],
        ["jt-family", "--bands", "3", "--l", "2", "--random", "20", "--seed", "5"],
        ["uals", "verify", "--case", "ell1", "--probes", "50", "--seed", "5"],
        ["uals", "verify", "--case", "calx", "--n", "2", "--probes", "50", "--seed", "5"],
        ["uals", "verify", "--case", "mixed", "--probes", "50", "--seed", "5"],
        ["uals", "verify", "--case", "rank-one", "--probes", "100", "--seed", "5"],
    ]

    def work():
        same = 0
        first = {}
        for argv in commands:
            a = run(argv)[2]
            b = run(argv)[2]
            first[" ".join(argv[:2])] = a
            same += a["digest"] == b["digest"] and a["registry_hash"] == b["registry_hash"]
        return same, first

    (same, first), t = timed(work)
    # the pure numpy kernels give the same report bytes
    env = dict(os.environ, UALSLAB_DISABLE_NUMBA="1")
    argv = commands[1] + ["--json"]
    out = subprocess.run([sys.executable, "-m", "ualslab", *argv], env=env, capture_output=True, text=True, check=True)
    from ualslab.cli import digest
    cross = digest(json.loads(out.stdout)) == run(commands[1])[2]["digest"]
    ok = same == len(commands) and cross
    criterion(14, "reruns with the same seed give byte-identical report digests", ok,
              f"{same}/{len(commands)} commands stable, numpy-only backend digest equal: {cross}; {t:.1f}s")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
