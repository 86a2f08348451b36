"""Command-line front end: ``ualslab <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage error or unreadable input.
Every report is a JSON document with a "schema" field; its digest is the
sha256 of the canonical JSON text.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from itertools import product

import mpmath
import numpy as np

from . import __version__
from .asymptotics import (
    BUILTIN_NAMES,
    JAMES,
    JT,
    CoeffNet,
    HypothesisError,
    Norm,
    build_level_block_family,
    builtin,
    equivalence_constant,
    from_lists,
    jsm_estimate,
    level_block_check,
    lp_norm_of,
    lp_oracle,
    matrix_text,
    suppression_constant,
)
from .core import DocumentError, canonical_json, fmt_rational, parse_rational, vec_read, vec_to_doc
from .plegma import BUILTIN_COLORINGS, PlegmaFamily, parse_rows, plegma_enumerate, plegma_shift, plegma_validate, ramsey_search
from .spaces import (
    SigmaRegistry,
    calx_norm_sq,
    describe,
    james_norm_sq,
    jt_norm_sq,
    mixed_pq_norm,
    mr_norm_bounds,
)
from .uals import CASES, verify_case

MANIFEST_SCHEMA = "ualslab.manifest/1"
EMPTY_HASH = hashlib.sha256(b"").hexdigest()


class UsageError(Exception):
    pass


# argument helpers ----------------------------------------------------------------------
def ground_range(text):
    """'A..B' (inclusive) or a comma list."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            a, b = int(a), int(b)
            if a < 1 or b < a:
                raise ValueError
            return list(range(a, b + 1))
        vals = sorted({int(v) for v in text.split(",")})
        if not vals or vals[0] < 1:
            raise ValueError
        return vals
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ground set {text!r}; use A..B or a comma list of naturals") from None


def rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def exponent(text):
    if text.lower() in ("inf", "infinity"):
        return "inf"
    v = rational(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1, got {text}")
    return v


def rows_arg(text):
    try:
        return parse_rows(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def decimal(q, digits=12):
    q = Fraction(q)
    return mpmath.nstr(mpmath.mpf(q.numerator) / q.denominator, digits)


def sqrt_decimal(q, digits=12):
    q = Fraction(q)
    return mpmath.nstr(mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator), digits)


def _exp_text(p):
    return p if p == "inf" else fmt_rational(p)


def _load_vec(path):
    try:
        return vec_read(path)
    except (OSError, DocumentError) as exc:
        raise UsageError(f"cannot read vector {path}: {exc}") from None


def _rng(seed, *extra):
    return np.random.Generator(np.random.PCG64([seed, *extra]))


class Outcome:
    """What a command hands back to the dispatcher."""

    def __init__(self, schema, report, text, passed=True, table=None):
        self.report = {"schema": schema, **report}
        self.text = text
        self.passed = passed
        self.table = table  # (header, rows) or None
        self.registry_hash = EMPTY_HASH


# norm ---------------------------------------------------------------------------------
def cmd_norm(args):
    x = _load_vec(args.vec)
    sp = args.space
    rep = {"space": sp, "vector": vec_to_doc(x)}
    lines = []
    reg_hash = EMPTY_HASH
    try:
        if sp in ("james", "jt"):
            res = james_norm_sq(x) if sp == "james" else jt_norm_sq(x)
            rep["norm_sq"] = fmt_rational(res.value)
            rep["norm_sq_decimal"] = decimal(res.value)
            lines.append(f"norm^2 = {fmt_rational(res.value)} ~ {decimal(res.value)}")
            if args.witness:
                wit = [list(w) for w in res.witness] if sp == "james" else [list(s.describe()) for s in res.witness]
                rep["witness"] = wit
                lines.append(f"witness {'intervals' if sp == 'james' else 'segments'}: {wit}")
        elif sp == "calx":
            v = calx_norm_sq(x).value
            rep["norm_sq"] = v.to_json()
            rep["norm_sq_text"] = repr(v)
            rep["norm_sq_decimal"] = v.decimal(12)
            lines.append(f"norm^2 = {v!r} ~ {v.decimal(12)}")
        elif sp == "mixed":
            if args.p is None or args.q is None:
                raise UsageError("--space mixed needs --p and --q")
            v = mixed_pq_norm(x, args.p, args.q)
            rep.update({"p": _exp_text(args.p), "q": _exp_text(args.q), "norm": repr(v.value),
                        "error_bound": repr(v.error), "floating_point": v.exact is None})
            if v.exact is not None:
                rep["norm_exact"] = v.exact.to_json()
            lines.append(f"norm ~ {v.value!r} (error <= {v.error:.3g})")
        elif sp == "mr":
            reg = SigmaRegistry(args.registry)
            b = mr_norm_bounds(x, reg=reg)
            reg_hash = reg.snapshot_hash()
            rep.update({"lower": fmt_rational(b.lower), "upper": fmt_rational(b.upper),
                        "lower_decimal": decimal(b.lower), "upper_decimal": decimal(b.upper),
                        "exact": b.exact, "upper_case": b.upper_case})
            lines.append(f"{fmt_rational(b.lower)} <= norm <= {fmt_rational(b.upper)}"
                         f"  (~ {decimal(b.lower)} .. {decimal(b.upper)}; {b.upper_case})")
            if args.witness:
                rep["witness"] = describe(b.witness) if b.witness is not None else None
                lines.append(f"witness: {canonical_json(rep['witness'])}")
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    out = Outcome("ualslab.norm/1", rep, "\n".join(lines))
    out.registry_hash = reg_hash
    return out


# plegma -------------------------------------------------------------------------------
def cmd_plegma_enum(args):
    fams = plegma_enumerate(args.ground, args.l, args.k, strict=args.strict)
    texts = [f.text() for f in fams]
    rep = {"ground": args.ground, "l": args.l, "k": args.k, "strict": args.strict,
           "count": len(texts), "families": texts}
    body = "\n".join(texts + [f"{len(texts)} famil{'y' if len(texts) == 1 else 'ies'}"])
    return Outcome("ualslab.plegma-enum/1", rep, body, table=(["family"], [[t] for t in texts]))


def cmd_plegma_check(args):
    ok, why = plegma_validate(args.rows, strict=not args.non_strict)
    rep = {"rows": [list(r) for r in args.rows], "strict": not args.non_strict, "valid": ok, "reason": why}
    return Outcome("ualslab.plegma-check/1", rep, "valid" if ok else f"invalid: {why}", passed=ok)


def cmd_plegma_shift(args):
    x = _load_vec(args.vec)
    try:
        fam = PlegmaFamily(args.family, strict=not args.non_strict)
        y = plegma_shift(x, fam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = vec_to_doc(y)
    return Outcome("ualslab.plegma-shift/1", {"family": fam.text(), "input": vec_to_doc(x), "output": doc},
                   canonical_json(doc))


def cmd_ramsey(args):
    try:
        res = ramsey_search(args.color, args.ground, args.l, args.k, args.len, budget=args.budget)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    rep = {"color": args.color, "ground": args.ground, "l": args.l, "k": args.k, "len": args.len,
           "status": res.status, "L": list(res.L) if res.L else None,
           "color_value": res.color, "nodes": res.nodes}
    if res.status == "found":
        text = f"L = {','.join(map(str, res.L))} (color {res.color}; {res.nodes} nodes)"
    else:
        text = f"no monochromatic set ({res.status}; {res.nodes} nodes)"
    return Outcome("ualslab.ramsey/1", rep, text, passed=res.status == "found")


# spreading models ----------------------------------------------------------------------
ORACLES = {"james": JAMES, "jt": JT}


def load_generator(args):
    """Built-in name, or a JSON file {"space": ..., ["p": ...,] "vectors": [[vec, ...], ...]}."""
    name = args.gen
    if name in BUILTIN_NAMES:
        try:
            return builtin(name, l=args.l or 2, p=args.p, seed=args.seed, n_bands=args.bands)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        with open(name, encoding="utf-8") as fh:
            doc = json.load(fh)
        space = doc["space"]
        oracle = lp_oracle(exponent(str(doc.get("p", "2")))) if space == "lp" else ORACLES[space]
        vectors = [[vec_read(v) for v in seq] for seq in doc["vectors"]]
    except FileNotFoundError:
        raise UsageError(f"{name!r} is neither a built-in generator ({', '.join(BUILTIN_NAMES)}) nor a file") from None
    except (OSError, KeyError, TypeError, ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"cannot read generator file {name}: {exc}") from None
    return from_lists(vectors, oracle, name=os.path.basename(name))


def _schedule(text):
    if text is None:
        return None
    try:
        return tuple(parse_rational(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad schedule: {exc}") from None


def _norm_cells(n: Norm):
    return (fmt_rational(n.sq) if n.exact else "", repr(float(n)))


def cmd_jsm(args):
    gen = load_generator(args)
    net = CoeffNet(n_random=args.n_random, seed=args.seed, cap=args.cap)
    try:
        est = jsm_estimate(gen, l=args.l, k_max=args.kmax, net=net, sched=_schedule(args.schedule),
                           ground=args.ground, min_len=args.min_len, budget=args.budget)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from None
    header = ["k", "coefficients", "norm_sq", "norm", "oscillation", "ratio_l1", "ratio_l2", "ratio_linf", "families"]
    rows = []
    for r in est.rows:
        flat = [c for row in r.coeffs for c in row]
        osc = r.oscillation
        ratios = []
        for p in (1, 2, "inf"):
            ap = lp_norm_of(flat, p)
            ratios.append("" if r.norm.is_zero() else repr(float(r.norm.ratio(ap))))
        sq, fl = _norm_cells(r.norm)
        rows.append([r.k, matrix_text(r.coeffs), sq, fl,
                     repr(osc) if not isinstance(osc, float) else repr(osc), *ratios, r.families])
    oscs = {k: est.oscillation(k) for k in range(1, args.kmax + 1)}
    rep = {"generator": est.generator, "l": est.l, "k_max": est.k_max, "L": list(est.L),
           "schedule": [fmt_rational(d) for d in est.schedule], "status": est.status,
           "failure": est.failure, "missing": list(est.missing), "nodes": est.nodes, "notes": est.notes,
           "oscillation": {str(k): (None if v is None else repr(v)) for k, v in oscs.items()},
           "rows": len(rows)}
    lines = [f"generator {est.generator}: {est.status}; L = {','.join(map(str, est.L))}"]
    for k, v in oscs.items():
        lines.append(f"  k={k}: max oscillation {v!r} (delta {fmt_rational(est.schedule[k - 1])})")
    if est.status == "ok":
        eq = equivalence_constant(est, p=args.p if args.gen == "lp" else 2)
        rep["equivalence_l2"] = eq.to_json()
        lines.append(f"  equivalence constant to l2 ~ {float(eq):.12g}")
    if est.failure:
        lines.append(f"  first conflict: {canonical_json(est.failure)}")
    return Outcome("ualslab.jsm/1", rep, "\n".join(lines), passed=est.status == "ok", table=(header, rows))


# generators whose suppression constant is claimed to be at most 1 + 0.1
def _ucs_claimed(args):
    return (args.gen in ("lp", "lp-blocks") and args.p != 1) or args.gen == "jt-level"


def cmd_ucs(args):
    gen = load_generator(args)
    l = args.l or gen.l
    try:
        vectors = [gen(i, n) for n in range(1, args.k + 1) for i in range(1, l + 1)]
        c = suppression_constant(vectors, gen.oracle, seed=args.seed, n_random=args.n_random)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from None
    claimed = _ucs_claimed(args)
    ok = float(c) <= 1.1 + 1e-12 if claimed else True
    rep = {"generator": gen.name, "l": l, "k": args.k, "constant": c.to_json(),
           "bound": "11/10" if claimed else None, "passed": ok}
    text = f"suppression constant ~ {float(c):.12g}" + (f" (bound 1.1: {'PASS' if ok else 'FAIL'})" if claimed else "")
    return Outcome("ualslab.ucs/1", rep, text, passed=ok)


RATIO_CAP = 2 * Fraction(105, 100) ** 2


def cmd_jt_family(args):
    try:
        fam = build_level_block_family(depth_budget=2 * args.bands + 2, n_families=args.bands, l=args.l,
                                       seed=args.seed)
    except (ValueError, HypothesisError) as exc:
        raise UsageError(str(exc)) from None
    n = fam.n
    rng = _rng(args.seed, 1)
    coeffs = [tuple(s) for s in product((1, -1), repeat=n)]
    for _ in range(args.random):
        v = [Fraction(int(t), 8) for t in rng.integers(-8, 9, size=n)]
        if any(v):
            coeffs.append(tuple(v))
    lo = hi = None
    for a in coeffs:
        r = level_block_check(fam, a, check=False)
        lo = r.lower if lo is None or r.lower < lo else lo
        hi = r.upper if hi is None or r.upper > hi else hi
    equiv = max(hi, 1 / lo)  # squared equivalence constant
    ok = lo >= 1 and hi <= RATIO_CAP and float(mpmath.sqrt(float(equiv))) <= 2 ** 0.5 + 0.1
    rep = {"bands": n, "l": args.l, "seed": args.seed, "vectors": args.random,
           "eps_seq": [fmt_rational(e) for e in fam.eps_seq], "eps": fmt_rational(fam.eps),
           "certificate": fmt_rational(fam.certificate()),
           "levels": [b.lo for b in fam.bands], "coefficient_vectors": len(coeffs),
           "ratio_min": fmt_rational(lo), "ratio_max": fmt_rational(hi),
           "ratio_cap": fmt_rational(RATIO_CAP), "equivalence_sq": fmt_rational(equiv),
           "equivalence": sqrt_decimal(equiv), "passed": ok}
    text = "\n".join([
        f"level block family: {n} bands, l={args.l}, levels {[b.lo for b in fam.bands]}",
        f"  hypotheses hold; budget certificate {decimal(fam.certificate(), 6)} < eps = {fmt_rational(fam.eps)}",
        f"  ratio ||sum a_i x_i||^2 / sum a_i^2 in [{decimal(lo)}, {decimal(hi)}] over {len(coeffs)} coefficient vectors",
        f"  equivalence constant to l2 ~ {sqrt_decimal(equiv)}",
        f"  {'PASS' if ok else 'FAIL'}: 1 <= ratio <= 2(1.05)^2 and equivalence <= sqrt(2) + 0.1",
    ])
    return Outcome("ualslab.jt-family/1", rep, text, passed=ok)


# uals ----------------------------------------------------------------------------------
def cmd_uals_verify(args):
    kw = {"seed": args.seed}
    case = args.case
    if case == "ell1":
        if args.n is not None:
            kw["m"] = args.n
    elif case in ("calx", "mixed"):
        if args.n is not None:
            kw["n"] = args.n
        if args.d is not None:
            kw["d"] = args.d
    if case == "mixed":
        if args.p is not None:
            kw["p"] = args.p
        if args.q is not None:
            kw["q"] = args.q
    elif args.p is not None or args.q is not None:
        raise UsageError("--p/--q only apply to --case mixed")
    if args.probes is not None:
        kw["probes"] = args.probes
    try:
        rep = verify_case(case, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = rep.to_json()
    doc.pop("schema")
    header = ["probe", "gap"]
    rows = [[t, v] for t, v in enumerate(doc["pointwise"], start=1)]
    return Outcome("ualslab.gapreport/1", doc, rep.summary(), passed=rep.passed, table=(header, rows))


# dispatch ------------------------------------------------------------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for every stochastic step")
    common.add_argument("--out", metavar="DIR", help="write report.json, manifest.json (and table.csv) here")
    common.add_argument("--jobs", type=int, default=1, help="worker bound (runs are single-threaded)")
    common.add_argument("--json", action="store_true", help="print the report JSON instead of the summary")

    p = argparse.ArgumentParser(prog="ualslab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ualslab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("norm", parents=[common], help="evaluate a norm")
    s.add_argument("--space", required=True, choices=["james", "jt", "mr", "calx", "mixed"])
    s.add_argument("--vec", required=True, help="vector document (JSON)")
    s.add_argument("--p", type=exponent)
    s.add_argument("--q", type=exponent)
    s.add_argument("--witness", action="store_true")
    s.add_argument("--registry", help="sigma registry log (JSON lines) for --space mr")
    s.set_defaults(fn=cmd_norm)

    pl = sub.add_parser("plegma", help="plegma families").add_subparsers(dest="plegma_cmd", required=True,
                                                                         metavar="action")
    s = pl.add_parser("enum", parents=[common], help="enumerate families")
    s.add_argument("--ground", required=True, type=ground_range)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--strict", action="store_true")
    s.set_defaults(fn=cmd_plegma_enum)
    s = pl.add_parser("check", parents=[common], help="validate rows like '1,3;2,4'")
    s.add_argument("rows", type=rows_arg)
    s.add_argument("--non-strict", action="store_true")
    s.set_defaults(fn=cmd_plegma_check)
    s = pl.add_parser("shift", parents=[common], help="apply a plegma shift to an interleaved vector")
    s.add_argument("--vec", required=True)
    s.add_argument("--family", required=True, type=rows_arg)
    s.add_argument("--non-strict", action="store_true")
    s.set_defaults(fn=cmd_plegma_shift)

    s = sub.add_parser("ramsey", parents=[common], help="monochromatic set search")
    s.add_argument("--color", required=True, help=f"one of {', '.join(sorted(BUILTIN_COLORINGS))}")
    s.add_argument("--ground", required=True, type=ground_range)
    s.add_argument("--len", type=int, required=True)
    s.add_argument("--l", type=int, default=2)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--budget", type=int, default=2_000_000)
    s.set_defaults(fn=cmd_ramsey)

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--gen", required=True, help=f"built-in ({', '.join(BUILTIN_NAMES)}) or a JSON file")
    gen.add_argument("--l", type=int)
    gen.add_argument("--p", type=exponent, default=Fraction(2), help="exponent for the lp built-ins")
    gen.add_argument("--bands", type=int, default=5, help="bands for jt-level")
    gen.add_argument("--n-random", type=int, default=200)

    s = sub.add_parser("jsm", parents=[common, gen], help="joint spreading model estimate")
    s.add_argument("--kmax", type=int, default=2)
    s.add_argument("--ground", type=ground_range, default=list(range(1, 13)))
    s.add_argument("--schedule", help="comma list of rationals, default 1/2,1/4,...")
    s.add_argument("--cap", type=int, default=64, help="sign patterns kept per k")
    s.add_argument("--min-len", type=int)
    s.add_argument("--budget", type=int, default=20000)
    s.set_defaults(fn=cmd_jsm)

    s = sub.add_parser("ucs", parents=[common, gen], help="suppression unconditionality constant")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(fn=cmd_ucs)

    s = sub.add_parser("jt-family", parents=[common], help="build and test a level block family in JT")
    s.add_argument("--bands", type=int, default=4)
    s.add_argument("--l", type=int, default=2)
    s.add_argument("--random", type=int, default=100, help="random coefficient vectors besides all signs")
    s.set_defaults(fn=cmd_jt_family)

    u = sub.add_parser("uals", help="UALS counterexamples").add_subparsers(dest="uals_cmd", required=True,
                                                                           metavar="action")
    s = u.add_parser("verify", parents=[common], help="verify a counterexample")
    s.add_argument("--case", required=True, choices=list(CASES))
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--p", type=rational)
    s.add_argument("--q", type=rational)
    s.add_argument("--probes", type=int)
    s.set_defaults(fn=cmd_uals_verify)

    s = sub.add_parser("replay", help="rerun a manifest and compare digests")
    s.add_argument("manifest")
    s.set_defaults(fn=None)
    return p


def digest(report):
    return "sha256:" + hashlib.sha256(canonical_json(report).encode()).hexdigest()


def _csv_text(table):
    header, rows = table
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run(argv):
    """Parse and execute; returns (exit code, outcome, manifest)."""
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        return replay(args.manifest)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    out = args.fn(args)
    params = {k: v for k, v in vars(args).items() if k not in ("fn", "out", "json", "jobs", "seed")}
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "command": out.report["schema"],
        "argv": list(argv),
        "params": json.loads(json.dumps(params, default=str)),
        "seed": args.seed,
        "registry_hash": out.registry_hash,
        "version": __version__,
        "digest": digest(out.report),
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
            fh.write(canonical_json(out.report) + "\n")
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        if out.table is not None:
            with open(os.path.join(args.out, "table.csv"), "w", encoding="utf-8") as fh:
                fh.write(_csv_text(out.table))
    if args.json:
        print(json.dumps(out.report, indent=2, sort_keys=True))
    else:
        print(out.text)
        print(f"digest {manifest['digest']}")
    return (0 if out.passed else 1), out, manifest


def replay(path):
    try:
        with open(path, encoding="utf-8") as fh:
            old = json.load(fh)
        argv = old["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read manifest {path}: {exc}") from None
    argv = [a for i, a in enumerate(argv) if a != "--out" and (i == 0 or argv[i - 1] != "--out")]
    code, out, manifest = run(argv)
    same = manifest["digest"] == old["digest"] and manifest["registry_hash"] == old["registry_hash"]
    print(f"replay {'matches' if same else 'DIFFERS from'} {old['digest']}")
    return (code if same else 1), out, manifest


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, _, _ = run(argv)
        return code
    except UsageError as exc:
        print(f"ualslab: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse: usage errors exit 2, --help exits 0
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
