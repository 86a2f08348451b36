from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ualslab.core import DYADIC, MIXED, NATURAL, FinVec, Segment
from ualslab.spaces import (
    DEFAULT_MU,
    MuSequence,
    QuadSurd,
    RegistryConflict,
    SigmaRegistry,
    build_special_sequence,
    build_special_vectors,
    calx_norm_sq,
    evaluate,
    james_norm_sq,
    james_norm_sq_blocks,
    james_norm_sq_brute,
    jt_norm_sq,
    jt_norm_sq_brute,
    jt_norm_sq_closure_brute,
    mixed_norm,
    mixed_pq_norm,
    mr_norm_bounds,
)
from ualslab.spaces.mixed import mixed_norm_mp

fractions = st.fractions(min_value=-9, max_value=9, max_denominator=6)


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.integers(1, 10), fractions, max_size=6))
def test_james_matches_both_brute_forces(d):
    x = FinVec(NATURAL, d)
    v = james_norm_sq(x).value
    assert v == james_norm_sq_brute(x) == james_norm_sq_blocks(x)


def test_james_witness_attains_value():
    x = FinVec(NATURAL, {1: 3, 2: -1, 4: 2, 7: -5, 9: 1})
    val, wit = james_norm_sq(x)
    assert sum(sum(x[i] for i in range(a, b + 1)) ** 2 for a, b in wit) == val
    assert all(b1 < a2 for (_, b1), (a2, _) in zip(wit, wit[1:]))


def test_james_big_coefficients_use_object_path():
    x = FinVec(NATURAL, {1: 10**30, 2: -(10**30) + 1, 3: Fraction(1, 10**20)})
    assert james_norm_sq(x).value == james_norm_sq_blocks(x)


nodes = st.text(alphabet="01", max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(nodes, fractions, max_size=6))
def test_jt_dp_bnb_brute_agree(d):
    x = FinVec(DYADIC, d)
    dp = jt_norm_sq(x)
    assert dp.value == jt_norm_sq(x, method="bnb").value == jt_norm_sq_brute(x)
    if len(x) <= 3:
        assert dp.value == jt_norm_sq_closure_brute(x)
    assert sum(s.value(x) ** 2 for s in dp.witness) == dp.value
    covered = [n for s in dp.witness for n in s.nodes()]
    assert len(covered) == len(set(covered))


def test_jt_examples():
    assert jt_norm_sq(FinVec(DYADIC, {"": 1, "0": 1, "1": 1})).value == 5
    # an antichain vector has the l2 norm
    x = FinVec(DYADIC, {"00": 1, "01": -2, "10": 3, "11": Fraction(1, 2)})
    assert jt_norm_sq(x).value == 1 + 4 + 9 + Fraction(1, 4)
    # a branch vector has the James norm
    b = FinVec(DYADIC, {"0" * i: c for i, c in enumerate([1, -1, 2, 2])})
    assert jt_norm_sq(b).value == james_norm_sq(FinVec(NATURAL, {i + 1: c for i, c in enumerate([1, -1, 2, 2])})).value


def test_quadsurd_sign_and_order():
    r2, r3 = QuadSurd.sqrt(2), QuadSurd.sqrt(3)
    assert (r2 + r3) * (r3 - r2) == QuadSurd.rational(1)
    assert QuadSurd.sqrt(8) == r2 * QuadSurd.rational(2)
    assert QuadSurd.rational(Fraction(141421, 100000)) < r2 < QuadSurd.rational(Fraction(141422, 100000))
    close = r2 * QuadSurd.rational(10**12) - QuadSurd.rational(1414213562373)
    assert close.sign() == 1


def test_calx_norm():
    x = FinVec(MIXED, {(1, "X", 1, 1): Fraction(3, 5), (1, "X", 1, 2): Fraction(4, 5),
                       (1, "X", 2, 1): 1, (1, "Y", 1, 1): 2})
    assert calx_norm_sq(x).value == QuadSurd.rational(8)
    y = FinVec(MIXED, {(1, "X", 1, 1): 1, (1, "X", 1, 2): 1})
    assert calx_norm_sq(y).value == QuadSurd.rational(2)


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(1, 2), st.sampled_from("XY"), st.integers(1, 2), st.integers(1, 3)),
                       fractions, max_size=8),
       st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(3)]),
       st.sampled_from([Fraction(2), Fraction(3), "inf"]))
def test_mixed_fast_matches_reference(d, p, q):
    x = FinVec(MIXED, d)
    v = mixed_pq_norm(x, p, q)
    ref = float(mixed_norm_mp(x, p, p, q, q, dps=50))
    assert abs(v.value - ref) <= 1e-12 * max(1.0, ref)
    assert v.error < 1e-9 * max(1.0, ref)


def test_mixed_exact_cases():
    x = FinVec(MIXED, {(1, "X", 1, 1): 3, (1, "Y", 2, 1): -4})
    assert mixed_norm(x, 2, 2, 2, 2).exact == QuadSurd.rational(5)
    assert mixed_norm(x, 1, 1, "inf", 1).exact == QuadSurd.rational(7)
    with pytest.raises(ValueError):
        mixed_pq_norm(x, Fraction(1, 2), 2)


# Maurey-Rosenthal variant ---------------------------------------------------------------
def test_mu_certificate():
    cert = DEFAULT_MU.certificate()
    assert cert.ok and cert.total <= Fraction(1, 2)
    # geometric weights violate the tail hypothesis, and sum_{i<j} m_i/m_j diverges
    with pytest.raises(ValueError):
        MuSequence(lambda j: 4 ** (j + 1), "geometric").certificate()
    fast = MuSequence(lambda j: 4 ** (2 ** (j + 1)), "faster").certificate()
    assert fast.ok and fast.total < cert.total


def test_registry_replay_and_conflicts(tmp_path):
    path = tmp_path / "reg.jsonl"
    reg = SigmaRegistry(str(path))
    seq = build_special_sequence(3, reg=reg)
    again = SigmaRegistry(str(path))
    assert again.snapshot_hash() == reg.snapshot_hash() and len(again) == len(reg) == 2
    assert build_special_sequence(3, reg=again) == seq
    assert again.snapshot_hash() == reg.snapshot_hash()
    path.write_text(path.read_text() + path.read_text().splitlines()[0] + "\n")
    with pytest.raises(RegistryConflict):
        SigmaRegistry(str(path))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mr_special_vector_bounds(n):
    reg = SigmaRegistry()
    plus, alt, seq = build_special_vectors(n, reg=reg)
    bp = mr_norm_bounds(plus, reg=reg, seq=seq)
    assert bp.lower >= 2 * n and bp.lower <= bp.upper
    assert evaluate(bp.witness, plus).lo == bp.lower
    ba = mr_norm_bounds(alt, reg=reg, seq=seq)
    assert ba.upper <= 5 and ba.lower >= 1


def test_mr_small_vectors_exact():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(20):
        idx = rng.choice(np.arange(1, 60), size=5, replace=False)
        x = FinVec(__import__("ualslab.core", fromlist=["MRLINE"]).MRLINE,
                   {int(i): Fraction(int(rng.integers(-5, 6)), 3) for i in idx})
        b = mr_norm_bounds(x)
        assert b.exact and b.lower == b.upper
        assert max(abs(c) for _, c in x.items()) <= b.lower <= sum(abs(c) for _, c in x.items())
