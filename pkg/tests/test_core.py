from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ualslab.core import (
    DYADIC,
    MIXED,
    MRLINE,
    NATURAL,
    DocumentError,
    FinVec,
    IndexScheme,
    RleVec,
    Run,
    SchemeError,
    Segment,
    fmt_rational,
    interleaved,
    linear_combination,
    parse_rational,
    rle_sum,
    vec_read,
    vec_write,
)
from ualslab.core import tower as tw

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
nat_vecs = st.dictionaries(st.integers(1, 30), fractions, max_size=8).map(lambda d: FinVec(NATURAL, d))


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")
    assert fmt_rational(Fraction(-2, 4)) == "-1/2"


def test_finvec_drops_zeros_and_validates():
    v = FinVec(NATURAL, {1: 0, 2: Fraction(1, 3)})
    assert v.support() == [2] or list(v.support()) == [2]
    with pytest.raises(SchemeError):
        FinVec(NATURAL, {0: 1})
    with pytest.raises(SchemeError):
        FinVec(DYADIC, {"012": 1})
    with pytest.raises(SchemeError):
        FinVec(MIXED, {(1, "X", 3, 1): 1})  # j must lie in 1..2n
    with pytest.raises(SchemeError):
        FinVec(interleaved(2), {(3, 1): 1})


def test_scheme_mismatch():
    with pytest.raises(ValueError):
        FinVec(NATURAL, {1: 1}) + FinVec(MRLINE, {1: 1})


def test_natural_orders():
    assert sorted(["1", "", "00", "0"], key=DYADIC.order_key) == ["", "0", "1", "00"]
    il = interleaved(2)
    assert sorted([(2, 1), (1, 2), (1, 1)], key=il.order_key) == [(1, 1), (2, 1), (1, 2)]


@given(nat_vecs, nat_vecs, fractions)
def test_vector_space_laws(a, b, s):
    assert a + b == b + a
    assert (a + b) * s == a * s + b * s
    assert a - a == FinVec(NATURAL, {})
    assert linear_combination([a, b], [s, 1]) == a * s + b


@given(nat_vecs)
def test_json_roundtrip_natural(v):
    assert vec_read(vec_write(v)) == v


def test_json_roundtrip_other_schemes():
    for v in (FinVec(DYADIC, {"": 1, "01": Fraction(-2, 3)}),
              FinVec(MIXED, {(2, "Y", 4, 3): Fraction(5, 7)}),
              FinVec(interleaved(3), {(3, 2): 1})):
        assert vec_read(vec_write(v)) == v


def test_document_errors():
    with pytest.raises(DocumentError):
        vec_read('{"scheme": "natural", "entries": [[1, 0.5]]}')
    with pytest.raises(DocumentError):
        vec_read('{"scheme": "natural", "entries": [[1, "1"], [1, "2"]]}')
    with pytest.raises(DocumentError):
        vec_read('{"entries": []}')
    with pytest.raises(DocumentError):
        vec_read('{"scheme": "natural", "runs": []}')


def test_segment_value():
    x = FinVec(DYADIC, {"": 1, "0": 2, "01": 4, "1": 8})
    assert Segment("", "01").value(x) == 7
    with pytest.raises(ValueError):
        Segment("1", "01")


# towers ------------------------------------------------------------------------------
small = st.integers(-(10**6), 10**6)


@given(st.integers(0, 6), small, small)
def test_tower_small_atoms_are_ints(e, a, b):
    assert tw.atom(e) == 2 ** (2**e)
    assert tw.add(a, b) == a + b


@settings(max_examples=60)
@given(st.integers(17, 40), st.integers(17, 40), small, small)
def test_tower_compare_matches_dominance(e1, e2, c1, c2):
    x = tw.add(tw.atom(e1), c1)
    y = tw.add(tw.atom(e2), c2)
    expect = (e1 > e2) - (e1 < e2) or (c1 > c2) - (c1 < c2)
    assert tw.cmp(x, y) == expect
    assert tw.from_str(tw.to_str(x)) == x


def test_tower_nested_and_text():
    t = tw.atom(tw.add(tw.atom(20), 3))
    u = tw.add(t, -5)
    assert tw.cmp(u, t) < 0 and tw.sign(u) > 0
    assert tw.from_str(tw.to_str(u)) == u
    assert tw.cmp(tw.scale(t, 2), tw.add(t, t)) == 0
    with pytest.raises(ValueError):
        tw.from_str("2^^(")


# run-length vectors -------------------------------------------------------------------
def test_rle_roundtrip_and_sum():
    v = FinVec(MRLINE, {1: 2, 3: 2, 5: 2, 4: -1})
    r = RleVec.from_finvec(v)
    assert r.to_finvec() == v
    assert len(r.line_runs(1)) == 1
    s = rle_sum([RleVec([Run(1, 10, 3, 1)]), r])
    assert s.to_finvec() == v + FinVec(MRLINE, {19: 1, 21: 1, 23: 1})
    with pytest.raises(ValueError):
        RleVec([Run(1, 1, 5, 1), Run(1, 3, 2, 1)])


def test_rle_huge_lengths_stay_symbolic():
    big = tw.atom(40)
    r = RleVec([Run(2, 1, big, Fraction(1), 39)])
    assert tw.cmp(r.total_length(), big) == 0
    with pytest.raises(OverflowError):
        r.to_finvec()
    assert vec_read(vec_write(r)) == r


def test_scheme_json():
    for s in (NATURAL, DYADIC, MIXED, MRLINE, interleaved(4)):
        assert IndexScheme.from_json(s.to_json()) == s
