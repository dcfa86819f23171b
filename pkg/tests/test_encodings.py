import itertools

import pytest
from conftest import truth
from hypothesis import given, settings
from hypothesis import strategies as st

from diracwmc.encodings import (
    KINDS,
    EncodingString,
    QStateEncoding,
    bits_needed,
    enc_equiv,
    normalize_kind,
)
from diracwmc.errors import EncodingError
from diracwmc.logic import TRUE, VarPool


def sat(f, vs):
    return [b for b in itertools.product((False, True), repeat=len(vs)) if truth(f, dict(zip(vs, b)))]


def test_sizes():
    assert [bits_needed(q, "log") for q in (2, 3, 4, 5, 8, 9)] == [1, 2, 2, 3, 3, 4]
    assert bits_needed(5, "order") == 4
    assert bits_needed(5, "onehot") == 5
    with pytest.raises(EncodingError):
        bits_needed(1, "log")


def test_kind_aliases():
    assert normalize_kind("logarithmic") == "log"
    assert normalize_kind("one-hot") == "onehot"
    assert normalize_kind("direct") == "onehot"
    with pytest.raises(EncodingError):
        normalize_kind("gray")


def test_log_values_are_binary_least_significant_first():
    v = QStateEncoding(4, "log", (1, 2))
    assert sat(v.equals(2), [1, 2]) == [(False, True)]


def test_order_value_counts_true_prefix():
    v = QStateEncoding(4, "order", (1, 2, 3))
    assert sat(v.equals(2), [1, 2, 3]) == [(True, True, False)]


def test_constructor_checks():
    with pytest.raises(EncodingError):
        QStateEncoding(3, "log", (1,))
    with pytest.raises(EncodingError):
        QStateEncoding(3, "log", (1, 1))
    with pytest.raises(EncodingError):
        QStateEncoding(3, "log", (1, 2)).equals(3)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(KINDS), st.integers(2, 6))
def test_equiv_holds_exactly_on_equal_values(kind, q):
    pool = VarPool(1)
    v, w = QStateEncoding.new(q, kind, pool), QStateEncoding.new(q, kind, pool)
    vs = list(v.vars + w.vars)
    f = enc_equiv(v, w)
    for a in range(q):
        for b in range(q):
            pinned = [m for m in sat(f, vs) if truth(v.equals(a), dict(zip(vs, m))) and truth(w.equals(b), dict(zip(vs, m)))]
            assert len(pinned) == (a == b)


def test_equiv_of_aliased_encoding_is_true():
    v = QStateEncoding(3, "onehot", (1, 2, 3))
    assert enc_equiv(v, v) == TRUE


def test_mixed_kinds_rejected():
    pool = VarPool(1)
    with pytest.raises(EncodingError):
        enc_equiv(QStateEncoding.new(3, "log", pool), QStateEncoding.new(3, "order", pool))
    with pytest.raises(EncodingError):
        enc_equiv(EncodingString.new(2, "log", 2, pool), EncodingString.new(2, "log", 1, pool))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(KINDS), st.integers(2, 4), st.integers(0, 3))
def test_string_value_is_base_q(kind, q, length):
    pool = VarPool(1)
    x = EncodingString.new(q, kind, length, pool)
    vs = list(x.vars)
    for n in range(q**length):
        (m,) = sat(x.equals(n), vs)
        tau = dict(zip(vs, m))
        digits = [next(d for d in range(q) if truth(x[i].equals(d), tau)) for i in range(length)]
        assert sum(d * q**i for i, d in enumerate(digits)) == n
    with pytest.raises(EncodingError):
        x.equals(q**length)


def test_string_concatenation_and_renaming():
    pool = VarPool(1)
    a = EncodingString.new(2, "log", 1, pool)
    b = EncodingString.new(2, "log", 2, pool)
    c = a + b
    assert len(c) == 3 and c.vars == a.vars + b.vars
    r = c.renamed({1: 10})
    assert r.vars[0] == 10
