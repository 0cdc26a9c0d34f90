"""
Tests for bit conventions, local operations and behaviors
"""

from fractions import Fraction

import pytest

from modules.bitcore import (
    BitString, LocalOp, all_product_ops, bits_of, index_of, inner, local_det_behavior,
    op_table, party_bit, party_mask, product_op,
)
from modules.errors import PreconditionError
from modules.process import fixed_points, self_circle, to_matrix


def test_party_one_is_most_significant():
    assert index_of([1, 0, 1]) == 5
    assert bits_of(5, 3) == [1, 0, 1]
    assert party_bit(5, 1, 3) == 1
    assert party_bit(5, 2, 3) == 0
    assert party_mask(1, 3) == 4
    assert str(BitString(3, 6)) == "110"


def test_bad_bits_rejected():
    with pytest.raises(PreconditionError):
        index_of([0, 2])
    with pytest.raises(PreconditionError):
        bits_of(8, 3)


def test_local_operations():
    assert [LocalOp(0).apply(x) for x in (0, 1)] == [0, 0]
    assert [LocalOp(1).apply(x) for x in (0, 1)] == [0, 1]
    assert [LocalOp(2).apply(x) for x in (0, 1)] == [1, 0]
    assert [LocalOp(3).apply(x) for x in (0, 1)] == [1, 1]
    with pytest.raises(PreconditionError, match="Tag 5"):
        LocalOp(5)


def test_product_op_map():
    # identity on party 1, flip on party 2
    assert product_op((1, 2)).map == (1, 0, 3, 2)


def test_product_ops_in_tag_order():
    ops = all_product_ops(2)
    assert len(ops) == 16
    assert ops[0].tags == (0, 0)
    assert ops[6].tags == (1, 2)
    table = op_table(2)
    for k, op in enumerate(ops):
        assert list(table[k]) == list(op.map)


def test_local_states_are_no_signaling():
    for op in all_product_ops(2):
        behavior = local_det_behavior(op)
        assert behavior.is_normalized()
        assert behavior.is_no_signaling()


def test_inner_counts_fixed_points():
    f = self_circle()
    m = to_matrix(f)
    for op in all_product_ops(3):
        assert inner(m, op) == Fraction(len(fixed_points(f, op)))
        assert inner(m, op) == 1
