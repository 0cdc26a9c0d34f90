"""
Tests for the no-signaling / classical-process duality
"""

import numpy as np
import pytest

from modules.duality import (
    build_md_family, check_duality, check_sampled_duality, constant_processes, derive_ns_from_cp, local_state_rows,
    md_family,
)
from modules.errors import PreconditionError
from modules.geometry import cp_hrep
from modules.process import indefinite_example, is_consistent, to_matrix, unidirectional_cycle


def test_md_family_is_consistent():
    family = md_family(3)
    assert len(family) == 3 * 2 ** 4
    assert all(is_consistent(f) for f in family)
    assert all(is_consistent(f) for f in constant_processes(3))


def test_md_family_member():
    # party 2 in the future, party 1 gets the constant 1, channel without flip
    f = build_md_family(2, 2, [1], [0])
    assert f.x_of_a == (2, 2, 3, 3)
    with pytest.raises(PreconditionError):
        build_md_family(2, 3, [1], [0])


def test_derived_rank_bipartite():
    report = derive_ns_from_cp(2)
    assert report["derived_rank"] == 8
    assert report["ns_rank"] == 8
    assert report["spans_match"]
    assert report["catalog_rows_redundant"]


def test_duality_bipartite():
    report = check_duality(2)
    assert report.direction_a == "pass"
    assert report.direction_b == "pass"
    assert report.details["a_vertex_counts"] == [24, 24]
    assert report.details["b_negative_control"]["strictly_larger"]
    assert not report.details["b_single_state_removed"]["strictly_larger"]
    assert report.ranks["cp"] == 9


def test_sampled_duality():
    good = check_sampled_duality([to_matrix(indefinite_example())])
    assert good["passed"]
    assert good["states"] == 256
    bad = check_sampled_duality([to_matrix(unidirectional_cycle())])
    assert not bad["passed"]


@pytest.mark.slow
def test_duality_tripartite():
    report = check_duality(3)
    assert report.passed
    derived = derive_ns_from_cp(3)
    assert derived["derived_rank"] == 38
    assert derived["catalog_rows_redundant"]


def test_local_states_from_single_party_tables():
    rows = local_state_rows(2)
    assert rows.shape == (16, 16)
    # identity x identity
    assert np.array_equal(rows[5].reshape(4, 4), np.eye(4, dtype=np.int64))
    # const1 x flip: x = (x1, x2) -> a = (1, not x2)
    q = rows[14].reshape(4, 4)
    assert [int(q[:, x].argmax()) for x in range(4)] == [3, 2, 3, 2]
    assert np.array_equal(rows.astype(object), np.array(cp_hrep(2).eq_A, dtype=object))
    assert check_duality(2).details["b_rows_identical"]
