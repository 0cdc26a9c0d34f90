"""
Tests for the Normal / Extra effect classifier and the fine-tuning probe
"""

from fractions import Fraction
from itertools import combinations

import pytest

from modules.bitcore import inner, product_op
from modules.effects import (
    EXTRA, NORMAL, ZMatrix, agreement_scan, classify, identical_index_set, oracle,
    probe_fractional_vertex, selection_decomposition,
)
from modules.errors import PreconditionError
from modules.geometry import cp_hrep, sample_fractional_vertices
from modules.process import ProcessVectorGeneral, enumerate_det, mix


def test_identical_index_set():
    assert identical_index_set([0, 1, 1], [0, 0, 1]) == frozenset({1, 3})


def test_trivial_cases_are_normal():
    assert classify(ZMatrix(2, frozenset())).case == "1.1"
    single = classify(ZMatrix(2, frozenset({(1, 2)})))
    assert (single.kind, single.case) == (NORMAL, "1.2")


def test_same_input_different_output_is_normal():
    verdict = classify(ZMatrix(2, frozenset({(0, 0), (1, 0)})))
    assert verdict.kind == NORMAL
    assert verdict.case == "2"


def test_disjoint_inputs_are_extra():
    verdict = classify(ZMatrix(2, frozenset({(0, 0), (3, 3)})))
    assert verdict.kind == EXTRA
    assert verdict.case == "3"
    assert verdict.witness == (1, 1)
    assert verdict.to_json()["witness_tags"] == [1, 1]


def test_too_many_ones_rejected():
    with pytest.raises(PreconditionError):
        classify(ZMatrix(1, frozenset({(0, 0), (1, 1)})))


def test_from_matrix():
    z = ZMatrix.from_matrix([[1, 0], [0, 0]])
    assert z.n == 1
    assert z.sorted_ones() == [(0, 0)]
    with pytest.raises(PreconditionError):
        ZMatrix.from_matrix([[Fraction(1, 2), 0], [0, 0]])


def test_exhaustive_agreement_bipartite():
    cells = [(a, x) for a in range(4) for x in range(4)]
    checked = 0
    for size in range(4):
        for ones in combinations(cells, size):
            z = ZMatrix(2, frozenset(ones))
            verdict = classify(z)
            assert (verdict.kind == NORMAL) == oracle(z)
            if verdict.kind == EXTRA:
                assert inner(z.matrix(), product_op(verdict.witness).matrix()) >= 2
            checked += 1
    assert checked == 1 + 16 + 120 + 560


def test_random_agreement_tripartite():
    scan = agreement_scan(3, samples=2000, seed=1)
    assert scan["disagreements"] == []
    assert scan["extra"] > 0


def test_selection_decomposition_reassembles():
    processes = enumerate_det(2, n_jobs=1)
    m = mix([processes[0], processes[5]], [Fraction(1, 3), Fraction(2, 3)])
    terms = selection_decomposition(m)
    assert sum(w for w, _ in terms) == 1
    for a in range(4):
        for x in range(4):
            assert sum(w for w, f in terms if f(a) == x) == m.m[a, x]


def test_probe_rejects_deterministic_vectors():
    processes = enumerate_det(2, n_jobs=1)
    m = mix([processes[0]], [1])
    with pytest.raises(PreconditionError):
        probe_fractional_vertex(ProcessVectorGeneral(2, m.m))


@pytest.mark.slow
def test_fractional_vertices_hide_extra_effects():
    h = cp_hrep(3)
    found = sample_fractional_vertices(h, count=3, seed=11)
    assert len(found) >= 3
    for vertex in found:
        m = ProcessVectorGeneral(3, vertex.point.reshape(8, 8))
        witness = probe_fractional_vertex(m)
        assert witness.verdict.kind == EXTRA
        assert inner(witness.witness.matrix(), product_op(witness.operation).matrix()) >= 2


@pytest.mark.slow
def test_random_agreement_four_parties():
    assert agreement_scan(4, samples=20000, seed=2)["disagreements"] == []
