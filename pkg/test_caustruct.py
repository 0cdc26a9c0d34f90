"""
Tests for signaling digraphs, structure classes and the SOC property
"""

import networkx as nx
import pytest

from modules.caustruct import (
    ADAPTIVE, FIXED, ICO, classify_type, is_soc, signaling_digraph, structure_census, structure_type,
)
from modules.discover4 import SymmetryElement, act
from modules.process import (
    adaptive_example, enumerate_det, fixed_order_example, indefinite_example, self_circle,
)
from modules.switchlab import parser_process


def test_fixed_order_digraph():
    g = signaling_digraph(fixed_order_example())
    assert g.edges == frozenset({(1, 2), (2, 3), (1, 4), (3, 4)})


@pytest.mark.parametrize("factory, expected", [
    (fixed_order_example, FIXED),
    (adaptive_example, ADAPTIVE),
    (indefinite_example, ICO),
    (parser_process, ADAPTIVE),
    (self_circle, ICO),
])
def test_types(factory, expected):
    f = factory()
    assert classify_type(f) == expected
    assert structure_type(signaling_digraph(f)) == expected


def test_soc():
    two_cycle = nx.DiGraph([(1, 2), (2, 1)])
    assert not is_soc(two_cycle)
    two_cycle.add_edges_from([(3, 1), (3, 2)])
    assert is_soc(two_cycle)
    assert is_soc(signaling_digraph(indefinite_example()))


def test_canonical_adjacency_ignores_labels():
    f = adaptive_example()
    relabeled = act(SymmetryElement((2, 0, 3, 1), (1, 0, 0, 1), (0, 1, 1, 0)), f)
    assert signaling_digraph(relabeled).canonical_adjacency() == signaling_digraph(f).canonical_adjacency()


def test_bipartite_census():
    census = structure_census(enumerate_det(2, n_jobs=1))
    counts = census["counts"]
    assert counts["classes"] == 2
    assert counts["nonempty_classes"] == 1
    assert counts["by_type"] == {FIXED: 2}
    assert [row["adjacency"] for row in census["classes"]] == ["0000", "0010"]
    assert census["classes"][1]["member_count"] == 8


@pytest.mark.slow
def test_tripartite_census():
    census = structure_census(enumerate_det(3))
    counts = census["counts"]
    assert counts["nonempty_classes"] == 7
    assert counts["by_type"].get(ICO) == 1
    assert counts["all_soc"]
    assert counts["type_mismatches"] == []
