"""
Tests for exact linear algebra, H-representations, vertex enumeration and LPs
"""

from fractions import Fraction

import numpy as np
import pytest

from modules.errors import InconsistentSystemError
from modules.formats import read_hrep, read_vrep, write_hrep, write_vrep
from modules.geometry import (
    affine_hull, cp_hrep, is_vertex, lp_vertex, ns_hrep, primitive, rank, span_membership, vertex_enum,
)
from modules.process import enumerate_det, mix, to_matrix


def test_rank_and_primitive():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[Fraction(1, 2), 0], [0, 3]]) == 2
    assert primitive([Fraction(1, 2), Fraction(-1, 3)]) == (3, -2)


def test_span_membership():
    basis = [[1, 0, 0], [0, 1, 0]]
    mask = span_membership(basis, [[2, 3, 0], [0, 0, 1]])
    assert list(mask) == [True, False]


def test_inconsistent_system():
    with pytest.raises(InconsistentSystemError):
        affine_hull([[1, 0], [1, 0]], [0, 1])


@pytest.mark.parametrize("n, expected", [(2, 8), (3, 38)])
def test_no_signaling_rank(n, expected):
    assert ns_hrep(n).hull.rank == expected


@pytest.mark.parametrize("n, expected", [(2, 9), (3, 27)])
def test_classical_process_rank(n, expected):
    h = cp_hrep(n)
    assert h.hull.rank == expected
    assert h.hull.dimension == 4 ** n - expected


def test_no_signaling_vertices():
    v = vertex_enum(ns_hrep(2))
    assert v.complete
    # 16 local deterministic points and 8 PR boxes
    assert len(v.vertices) == 24
    assert len(v.integer_vertices()) == 16
    assert {x for vertex in v.fractional_vertices() for x in vertex} == {Fraction(0), Fraction(1, 2)}


def test_bipartite_process_vertices_are_deterministic():
    v = vertex_enum(cp_hrep(2))
    assert v.complete
    expected = {tuple(Fraction(x) for x in to_matrix(f).m.reshape(-1)) for f in enumerate_det(2, n_jobs=1)}
    assert v.as_set() == expected
    assert v.is_irredundant()


def test_is_vertex():
    h = cp_hrep(2)
    processes = enumerate_det(2, n_jobs=1)
    assert is_vertex(h, to_matrix(processes[0]).m.reshape(-1))
    half = mix(processes[:2], [Fraction(1, 2), Fraction(1, 2)])
    assert not is_vertex(h, half.m.reshape(-1))


def test_lp_vertex_is_exact():
    h = cp_hrep(2)
    rng = np.random.default_rng(7)
    for _ in range(5):
        point = lp_vertex(h, rng.integers(-10, 11, size=h.dim))
        assert h.contains(point)
        assert is_vertex(h, point)


def test_hrep_and_vrep_files(tmp_path):
    h = ns_hrep(2)
    write_hrep(h, tmp_path / "ns2.hrep")
    back = read_hrep(tmp_path / "ns2.hrep")
    assert back.dim == h.dim
    assert back.hull.rank == 8

    v = vertex_enum(h)
    write_vrep(v, h.dim, tmp_path / "ns2.vrep")
    assert read_vrep(tmp_path / "ns2.vrep").as_set() == v.as_set()
