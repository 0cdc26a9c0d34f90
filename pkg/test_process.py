"""
Tests for deterministic processes, consistency and enumeration
"""

from fractions import Fraction

import pytest

from modules.errors import BudgetExceededError, PreconditionError
from modules.process import (
    DetProcess, adaptive_example, dk_class, dk_distribution, enumerate_det, fixed_order_example,
    indefinite_example, is_consistent, majority_piecewise_process, mix, self_circle, to_matrix,
    unidirectional_cycle, validate_vector,
)


def test_self_circle_is_consistent():
    f = self_circle()
    assert is_consistent(f)
    assert dk_class(f) == 0
    # the only fixed point of the identity is a = 100
    assert [a for a in range(8) if f(a) == a] == [4]


SELF_CIRCLE_ROWS = [
    [0, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
]


def test_self_circle_matrix():
    f = self_circle()
    assert list(f.x_of_a) == [4, 0, 1, 1, 4, 2, 0, 2]
    # a = 010 is sent to x = 001
    assert f(0b010) == 0b001
    m = to_matrix(f).m
    assert [[int(v) for v in row] for row in m] == SELF_CIRCLE_ROWS
    assert all(v == Fraction(int(v)) for v in m.reshape(-1))


def test_unidirectional_cycle_is_not():
    assert not is_consistent(unidirectional_cycle())


@pytest.mark.parametrize("factory", [fixed_order_example, adaptive_example, indefinite_example])
def test_four_party_examples_consistent(factory):
    assert is_consistent(factory())


def test_majority_split_matches_complete_graph():
    assert majority_piecewise_process() == indefinite_example()


def test_dk_classes():
    assert dk_class(fixed_order_example()) == 1
    assert dk_class(adaptive_example()) == 1
    assert dk_class(indefinite_example()) == 0


def test_det_process_validation():
    with pytest.raises(PreconditionError):
        DetProcess(2, (0, 1, 2))
    with pytest.raises(PreconditionError):
        DetProcess(2, (0, 1, 2, 4))
    f = DetProcess.from_json({"n": 2, "x_of_a": [3, 3, 3, 3]})
    assert f.to_json() == {"n": 2, "x_of_a": [3, 3, 3, 3]}


def test_bipartite_enumeration():
    processes = enumerate_det(2, n_jobs=1)
    assert len(processes) == 12
    assert all(is_consistent(f) for f in processes)
    assert [f.x_of_a for f in processes] == sorted(f.x_of_a for f in processes)
    # four constant processes, eight one-way channels
    assert dk_distribution(processes) == {1: 8, 2: 4}


def test_enumeration_refuses_four_parties():
    with pytest.raises(BudgetExceededError, match="n=4"):
        enumerate_det(4)


def test_mixture_is_valid_but_not_deterministic():
    processes = enumerate_det(2, n_jobs=1)
    m = mix(processes[:2], [Fraction(1, 2), Fraction(1, 2)])
    assert validate_vector(m)
    assert not m.is_deterministic()
    assert validate_vector(to_matrix(processes[0]))
    with pytest.raises(PreconditionError):
        mix(processes[:2], [Fraction(1, 2), Fraction(1, 3)])


def test_inconsistent_matrix_fails_validation():
    assert not validate_vector(to_matrix(unidirectional_cycle()))


@pytest.mark.slow
def test_tripartite_enumeration():
    processes = enumerate_det(3)
    assert len(processes) == 744
    assert self_circle() in processes
