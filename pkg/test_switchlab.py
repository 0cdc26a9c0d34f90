"""
Tests for the PAR-SER switch process and its diagonal matrix
"""

from fractions import Fraction

from modules.process import is_consistent, self_circle
from modules.switchlab import (
    build_w_parser, conditional_signaling_report, contraction_values, diagonal_from_terms,
    parser_process, pauli_expansion, switch_report, switch_terms, validate_w,
)


def test_parser_process():
    f = parser_process()
    assert is_consistent(f)
    assert conditional_signaling_report(f) == {"00": ["1->2"], "01": [], "10": [], "11": ["2->1"]}


def test_switch_matrix():
    w = build_w_parser()
    assert w.trace() == 16
    assert w.is_nonnegative()
    assert len(w.support()) == 16
    assert {w.entry(x, a) for x, a in w.support()} == {Fraction(1)}
    assert validate_w(w, parser_process())


def test_all_contractions_are_one():
    values = contraction_values(build_w_parser())
    assert len(values) == 256
    assert set(values) == {Fraction(1)}


def test_expansion_reproduces_the_diagonal():
    f = self_circle()
    w = diagonal_from_terms(3, pauli_expansion(f))
    assert validate_w(w, f)
    assert w.trace() == 8


def test_expansion_of_the_switch_matches_its_terms():
    printed = diagonal_from_terms(4, switch_terms())
    expanded = diagonal_from_terms(4, pauli_expansion(parser_process()))
    assert list(printed.diag) == list(expanded.diag)


def test_report():
    report = switch_report()
    for key in ("consistent", "pattern_ok", "diag_nonneg", "support_matches_process", "contractions_ok"):
        assert report[key]
    assert report["trace"] == "16"
    assert report["nonzero_values"] == ["1"]
