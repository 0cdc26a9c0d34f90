"""
PAR-SER SWITCH
The control-selected serial/parallel switch as a process and as a diagonal matrix

Features:
- Four-party deterministic process with two control parties
- Per-control-value signaling between the two target parties
- Exact dyadic evaluation of the sigma_z expansion of the switch
- Walsh-transform expansion of any deterministic process
- Validation through all classical CJ contractions
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from modules.bitcore import all_product_ops, bits_of, party_bit, party_mask
from modules.process import DetProcess, is_consistent, process_from_functions

logger = logging.getLogger(__name__)

# (coefficient, output parties carrying sigma_z)
_A_TARGET1 = [(-3, ()), (1, (2,)), (-1, (3,)), (-1, (4,)), (-1, (2, 3)), (-1, (2, 4)),
              (1, (3, 4)), (1, (2, 3, 4))]
_A_TARGET2 = [(-3, ()), (1, (1,)), (1, (3,)), (1, (4,)), (1, (1, 3)), (1, (1, 4)),
              (1, (3, 4)), (1, (1, 3, 4))]
_A_BOTH = [(2, ()), (-1, (1,)), (-1, (2,)), (-2, (3, 4)), (1, (2, 3)), (1, (2, 4)),
           (-1, (1, 3)), (-1, (1, 4)), (-1, (1, 3, 4)), (-1, (2, 3, 4))]

# (prefactor, input-party groups, output polynomial)
_SWITCH_BLOCKS = [
    (Fraction(1), [(), (3,), (4,), (3, 4)], [(1, ())]),
    (Fraction(1, 4), [(1,), (1, 3), (1, 4), (1, 3, 4)], _A_TARGET1),
    (Fraction(1, 4), [(2,), (2, 3), (2, 4), (2, 3, 4)], _A_TARGET2),
    (Fraction(1, 4), [(1, 2), (1, 2, 3), (1, 2, 4), (1, 2, 3, 4)], _A_BOTH),
]

PauliTerm = Tuple[Fraction, Tuple[int, ...], Tuple[int, ...]]


@dataclass
class DiagonalProcessMatrix:
    """diag[x * 2^n + a]: inputs x1..xn are the leading tensor factors"""
    n: int
    diag: np.ndarray

    def entry(self, x: int, a: int) -> Fraction:
        return self.diag[(x << self.n) | a]

    def trace(self) -> Fraction:
        return sum(self.diag, Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.diag)

    def support(self) -> List[Tuple[int, int]]:
        size = 1 << self.n
        return [(k // size, k % size) for k, v in enumerate(self.diag) if v != 0]


def parser_process() -> DetProcess:
    """x1 = a2 | ~a3 | ~a4, x2 = a1 | a3 | a4, x3 = x4 = 0"""
    return process_from_functions(4, [
        lambda a: a[1] | (1 - a[2]) | (1 - a[3]),
        lambda a: a[0] | a[2] | a[3],
        lambda a: 0,
        lambda a: 0,
    ])


def switch_terms() -> List[PauliTerm]:
    """The switch's sigma_z expansion, one term per (input group, output monomial)"""
    terms = []
    for prefactor, x_groups, polynomial in _SWITCH_BLOCKS:
        for x_set in x_groups:
            for coeff, a_set in polynomial:
                terms.append((prefactor * coeff / 16, x_set, a_set))
    return terms


def diagonal_from_terms(n: int, terms: Sequence[PauliTerm]) -> DiagonalProcessMatrix:
    """Sum of sigma_z tensor products; sigma_z contributes (-1)^bit on its factor"""
    size = 1 << n
    diag = np.empty(size * size, dtype=object)
    for x in range(size):
        x_bits = bits_of(x, n)
        for a in range(size):
            a_bits = bits_of(a, n)
            value = Fraction(0)
            for coeff, x_set, a_set in terms:
                parity = sum(x_bits[i - 1] for i in x_set) + sum(a_bits[i - 1] for i in a_set)
                value += -coeff if parity & 1 else coeff
            diag[(x << n) | a] = value
    return DiagonalProcessMatrix(n, diag)


def build_w_parser() -> DiagonalProcessMatrix:
    return diagonal_from_terms(4, switch_terms())


def _walsh(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform (integer arithmetic)"""
    out = values.astype(np.int64).copy()
    h = 1
    while h < len(out):
        out = out.reshape(-1, 2, h)
        out = np.stack([out[:, 0] + out[:, 1], out[:, 0] - out[:, 1]], axis=1).reshape(-1)
        h *= 2
    return out


def pauli_expansion(f: DetProcess) -> List[PauliTerm]:
    """Exact sigma_z expansion of the diagonal delta(x = f(a))"""
    n = f.n
    size = 1 << n
    indicator = np.zeros(size * size, dtype=np.int64)
    for a in range(size):
        indicator[(f(a) << n) | a] = 1
    spectrum = _walsh(indicator)

    terms = []
    for mask, total in enumerate(spectrum):
        if total == 0:
            continue
        x_set = tuple(i for i in range(1, n + 1) if (mask >> (2 * n - i)) & 1)
        a_set = tuple(i for i in range(1, n + 1) if (mask >> (n - i)) & 1)
        terms.append((Fraction(int(total), size * size), x_set, a_set))
    return terms


def conditional_signaling_report(f: DetProcess, targets: Tuple[int, int] = (1, 2),
                                 controls: Tuple[int, int] = (3, 4)) -> Dict[str, List[str]]:
    """Flip-test edges between the two targets for each control output value"""
    n = f.n
    first, second = targets
    report = {}
    for c0 in (0, 1):
        for c1 in (0, 1):
            edges = set()
            for a in range(1 << n):
                if party_bit(a, controls[0], n) != c0 or party_bit(a, controls[1], n) != c1:
                    continue
                for i, j in ((first, second), (second, first)):
                    if party_bit(f(a), j, n) != party_bit(f(a ^ party_mask(i, n)), j, n):
                        edges.add(f"{i}->{j}")
            report[f"{c0}{c1}"] = sorted(edges)
    return report


def contraction_values(w: DiagonalProcessMatrix) -> List[Fraction]:
    """Sum of diag over {(x, d(x))} for every product operation d"""
    values = []
    for op in all_product_ops(w.n):
        values.append(sum((w.entry(x, op.apply(x)) for x in range(1 << w.n)), Fraction(0)))
    return values


def validate_w(w: DiagonalProcessMatrix, f: DetProcess) -> bool:
    if w.n != f.n:
        return False
    if any(v != 1 for v in contraction_values(w)):
        return False
    size = 1 << f.n
    ratios = set()
    for x in range(size):
        for a in range(size):
            expected = 1 if f(a) == x else 0
            value = w.entry(x, a)
            if expected == 0 and value != 0:
                return False
            if expected:
                ratios.add(value)
    return len(ratios) == 1


def switch_report() -> Dict:
    f = parser_process()
    w = build_w_parser()
    contractions = contraction_values(w)
    nonzero = sorted({str(v) for v in w.diag if v != 0})
    pattern = conditional_signaling_report(f)
    report = {
        "consistent": is_consistent(f),
        "signaling_pattern": pattern,
        "pattern_ok": pattern == {"00": ["1->2"], "01": [], "10": [], "11": ["2->1"]},
        "trace": str(w.trace()),
        "diag_nonneg": w.is_nonnegative(),
        "support_size": len(w.support()),
        "nonzero_values": nonzero,
        "support_matches_process": validate_w(w, f),
        "contractions_ok": all(v == 1 for v in contractions),
    }
    logger.info("Switch matrix: trace %s, %d nonzero entries", report["trace"], report["support_size"])
    return report
