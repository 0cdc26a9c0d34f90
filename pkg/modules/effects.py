"""
EFFECT CLASSIFIER
Normal vs extra {0,1}-valued effects and the fine-tuning probe

Features:
- Pairwise rule on identical-input index sets (Case 1.1 / 1.2 / 2 / 3)
- Brute-force oracle over every product operation
- Runtime check that the pairwise rule and the oracle agree
- Extra-effect witnesses hidden inside fractional process vertices
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from config import EFFECT_CONFIG
from modules.bitcore import all_product_ops, bits_of, op_table
from modules.errors import (
    BudgetExceededError, DichotomyViolation, FineTuningViolation, PreconditionError,
)
from modules.geometry import cp_hrep, is_vertex
from modules.process import DetProcess, ProcessVectorGeneral, fixed_point_counts

logger = logging.getLogger(__name__)

NORMAL = "Normal"
EXTRA = "Extra"


# ============================================================================
# DATA TYPES
# ============================================================================

@dataclass(frozen=True)
class ZMatrix:
    """{0,1}-valued effect stored as the set of (a, x) with Z(a|x) = 1"""
    n: int
    ones: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        size = 1 << self.n
        ones = frozenset((int(a), int(x)) for a, x in self.ones)
        if any(not (0 <= a < size and 0 <= x < size) for a, x in ones):
            raise PreconditionError(f"Index pair out of range for n={self.n}")
        object.__setattr__(self, "ones", ones)

    @classmethod
    def from_matrix(cls, matrix) -> "ZMatrix":
        arr = np.asarray(matrix, dtype=object)
        size = arr.shape[0]
        if arr.ndim != 2 or arr.shape[1] != size or size & (size - 1):
            raise PreconditionError(f"Effect matrix must be square with side 2^n, got {arr.shape}")
        ones = set()
        for (a, x), v in np.ndenumerate(arr):
            v = Fraction(v)
            if v not in (0, 1):
                raise PreconditionError(f"Entry Z({a}|{x}) = {v} is not 0 or 1")
            if v == 1:
                ones.add((a, x))
        return cls(size.bit_length() - 1, frozenset(ones))

    def matrix(self) -> np.ndarray:
        size = 1 << self.n
        z = np.zeros((size, size), dtype=np.int64)
        for a, x in self.ones:
            z[a, x] = 1
        return z

    def sorted_ones(self) -> List[Tuple[int, int]]:
        return sorted(self.ones)


@dataclass
class EffectVerdict:
    kind: str
    case: str
    witness: Optional[Tuple[int, ...]] = None
    pair: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None

    def to_json(self) -> Dict:
        out = {"kind": self.kind, "case": self.case}
        if self.witness is not None:
            out["witness_tags"] = list(self.witness)
        return out


# ============================================================================
# PAIRWISE RULE
# ============================================================================

def identical_index_set(u: Sequence[int], v: Sequence[int]) -> FrozenSet[int]:
    """1-based positions where two bit strings agree"""
    if len(u) != len(v):
        raise PreconditionError(f"Bit strings differ in length: {len(u)} vs {len(v)}")
    return frozenset(q + 1 for q, (ui, vi) in enumerate(zip(u, v)) if ui == vi)


def _is_extra_pair(n: int, first: Tuple[int, int], second: Tuple[int, int]) -> bool:
    """Outputs agree on every party whose inputs agree"""
    (a, x), (a2, x2) = first, second
    same_inputs = identical_index_set(bits_of(x, n), bits_of(x2, n))
    a_bits, a2_bits = bits_of(a, n), bits_of(a2, n)
    return all(a_bits[q - 1] == a2_bits[q - 1] for q in same_inputs)


def operation_hits(z: ZMatrix) -> np.ndarray:
    """inner(Z, D) for every product operation, tag order"""
    if not z.ones:
        return np.zeros(4 ** z.n, dtype=np.int64)
    a_idx = np.array([a for a, _ in z.ones])
    x_idx = np.array([x for _, x in z.ones])
    return (op_table(z.n)[:, x_idx] == a_idx).sum(axis=1)


def oracle(z: ZMatrix) -> bool:
    """True iff no product operation collects two or more ones"""
    return bool(operation_hits(z).max(initial=0) <= 1)


def _first_witness(z: ZMatrix) -> Optional[Tuple[int, ...]]:
    hits = operation_hits(z)
    over = np.flatnonzero(hits >= 2)
    if not len(over):
        return None
    return all_product_ops(z.n)[int(over[0])].tags


def classify(z: ZMatrix) -> EffectVerdict:
    size = 1 << z.n
    if len(z.ones) >= size:
        raise PreconditionError(f"classify needs fewer than {size} ones, got {len(z.ones)}")
    if not z.ones:
        return EffectVerdict(NORMAL, "1.1")
    if len(z.ones) == 1:
        return EffectVerdict(NORMAL, "1.2")

    extra_pair = next(
        (pair for pair in combinations(z.sorted_ones(), 2) if _is_extra_pair(z.n, *pair)),
        None,
    )
    witness = _first_witness(z)

    if extra_pair is not None and witness is None:
        raise DichotomyViolation("Pair agrees on all identical-input parties but no operation collects it",
                                 {"n": z.n, "ones": z.sorted_ones(), "pair": extra_pair})
    if extra_pair is None and witness is not None:
        raise DichotomyViolation("Every pair is separated yet an operation collects two ones",
                                 {"n": z.n, "ones": z.sorted_ones(), "witness": witness})

    if extra_pair is None:
        return EffectVerdict(NORMAL, "2")
    return EffectVerdict(EXTRA, "3", witness=witness, pair=extra_pair)


def random_zmatrix(n: int, rng: np.random.Generator, max_ones: Optional[int] = None) -> ZMatrix:
    size = 1 << n
    max_ones = size - 1 if max_ones is None else min(max_ones, size - 1)
    count = int(rng.integers(0, max_ones + 1))
    flat = rng.choice(size * size, size=count, replace=False)
    return ZMatrix(n, frozenset((int(k) // size, int(k) % size) for k in flat))


def agreement_scan(n: int, samples: int = EFFECT_CONFIG["random_samples"], seed: int = 0) -> Dict:
    """Random comparison of the pairwise rule against the oracle"""
    rng = np.random.default_rng(seed)
    disagreements = []
    extra = 0
    for _ in range(samples):
        z = random_zmatrix(n, rng)
        verdict = classify(z)
        extra += verdict.kind == EXTRA
        if (verdict.kind == NORMAL) != oracle(z):
            disagreements.append(z.sorted_ones())
    logger.info("n=%d: %d samples, %d extra, %d disagreements", n, samples, extra, len(disagreements))
    return {"n": n, "samples": samples, "seed": seed, "extra": extra, "disagreements": disagreements}


# ============================================================================
# FRACTIONAL VERTICES
# ============================================================================

def _row_supports(m: ProcessVectorGeneral) -> List[List[int]]:
    size = 1 << m.n
    return [[x for x in range(size) if m.m[a, x] != 0] for a in range(size)]


def selection_decomposition(m: ProcessVectorGeneral,
                            max_selections: int = EFFECT_CONFIG["max_selections"]) -> List[Tuple[Fraction, DetProcess]]:
    """Row-stochastic m as the product-weighted sum of its deterministic selections"""
    size = 1 << m.n
    for a in range(size):
        if sum(m.m[a, :]) != 1:
            raise PreconditionError(f"Row a={a} of the process vector does not sum to 1")
    supports = _row_supports(m)
    total = 1
    for row in supports:
        total *= len(row)
    if total > max_selections:
        raise BudgetExceededError(f"{total} selections exceed the budget of {max_selections}")

    terms = []
    for selection in product(*supports):
        weight = Fraction(1)
        for a, x in enumerate(selection):
            weight *= m.m[a, x]
        terms.append((weight, DetProcess(m.n, selection)))
    return terms


@dataclass
class FineTuningWitness:
    selection: DetProcess
    operation: Tuple[int, ...]
    witness: ZMatrix
    verdict: EffectVerdict
    selections_checked: int

    def to_json(self) -> Dict:
        return {
            "selection": list(self.selection.x_of_a),
            "operation": list(self.operation),
            "witness_ones": [list(p) for p in self.witness.sorted_ones()],
            "verdict": self.verdict.to_json(),
            "selections_checked": self.selections_checked,
        }


def probe_fractional_vertex(m: ProcessVectorGeneral,
                            max_support: int = EFFECT_CONFIG["max_support"],
                            max_selections: int = EFFECT_CONFIG["max_selections"]) -> FineTuningWitness:
    """
    Extra effect hidden in a fractional vertex

    Walks the deterministic selections inside the support until one is
    inconsistent; an operation with two fixed points then collects a pair of
    its ones, which is an extra effect.
    """
    if m.is_deterministic():
        raise PreconditionError("probe_fractional_vertex needs a fractional process vector")
    support = m.support()
    if len(support) > max_support:
        raise BudgetExceededError(f"Support of {len(support)} exceeds the guard of {max_support}")
    if not is_vertex(cp_hrep(m.n), m.m.reshape(-1)):
        raise PreconditionError("Process vector is not a vertex of the classical-process polytope")

    checked = 0
    for selection in islice(product(*_row_supports(m)), max_selections):
        checked += 1
        f = DetProcess(m.n, selection)
        counts = fixed_point_counts(f)
        if np.all(counts == 1):
            continue
        op_index = int(np.flatnonzero(counts >= 2)[0])
        op = all_product_ops(m.n)[op_index]
        fixed = [a for a in range(1 << m.n) if op.apply(f(a)) == a][:2]
        witness = ZMatrix(m.n, frozenset((a, f(a)) for a in fixed))
        verdict = classify(witness)
        if verdict.kind != EXTRA:
            raise DichotomyViolation("Two fixed points of one operation classified as normal",
                                     {"n": m.n, "ones": witness.sorted_ones()})
        logger.info("Extra witness after %d selections under operation %s", checked, op.describe())
        return FineTuningWitness(f, op.tags, witness, verdict, checked)

    if checked >= max_selections:
        raise BudgetExceededError(f"No inconsistent selection within {max_selections} selections")
    raise FineTuningViolation(f"All {checked} selections in the support are consistent")
