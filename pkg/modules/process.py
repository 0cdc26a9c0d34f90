"""
DETERMINISTIC CLASSICAL PROCESSES
Fixed-point consistency, exhaustive enumeration and D(k) classes

Features:
- DetProcess: a total function from output strings to input strings
- Consistency: exactly one fixed point a = d(f(a)) for every product operation
- Vectorized exhaustive scan for n <= 3, chunked across joblib workers
- Named reference processes used throughout the test-suite
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from config import CF_THREADS, ENUM_CHUNK_SIZE, MAX_ENUM_PARTIES, MAX_PARTIES
from modules.bitcore import (
    ProductOp, all_product_ops, bits_of, fraction_array, index_of, op_table, party_bit,
)
from modules.errors import BudgetExceededError, PreconditionError

logger = logging.getLogger(__name__)


# ============================================================================
# DATA TYPES
# ============================================================================

@dataclass(frozen=True)
class DetProcess:
    """x_of_a[a] is the joint input string handed out for joint output a"""
    n: int
    x_of_a: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(x) for x in self.x_of_a)
        size = 1 << self.n
        if not 1 <= self.n <= MAX_PARTIES:
            raise PreconditionError(f"n must lie in [1, {MAX_PARTIES}], got {self.n}")
        if len(values) != size:
            raise PreconditionError(f"x_of_a needs {size} entries, got {len(values)}")
        if any(not 0 <= x < size for x in values):
            raise PreconditionError(f"x_of_a entries must lie in [0, {size})")
        object.__setattr__(self, "x_of_a", values)

    def __call__(self, a: int) -> int:
        return self.x_of_a[a]

    def coordinate(self, party: int) -> Tuple[int, ...]:
        """Truth table of f_party over all output strings"""
        return tuple(party_bit(x, party, self.n) for x in self.x_of_a)

    def as_array(self) -> np.ndarray:
        return np.array(self.x_of_a, dtype=np.int64)

    def to_json(self) -> dict:
        return {"n": self.n, "x_of_a": list(self.x_of_a)}

    @classmethod
    def from_json(cls, data: dict) -> "DetProcess":
        return cls(int(data["n"]), tuple(data["x_of_a"]))


@dataclass
class ProcessVectorGeneral:
    """Nonnegative rational vector M(a|x), m[a, x]"""
    n: int
    m: np.ndarray

    def support(self) -> List[Tuple[int, int]]:
        return [(int(a), int(x)) for (a, x), v in np.ndenumerate(self.m) if v != 0]

    def is_deterministic(self) -> bool:
        return all(v in (0, 1) for v in self.m.flat)

    def fractional_entries(self) -> List[Tuple[int, int]]:
        return [(int(a), int(x)) for (a, x), v in np.ndenumerate(self.m) if v not in (0, 1)]


# ============================================================================
# CONSTRUCTION
# ============================================================================

def process_from_functions(n: int, functions: Sequence[Callable[[List[int]], int]]) -> DetProcess:
    """One boolean function per party, each taking the output bits (a1..an)"""
    if len(functions) != n:
        raise PreconditionError(f"Need {n} coordinate functions, got {len(functions)}")
    x_of_a = []
    for a in range(1 << n):
        a_bits = bits_of(a, n)
        x_of_a.append(index_of([int(bool(fn(a_bits))) for fn in functions]))
    return DetProcess(n, tuple(x_of_a))


def to_matrix(f: DetProcess) -> ProcessVectorGeneral:
    size = 1 << f.n
    m = fraction_array((size, size))
    for a, x in enumerate(f.x_of_a):
        m[a, x] = Fraction(1)
    return ProcessVectorGeneral(f.n, m)


def mix(processes: Sequence[DetProcess], weights: Sequence[Fraction]) -> ProcessVectorGeneral:
    """Exact convex combination of deterministic processes"""
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(processes) or sum(weights) != 1 or min(weights) < 0:
        raise PreconditionError("Mixture weights must be nonnegative and sum to 1")
    n = processes[0].n
    size = 1 << n
    m = fraction_array((size, size))
    for f, w in zip(processes, weights):
        for a, x in enumerate(f.x_of_a):
            m[a, x] += w
    return ProcessVectorGeneral(n, m)


# ============================================================================
# CONSISTENCY
# ============================================================================

def fixed_points(f: DetProcess, d: ProductOp) -> FrozenSet[int]:
    if d.n != f.n:
        raise PreconditionError(f"Operation acts on {d.n} parties, process on {f.n}")
    return frozenset(a for a in range(1 << f.n) if d.apply(f(a)) == a)


def fixed_point_counts(f: DetProcess) -> np.ndarray:
    """Number of fixed points under each product operation (tag order)"""
    table = op_table(f.n)
    composed = table[:, f.as_array()]
    return (composed == np.arange(1 << f.n)).sum(axis=1)


def is_consistent(f: DetProcess) -> bool:
    return bool(np.all(fixed_point_counts(f) == 1))


def validate_vector(m: ProcessVectorGeneral) -> bool:
    """Nonnegative and normalized against every product operation"""
    if any(v < 0 for v in m.m.flat):
        return False
    size = 1 << m.n
    columns = np.arange(size)
    for row in op_table(m.n):
        if sum(m.m[row, columns]) != 1:
            return False
    return True


def dk_class(f: DetProcess) -> int:
    """Number of parties whose input does not depend on the outputs"""
    return sum(1 for party in range(1, f.n + 1) if len(set(f.coordinate(party))) == 1)


def dk_distribution(processes: Sequence[DetProcess]) -> Dict[int, int]:
    return dict(sorted(Counter(dk_class(f) for f in processes).items()))


# ============================================================================
# EXHAUSTIVE ENUMERATION
# ============================================================================

def _pruning_order(n: int) -> np.ndarray:
    """Operations without constants first, they reject most candidates"""
    ops = all_product_ops(n)
    constants = [sum(1 for t in op.tags if t in (0, 3)) for op in ops]
    order = sorted(range(len(ops)), key=lambda k: (constants[k], k))
    return op_table(n)[order]


def _scan_chunk(n: int, start: int, stop: int) -> np.ndarray:
    """Consistent candidates among indices [start, stop) of the full scan"""
    size = 1 << n
    shifts = np.array([n * (size - 1 - a) for a in range(size)], dtype=np.int64)
    indices = np.arange(start, stop, dtype=np.int64)
    candidates = ((indices[:, None] >> shifts[None, :]) & (size - 1)).astype(np.uint8)
    target = np.arange(size)
    for row in _pruning_order(n):
        hits = (row[candidates] == target).sum(axis=1)
        candidates = candidates[hits == 1]
        if not len(candidates):
            break
    return candidates


def enumerate_det(n: int, n_jobs: Optional[int] = None) -> List[DetProcess]:
    """All consistent deterministic processes, sorted lexicographically by x_of_a"""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    size = 1 << n
    total = size ** size
    if n > MAX_ENUM_PARTIES:
        raise BudgetExceededError(
            f"enumerate_det refuses n={n}: {float(total):.1e} candidates; use the ILP sampler"
        )

    bounds = [(lo, min(lo + ENUM_CHUNK_SIZE, total)) for lo in range(0, total, ENUM_CHUNK_SIZE)]
    workers = max(1, min(n_jobs or CF_THREADS, CF_THREADS, len(bounds)))
    logger.info("Scanning %d candidates for n=%d in %d chunks (%d workers)",
                total, n, len(bounds), workers)

    if workers == 1:
        parts = [_scan_chunk(n, lo, hi) for lo, hi in bounds]
    else:
        parts = Parallel(n_jobs=workers)(delayed(_scan_chunk)(n, lo, hi) for lo, hi in bounds)

    found = np.concatenate(parts) if parts else np.zeros((0, size), dtype=np.uint8)
    order = np.lexsort(found.T[::-1]) if len(found) else np.array([], dtype=np.int64)
    processes = [DetProcess(n, tuple(int(v) for v in row)) for row in found[order]]
    logger.info("Found %d consistent processes for n=%d", len(processes), n)
    return processes


# ============================================================================
# REFERENCE PROCESSES
# ============================================================================

def self_circle() -> DetProcess:
    """x1 = ~a2 & ~a3, x2 = a1 & a3, x3 = ~a1 & a2"""
    return process_from_functions(3, [
        lambda a: (1 - a[1]) & (1 - a[2]),
        lambda a: a[0] & a[2],
        lambda a: (1 - a[0]) & a[1],
    ])


def unidirectional_cycle() -> DetProcess:
    """x1 = a3, x2 = a1, x3 = a2 (inconsistent)"""
    return process_from_functions(3, [lambda a: a[2], lambda a: a[0], lambda a: a[1]])


def fixed_order_example() -> DetProcess:
    """x1 = 1, x2 = ~a1, x3 = ~a2, x4 = a1 xor a3"""
    return process_from_functions(4, [
        lambda a: 1,
        lambda a: 1 - a[0],
        lambda a: 1 - a[1],
        lambda a: a[0] ^ a[2],
    ])


def adaptive_example() -> DetProcess:
    """x1 = 1, x2 = ~a1 | ~a3, x3 = a1 | ~a4, x4 = ~a2"""
    return process_from_functions(4, [
        lambda a: 1,
        lambda a: (1 - a[0]) | (1 - a[2]),
        lambda a: a[0] | (1 - a[3]),
        lambda a: 1 - a[1],
    ])


def indefinite_example() -> DetProcess:
    """Complete-graph ICO on four parties"""
    return process_from_functions(4, [
        lambda a: (1 - a[1]) | (1 - a[2]) | (1 - a[3]),
        lambda a: (1 - a[0]) | (1 - a[2]) | a[3],
        lambda a: (1 - a[0]) | (1 - a[3]) | a[1],
        lambda a: (1 - a[0]) | (1 - a[1]) | a[2],
    ])


def majority_piecewise_process() -> DetProcess:
    """The complete-graph ICO written as two causal orders split by the output majority"""
    def choose(a: List[int]) -> List[int]:
        if a.count(0) >= 2:
            return [1, (1 - a[0]) | (1 - a[2]), (1 - a[0]) | (1 - a[3]), (1 - a[0]) | (1 - a[1])]
        return [(1 - a[1]) | (1 - a[2]) | (1 - a[3]), a[3], a[1], a[2]]

    return process_from_functions(4, [lambda a, i=i: choose(a)[i] for i in range(4)])
