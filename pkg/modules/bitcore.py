"""
BIT CONVENTIONS & LOCAL OPERATIONS
Scenario bookkeeping shared by every other module

Features:
- MSB-first bit strings (party 1 occupies the highest bit)
- The four deterministic local operations and their tensor products
- Local deterministic behaviors (states) with exact no-signaling checks
- Exact inner product between process vectors, behaviors and operations

Arrays indexed by (a, x) always put the output string a on the rows and the
input string x on the columns.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import List, Sequence, Tuple

import numpy as np

from config import MAX_PARTIES
from modules.errors import PreconditionError


# Local operation tables D[a][x]
LOCAL_TABLES = {
    0: ((1, 1), (0, 0)),   # constant 0
    1: ((1, 0), (0, 1)),   # identity
    2: ((0, 1), (1, 0)),   # bit flip
    3: ((0, 0), (1, 1)),   # constant 1
}
LOCAL_NAMES = {0: "const0", 1: "identity", 2: "flip", 3: "const1"}


# ============================================================================
# SCENARIO & BIT STRINGS
# ============================================================================

@dataclass(frozen=True)
class Scenario:
    """(n, inputs, outputs) scenario; the process machinery fixes 2 and 2"""
    n_parties: int
    input_cardinality: int = 2
    output_cardinality: int = 2

    def __post_init__(self):
        if self.n_parties < 1:
            raise PreconditionError(f"n_parties must be >= 1, got {self.n_parties}")

    @property
    def size(self) -> int:
        """Number of joint input (or output) strings"""
        return self.input_cardinality ** self.n_parties


def index_of(bits: Sequence[int]) -> int:
    """Bits (party 1 first) -> integer, party 1 is the most significant bit"""
    value = 0
    for bit in bits:
        if bit not in (0, 1):
            raise PreconditionError(f"Bit values must be 0 or 1, got {bit}")
        value = (value << 1) | bit
    return value


def bits_of(index: int, n: int) -> List[int]:
    """Integer -> list of n bits, party 1 first"""
    if not 0 <= index < (1 << n):
        raise PreconditionError(f"Index {index} out of range for n={n}")
    return [(index >> (n - 1 - i)) & 1 for i in range(n)]


def party_bit(index: int, party: int, n: int) -> int:
    """Bit of a 1-based party inside an index"""
    return (index >> (n - party)) & 1


def party_mask(party: int, n: int) -> int:
    return 1 << (n - party)


@dataclass(frozen=True)
class BitString:
    n: int
    value: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.n):
            raise PreconditionError(f"Value {self.value} out of range for n={self.n}")

    @property
    def bits(self) -> List[int]:
        return bits_of(self.value, self.n)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


# ============================================================================
# LOCAL & PRODUCT OPERATIONS
# ============================================================================

@dataclass(frozen=True)
class LocalOp:
    tag: int

    def __post_init__(self):
        if self.tag not in LOCAL_TABLES:
            raise PreconditionError(f"Tag {self.tag} is not a local operation")

    @property
    def table(self) -> np.ndarray:
        return np.array(LOCAL_TABLES[self.tag], dtype=np.int8)

    def apply(self, x: int) -> int:
        """Output bit produced for input bit x"""
        column = [LOCAL_TABLES[self.tag][a][x] for a in (0, 1)]
        return column.index(1)


@dataclass(frozen=True)
class ProductOp:
    """Tensor product of local operations; map[x] is the output string a"""
    tags: Tuple[int, ...]
    map: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tags = tuple(int(t) for t in self.tags)
        locals_ = [LocalOp(t) for t in tags]
        n = len(tags)
        mapping = []
        for x in range(1 << n):
            a_bits = [op.apply(bit) for op, bit in zip(locals_, bits_of(x, n))]
            mapping.append(index_of(a_bits))
        object.__setattr__(self, "tags", tags)
        object.__setattr__(self, "map", tuple(mapping))

    @property
    def n(self) -> int:
        return len(self.tags)

    def apply(self, x: int) -> int:
        return self.map[x]

    def ones(self) -> List[Tuple[int, int]]:
        """Index pairs (a, x) where D(a|x) = 1"""
        return [(a, x) for x, a in enumerate(self.map)]

    def matrix(self) -> np.ndarray:
        size = 1 << self.n
        d = np.zeros((size, size), dtype=np.int64)
        d[list(self.map), np.arange(size)] = 1
        return d

    def describe(self) -> str:
        return " x ".join(LOCAL_NAMES[t] for t in self.tags)


@lru_cache(maxsize=None)
def product_op(tags: Tuple[int, ...]) -> ProductOp:
    return ProductOp(tuple(tags))


@lru_cache(maxsize=None)
def all_product_ops(n: int) -> Tuple[ProductOp, ...]:
    """All 4^n product operations in tag-lexicographic order"""
    if not 1 <= n <= MAX_PARTIES:
        raise PreconditionError(f"Product operations are built for 1 <= n <= {MAX_PARTIES}, got {n}")
    return tuple(product_op(tags) for tags in product(range(4), repeat=n))


@lru_cache(maxsize=None)
def op_table(n: int) -> np.ndarray:
    """Row k holds the map x -> a of the k-th product operation"""
    table = np.array([op.map for op in all_product_ops(n)], dtype=np.int64)
    table.setflags(write=False)
    return table


# ============================================================================
# BEHAVIORS
# ============================================================================

def fraction_array(shape, fill=0) -> np.ndarray:
    """Object array of Fractions, used for every exact vector"""
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(fill))
    return arr


def as_fractions(values) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


@dataclass
class Behavior:
    """P(a|x) over the scenario, p[a, x]"""
    scenario: Scenario
    p: np.ndarray

    def is_normalized(self) -> bool:
        if any(v < 0 for v in self.p.flat):
            return False
        return all(sum(self.p[:, x]) == 1 for x in range(self.p.shape[1]))

    def is_no_signaling(self) -> bool:
        """Marginal of every party group is independent of each other party's setting"""
        n = self.scenario.n_parties
        size = 1 << n
        for party in range(1, n + 1):
            mask = party_mask(party, n)
            for x in range(size):
                if x & mask:
                    continue
                for a in range(size):
                    if a & mask:
                        continue
                    lhs = self.p[a, x] + self.p[a | mask, x]
                    rhs = self.p[a, x | mask] + self.p[a | mask, x | mask]
                    if lhs != rhs:
                        return False
        return True


def local_det_behavior(op: ProductOp) -> Behavior:
    """Q(a|x) = 1 iff a = op(x)"""
    size = 1 << op.n
    q = fraction_array((size, size))
    for a, x in op.ones():
        q[a, x] = Fraction(1)
    return Behavior(Scenario(op.n), q)


# ============================================================================
# INNER PRODUCT
# ============================================================================

def entries(v) -> np.ndarray:
    """Underlying (a, x) array of a process vector, behavior or operation"""
    if isinstance(v, ProductOp):
        return v.matrix()
    if isinstance(v, Behavior):
        return v.p
    if hasattr(v, "m"):
        return v.m
    return np.asarray(v)


def inner(u, v) -> Fraction:
    """Exact sum over (a, x) of u(a|x) v(a|x)"""
    left, right = entries(u), entries(v)
    if left.shape != right.shape:
        raise PreconditionError(f"Dimension mismatch: {left.shape} vs {right.shape}")
    total = Fraction(0)
    for l_val, r_val in zip(left.flat, right.flat):
        if l_val and r_val:
            total += Fraction(l_val) * Fraction(r_val)
    return total
