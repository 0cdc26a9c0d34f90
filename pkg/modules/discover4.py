"""
FOUR-PARTY DISCOVERY
Relabeling symmetry, canonical forms and ILP sampling of deterministic vertices

Features:
- Symmetry group of party permutations with input and output bit flips
- Vectorized orbit scan for canonical keys (6144 elements for n = 4)
- Branch-and-bound over scipy's HiGHS LP with an exact integer check
- Seeded, time-bounded sampler returning consistent processes
"""

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from config import ILP_CONFIG, LP_CONFIG, MAX_PARTIES, RANDOM_SEED
from modules.bitcore import bits_of, index_of
from modules.errors import PreconditionError, SolverError
from modules.geometry import HPolytope, cp_hrep
from modules.process import DetProcess, is_consistent

logger = logging.getLogger(__name__)


# ============================================================================
# SYMMETRY GROUP
# ============================================================================

@dataclass(frozen=True)
class SymmetryElement:
    """
    Party i becomes party perm[i]; its output is read through a flip by v[i]
    and its input is flipped by u[i]
    """
    perm: Tuple[int, ...]
    u: Tuple[int, ...]
    v: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SymmetryElement":
        return cls(tuple(range(n)), (0,) * n, (0,) * n)

    def output_map(self) -> List[int]:
        """out[a'] = a with a_i = a'_{perm(i)} xor v_i"""
        n = self.n
        out = []
        for a_new in range(1 << n):
            new_bits = bits_of(a_new, n)
            out.append(index_of([new_bits[self.perm[i]] ^ self.v[i] for i in range(n)]))
        return out

    def input_map(self) -> List[int]:
        """in[x] = x' with x'_{perm(i)} = x_i xor u_i"""
        n = self.n
        out = []
        for x in range(1 << n):
            bits = bits_of(x, n)
            new_bits = [0] * n
            for i in range(n):
                new_bits[self.perm[i]] = bits[i] ^ self.u[i]
            out.append(index_of(new_bits))
        return out


def compose(g: SymmetryElement, h: SymmetryElement) -> SymmetryElement:
    """g after h: act(compose(g, h), f) == act(g, act(h, f))"""
    if g.n != h.n:
        raise PreconditionError("Cannot compose elements acting on different party counts")
    n = g.n
    perm = tuple(g.perm[h.perm[i]] for i in range(n))
    u = tuple(h.u[i] ^ g.u[h.perm[i]] for i in range(n))
    v = tuple(h.v[i] ^ g.v[h.perm[i]] for i in range(n))
    return SymmetryElement(perm, u, v)


def act(g: SymmetryElement, f: DetProcess) -> DetProcess:
    if g.n != f.n:
        raise PreconditionError(f"Element acts on {g.n} parties, process has {f.n}")
    out_map, in_map = g.output_map(), g.input_map()
    return DetProcess(f.n, tuple(in_map[f(out_map[a])] for a in range(1 << f.n)))


def group_order(n: int) -> int:
    return factorial(n) * 4 ** n


@lru_cache(maxsize=None)
def group_elements(n: int) -> Tuple[SymmetryElement, ...]:
    if not 1 <= n <= MAX_PARTIES:
        raise PreconditionError(f"Symmetry group is built for 1 <= n <= {MAX_PARTIES}, got {n}")
    flips = list(product((0, 1), repeat=n))
    return tuple(
        SymmetryElement(perm, u, v)
        for perm in permutations(range(n))
        for u in flips
        for v in flips
    )


@lru_cache(maxsize=None)
def _group_tables(n: int) -> Tuple[np.ndarray, np.ndarray]:
    elements = group_elements(n)
    out_maps = np.array([g.output_map() for g in elements], dtype=np.int64)
    in_maps = np.array([g.input_map() for g in elements], dtype=np.int64)
    out_maps.setflags(write=False)
    in_maps.setflags(write=False)
    return out_maps, in_maps


def random_element(n: int, rng: np.random.Generator) -> SymmetryElement:
    return SymmetryElement(
        tuple(int(i) for i in rng.permutation(n)),
        tuple(int(b) for b in rng.integers(0, 2, n)),
        tuple(int(b) for b in rng.integers(0, 2, n)),
    )


# ============================================================================
# ORBITS & CANONICAL FORMS
# ============================================================================

def _orbit_rows(f: DetProcess) -> np.ndarray:
    """One row per group element: the relabeled x_of_a"""
    out_maps, in_maps = _group_tables(f.n)
    images = f.as_array()[out_maps]
    return np.take_along_axis(in_maps, images, axis=1)


def _pack(rows: np.ndarray, n: int) -> np.ndarray:
    """First entry most significant, so packed order is lexicographic order"""
    size = rows.shape[1]
    shifts = np.array([n * (size - 1 - k) for k in range(size)], dtype=np.uint64)
    return np.bitwise_or.reduce(rows.astype(np.uint64) << shifts, axis=1)


def _key_string(packed: int, n: int) -> str:
    digits = -(-(n << n) // 4)
    return format(int(packed), f"0{digits}x")


def canonical_form(f: DetProcess) -> str:
    """Hex key of the lexicographically smallest x_of_a in the orbit"""
    return _key_string(_pack(_orbit_rows(f), f.n).min(), f.n)


def canonical_representative(f: DetProcess) -> DetProcess:
    rows = _orbit_rows(f)
    best = rows[np.lexsort(rows.T[::-1])[0]]
    return DetProcess(f.n, tuple(int(x) for x in best))


def canonical_forms(processes: Sequence[DetProcess]) -> List[str]:
    return [canonical_form(f) for f in processes]


def process_from_key(key: str, n: int) -> DetProcess:
    value = int(key, 16)
    size = 1 << n
    mask = size - 1
    return DetProcess(n, tuple((value >> (n * (size - 1 - a))) & mask for a in range(size)))


def orbit(f: DetProcess) -> List[DetProcess]:
    rows = np.unique(_orbit_rows(f), axis=0)
    return [DetProcess(f.n, tuple(int(x) for x in row)) for row in rows]


def orbit_expand(f: DetProcess) -> int:
    """Exact orbit size by group action"""
    return int(len(np.unique(_pack(_orbit_rows(f), f.n))))


# ============================================================================
# BRANCH AND BOUND
# ============================================================================

@dataclass
class BranchStats:
    nodes: int = 0
    lp_solves: int = 0
    pruned: int = 0
    cut_off: bool = False


def branch_and_bound(h: HPolytope, objective,
                     max_nodes: int = ILP_CONFIG["max_nodes"],
                     stats: Optional[BranchStats] = None) -> Optional[np.ndarray]:
    """
    Best 0/1 point of h under objective (maximized)

    Depth-first, branching on the most fractional coordinate. Leaves are
    accepted only after an exact integer check of every equality row.
    """
    stats = stats if stats is not None else BranchStats()
    c = -np.array([float(v) for v in np.asarray(objective).reshape(-1)])
    a_eq = np.array(h.eq_A, dtype=float)
    b_eq = np.array(h.eq_b, dtype=float)
    a_int = np.array([[int(v) for v in row] for row in h.eq_A], dtype=np.int64)
    b_int = np.array([int(v) for v in h.eq_b], dtype=np.int64)
    tol = LP_CONFIG["integrality_tol"]

    best_value = -np.inf
    best_point = None
    stack = [(np.zeros(h.dim), np.ones(h.dim))]
    nodes = 0

    while stack:
        if nodes >= max_nodes:
            stats.cut_off = True
            logger.debug("Branch and bound stopped at %d nodes", nodes)
            break
        lower, upper = stack.pop()
        nodes += 1
        stats.nodes += 1
        res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=list(zip(lower, upper)), method=LP_CONFIG["method"])
        stats.lp_solves += 1
        if res.status != 0:
            stats.pruned += 1
            continue
        value = -res.fun
        if value <= best_value + tol:
            stats.pruned += 1
            continue

        distance = np.abs(res.x - np.round(res.x))
        if distance.max() <= tol:
            candidate = np.round(res.x).astype(np.int64)
            if np.array_equal(a_int @ candidate, b_int) and candidate.min() >= 0:
                best_value, best_point = value, candidate
            else:
                stats.pruned += 1
            continue

        j = int(np.argmax(distance))
        down_upper = upper.copy()
        down_upper[j] = 0.0
        up_lower = lower.copy()
        up_lower[j] = 1.0
        # the child nearer the relaxed value is explored first
        if res.x[j] >= 0.5:
            stack.append((lower, down_upper))
            stack.append((up_lower, upper))
        else:
            stack.append((up_lower, upper))
            stack.append((lower, down_upper))

    return best_point


def vertex_to_process(point: np.ndarray, n: int) -> DetProcess:
    """0/1 row-stochastic point -> the function a -> x"""
    size = 1 << n
    m = np.asarray(point, dtype=np.int64).reshape(size, size)
    if not (np.all(m.sum(axis=1) == 1) and set(np.unique(m)) <= {0, 1}):
        raise SolverError("Integer vertex is not a row-stochastic 0/1 matrix")
    return DetProcess(n, tuple(int(x) for x in m.argmax(axis=1)))


@dataclass
class SampleResult:
    seed: int
    processes: List[DetProcess] = field(default_factory=list)
    stats: Dict = field(default_factory=dict)


def ilp_sample(seed: int = RANDOM_SEED,
               seconds: float = ILP_CONFIG["default_seconds"],
               max_objectives: Optional[int] = None,
               n: int = ILP_CONFIG["n_parties"],
               objective_range: int = LP_CONFIG["objective_range"]) -> SampleResult:
    """Integer optima of seeded random objectives until the time budget is spent"""
    h = cp_hrep(n)
    rng = np.random.default_rng(seed)
    result = SampleResult(seed=seed)
    seen = set()
    stats = BranchStats()
    objectives = 0
    started = time.monotonic()

    while time.monotonic() - started < seconds:
        if max_objectives is not None and objectives >= max_objectives:
            break
        objectives += 1
        objective = rng.integers(-objective_range, objective_range + 1, size=h.dim)
        point = branch_and_bound(h, objective, stats=stats)
        if point is None:
            continue
        f = vertex_to_process(point, n)
        if not is_consistent(f):
            raise SolverError(f"Integer vertex {f.x_of_a} fails the consistency check")
        if f.x_of_a not in seen:
            seen.add(f.x_of_a)
            result.processes.append(f)

    result.stats = {
        "objectives": objectives,
        "distinct_vertices": len(result.processes),
        "nodes": stats.nodes,
        "lp_solves": stats.lp_solves,
        "seconds": round(time.monotonic() - started, 2),
    }
    logger.info("Seed %d: %d objectives, %d distinct vertices", seed, objectives, len(result.processes))
    return result
