"""
POLYTOPE GEOMETRY
Exact-rational H/V representations for the no-signaling and process polytopes

Features:
- H-representations of the no-signaling set and of the classical-process set
- Exact Gaussian elimination (affine hulls, null spaces, span membership)
- Double description vertex enumeration over the affine hull
- LP vertices with exact rational recovery of the optimal basis
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from config import DD_CONFIG, LP_CONFIG, LP_TOL, MAX_PARTIES
from modules.bitcore import all_product_ops, as_fractions, party_mask
from modules.errors import (
    BudgetExceededError, InconsistentSystemError, PreconditionError, SolverError,
)

logger = logging.getLogger(__name__)


# ============================================================================
# EXACT LINEAR ALGEBRA
# ============================================================================

def rref(rows) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row-echelon form over the rationals; zero rows are dropped"""
    matrix = [[Fraction(v) for v in row] for row in rows]
    n_cols = len(matrix[0]) if matrix else 0
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == len(matrix):
            break
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        if lead != 1:
            matrix[r] = [v / lead for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [vi - factor * vr for vi, vr in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
    return matrix[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def primitive(vector: Sequence) -> Tuple[int, ...]:
    """Positive multiple of a rational vector with coprime integer entries"""
    values = [Fraction(v) for v in vector]
    scale = 1
    for v in values:
        scale = _lcm(scale, v.denominator)
    ints = [int(v * scale) for v in values]
    common = 0
    for v in ints:
        common = gcd(common, abs(v))
    if common > 1:
        ints = [v // common for v in ints]
    return tuple(ints)


def _int_matrix(rows) -> Optional[np.ndarray]:
    """int64 copy when every entry is a small integer, else None"""
    arr = np.asarray(rows, dtype=object)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    flat = [Fraction(v) for v in arr.flat]
    if any(v.denominator != 1 or abs(v.numerator) >= 2 ** 24 for v in flat):
        return None
    return np.array([int(v) for v in flat], dtype=np.int64).reshape(arr.shape)


def null_space(rows, n_cols: int) -> List[Tuple[int, ...]]:
    """Integer basis of {z : rows . z = 0}"""
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for j in free:
        v = [Fraction(0)] * n_cols
        v[j] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[j]
        basis.append(primitive(v))
    return basis


def span_membership(basis_rows, rows) -> np.ndarray:
    """Boolean mask: which rows lie in the linear span of basis_rows"""
    rows = np.asarray(rows, dtype=object)
    if rows.ndim == 1:
        rows = rows[None, :]
    n_cols = rows.shape[1]
    kernel = null_space(basis_rows, n_cols)
    if not kernel:
        return np.ones(len(rows), dtype=bool)
    kernel_arr = np.array(kernel, dtype=object).T
    fast_rows, fast_kernel = _int_matrix(rows), _int_matrix(kernel_arr)
    if fast_rows is not None and fast_kernel is not None:
        products = fast_rows @ fast_kernel
    else:
        products = as_fractions(rows).dot(kernel_arr)
    return np.array([all(v == 0 for v in row) for row in np.atleast_2d(products)], dtype=bool)


@dataclass
class AffineHull:
    """Solution set of an equality system, kept in reduced form"""
    dim: int
    rows: List[List[Fraction]]
    rhs: List[Fraction]
    pivots: List[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def dimension(self) -> int:
        return self.dim - self.rank

    @property
    def free_columns(self) -> List[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.dim) if c not in pivot_set]

    def particular_solution(self) -> List[Fraction]:
        x0 = [Fraction(0)] * self.dim
        for p, value in zip(self.pivots, self.rhs):
            x0[p] = value
        return x0

    def direction_basis(self) -> List[List[Fraction]]:
        """One direction per free coordinate; its coefficient equals that coordinate"""
        basis = []
        for j in self.free_columns:
            v = [Fraction(0)] * self.dim
            v[j] = Fraction(1)
            for row, p in zip(self.rows, self.pivots):
                v[p] = -row[j]
            basis.append(v)
        return basis


def affine_hull(eq_A, eq_b=None) -> AffineHull:
    """Exact Gaussian elimination of A p = b"""
    eq_A = np.asarray(eq_A, dtype=object)
    if eq_A.ndim != 2:
        raise PreconditionError("Equality matrix must be two-dimensional")
    n_rows, dim = eq_A.shape
    eq_b = [Fraction(0)] * n_rows if eq_b is None else list(eq_b)
    if len(eq_b) != n_rows:
        raise PreconditionError(f"{n_rows} equality rows but {len(eq_b)} right-hand sides")

    augmented = [list(row) + [rhs] for row, rhs in zip(eq_A, eq_b)]
    reduced, pivots = rref(augmented)
    if dim in pivots:
        raise InconsistentSystemError("Equality system reduces to 0 = nonzero")
    return AffineHull(
        dim=dim,
        rows=[row[:dim] for row in reduced],
        rhs=[row[dim] for row in reduced],
        pivots=pivots,
    )


# ============================================================================
# POLYTOPE REPRESENTATIONS
# ============================================================================

@dataclass
class HPolytope:
    """{p : eq_A p = eq_b, ineq_A p >= ineq_b} over (a, x) coordinates"""
    dim: int
    eq_A: np.ndarray
    eq_b: np.ndarray
    ineq_A: np.ndarray
    ineq_b: np.ndarray
    label: str = ""

    @classmethod
    def with_nonnegativity(cls, eq_rows, eq_rhs, label: str = "") -> "HPolytope":
        eq_A = as_fractions(eq_rows)
        dim = eq_A.shape[1]
        return cls(
            dim=dim,
            eq_A=eq_A,
            eq_b=as_fractions(eq_rhs),
            ineq_A=as_fractions(np.eye(dim, dtype=np.int64)),
            ineq_b=as_fractions(np.zeros(dim, dtype=np.int64)),
            label=label,
        )

    @property
    def equalities(self) -> List[Tuple[np.ndarray, Fraction]]:
        return list(zip(self.eq_A, self.eq_b))

    @property
    def inequalities(self) -> List[Tuple[np.ndarray, Fraction]]:
        return list(zip(self.ineq_A, self.ineq_b))

    @cached_property
    def hull(self) -> AffineHull:
        return affine_hull(self.eq_A, self.eq_b)

    @cached_property
    def nonnegative_orthant(self) -> bool:
        """True when the inequalities are exactly p >= 0"""
        if self.ineq_A.shape != (self.dim, self.dim):
            return False
        identity = np.eye(self.dim, dtype=np.int64)
        return all(v == w for v, w in zip(self.ineq_A.flat, identity.flat)) and \
            all(v == 0 for v in self.ineq_b)

    def augmented_equalities(self) -> np.ndarray:
        return np.hstack([self.eq_A, self.eq_b.reshape(-1, 1)])

    def contains(self, point) -> bool:
        """Exact membership, zero tolerance"""
        point = as_fractions(point).reshape(-1)
        if len(point) != self.dim:
            return False
        if any(row.dot(point) != rhs for row, rhs in zip(self.eq_A, self.eq_b)):
            return False
        return all(row.dot(point) >= rhs for row, rhs in zip(self.ineq_A, self.ineq_b))


@dataclass
class VPolytope:
    vertices: List[np.ndarray]
    complete: bool = True
    stats: Dict = field(default_factory=dict)

    def as_set(self) -> set:
        return {tuple(v) for v in self.vertices}

    def integer_vertices(self) -> List[np.ndarray]:
        return [v for v in self.vertices if all(x in (0, 1) for x in v)]

    def fractional_vertices(self) -> List[np.ndarray]:
        return [v for v in self.vertices if any(x not in (0, 1) for x in v)]

    def is_irredundant(self) -> bool:
        """No vertex is a convex combination of the others (LP feasibility)"""
        points = np.array([[float(x) for x in v] for v in self.vertices])
        for k in range(len(points)):
            others = np.delete(points, k, axis=0)
            if not len(others):
                continue
            a_eq = np.vstack([others.T, np.ones(len(others))])
            b_eq = np.append(points[k], 1.0)
            res = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq,
                          bounds=(0, None), method="highs")
            if res.status == 0:
                return False
        return True


# ============================================================================
# H-REPRESENTATIONS
# ============================================================================

def _check_n(n: int):
    if not 1 <= n <= MAX_PARTIES:
        raise PreconditionError(f"n must lie in [1, {MAX_PARTIES}], got {n}")


def ns_hrep(n: int) -> HPolytope:
    """Normalization per setting, marginal equalities, nonnegativity"""
    _check_n(n)
    size = 1 << n
    rows, rhs = [], []

    for x in range(size):
        row = np.zeros((size, size), dtype=np.int64)
        row[:, x] = 1
        rows.append(row.reshape(-1))
        rhs.append(1)

    # Marginal of the other parties cannot depend on x_i
    for party in range(1, n + 1):
        mask = party_mask(party, n)
        for x in range(size):
            if x & mask:
                continue
            for a in range(size):
                if a & mask:
                    continue
                row = np.zeros((size, size), dtype=np.int64)
                row[a, x] = row[a | mask, x] = 1
                row[a, x | mask] = row[a | mask, x | mask] = -1
                rows.append(row.reshape(-1))
                rhs.append(0)

    return HPolytope.with_nonnegativity(np.array(rows), np.array(rhs), label=f"NS({n})")


def cp_hrep(n: int) -> HPolytope:
    """inner(M, D) = 1 for every product operation, plus nonnegativity"""
    _check_n(n)
    rows = np.array([op.matrix().reshape(-1) for op in all_product_ops(n)])
    return HPolytope.with_nonnegativity(rows, np.ones(len(rows), dtype=np.int64), label=f"CP({n})")


# ============================================================================
# DOUBLE DESCRIPTION
# ============================================================================

def _popcount(bits: int) -> int:
    return bin(bits).count("1")


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _independent_rows(rows: List[Tuple[int, ...]], target: int) -> List[int]:
    """First rows (in order) that raise the rank, until target is reached"""
    chosen: List[int] = []
    for idx in range(len(rows)):
        if rank([rows[i] for i in chosen] + [rows[idx]]) > len(chosen):
            chosen.append(idx)
            if len(chosen) == target:
                break
    return chosen


def _inverse_columns(rows: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Columns of the inverse of a square exact matrix, made primitive"""
    d = len(rows)
    augmented = [list(row) + [1 if i == j else 0 for j in range(d)] for i, row in enumerate(rows)]
    reduced, _ = rref(augmented)
    inverse = [row[d:] for row in reduced]
    return [primitive([inverse[i][j] for i in range(d)]) for j in range(d)]


def vertex_enum(h: HPolytope,
                max_affine_dim: int = DD_CONFIG["max_affine_dim"],
                max_rays: int = DD_CONFIG["max_rays"]) -> VPolytope:
    """
    Double description on the homogenized cone of the polytope

    Points are written p = x0 + sum_j y_j v_j over the affine hull. The cone
    {(s, y) : s (G x0 - h) + G V y >= 0, s >= 0} has one extreme ray with
    s > 0 per vertex. Rows are inserted in index order; adjacency of two rays
    is decided combinatorially from their zero sets.
    """
    hull = h.hull
    x0 = hull.particular_solution()
    directions = hull.direction_basis()
    k = len(directions)
    if k > max_affine_dim:
        raise BudgetExceededError(f"Affine dimension {k} exceeds the guard of {max_affine_dim}")
    d = k + 1

    cone_rows: List[Tuple[int, ...]] = []
    for g, rhs in zip(h.ineq_A, h.ineq_b):
        offset = sum(gi * xi for gi, xi in zip(g, x0) if gi) - rhs
        coeffs = [sum(gi * vi for gi, vi in zip(g, v) if gi) for v in directions]
        if all(c == 0 for c in coeffs):
            if offset < 0:
                logger.info("%s is empty", h.label or "Polytope")
                return VPolytope([], complete=True, stats={"affine_dim": k})
            continue
        cone_rows.append(primitive([offset] + coeffs))
    cone_rows.append(tuple([1] + [0] * k))

    initial = _independent_rows(cone_rows, d)
    if len(initial) < d:
        raise SolverError("Homogenized cone is not pointed; polytope is unbounded")

    rays = _inverse_columns([cone_rows[i] for i in initial])
    all_initial = 0
    for i in initial:
        all_initial |= 1 << i
    zero_sets = [all_initial & ~(1 << initial[j]) for j in range(d)]

    remaining = [i for i in range(len(cone_rows)) if i not in set(initial)]
    complete = True
    peak = len(rays)
    logger.info("DD on %s: affine dim %d, %d constraints", h.label or "polytope", k, len(cone_rows))

    for step, idx in enumerate(remaining):
        row = cone_rows[idx]
        values = [_dot(row, z) for z in rays]
        positive = [i for i, v in enumerate(values) if v > 0]
        negative = [i for i, v in enumerate(values) if v < 0]
        zero = [i for i, v in enumerate(values) if v == 0]

        new_rays = [rays[i] for i in positive] + [rays[i] for i in zero]
        new_zero = [zero_sets[i] for i in positive] + [zero_sets[i] | (1 << idx) for i in zero]

        for i in positive:
            for j in negative:
                common = zero_sets[i] & zero_sets[j]
                if _popcount(common) < d - 2:
                    continue
                adjacent = True
                for w in range(len(rays)):
                    if w != i and w != j and (zero_sets[w] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combined = [values[i] * zj - values[j] * zi for zi, zj in zip(rays[i], rays[j])]
                new_rays.append(primitive(combined))
                new_zero.append(common | (1 << idx))

        rays, zero_sets = new_rays, new_zero
        peak = max(peak, len(rays))
        logger.debug("DD step %d/%d: %d rays", step + 1, len(remaining), len(rays))
        if len(rays) > max_rays:
            logger.warning("DD cut off after %d rows with %d rays", step + 1, len(rays))
            complete = False
            break

    if not complete:
        rays = [z for z in rays if all(_dot(r, z) >= 0 for r in cone_rows)]

    vertices = []
    for z in rays:
        s = z[0]
        if s <= 0:
            continue
        point = list(x0)
        for yj, v in zip(z[1:], directions):
            if yj:
                weight = Fraction(yj, s)
                point = [p + weight * vi for p, vi in zip(point, v)]
        vertices.append(np.array(point, dtype=object))
    vertices.sort(key=tuple)

    logger.info("DD on %s: %d vertices (complete=%s)", h.label or "polytope", len(vertices), complete)
    return VPolytope(vertices, complete=complete,
                     stats={"affine_dim": k, "constraints": len(cone_rows), "peak_rays": peak})


# ============================================================================
# LINEAR PROGRAMMING
# ============================================================================

def _lp_arrays(h: HPolytope):
    kwargs = {
        "A_eq": np.array(h.eq_A, dtype=float),
        "b_eq": np.array(h.eq_b, dtype=float),
    }
    if h.nonnegative_orthant:
        kwargs["bounds"] = (0, None)
    else:
        kwargs["A_ub"] = -np.array(h.ineq_A, dtype=float)
        kwargs["b_ub"] = -np.array(h.ineq_b, dtype=float)
        kwargs["bounds"] = (None, None)
    return kwargs


def _solve_exact(rows: List[List[Fraction]], rhs: List[Fraction],
                 columns: List[int]) -> Optional[List[Fraction]]:
    """Unique solution of the system restricted to columns, or None"""
    augmented = [[row[c] for c in columns] + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if len(columns) in pivots or len(pivots) != len(columns):
        return None
    return [row[-1] for row in reduced]


def is_vertex(h: HPolytope, point) -> bool:
    """Exact vertex test: feasible and its tight constraints pin a single point"""
    point = as_fractions(point).reshape(-1)
    if not h.contains(point):
        return False
    hull = h.hull
    if h.nonnegative_orthant:
        support = [i for i, v in enumerate(point) if v != 0]
        return _solve_exact(hull.rows, hull.rhs, support) is not None
    tight = [row for row, b in zip(h.ineq_A, h.ineq_b) if row.dot(point) == b]
    return rank(list(hull.rows) + [list(r) for r in tight]) == h.dim


def _exact_vertex(h: HPolytope, approx: np.ndarray) -> np.ndarray:
    hull = h.hull
    tol = LP_CONFIG["support_tol"]
    point = [Fraction(0)] * h.dim

    if h.nonnegative_orthant:
        support = [i for i, v in enumerate(approx) if v > tol]
        values = _solve_exact(hull.rows, hull.rhs, support)
        if values is None:
            raise SolverError("LP solution is not basic: support columns are dependent")
        for i, v in zip(support, values):
            point[i] = v
    else:
        slack = np.array(h.ineq_A, dtype=float) @ approx - np.array(h.ineq_b, dtype=float)
        tight = [k for k, s in enumerate(slack) if abs(s) <= max(tol, LP_TOL)]
        rows = list(hull.rows) + [list(h.ineq_A[k]) for k in tight]
        rhs = list(hull.rhs) + [h.ineq_b[k] for k in tight]
        values = _solve_exact(rows, rhs, list(range(h.dim)))
        if values is None:
            raise SolverError("Tight constraints do not determine a single point")
        point = values

    exact = np.array(point, dtype=object)
    if not h.contains(exact):
        raise SolverError("Recovered vertex violates the H-representation")
    return exact


def lp_vertex(h: HPolytope, objective, method: str = LP_CONFIG["method"]) -> np.ndarray:
    """Maximize objective . p and return the optimal basic point exactly"""
    c = np.array([float(v) for v in np.asarray(objective).reshape(-1)])
    if len(c) != h.dim:
        raise PreconditionError(f"Objective has {len(c)} entries, polytope dimension is {h.dim}")
    res = linprog(-c, method=method, **_lp_arrays(h))
    if res.status == 3:
        raise SolverError(f"{h.label or 'Polytope'} is unbounded along the objective")
    if res.status == 2:
        raise SolverError(f"{h.label or 'Polytope'} is infeasible")
    if res.status != 0:
        raise SolverError(f"linprog failed: {res.message}")
    return _exact_vertex(h, res.x)


@dataclass
class FractionalVertex:
    trial: int
    point: np.ndarray


def sample_fractional_vertices(h: HPolytope, count: int, seed: int,
                               max_trials: int = LP_CONFIG["fractional_trials"],
                               objective_range: int = LP_CONFIG["objective_range"]) -> List[FractionalVertex]:
    """Distinct non-integer vertices hit by seeded random objectives"""
    rng = np.random.default_rng(seed)
    found: List[FractionalVertex] = []
    seen = set()
    for trial in range(max_trials):
        objective = rng.integers(-objective_range, objective_range + 1, size=h.dim)
        point = lp_vertex(h, objective)
        if all(v in (0, 1) for v in point):
            continue
        key = tuple(point)
        if key in seen:
            continue
        seen.add(key)
        found.append(FractionalVertex(trial, point))
        logger.info("Fractional vertex %d found at trial %d (seed %d)", len(found), trial, seed)
        if len(found) >= count:
            break
    if len(found) < count:
        logger.warning("Only %d of %d fractional vertices found in %d trials", len(found), count, max_trials)
    return found


def solution_set_strictly_larger(kept_rows, removed_rows, rhs: int = 1) -> Dict:
    """
    Compare {M >= 0 : kept . M = rhs} against the set that also honors removed rows

    Returns LP evidence: a removed row whose value ranges beyond rhs on the
    relaxed set proves the relaxed set is strictly larger.
    """
    kept = np.array(kept_rows, dtype=float)
    removed = np.array(removed_rows, dtype=float)
    if removed.ndim == 1:
        removed = removed[None, :]
    b_eq = np.full(len(kept), float(rhs))

    augmented_kept = np.hstack([np.asarray(kept_rows, dtype=object), np.full((len(kept), 1), rhs, dtype=object)])
    augmented_removed = np.hstack([np.asarray(removed_rows, dtype=object).reshape(len(removed), -1),
                                   np.full((len(removed), 1), rhs, dtype=object)])
    in_span = span_membership(augmented_kept, augmented_removed)

    report = {
        "rank_kept": rank(np.asarray(kept_rows, dtype=object)),
        "rank_all": rank(np.vstack([np.asarray(kept_rows, dtype=object),
                                    np.asarray(removed_rows, dtype=object).reshape(len(removed), -1)])),
        "removed_rows_in_span": bool(in_span.all()),
        "strictly_larger": False,
        "witness": None,
    }
    for k, row in enumerate(removed):
        for sense in (1.0, -1.0):
            res = linprog(-sense * row, A_eq=kept, b_eq=b_eq, bounds=(0, None), method="highs")
            if res.status == 3:
                report["strictly_larger"] = True
                report["witness"] = {"removed_row": k, "value": "unbounded"}
                return report
            if res.status != 0:
                raise SolverError(f"linprog failed on the relaxed set: {res.message}")
            value = float(row @ res.x)
            if abs(value - rhs) > LP_TOL:
                report["strictly_larger"] = True
                report["witness"] = {"removed_row": k, "value": value}
                return report
    return report
