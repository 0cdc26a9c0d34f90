"""
DUALITY CHECKS
No-signaling from classical processes, and classical processes from local states

Features:
- The one-party-in-the-future process family and its constant-input companions
- Gaussian-elimination derivation of the no-signaling equalities
- Both directions of the operational duality, with a negative control
- Sampled (4,2,2) check of the local-state direction
"""

import logging
from dataclasses import asdict, dataclass, field
from functools import reduce
from itertools import product
from typing import Dict, List, Optional, Sequence

import numpy as np

from modules.bitcore import LocalOp, all_product_ops, bits_of, index_of, op_table
from modules.errors import PreconditionError
from modules.geometry import (
    HPolytope, cp_hrep, ns_hrep, rank, solution_set_strictly_larger, span_membership, vertex_enum,
)
from modules.process import DetProcess, enumerate_det, is_consistent, to_matrix

logger = logging.getLogger(__name__)


# ============================================================================
# PROCESS FAMILIES
# ============================================================================

def build_md_family(n: int, future_party: int, constants: Sequence[int],
                    channel_flips: Sequence[int]) -> DetProcess:
    """
    Everybody but future_party receives a constant; future_party receives
    OR(b_j) with b_j = a_j xor c_j over the other parties
    """
    if not 1 <= future_party <= n:
        raise PreconditionError(f"future_party must lie in [1, {n}], got {future_party}")
    if len(constants) != n - 1 or len(channel_flips) != n - 1:
        raise PreconditionError(f"Need {n - 1} constants and channel flips")

    others = [p for p in range(1, n + 1) if p != future_party]
    x_of_a = []
    for a in range(1 << n):
        a_bits = bits_of(a, n)
        x_bits = [0] * n
        for party, const in zip(others, constants):
            x_bits[party - 1] = int(const)
        x_bits[future_party - 1] = int(any(a_bits[p - 1] ^ int(c) for p, c in zip(others, channel_flips)))
        x_of_a.append(index_of(x_bits))
    return DetProcess(n, tuple(x_of_a))


def md_family(n: int) -> List[DetProcess]:
    """All n * 2^(2(n-1)) members of the one-party-in-the-future family"""
    family = []
    for future in range(1, n + 1):
        for constants in product((0, 1), repeat=n - 1):
            for flips in product((0, 1), repeat=n - 1):
                family.append(build_md_family(n, future, constants, flips))
    return family


def constant_processes(n: int) -> List[DetProcess]:
    """Every party receives a constant: one process per input string"""
    return [DetProcess(n, tuple([x] * (1 << n))) for x in range(1 << n)]


def _augmented(rows: np.ndarray, rhs: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=object)
    return np.hstack([rows, np.full((len(rows), 1), rhs, dtype=object)])


def _process_rows(processes: Sequence[DetProcess]) -> np.ndarray:
    return np.array([to_matrix(f).m.reshape(-1) for f in processes], dtype=object)


# ============================================================================
# NO-SIGNALING FROM CLASSICAL PROCESSES
# ============================================================================

def derive_ns_from_cp(n: int, catalog: Optional[List[DetProcess]] = None) -> Dict:
    """
    Rebuild the no-signaling equalities from normalization against processes

    Constant-input processes give the per-setting normalization rows. Each
    one-party-in-the-future process minus a constant process gives a
    homogeneous row; together they must span exactly the no-signaling
    equalities. Rows of the remaining catalog must be redundant.
    """
    if n not in (2, 3):
        raise PreconditionError(f"derive_ns_from_cp supports n in {{2, 3}}, got {n}")

    constants = constant_processes(n)
    family = md_family(n)
    bad = [f.x_of_a for f in family if not is_consistent(f)]
    if bad:
        raise PreconditionError(f"{len(bad)} family members are inconsistent")

    normalization = _augmented(_process_rows(constants), 1)
    differences = _augmented(_process_rows(family), 1) - normalization[0]
    derived = np.vstack([normalization, differences])

    ns = ns_hrep(n).augmented_equalities()
    missing = [int(k) for k in np.flatnonzero(~span_membership(derived, ns))]
    extra = [int(k) for k in np.flatnonzero(~span_membership(ns, derived))]
    derived_rank = rank(derived)
    ns_rank = rank(ns)

    report = {
        "n": n,
        "family_size": len(family),
        "derived_rank": derived_rank,
        "ns_rank": ns_rank,
        "spans_match": not missing and not extra,
        "missing_ns_rows": missing,
        "extra_derived_rows": extra,
    }

    catalog = enumerate_det(n) if catalog is None else catalog
    catalog_rows = _augmented(_process_rows(catalog), 1)
    redundant = span_membership(derived, catalog_rows)
    report["catalog_size"] = len(catalog)
    report["catalog_rows_redundant"] = bool(redundant.all())
    report["non_redundant_catalog_rows"] = [int(k) for k in np.flatnonzero(~redundant)]

    logger.info("Derived rank %d vs no-signaling rank %d for n=%d (match=%s)",
                derived_rank, ns_rank, n, report["spans_match"])
    return report


# ============================================================================
# DUALITY
# ============================================================================

@dataclass
class DualityReport:
    n: int
    direction_a: str = "fail"
    direction_b: str = "fail"
    ranks: Dict = field(default_factory=dict)
    details: Dict = field(default_factory=dict)
    counterexamples: List[Dict] = field(default_factory=list)

    def to_json(self) -> Dict:
        return asdict(self)

    @property
    def passed(self) -> bool:
        return self.direction_a == "pass" and self.direction_b == "pass"


def _vertex_keys(vertices) -> set:
    return {tuple(str(v) for v in point) for point in vertices}


def _check_direction_a(report: DualityReport, catalog: List[DetProcess]):
    """Catalog normalization rows define the same set as the no-signaling H-rep"""
    n = report.n
    ns_rows = ns_hrep(n).augmented_equalities()
    catalog_rows = _augmented(_process_rows(catalog), 1)
    generating = _augmented(_process_rows(constant_processes(n) + md_family(n)), 1)

    catalog_in_ns = span_membership(ns_rows, catalog_rows)
    ns_in_generating = span_membership(generating, ns_rows)
    generating_in_catalog = span_membership(catalog_rows, generating)

    report.ranks["ns"] = rank(ns_rows)
    report.ranks["catalog"] = rank(catalog_rows)
    for k in np.flatnonzero(~catalog_in_ns):
        report.counterexamples.append({"direction": "a", "kind": "catalog_row_outside_ns",
                                       "x_of_a": list(catalog[k].x_of_a)})
    for k in np.flatnonzero(~ns_in_generating):
        report.counterexamples.append({"direction": "a", "kind": "ns_row_not_derived", "row": int(k)})
    for k in np.flatnonzero(~generating_in_catalog):
        report.counterexamples.append({"direction": "a", "kind": "family_row_outside_catalog", "row": int(k)})

    ok = bool(catalog_in_ns.all() and ns_in_generating.all() and generating_in_catalog.all())
    report.details["a_identical_hull"] = ok

    if n == 2:
        # identical equality spans give identical sets; enumerate both anyway
        ns_vertices = vertex_enum(ns_hrep(n))
        catalog_poly = HPolytope.with_nonnegativity(_process_rows(catalog),
                                                    np.ones(len(catalog), dtype=np.int64),
                                                    label="CatalogDual(2)")
        catalog_vertices = vertex_enum(catalog_poly)
        same = _vertex_keys(ns_vertices.vertices) == _vertex_keys(catalog_vertices.vertices)
        report.details["a_vertex_counts"] = [len(ns_vertices.vertices), len(catalog_vertices.vertices)]
        report.details["a_vertex_sets_equal"] = same
        ok = ok and same and ns_vertices.complete and catalog_vertices.complete
        report.details["ns_vertices"] = ns_vertices

    report.direction_a = "pass" if ok else "fail"


def local_state_rows(n: int) -> np.ndarray:
    """
    Flattened local deterministic states, one per product operation

    Each state is the Kronecker product of the single-party tables, party 1
    first, so it is built without the operation's output map.
    """
    rows = []
    for op in all_product_ops(n):
        q = reduce(np.kron, [LocalOp(t).table.astype(np.int64) for t in op.tags])
        rows.append(q.reshape(-1))
    return np.array(rows)


def _check_direction_b(report: DualityReport):
    """Local deterministic states define exactly the classical-process H-rep"""
    n = report.n
    ops = all_product_ops(n)
    state_rows = local_state_rows(n)

    cp = cp_hrep(n)
    cp_rows = np.array(cp.eq_A, dtype=object)
    identical = bool(np.array_equal(state_rows.astype(object), cp_rows))
    report.ranks["cp"] = cp.hull.rank
    report.details["b_rows_identical"] = identical
    ok = identical

    ns_vertices = report.details.pop("ns_vertices", None)
    if ns_vertices is not None:
        vertex_rows = _augmented(np.array([v for v in ns_vertices.vertices], dtype=object), 1)
        in_span = span_membership(_augmented(state_rows, 1), vertex_rows)
        report.details["b_ns_vertices_in_local_span"] = bool(in_span.all())
        ok = ok and bool(in_span.all())

    # Negative control: drop every state where party 1 outputs a constant
    shift = 2 * (n - 1)
    party1_constant = np.array([((k >> shift) & 3) in (0, 3) for k in range(len(ops))])
    control = solution_set_strictly_larger(state_rows[~party1_constant], state_rows[party1_constant])
    report.ranks["negative_control_kept"] = control["rank_kept"]
    report.details["b_negative_control"] = control
    if not control["strictly_larger"]:
        report.counterexamples.append({"direction": "b", "kind": "negative_control_not_larger"})
        ok = False

    # A single removed state stays in the span of the rest
    single = solution_set_strictly_larger(state_rows[1:], state_rows[:1])
    report.details["b_single_state_removed"] = {
        "rank_kept": single["rank_kept"],
        "removed_rows_in_span": single["removed_rows_in_span"],
        "strictly_larger": single["strictly_larger"],
    }

    report.direction_b = "pass" if ok else "fail"


def check_duality(n: int, catalog: Optional[List[DetProcess]] = None) -> DualityReport:
    if n not in (2, 3):
        raise PreconditionError(f"check_duality supports n in {{2, 3}}, got {n}")
    catalog = enumerate_det(n) if catalog is None else catalog
    report = DualityReport(n=n)
    _check_direction_a(report, catalog)
    _check_direction_b(report)
    logger.info("Duality n=%d: direction a %s, direction b %s", n, report.direction_a, report.direction_b)
    return report


def check_sampled_duality(vertices: Sequence) -> Dict:
    """Every sampled process vector satisfies inner(M, Q) = 1 for all local deterministic Q"""
    failures = []
    n = None
    for k, vertex in enumerate(vertices):
        m = np.asarray(getattr(vertex, "m", vertex), dtype=object)
        size = int(round(np.sqrt(m.size)))
        m = m.reshape(size, size)
        n = size.bit_length() - 1
        columns = np.arange(size)
        for row_idx, row in enumerate(op_table(n)):
            if sum(m[row, columns]) != 1:
                failures.append({"vertex": k, "operation": row_idx})
                break
    return {
        "n": n,
        "vertices": len(vertices),
        "states": (4 ** n) if n else 0,
        "passed": not failures,
        "failures": failures,
    }
