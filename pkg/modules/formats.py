"""
FILE FORMATS
Lossless reading and writing of reports, matrices and polytopes

Features:
- JSON reports with sorted keys; exact rationals as "p/q" strings
- Matrix CSV (no header, no index) through pandas
- H-REP / V-REP text files with one exact row per line
"""

import json
import logging
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

import numpy as np
import pandas as pd

from modules.bitcore import as_fractions
from modules.errors import PreconditionError
from modules.geometry import HPolytope, VPolytope

logger = logging.getLogger(__name__)


# ============================================================================
# JSON
# ============================================================================

def format_rational(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"Not an exact rational: {text!r}") from exc


def to_jsonable(obj: Any) -> Any:
    """Recursively convert report objects to plain JSON types"""
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps_report(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2)


def write_report(report: Any, path: Optional[Path] = None) -> str:
    """Write to path when given; always returns the JSON text"""
    text = dumps_report(report)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info("Report written to %s", path)
    return text


def read_json(path: Path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ============================================================================
# MATRIX CSV
# ============================================================================

def read_matrix_csv(path: Path) -> np.ndarray:
    """Square matrix of exact rationals, rows indexed by a, columns by x"""
    df = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
    matrix = np.array([[parse_rational(v) for v in row] for row in df.itertuples(index=False)], dtype=object)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PreconditionError(f"{path}: matrix must be square, got shape {matrix.shape}")
    return matrix


def write_matrix_csv(matrix, path: Path):
    rows = [[format_rational(v) for v in row] for row in np.asarray(matrix, dtype=object)]
    pd.DataFrame(rows).to_csv(path, header=False, index=False)


# ============================================================================
# H-REP / V-REP
# ============================================================================

def _row_text(prefix: str, rhs, coefficients) -> str:
    return " ".join([prefix, format_rational(rhs)] + [format_rational(v) for v in coefficients])


def write_hrep(h: HPolytope, path: Path):
    lines = [f"H-REP {h.dim} {len(h.eq_A)} {len(h.ineq_A)}"]
    lines += [_row_text("=", rhs, row) for row, rhs in h.equalities]
    lines += [_row_text(">=", rhs, row) for row, rhs in h.inequalities]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_hrep(path: Path) -> HPolytope:
    lines = [line.split() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines or lines[0][0] != "H-REP" or len(lines[0]) != 4:
        raise PreconditionError(f"{path}: missing 'H-REP <dim> <n_eq> <n_ineq>' header")
    dim, n_eq, n_ineq = (int(v) for v in lines[0][1:])
    eq_rows, eq_rhs, ineq_rows, ineq_rhs = [], [], [], []
    for line_no, parts in enumerate(lines[1:], start=2):
        if len(parts) != dim + 2 or parts[0] not in ("=", ">="):
            raise PreconditionError(f"{path}:{line_no}: expected '= | >=', rhs and {dim} coefficients")
        values = [parse_rational(v) for v in parts[1:]]
        if parts[0] == "=":
            eq_rhs.append(values[0])
            eq_rows.append(values[1:])
        else:
            ineq_rhs.append(values[0])
            ineq_rows.append(values[1:])
    if len(eq_rows) != n_eq or len(ineq_rows) != n_ineq:
        raise PreconditionError(f"{path}: header announces {n_eq}/{n_ineq} rows, file holds "
                                f"{len(eq_rows)}/{len(ineq_rows)}")
    empty = np.empty((0, dim), dtype=object)
    return HPolytope(
        dim=dim,
        eq_A=as_fractions(eq_rows) if eq_rows else empty,
        eq_b=as_fractions(eq_rhs) if eq_rhs else np.empty(0, dtype=object),
        ineq_A=as_fractions(ineq_rows) if ineq_rows else empty.copy(),
        ineq_b=as_fractions(ineq_rhs) if ineq_rhs else np.empty(0, dtype=object),
        label=Path(path).stem,
    )


def write_vrep(v: VPolytope, dim: int, path: Path):
    lines = [f"V-REP {dim} {len(v.vertices)}"]
    lines += [" ".join(format_rational(x) for x in vertex) for vertex in v.vertices]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vrep(path: Path) -> VPolytope:
    lines = [line.split() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines or lines[0][0] != "V-REP" or len(lines[0]) != 3:
        raise PreconditionError(f"{path}: missing 'V-REP <dim> <n_vertices>' header")
    dim, count = int(lines[0][1]), int(lines[0][2])
    vertices: List[np.ndarray] = []
    for line_no, parts in enumerate(lines[1:], start=2):
        if len(parts) != dim:
            raise PreconditionError(f"{path}:{line_no}: expected {dim} coordinates, got {len(parts)}")
        vertices.append(np.array([parse_rational(x) for x in parts], dtype=object))
    if len(vertices) != count:
        raise PreconditionError(f"{path}: header announces {count} vertices, file holds {len(vertices)}")
    return VPolytope(vertices)
