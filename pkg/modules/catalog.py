"""
PROCESS CATALOG
Append-only JSON Lines store of canonical process classes

Features:
- Header line with format, party count, group order and checksum
- One sha256-checked line per class; replaying the file resumes a run
- Merge of sampled vertices by canonical key
- pandas summary by D(k) class and causal type
"""

import hashlib
import json
import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import pandas as pd

from config import ILP_CONFIG
from modules.caustruct import classify_type, signaling_digraph
from modules.discover4 import canonical_forms, canonical_representative, group_order, orbit_expand
from modules.errors import CatalogError, CatalogInvariantError, PreconditionError
from modules.process import DetProcess, dk_class, is_consistent

logger = logging.getLogger(__name__)

CATALOG_FORMAT = "cpt-catalog-1"


def _checksum(body: Dict) -> str:
    text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _signed(body: Dict) -> str:
    return json.dumps({**body, "checksum": _checksum(body)}, sort_keys=True)


def _verified(line: str, line_no: int, path: Path) -> Dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}:{line_no}: unreadable line ({exc.msg})") from exc
    checksum = record.pop("checksum", None)
    if checksum != _checksum(record):
        raise CatalogError(f"{path}:{line_no}: checksum mismatch")
    return record


@dataclass
class CatalogEntry:
    key: str
    x_of_a: List[int]
    dk: int
    orbit: int
    structure: str
    type: str
    class_id: int

    def process(self, n: int) -> DetProcess:
        return DetProcess(n, tuple(self.x_of_a))


class Catalog:
    """
    Canonical classes keyed by orbit-minimal x_of_a

    Every class is written to disk the moment it is merged, so an
    interrupted run can be resumed by loading the same path.
    """

    def __init__(self, n: int, path: Optional[Path] = None, ceiling: Optional[int] = None):
        self.n = n
        self.path = Path(path) if path is not None else None
        self.ceiling = ceiling if ceiling is not None else (ILP_CONFIG["class_ceiling"] if n == 4 else None)
        self.entries: Dict[str, CatalogEntry] = {}

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    def _header(self) -> Dict:
        return {"format": CATALOG_FORMAT, "n": self.n, "group_order": group_order(self.n)}

    @classmethod
    def load(cls, path: Path, n: Optional[int] = None) -> "Catalog":
        path = Path(path)
        if not path.exists():
            raise CatalogError(f"Catalog not found: {path}")
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        complete, _, partial = text.rpartition("\n")
        lines = complete.split("\n") if complete else []
        if not lines:
            raise CatalogError(f"{path}: missing header")
        if partial:
            # left by an interrupted append
            logger.warning("%s: dropping truncated last line (%d chars)", path, len(partial))
            os.truncate(path, len((complete + "\n").encode("utf-8")))

        header = _verified(lines[0], 1, path)
        if header.get("format") != CATALOG_FORMAT:
            raise CatalogError(f"{path}: unknown format {header.get('format')!r}")
        if n is not None and header["n"] != n:
            raise CatalogError(f"{path}: catalog holds n={header['n']}, expected n={n}")

        catalog = cls(header["n"], path)
        for line_no, line in enumerate(lines[1:], start=2):
            record = _verified(line, line_no, path)
            entry = CatalogEntry(**record)
            catalog.entries[entry.key] = entry
        catalog._check_ceiling()
        logger.info("Loaded %d classes from %s", len(catalog.entries), path)
        return catalog

    @classmethod
    def open(cls, path: Path, n: int) -> "Catalog":
        """Load an existing catalog or start a new file with its header"""
        path = Path(path)
        if path.exists() and path.stat().st_size > 0:
            return cls.load(path, n)
        catalog = cls(n, path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_signed(catalog._header()) + "\n")
        return catalog

    def _append_lines(self, entries: List[CatalogEntry]):
        if self.path is None or not entries:
            return
        payload = "".join(_signed(asdict(e)) + "\n" for e in entries)
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(payload)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise CatalogError(f"Could not append to {self.path}: {exc}") from exc

    def write(self, path: Path):
        """Full rewrite (used when exporting an in-memory catalog)"""
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        lines = [_signed(self._header())] + [_signed(asdict(e)) for e in self.sorted_entries()]
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
        self.path = path

    # ------------------------------------------------------------------
    # Content
    # ------------------------------------------------------------------

    def _check_ceiling(self):
        if self.ceiling is not None and len(self.entries) > self.ceiling:
            raise CatalogInvariantError(
                f"Catalog holds {len(self.entries)} classes, above the known ceiling of {self.ceiling}"
            )

    def sorted_entries(self) -> List[CatalogEntry]:
        return sorted(self.entries.values(), key=lambda e: e.class_id)

    def merge(self, processes: Iterable[DetProcess]) -> int:
        """Insert unseen classes; returns how many were new"""
        batch = list(processes)
        for f in batch:
            if f.n != self.n:
                raise PreconditionError(f"Catalog holds n={self.n}, got a process with n={f.n}")
        added: List[CatalogEntry] = []
        try:
            for f, key in zip(batch, canonical_forms(batch)):
                if key in self.entries:
                    continue
                if not is_consistent(f):
                    raise PreconditionError(f"Refusing inconsistent process {f.x_of_a}")
                if self.ceiling is not None and len(self.entries) >= self.ceiling:
                    raise CatalogInvariantError(
                        f"Class {key} would take the catalog above the known ceiling of {self.ceiling}"
                    )
                rep = canonical_representative(f)
                entry = CatalogEntry(
                    key=key,
                    x_of_a=list(rep.x_of_a),
                    dk=dk_class(rep),
                    orbit=orbit_expand(rep),
                    structure=signaling_digraph(rep).canonical_adjacency(),
                    type=classify_type(rep),
                    class_id=len(self.entries) + 1,
                )
                self.entries[key] = entry
                added.append(entry)
        finally:
            # the file always matches self.entries, also when the batch is refused midway
            self._append_lines(added)
        if added:
            logger.info("Catalog now holds %d classes (+%d)", len(self.entries), len(added))
        return len(added)

    def processes(self) -> List[DetProcess]:
        return [e.process(self.n) for e in self.sorted_entries()]

    def total_vertices(self) -> int:
        return sum(e.orbit for e in self.entries.values())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(e) for e in self.sorted_entries()],
                            columns=["class_id", "key", "dk", "orbit", "type", "structure", "x_of_a"])

    def summary(self) -> pd.DataFrame:
        """Classes and vertices per (dk, type)"""
        df = self.to_frame()
        if df.empty:
            return pd.DataFrame(columns=["dk", "type", "classes", "vertices"])
        return (
            df.groupby(["dk", "type"])
            .agg(classes=("key", "count"), vertices=("orbit", "sum"))
            .reset_index()
        )

    def __len__(self) -> int:
        return len(self.entries)


def catalog_merge(catalog: Catalog, vertices: Iterable[DetProcess]) -> Catalog:
    catalog.merge(vertices)
    return catalog
