"""
Tests for the append-only process catalog
"""

import json

import pytest

from modules.catalog import Catalog, catalog_merge
from modules.errors import CatalogError, CatalogInvariantError, PreconditionError
from modules.process import enumerate_det, indefinite_example, unidirectional_cycle


@pytest.fixture(scope="module")
def bipartite():
    return enumerate_det(2, n_jobs=1)


def test_merge_and_resume(tmp_path, bipartite):
    path = tmp_path / "n2.jsonl"
    catalog = Catalog.open(path, 2)
    assert catalog.merge(bipartite) == 2
    assert len(catalog) == 2
    assert catalog.total_vertices() == 12

    reloaded = Catalog.load(path, 2)
    assert set(reloaded.entries) == set(catalog.entries)
    assert reloaded.merge(bipartite) == 0
    assert Catalog.open(path, 2).total_vertices() == 12


def test_entries(bipartite):
    catalog = catalog_merge(Catalog(2), bipartite)
    entries = catalog.sorted_entries()
    assert [e.class_id for e in entries] == [1, 2]
    assert sorted(e.orbit for e in entries) == [4, 8]
    assert {e.type for e in entries} == {"Fixed"}
    assert all(e.process(2).x_of_a == tuple(e.x_of_a) for e in entries)


def test_summary(bipartite):
    summary = catalog_merge(Catalog(2), bipartite).summary()
    assert list(summary.columns) == ["dk", "type", "classes", "vertices"]
    assert summary["vertices"].sum() == 12


def test_resume_after_interrupted_append(tmp_path, bipartite):
    path = tmp_path / "n2.jsonl"
    Catalog.open(path, 2).merge(bipartite[:1])
    complete = path.read_text()
    with open(path, "a", encoding="utf-8") as fh:
        fh.write('{"key": "abc", "x_of_a": [0,')

    resumed = Catalog.open(path, 2)
    assert len(resumed) == 1
    assert path.read_text() == complete
    assert resumed.merge(bipartite) == 1
    assert len(Catalog.load(path, 2)) == 2


def test_truncated_header(tmp_path):
    path = tmp_path / "n2.jsonl"
    path.write_text('{"format": "cpt-cat')
    with pytest.raises(CatalogError, match="header"):
        Catalog.load(path)


def test_checksum_mismatch(tmp_path, bipartite):
    path = tmp_path / "n2.jsonl"
    Catalog.open(path, 2).merge(bipartite)
    lines = path.read_text().splitlines()
    record = json.loads(lines[1])
    record["orbit"] += 1
    lines[1] = json.dumps(record, sort_keys=True)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CatalogError, match="checksum"):
        Catalog.load(path)


def test_missing_file(tmp_path):
    with pytest.raises(CatalogError):
        Catalog.load(tmp_path / "absent.jsonl")


def test_wrong_party_count(tmp_path, bipartite):
    path = tmp_path / "n2.jsonl"
    Catalog.open(path, 2).merge(bipartite)
    with pytest.raises(CatalogError):
        Catalog.load(path, 3)
    with pytest.raises(PreconditionError):
        Catalog(2).merge([indefinite_example()])


def test_ceiling(bipartite):
    with pytest.raises(CatalogInvariantError):
        Catalog(2, ceiling=1).merge(bipartite)


def test_ceiling_keeps_file_in_step(tmp_path, bipartite):
    path = tmp_path / "n2.jsonl"
    catalog = Catalog.open(path, 2)
    catalog.ceiling = 1
    with pytest.raises(CatalogInvariantError):
        catalog.merge(bipartite)
    assert len(catalog) == 1
    assert set(Catalog.load(path, 2).entries) == set(catalog.entries)


def test_refuses_inconsistent():
    with pytest.raises(PreconditionError):
        Catalog(3).merge([unidirectional_cycle()])


def test_export(tmp_path, bipartite):
    catalog = catalog_merge(Catalog(2), bipartite)
    catalog.write(tmp_path / "export.jsonl")
    assert len(Catalog.load(tmp_path / "export.jsonl")) == 2
