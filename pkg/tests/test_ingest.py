import os

import pytest

from orgatlas import ingest, model, snapshot
from orgatlas.errors import MixedKindCluster, ParseError, UnknownSource
from orgatlas.ingest import (
    SourceConfig,
    SourceRecord,
    cluster_records,
    discover_sources,
    ingest_all,
    load_config,
    merge_cluster,
    normalize_name,
    read_source,
)


def test_normalize_name_surname_first():
    assert normalize_name("  LOVELACE, Ada ") == "ada lovelace"
    assert normalize_name("Ada Lovelace") == "ada lovelace"


def test_normalize_name_empty_and_idempotent():
    assert normalize_name("") == ""
    for raw in ("Ada Lovelace", "a-b_c", "X  y"):
        once = normalize_name(raw)
        assert normalize_name(once) == once


def _staff_record(source, local, name, **fields):
    return SourceRecord(
        source=source, source_local_id=local, kind="staff",
        fields={"full_name": name, **fields},
    )


def test_cluster_by_name_collision():
    records = [
        _staff_record("a", "1", "LOVELACE, Ada"),
        _staff_record("b", "1", "Ada Lovelace"),
    ]
    clusters = cluster_records(records)
    assert len(clusters) == 1 and len(clusters[0]) == 2


def test_cluster_distinct_names():
    records = [_staff_record("a", "1", "Alan Turing"), _staff_record("a", "2", "Ada Lovelace")]
    clusters = cluster_records(records)
    assert [len(c) for c in clusters] == [1, 1]
    # ordered by smallest member key
    assert clusters[0][0].fields["full_name"] == "Ada Lovelace"


def test_cluster_empty_name_is_singleton():
    records = [_staff_record("a", "1", ""), _staff_record("a", "2", "")]
    assert [len(c) for c in cluster_records(records)] == [1, 1]


def test_cluster_by_xref():
    records = [
        _staff_record("a", "1", "A. Lovelace", xref_id="E100"),
        _staff_record("b", "1", "Countess Ada", xref_id="E100"),
    ]
    assert len(cluster_records(records)) == 1


CONFIG = SourceConfig(priority=["A", "B"], field_maps={"A": {}, "B": {}})


def test_merge_priority_wins_and_conflict_recorded():
    cluster = [
        _staff_record("A", "1", "Ada Lovelace", email="a@x"),
        _staff_record("B", "1", "Ada Lovelace", email="a@y"),
    ]
    fields, provenance, conflicts = merge_cluster(cluster, CONFIG)
    assert fields["email"] == "a@x"
    assert provenance["email"] == "A"
    assert conflicts == [{"field": "email", "losing_source": "B", "losing_value": "a@y"}]


def test_merge_fills_from_lower_priority():
    cluster = [
        _staff_record("A", "1", "Ada Lovelace"),
        _staff_record("B", "1", "Ada Lovelace", email="a@y"),
    ]
    fields, provenance, conflicts = merge_cluster(cluster, CONFIG)
    assert fields["email"] == "a@y"
    assert provenance["email"] == "B"
    assert conflicts == []


def test_merge_singleton_verbatim():
    cluster = [_staff_record("A", "1", "Ada Lovelace", email="a@x", phone="1")]
    fields, _, conflicts = merge_cluster(cluster, CONFIG)
    assert fields == {"full_name": "Ada Lovelace", "email": "a@x", "phone": "1"}
    assert conflicts == []


def test_merge_idempotent():
    cluster = [
        _staff_record("A", "1", "Ada Lovelace", email="a@x"),
        _staff_record("B", "1", "LOVELACE, Ada", email="a@y"),
    ]
    fields, _, _ = merge_cluster(cluster, CONFIG)
    remerged = [_staff_record("A", "1", fields["full_name"], **{k: v for k, v in fields.items() if k != "full_name"})] + cluster
    fields2, _, _ = merge_cluster(remerged, CONFIG)
    assert fields2 == fields


def test_merge_mixed_kind_rejected():
    cluster = [
        _staff_record("A", "1", "Ada"),
        SourceRecord(source="A", source_local_id="2", kind="project", fields={"title": "Ada"}),
    ]
    with pytest.raises(MixedKindCluster):
        merge_cluster(cluster, CONFIG)


def test_read_source_csv(demo_bundle):
    config = load_config(os.path.join(demo_bundle, "config.ini"))
    records = read_source("hr", os.path.join(demo_bundle, "hr", "staff.csv"), "csv", config)
    assert len(records) == 2
    assert records[0].fields["full_name"] == "Ada Lovelace"
    assert records[0].fields["email"] == "ada@example.org"
    assert records[0].link_hints[0].link_type == "member_of"


def test_read_source_unmapped_columns_kept(tmp_path):
    path = tmp_path / "staff.csv"
    path.write_text("name,shoesize\nAda,42\n")
    config = SourceConfig(priority=["s"], field_maps={"s": {"name": "full_name"}})
    records = read_source("s", str(path), "csv", config)
    assert records[0].fields["x-shoesize"] == "42"


def test_read_source_empty_csv(tmp_path):
    path = tmp_path / "staff.csv"
    path.write_text("name,email\n")
    config = SourceConfig(priority=["s"], field_maps={"s": {}})
    assert read_source("s", str(path), "csv", config) == []


def test_read_source_malformed_jsonl(tmp_path):
    path = tmp_path / "staff.jsonl"
    path.write_text('{"name": "a"}\n{"name": "b"}\nnot json\n')
    config = SourceConfig(priority=["s"], field_maps={"s": {}})
    with pytest.raises(ParseError) as excinfo:
        read_source("s", str(path), "jsonl", config)
    assert excinfo.value.line == 3


def test_read_source_unknown_source(tmp_path):
    config = SourceConfig(priority=["s"], field_maps={"s": {}})
    with pytest.raises(UnknownSource):
        read_source("nope", str(tmp_path / "staff.csv"), "csv", config)


def _ingest_bundle(bundle):
    config = load_config(os.path.join(bundle, "config.ini"))
    sources = discover_sources(bundle, config)
    return ingest_all(sources, config)


def test_ingest_demo_bundle(demo_bundle):
    graph, report = _ingest_bundle(demo_bundle)
    counts = {}
    for eid in graph.entities:
        counts[eid.kind] = counts.get(eid.kind, 0) + 1
    assert counts == {"staff": 2, "project": 1, "output": 1, "unit": 2, "theme": 4}
    assert model.validate_graph(graph) == []
    assert report.violations == []
    assert report.unmatched_link_hints == []
    # Ada appears in hr and pubs: name + email conflicts resolved by priority
    assert report.clusters_formed == 10
    kinds = {l.link_type for l in graph.links}
    assert kinds == {"member_of", "tasked_to", "tagged", "contributes_to", "authored", "produced_by"}


def test_ingest_merges_by_priority(demo_bundle):
    graph, _ = _ingest_bundle(demo_bundle)
    ada = next(e for e in graph.entities.values() if e.kind == "staff" and "Lovelace" in e.full_name)
    assert ada.full_name == "Ada Lovelace"  # hr outranks pubs
    assert ada.email == "ada@example.org"


def test_ingest_resolves_unit_forest(demo_bundle):
    graph, _ = _ingest_bundle(demo_bundle)
    units = {e.name: e for e in graph.entities.values() if e.kind == "unit"}
    assert units["Radar Systems Group"].parent == units["Division A"].id
    assert units["Radar Systems Group"].head is not None


def test_ingest_permutation_invariance(demo_bundle, tmp_path):
    import random
    import shutil

    baseline = snapshot.snapshot_bytes(_ingest_bundle(demo_bundle)[0])
    rng = random.Random(7)
    for trial in range(3):
        copy = tmp_path / f"bundle{trial}"
        shutil.copytree(demo_bundle, copy)
        for dirpath, _, filenames in os.walk(copy):
            for filename in filenames:
                path = os.path.join(dirpath, filename)
                if filename.endswith(".csv"):
                    lines = open(path).read().splitlines()
                    body = lines[1:]
                    rng.shuffle(body)
                    open(path, "w").write("\n".join([lines[0]] + body) + "\n")
                elif filename.endswith(".jsonl"):
                    lines = open(path).read().splitlines()
                    rng.shuffle(lines)
                    open(path, "w").write("\n".join(lines) + "\n")
        graph, _ = _ingest_bundle(str(copy))
        assert snapshot.snapshot_bytes(graph) == baseline


def test_ingest_unmatched_hints(demo_bundle):
    bundle = os.path.join(os.path.dirname(demo_bundle), "dangling_bundle")
    graph, report = _ingest_bundle(bundle)
    assert model.validate_graph(graph) == []
    assert len(graph.links) == 0
    assert len(report.unmatched_link_hints) == 3


def test_conflict_accounting_brute_force(demo_bundle):
    bundle = os.path.join(os.path.dirname(demo_bundle), "conflict_bundle")
    config = load_config(os.path.join(bundle, "config.ini"))
    sources = discover_sources(bundle, config)
    _, report = ingest_all(sources, config)

    records = []
    for name, path, fmt in sources:
        records.extend(read_source(name, path, fmt, config))
    expected = 0
    for kind in ("staff", "project", "output", "unit", "theme"):
        for cluster in cluster_records([r for r in records if r.kind == kind], config):
            field_names = {f for r in cluster for f in r.fields}
            for field_name in field_names:
                distinct = {r.fields[field_name] for r in cluster if r.fields.get(field_name)}
                if distinct:
                    expected += len(distinct) - 1
    assert len(report.conflicts_resolved) == expected
    assert expected == 4
