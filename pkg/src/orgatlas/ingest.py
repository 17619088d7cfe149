"""Source ingestion: wrappers, record clustering, priority merge, graph assembly.

Sources arrive as per-source directories of <kind>.csv / <kind>.jsonl files.
Records that denote the same real-world entity are clustered by shared
cross-reference id or by a normalized token-sorted name key, then merged with
field values taken from the highest-priority source. The result is a valid
Graph plus a MergeReport describing what was reconciled.
"""

from __future__ import annotations

import configparser
import csv
import json
import os
import re
from dataclasses import dataclass, field

from . import model
from .errors import ConfigError, MixedKindCluster, ParseError, UnknownSource
from .model import Document, EntityId, Graph, LinkRecord, Milestone

KIND_PREFIX = {"staff": "s", "project": "p", "output": "o", "unit": "u", "theme": "t"}

# canonical field that names each kind (the clustering key source)
NAME_FIELD = {
    "staff": "full_name",
    "project": "title",
    "output": "title",
    "unit": "name",
    "theme": "label",
}

SCALAR_FIELDS = {
    "staff": ("full_name", "email", "phone", "site", "bio", "interests"),
    "project": ("title", "abstract_text", "overview", "background", "status"),
    "output": ("title", "abstract_text", "venue", "year", "doc_type"),
    "unit": ("name",),
    "theme": ("label", "facet"),
}

# multi-valued fields carried as '|'-separated text in source files
LIST_FIELDS = {
    "project": ("milestones", "deliverables"),
    "output": ("documents",),
    "unit": ("admin_contacts",),
}

# fields holding a reference to another entity, resolved after merge
REF_FIELDS = {
    "unit": {"parent": "unit", "head": "staff"},
    "theme": {"parent": "theme"},
}

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def normalize_name(raw):
    """Token-sorted match key: casefold, strip punctuation, sort tokens."""
    tokens = _NON_ALNUM.split(raw.casefold())
    return " ".join(sorted(t for t in tokens if t))


@dataclass(frozen=True)
class LinkHint:
    link_type: str
    direction: str  # "outgoing": record is the from-side; "incoming": the to-side
    target: str  # name or xref of the other endpoint


@dataclass
class SourceRecord:
    source: str
    source_local_id: str
    kind: str
    fields: dict
    link_hints: list = field(default_factory=list)


@dataclass
class SourceConfig:
    priority: list
    field_maps: dict  # source -> {raw column -> canonical field}
    corpus_root: str = "."

    def check(self):
        if len(set(self.priority)) != len(self.priority):
            raise ConfigError("priority list contains duplicates")
        for source in self.field_maps:
            if source not in self.priority:
                raise ConfigError(f"source {source!r} has a field map but no priority entry")

    def rank(self, source):
        try:
            return self.priority.index(source)
        except ValueError:
            return len(self.priority)


def load_config(path):
    """Read the key-value ingest config (INI syntax, see README)."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if "ingest" not in parser:
        raise ConfigError("config missing [ingest] section")
    section = parser["ingest"]
    priority = [s.strip() for s in section.get("priority", "").split(",") if s.strip()]
    if not priority:
        raise ConfigError("config missing ingest.priority")
    corpus_root = section.get("corpus_root", ".")
    if not os.path.isabs(corpus_root):
        corpus_root = os.path.join(os.path.dirname(os.path.abspath(path)), corpus_root)
    field_maps = {}
    for name in parser.sections():
        if name.startswith("fields:"):
            field_maps[name.split(":", 1)[1]] = dict(parser[name])
    config = SourceConfig(priority=priority, field_maps=field_maps, corpus_root=corpus_root)
    config.check()
    return config


def _apply_field_map(source, index, kind, raw_fields, field_map):
    fields = {}
    hints = []
    for column, value in raw_fields.items():
        if value is None:
            continue
        value = str(value).strip()
        if not value:
            continue
        canonical = field_map.get(column, f"x-{column}")
        if canonical.startswith("link:") or canonical.startswith("rlink:"):
            prefix, link_type = canonical.split(":", 1)
            direction = "outgoing" if prefix == "link" else "incoming"
            for target in value.split("|"):
                target = target.strip()
                if target:
                    hints.append(LinkHint(link_type, direction, target))
        else:
            fields[canonical] = value
    local_id = fields.get("xref_id") or f"{source}-{index}"
    return SourceRecord(source=source, source_local_id=local_id, kind=kind, fields=fields, link_hints=hints)


def read_source(source_name, path, format, config):
    """Run one source wrapper: map raw rows to canonical SourceRecords."""
    if source_name not in config.field_maps:
        raise UnknownSource(f"no field map configured for source {source_name!r}")
    field_map = config.field_maps[source_name]
    kind = os.path.splitext(os.path.basename(path))[0]
    if kind not in model.KINDS:
        raise ConfigError(f"source file {path} does not name an entity kind")
    records = []
    if format == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for index, row in enumerate(reader, start=1):
                if None in row:
                    raise ParseError("row has more cells than the header", line=index + 1)
                records.append(_apply_field_map(source_name, index, kind, row, field_map))
    elif format == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(str(exc), line=lineno) from None
                if not isinstance(row, dict):
                    raise ParseError("line is not a JSON object", line=lineno)
                records.append(_apply_field_map(source_name, lineno, kind, row, field_map))
    else:
        raise ConfigError(f"unknown source format {format!r}")
    return records


def _member_key(record):
    name = record.fields.get(NAME_FIELD[record.kind], "")
    key = normalize_name(name)
    if key:
        return key
    return record.fields.get("xref_id") or f"{record.source}/{record.source_local_id}"


def cluster_records(records, config=None):
    """Group records that denote one entity (shared xref_id or name key)."""
    parent = list(range(len(records)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    by_key = {}
    for i, record in enumerate(records):
        keys = []
        xref = record.fields.get("xref_id")
        if xref:
            keys.append(("xref", record.kind, xref))
        name_key = normalize_name(record.fields.get(NAME_FIELD[record.kind], ""))
        if name_key:
            keys.append(("name", record.kind, name_key))
        for key in keys:
            if key in by_key:
                union(i, by_key[key])
            else:
                by_key[key] = i

    groups = {}
    for i in range(len(records)):
        groups.setdefault(find(i), []).append(records[i])

    def member_sort_key(record):
        rank = config.rank(record.source) if config else 0
        return (rank, record.source, record.source_local_id)

    clusters = [sorted(group, key=member_sort_key) for group in groups.values()]
    clusters.sort(key=lambda cluster: min(_member_key(r) for r in cluster))
    return clusters


def merge_cluster(cluster, config):
    """Merge one cluster by source priority; returns (fields, provenance, conflicts)."""
    if not cluster:
        raise ValueError("empty cluster")
    kinds = {r.kind for r in cluster}
    if len(kinds) != 1:
        raise MixedKindCluster(f"cluster mixes kinds {sorted(kinds)}")
    ordered = sorted(cluster, key=lambda r: (config.rank(r.source), r.source, r.source_local_id))
    merged = {}
    provenance = {}
    conflicts = []
    field_names = sorted({name for r in ordered for name in r.fields})
    for name in field_names:
        seen_values = []
        for record in ordered:
            value = record.fields.get(name)
            if value is None or value == "":
                continue
            if not seen_values:
                merged[name] = value
                provenance[name] = record.source
            elif value not in seen_values:
                conflicts.append(
                    {"field": name, "losing_source": record.source, "losing_value": value}
                )
            if value not in seen_values:
                seen_values.append(value)
    return merged, provenance, conflicts


def _parse_milestones(raw):
    milestones = []
    for part in raw.split("|"):
        part = part.strip()
        if not part:
            continue
        name, sep, date = part.rpartition("=")
        if not sep:
            raise ParseError(f"milestone {part!r} is not name=date")
        milestones.append(Milestone(name=name.strip(), date=date.strip()))
    return tuple(milestones)


def _media_type(path):
    return "text/plain" if path.endswith((".txt", ".md")) else "application/octet-stream"


def _split_list(raw):
    return tuple(part.strip() for part in raw.split("|") if part.strip())


def build_entity(kind, local_id, fields, resolve_ref, problems):
    """Construct a typed entity from merged canonical text fields."""
    eid = EntityId(kind, local_id)
    kwargs = {}
    for name in SCALAR_FIELDS[kind]:
        if name in fields:
            kwargs[name] = fields[name]
    for name in LIST_FIELDS.get(kind, ()):
        raw = fields.get(name)
        if not raw:
            continue
        if name == "milestones":
            kwargs[name] = _parse_milestones(raw)
        elif name == "documents":
            kwargs[name] = tuple(Document(path=p, media_type=_media_type(p)) for p in _split_list(raw))
        else:
            kwargs[name] = _split_list(raw)
    for name, target_kind in REF_FIELDS.get(kind, {}).items():
        raw = fields.get(name)
        if raw:
            resolved = resolve_ref(target_kind, raw)
            if resolved is None:
                problems.append({"entity": str(eid), "field": name, "target": raw})
            else:
                kwargs[name] = resolved
    if "year" in kwargs:
        try:
            kwargs["year"] = int(kwargs["year"])
        except ValueError:
            del kwargs["year"]
    cls = model.ENTITY_CLASSES[kind]
    defaults = {"staff": "full_name", "project": "title", "output": "title", "unit": "name", "theme": "label"}
    kwargs.setdefault(defaults[kind], fields.get(NAME_FIELD[kind], ""))
    return cls(id=eid, **kwargs)


@dataclass
class MergeReport:
    clusters_formed: int = 0
    conflicts_resolved: list = field(default_factory=list)
    unmatched_link_hints: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)  # entity id -> {field: source}
    missing_documents: list = field(default_factory=list)

    def to_records(self):
        yield {"record": "summary", "clusters_formed": self.clusters_formed,
               "conflicts": len(self.conflicts_resolved),
               "unmatched_link_hints": len(self.unmatched_link_hints),
               "violations": len(self.violations)}
        for c in self.conflicts_resolved:
            yield {"record": "conflict", **c}
        for h in self.unmatched_link_hints:
            yield {"record": "unmatched_hint", **h}
        for v in self.violations:
            yield {"record": "violation", "code": v.code, "subject": v.subject, "message": v.message}
        for eid in sorted(self.provenance):
            yield {"record": "provenance", "entity": eid, "fields": self.provenance[eid]}
        for m in self.missing_documents:
            yield {"record": "missing_document", **m}


def ingest_all(sources, config):
    """Full pipeline: read, cluster, merge, resolve links, assemble, validate."""
    config.check()
    report = MergeReport()

    records = []
    for name, path, format in sorted(sources):
        records.extend(read_source(name, path, format, config))

    by_kind = {}
    for record in records:
        by_kind.setdefault(record.kind, []).append(record)

    entities = {}
    xref_index = {}  # (kind, xref) -> EntityId
    name_index = {}  # (kind, match key) -> EntityId
    record_entity = {}  # id(record) -> EntityId
    merged_fields = {}
    unresolved_refs = []

    for kind in sorted(by_kind):
        clusters = cluster_records(by_kind[kind], config)
        for seq, cluster in enumerate(clusters, start=1):
            local_id = f"{KIND_PREFIX[kind]}{seq}"
            eid = EntityId(kind, local_id)
            fields, provenance, conflicts = merge_cluster(cluster, config)
            merged_fields[eid] = fields
            report.clusters_formed += 1
            report.provenance[str(eid)] = provenance
            for conflict in conflicts:
                report.conflicts_resolved.append({"entity": str(eid), **conflict})
            for record in cluster:
                record_entity[id(record)] = eid
                xref = record.fields.get("xref_id")
                if xref:
                    xref_index.setdefault((kind, xref), eid)
                name_key = normalize_name(record.fields.get(NAME_FIELD[kind], ""))
                if name_key:
                    name_index.setdefault((kind, name_key), eid)
            name_key = normalize_name(fields.get(NAME_FIELD[kind], ""))
            if name_key:
                name_index.setdefault((kind, name_key), eid)

    def resolve_ref(target_kind, raw):
        eid = xref_index.get((target_kind, raw))
        if eid is None:
            eid = name_index.get((target_kind, normalize_name(raw)))
        return eid

    graph = Graph()
    for eid in sorted(merged_fields):
        entity = build_entity(eid.kind, eid.local_id, merged_fields[eid], resolve_ref, unresolved_refs)
        entities[eid] = entity
        graph = model.add_entity(graph, entity)

    for ref in unresolved_refs:
        report.unmatched_link_hints.append(
            {"source_entity": ref["entity"], "link_type": ref["field"], "target": ref["target"]}
        )

    hint_set = set()
    for record in records:
        eid = record_entity[id(record)]
        for hint in record.link_hints:
            from_kinds, to_kind = model.LINK_CONSTRAINTS[hint.link_type]
            if hint.direction == "outgoing":
                target_kind = to_kind
            else:
                if len(from_kinds) != 1:
                    report.unmatched_link_hints.append(
                        {"source_entity": str(eid), "link_type": hint.link_type,
                         "target": hint.target, "reason": "ambiguous reverse hint"}
                    )
                    continue
                target_kind = from_kinds[0]
            other = resolve_ref(target_kind, hint.target)
            if other is None:
                report.unmatched_link_hints.append(
                    {"source_entity": str(eid), "link_type": hint.link_type, "target": hint.target}
                )
                continue
            if hint.direction == "outgoing":
                link = LinkRecord(hint.link_type, eid, other)
            else:
                link = LinkRecord(hint.link_type, other, eid)
            hint_set.add(link)

    for link in sorted(hint_set, key=lambda l: (l.link_type, l.from_id, l.to_id)):
        graph = model.add_link(graph, link)

    for entity in entities.values():
        if entity.kind != "output":
            continue
        root = os.path.realpath(config.corpus_root)
        for doc in entity.documents:
            resolved = os.path.realpath(os.path.join(root, doc.path))
            if not resolved.startswith(root + os.sep):
                report.missing_documents.append(
                    {"entity": str(entity.id), "path": doc.path, "reason": "escapes corpus root"}
                )
            elif not os.path.isfile(resolved):
                report.missing_documents.append(
                    {"entity": str(entity.id), "path": doc.path, "reason": "file not found"}
                )

    report.unmatched_link_hints.sort(key=lambda h: (h["source_entity"], h["link_type"], h["target"]))
    report.violations = model.validate_graph(graph)
    return graph, report


def discover_sources(root, config):
    """Map a source bundle directory to (name, path, format) triples."""
    sources = []
    for name in sorted(os.listdir(root)):
        dirpath = os.path.join(root, name)
        if not os.path.isdir(dirpath) or name == "docs":
            continue
        if name not in config.field_maps:
            continue
        for filename in sorted(os.listdir(dirpath)):
            stem, ext = os.path.splitext(filename)
            if stem in model.KINDS and ext in (".csv", ".jsonl"):
                sources.append((name, os.path.join(dirpath, filename), ext[1:]))
    return sources


def write_merge_report(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        for record in report.to_records():
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
