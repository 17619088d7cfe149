"""Canonical JSON Lines snapshot of a graph.

The byte layout is the determinism contract: header line first, then entities
sorted by canonical id, then links sorted by (type, from, to); every object is
emitted with sorted keys, UTF-8, LF line endings.
"""

from __future__ import annotations

import hashlib
import json

from .errors import ParseError
from .model import (
    ENTITY_CLASSES,
    Document,
    EntityId,
    Graph,
    LinkRecord,
    Milestone,
)

SCHEMA_VERSION = 1


def _entity_fields(entity):
    fields = {}
    for name, value in vars(entity).items():
        if name == "id" or value is None:
            continue
        if isinstance(value, EntityId):
            value = str(value)
        elif isinstance(value, tuple):
            if not value:
                continue
            value = [vars(v) if isinstance(v, (Milestone, Document)) else v for v in value]
        fields[name] = value
    return fields


def _line(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def snapshot_bytes(graph):
    lines = [_line({"record": "header", "schema_version": SCHEMA_VERSION})]
    for eid in graph.sorted_ids():
        entity = graph.entities[eid]
        lines.append(
            _line({"record": "entity", "kind": eid.kind, "id": str(eid), "fields": _entity_fields(entity)})
        )
    for link in graph.sorted_links():
        lines.append(
            _line({"record": "link", "type": link.link_type, "from": str(link.from_id), "to": str(link.to_id)})
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_snapshot(graph, path):
    data = snapshot_bytes(graph)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def checksum(data):
    return hashlib.sha256(data).hexdigest()


def _entity_from_record(record):
    eid = EntityId.parse(record["id"])
    cls = ENTITY_CLASSES[record["kind"]]
    fields = dict(record.get("fields", {}))
    for ref_name in ("parent", "head"):
        if fields.get(ref_name):
            fields[ref_name] = EntityId.parse(fields[ref_name])
    if "milestones" in fields:
        fields["milestones"] = tuple(Milestone(**m) for m in fields["milestones"])
    if "documents" in fields:
        fields["documents"] = tuple(Document(**d) for d in fields["documents"])
    for list_name in ("deliverables", "admin_contacts"):
        if list_name in fields:
            fields[list_name] = tuple(fields[list_name])
    return cls(id=eid, **fields)


def parse_snapshot(data):
    """Parse canonical snapshot bytes into a Graph."""
    lines = data.decode("utf-8").splitlines()
    if not lines:
        raise ParseError("empty snapshot")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header: {exc}", line=1) from None
    if header.get("record") != "header":
        raise ParseError("first line is not a header record", line=1)
    if header.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {header.get('schema_version')}", line=1)

    entities = {}
    links = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), line=lineno) from None
        kind = record.get("record")
        try:
            if kind == "entity":
                entity = _entity_from_record(record)
                entities[entity.id] = entity
            elif kind == "link":
                links.add(
                    LinkRecord(record["type"], EntityId.parse(record["from"]), EntityId.parse(record["to"]))
                )
            else:
                raise ParseError(f"unknown record type {kind!r}", line=lineno)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed {kind} record: {exc}", line=lineno) from None
    return Graph(entities=entities, links=frozenset(links), schema_version=SCHEMA_VERSION)


def read_snapshot(path):
    with open(path, "rb") as fh:
        return parse_snapshot(fh.read())
