"""Canonical entity graph: typed entities, typed links, integrity checks and views.

The graph is value-like: the mutation helpers return a new Graph and never
touch their argument, so a published graph can be read concurrently.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field, replace

from .errors import DanglingEndpoint, InvalidEntity, KindMismatch, SelfLoop, UnknownEntity

KINDS = ("staff", "project", "output", "unit", "theme")

LINK_TYPES = (
    "contributes_to",
    "authored",
    "produced_by",
    "member_of",
    "tasked_to",
    "tagged",
    "related_to",
)

# link_type -> (allowed from-kinds, allowed to-kind)
LINK_CONSTRAINTS = {
    "contributes_to": (("staff",), "project"),
    "authored": (("staff",), "output"),
    "produced_by": (("output",), "project"),
    "member_of": (("staff",), "unit"),
    "tasked_to": (("project",), "unit"),
    "tagged": (("staff", "project", "output"), "theme"),
    "related_to": (("project",), "project"),
}

PROJECT_STATUSES = ("planned", "active", "completed")
OUTPUT_DOC_TYPES = ("report", "paper", "presentation", "design", "dataset", "other")
THEME_FACETS = ("science_tech", "client")


@dataclass(frozen=True, order=True)
class EntityId:
    kind: str
    local_id: str

    def __str__(self):
        return f"{self.kind}:{self.local_id}"

    @classmethod
    def parse(cls, text):
        kind, sep, local = text.partition(":")
        if not sep or kind not in KINDS or not local or any(c.isspace() for c in local):
            raise ValueError(f"not a canonical entity id: {text!r}")
        return cls(kind, local)


@dataclass(frozen=True, order=True)
class LinkRecord:
    link_type: str
    from_id: EntityId
    to_id: EntityId


@dataclass(frozen=True)
class Milestone:
    name: str
    date: str  # ISO-8601


@dataclass(frozen=True)
class Document:
    path: str
    media_type: str = "text/plain"


@dataclass(frozen=True)
class Staff:
    id: EntityId
    full_name: str
    email: str | None = None
    phone: str | None = None
    site: str | None = None
    bio: str | None = None
    interests: str | None = None

    kind = "staff"

    def problems(self):
        out = []
        if not self.full_name.strip():
            out.append("full_name must be non-empty")
        return out


@dataclass(frozen=True)
class Project:
    id: EntityId
    title: str
    abstract_text: str | None = None
    overview: str | None = None
    background: str | None = None
    milestones: tuple[Milestone, ...] = ()
    deliverables: tuple[str, ...] = ()
    status: str = "active"

    kind = "project"

    def problems(self):
        out = []
        if not self.title.strip():
            out.append("title must be non-empty")
        if self.status not in PROJECT_STATUSES:
            out.append(f"status {self.status!r} not one of {PROJECT_STATUSES}")
        for m in self.milestones:
            try:
                datetime.date.fromisoformat(m.date)
            except ValueError:
                out.append(f"milestone {m.name!r} has invalid date {m.date!r}")
        return out


@dataclass(frozen=True)
class Output:
    id: EntityId
    title: str
    abstract_text: str | None = None
    venue: str | None = None
    year: int | None = None
    doc_type: str = "other"
    documents: tuple[Document, ...] = ()

    kind = "output"

    def problems(self):
        out = []
        if not self.title.strip():
            out.append("title must be non-empty")
        if self.doc_type not in OUTPUT_DOC_TYPES:
            out.append(f"doc_type {self.doc_type!r} not one of {OUTPUT_DOC_TYPES}")
        return out


@dataclass(frozen=True)
class Unit:
    id: EntityId
    name: str
    parent: EntityId | None = None
    head: EntityId | None = None
    admin_contacts: tuple[str, ...] = ()

    kind = "unit"

    def problems(self):
        out = []
        if not self.name.strip():
            out.append("name must be non-empty")
        if self.parent is not None and self.parent.kind != "unit":
            out.append("parent must be a unit id")
        if self.head is not None and self.head.kind != "staff":
            out.append("head must be a staff id")
        return out


@dataclass(frozen=True)
class Theme:
    id: EntityId
    label: str
    facet: str = "science_tech"
    parent: EntityId | None = None

    kind = "theme"

    def problems(self):
        out = []
        if not self.label.strip():
            out.append("label must be non-empty")
        if "/" in self.label:
            out.append("label must not contain '/'")
        if self.facet not in THEME_FACETS:
            out.append(f"facet {self.facet!r} not one of {THEME_FACETS}")
        if self.parent is not None and self.parent.kind != "theme":
            out.append("parent must be a theme id")
        return out


ENTITY_CLASSES = {"staff": Staff, "project": Project, "output": Output, "unit": Unit, "theme": Theme}


def display_title(entity):
    if entity.kind == "staff":
        return entity.full_name
    if entity.kind in ("project", "output"):
        return entity.title
    if entity.kind == "unit":
        return entity.name
    return entity.label


@dataclass(frozen=True)
class Graph:
    entities: dict = field(default_factory=dict)  # EntityId -> entity
    links: frozenset = frozenset()  # of LinkRecord
    schema_version: int = 1

    def entity(self, entity_id):
        try:
            return self.entities[entity_id]
        except KeyError:
            raise UnknownEntity(str(entity_id)) from None

    def sorted_ids(self):
        return sorted(self.entities)

    def sorted_links(self):
        return sorted(self.links, key=lambda l: (l.link_type, l.from_id, l.to_id))


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class EntityView:
    entity: object
    neighbor_panels: dict  # "link_type:direction" -> [{"id","title"}]


def add_entity(graph, entity):
    """Return a new graph containing entity; same-id adds are last-write-wins."""
    problems = entity.problems()
    if entity.id.kind != entity.kind:
        problems.append(f"id kind {entity.id.kind!r} does not match entity kind {entity.kind!r}")
    if problems:
        raise InvalidEntity(str(entity.id), problems)
    entities = dict(graph.entities)
    entities[entity.id] = entity
    return replace(graph, entities=entities)


def add_link(graph, link):
    """Return a new graph with link present; re-adding is a no-op."""
    if link.link_type not in LINK_CONSTRAINTS:
        raise KindMismatch(f"unknown link type {link.link_type!r}")
    from_kinds, to_kind = LINK_CONSTRAINTS[link.link_type]
    if link.from_id == link.to_id:
        raise SelfLoop(f"{link.link_type}: {link.from_id} -> itself")
    if link.from_id.kind not in from_kinds or link.to_id.kind != to_kind:
        raise KindMismatch(
            f"{link.link_type} requires {'|'.join(from_kinds)} -> {to_kind}, "
            f"got {link.from_id.kind} -> {link.to_id.kind}"
        )
    for endpoint in (link.from_id, link.to_id):
        if endpoint not in graph.entities:
            raise DanglingEndpoint(f"{link.link_type}: {endpoint} not in graph")
    if link in graph.links:
        return graph
    return replace(graph, links=graph.links | {link})


def _forest_cycles(graph, kind):
    """Ids of `kind` entities on a parent-chain cycle, found by repeated parent-following."""
    on_cycle = set()
    for start in graph.entities:
        if start.kind != kind:
            continue
        seen = []
        node = start
        while node is not None and node in graph.entities and node.kind == kind:
            if node in seen:
                on_cycle.update(seen[seen.index(node):])
                break
            seen.append(node)
            node = getattr(graph.entities[node], "parent", None)
    return on_cycle


def validate_graph(graph):
    """Integrity gate: empty list iff every graph invariant holds."""
    violations = []
    for eid, entity in graph.entities.items():
        for problem in entity.problems():
            violations.append(Violation("InvalidEntity", str(eid), problem))
        for ref_name in ("parent", "head"):
            ref = getattr(entity, ref_name, None)
            if ref is not None and ref not in graph.entities:
                violations.append(
                    Violation("DanglingEndpoint", str(eid), f"{ref_name} {ref} does not exist")
                )
        parent = getattr(entity, "parent", None)
        if entity.kind == "theme" and parent is not None and parent in graph.entities:
            if graph.entities[parent].facet != entity.facet:
                violations.append(
                    Violation("FacetMismatch", str(eid), f"parent {parent} has a different facet")
                )
    for link in graph.links:
        from_kinds, to_kind = LINK_CONSTRAINTS[link.link_type]
        subject = f"{link.link_type}:{link.from_id}->{link.to_id}"
        for endpoint in (link.from_id, link.to_id):
            if endpoint not in graph.entities:
                violations.append(
                    Violation("DanglingEndpoint", subject, f"{endpoint} does not exist")
                )
        if link.from_id == link.to_id:
            violations.append(Violation("SelfLoop", subject, "self-loop"))
        elif link.from_id.kind not in from_kinds or link.to_id.kind != to_kind:
            violations.append(
                Violation("KindMismatch", subject, f"expects {'|'.join(from_kinds)} -> {to_kind}")
            )
    for kind in ("unit", "theme"):
        for eid in _forest_cycles(graph, kind):
            violations.append(Violation("CycleCreated", str(eid), f"{kind} parent chain is cyclic"))
    return sorted(violations, key=lambda v: (v.code, v.subject, v.message))


def applicable_panels(kind):
    """Every (link_type, direction) pair that can touch an entity of `kind`."""
    panels = []
    for link_type in LINK_TYPES:
        from_kinds, to_kind = LINK_CONSTRAINTS[link_type]
        if kind in from_kinds:
            panels.append((link_type, "outgoing"))
        if kind == to_kind:
            panels.append((link_type, "incoming"))
    return panels


def neighbors(graph, entity_id, link_type, direction):
    if entity_id not in graph.entities:
        raise UnknownEntity(str(entity_id))
    if direction == "outgoing":
        found = [l.to_id for l in graph.links if l.link_type == link_type and l.from_id == entity_id]
    elif direction == "incoming":
        found = [l.from_id for l in graph.links if l.link_type == link_type and l.to_id == entity_id]
    else:
        raise ValueError(f"direction must be outgoing or incoming, got {direction!r}")
    return sorted(found)


def entity_view(graph, entity_id):
    entity = graph.entity(entity_id)
    panels = {}
    for link_type, direction in applicable_panels(entity_id.kind):
        members = neighbors(graph, entity_id, link_type, direction)
        panels[f"{link_type}:{direction}"] = [
            {"id": str(m), "title": display_title(graph.entities[m])} for m in members
        ]
    return EntityView(entity=entity, neighbor_panels=panels)
