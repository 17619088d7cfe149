"""Theme taxonomy traversal and rollup."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownEntity, UnknownTheme
from .model import EntityId
from .ingest import normalize_name


@dataclass(frozen=True)
class ThemeAggregate:
    theme: EntityId
    staff: tuple
    projects: tuple
    outputs: tuple


def _children_map(graph):
    children = {}
    for eid, entity in graph.entities.items():
        if eid.kind == "theme" and entity.parent is not None:
            children.setdefault(entity.parent, []).append(eid)
    return children


def theme_descendants(graph, theme_id):
    """Transitive closure over child edges, self included, canonical order."""
    if theme_id not in graph.entities or theme_id.kind != "theme":
        raise UnknownEntity(str(theme_id))
    children = _children_map(graph)
    found = set()
    stack = [theme_id]
    while stack:
        node = stack.pop()
        if node in found:
            continue
        found.add(node)
        stack.extend(children.get(node, ()))
    return sorted(found)


def theme_rollup(graph, theme_id, include_contributors=True):
    """Everything tagged with the theme or a descendant, plus (by default) the
    staff who contributed to any included project or output."""
    included = set(theme_descendants(graph, theme_id))
    projects = set()
    outputs = set()
    staff = set()
    for link in graph.links:
        if link.link_type == "tagged" and link.to_id in included:
            if link.from_id.kind == "project":
                projects.add(link.from_id)
            elif link.from_id.kind == "output":
                outputs.add(link.from_id)
            else:
                staff.add(link.from_id)
    if include_contributors:
        for link in graph.links:
            if link.link_type == "contributes_to" and link.to_id in projects:
                staff.add(link.from_id)
            elif link.link_type == "authored" and link.to_id in outputs:
                staff.add(link.from_id)
    return ThemeAggregate(
        theme=theme_id,
        staff=tuple(sorted(staff)),
        projects=tuple(sorted(projects)),
        outputs=tuple(sorted(outputs)),
    )


def resolve_theme(graph, path_or_id):
    """Resolve a theme reference: canonical id, local id, label, or label path
    like "st/sensors/radar" walked root-down by normalized label."""
    raw = path_or_id.strip()
    if not raw:
        raise UnknownTheme("empty theme reference")
    if "/" not in raw:
        try:
            eid = EntityId.parse(raw)
            if eid.kind == "theme" and eid in graph.entities:
                return eid
        except ValueError:
            pass
        eid = EntityId("theme", raw)
        if eid in graph.entities:
            return eid
        key = normalize_name(raw)
        matches = sorted(
            e for e, entity in graph.entities.items()
            if e.kind == "theme" and normalize_name(entity.label) == key
        )
        if len(matches) == 1:
            return matches[0]
        if matches:
            raise UnknownTheme(f"theme label {raw!r} is ambiguous: {[str(m) for m in matches]}")
        raise UnknownTheme(f"no theme matches {raw!r}")

    segments = [normalize_name(s) for s in raw.split("/") if s.strip()]
    if not segments:
        raise UnknownTheme(f"no theme matches {raw!r}")
    children = _children_map(graph)
    level = [
        e for e, entity in graph.entities.items()
        if e.kind == "theme" and entity.parent is None and normalize_name(entity.label) == segments[0]
    ]
    for segment in segments[1:]:
        level = [
            child
            for node in level
            for child in children.get(node, ())
            if normalize_name(graph.entities[child].label) == segment
        ]
    matches = sorted(level)
    if len(matches) == 1:
        return matches[0]
    if matches:
        raise UnknownTheme(f"theme path {raw!r} is ambiguous")
    raise UnknownTheme(f"no theme matches path {raw!r}")


def theme_tree(graph):
    """Forest of all themes grouped by facet, children sorted canonically."""
    children = _children_map(graph)

    def node(eid):
        entity = graph.entities[eid]
        return {
            "id": str(eid),
            "label": entity.label,
            "children": [node(c) for c in sorted(children.get(eid, ()))],
        }

    forest = {}
    roots = sorted(
        e for e, entity in graph.entities.items() if e.kind == "theme" and entity.parent is None
    )
    for root in roots:
        forest.setdefault(graph.entities[root].facet, []).append(node(root))
    return forest
