"""Read-only HTTP/JSON service over an immutable snapshot.

All state lives in one ApiSnapshot object; reload builds a complete
replacement and swaps the reference, so every request is served entirely by
one snapshot (checked by the X-Snapshot-Checksum header on every reply).
"""

from __future__ import annotations

import datetime
import os
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import expertise, model, searchindex, snapshot as snapshot_mod, themes
from .errors import EmptyQuery, QuerySyntaxError, SnapshotInvalid, UnknownEntity, UnknownTheme
from .model import EntityId
from .querylang import parse_query, print_query
from .text import normalize_structured, tokenize

MAX_LIMIT = 500

BROWSE_FILTERS = {
    "staff": ("unit", "site", "theme"),
    "project": ("unit", "status", "theme"),
    "output": ("type", "year", "theme"),
    "unit": (),
    "theme": (),
}


@dataclass(frozen=True)
class ApiSnapshot:
    graph: object
    index: object
    profiles: dict
    built_at: str
    checksum: str


def load_api_snapshot(path, corpus_root=None):
    """Load, validate and derive everything the service needs from one file."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise SnapshotInvalid(f"cannot read snapshot: {exc}") from None
    try:
        graph = snapshot_mod.parse_snapshot(data)
    except Exception as exc:
        raise SnapshotInvalid(f"snapshot does not parse: {exc}") from None
    violations = model.validate_graph(graph)
    if violations:
        raise SnapshotInvalid(
            f"snapshot has {len(violations)} integrity violation(s)", violations
        )
    if corpus_root is None:
        corpus_root = os.path.dirname(os.path.abspath(path))
    index = searchindex.build_index(graph, corpus_root)
    profiles = expertise.build_profiles(graph, index)
    return ApiSnapshot(
        graph=graph,
        index=index,
        profiles=profiles,
        built_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        checksum=snapshot_mod.checksum(data),
    )


def _reply(snap, payload, status=200):
    return JSONResponse(payload, status_code=status, headers={"X-Snapshot-Checksum": snap.checksum})


def _error(snap, status, code, message, detail=None):
    return _reply(snap, {"code": code, "message": message, "detail": detail}, status=status)


def _entity_payload(graph, eid):
    entity = graph.entities[eid]
    fields = {}
    for name, value in vars(entity).items():
        if name == "id" or value is None:
            continue
        if isinstance(value, EntityId):
            value = str(value)
        elif isinstance(value, tuple):
            value = [vars(v) if hasattr(v, "__dataclass_fields__") else v for v in value]
        fields[name] = value
    return {"id": str(eid), "kind": eid.kind, "title": model.display_title(entity), "fields": fields}


def _unit_descendants(graph, unit_id):
    children = {}
    for eid, entity in graph.entities.items():
        if eid.kind == "unit" and entity.parent is not None:
            children.setdefault(entity.parent, []).append(eid)
    found = set()
    stack = [unit_id]
    while stack:
        node = stack.pop()
        if node in found:
            continue
        found.add(node)
        stack.extend(children.get(node, ()))
    return found


def _resolve_unit(graph, raw):
    try:
        eid = EntityId.parse(raw)
        if eid.kind == "unit" and eid in graph.entities:
            return eid
    except ValueError:
        pass
    eid = EntityId("unit", raw)
    if eid in graph.entities:
        return eid
    wanted = normalize_structured(raw)
    matches = sorted(
        e for e, entity in graph.entities.items()
        if e.kind == "unit" and normalize_structured(entity.name) == wanted
    )
    return matches[0] if len(matches) == 1 else None


def _paging(request):
    try:
        offset = int(request.query_params.get("offset", "0"))
        limit = int(request.query_params.get("limit", "50"))
    except ValueError:
        raise ValueError("offset and limit must be integers")
    if offset < 0 or limit < 1 or limit > MAX_LIMIT:
        raise ValueError(f"offset must be >= 0 and 1 <= limit <= {MAX_LIMIT}")
    return offset, limit


def _browse(snap, kind, filters):
    graph = snap.graph
    candidates = sorted(e for e in graph.entities if e.kind == kind)
    for name, raw in filters.items():
        if name == "unit":
            unit = _resolve_unit(graph, raw)
            if unit is None:
                return []
            units = _unit_descendants(graph, unit)
            link_type = "member_of" if kind == "staff" else "tasked_to"
            member = {
                l.from_id for l in graph.links if l.link_type == link_type and l.to_id in units
            }
            candidates = [e for e in candidates if e in member]
        elif name == "theme":
            theme_id = themes.resolve_theme(graph, raw)
            included = set(themes.theme_descendants(graph, theme_id))
            tagged = {
                l.from_id for l in graph.links if l.link_type == "tagged" and l.to_id in included
            }
            candidates = [e for e in candidates if e in tagged]
        else:
            wanted = normalize_structured(raw)
            attr = {"site": "site", "status": "status", "type": "doc_type", "year": "year"}[name]
            candidates = [
                e for e in candidates
                if getattr(graph.entities[e], attr, None) is not None
                and normalize_structured(getattr(graph.entities[e], attr)) == wanted
            ]
    return candidates


def create_app(snapshot_path=None, corpus_root=None, initial=None):
    app = FastAPI(title="orgatlas", docs_url=None, redoc_url=None)
    if initial is None:
        initial = load_api_snapshot(snapshot_path, corpus_root)
    state = {"snapshot": initial, "corpus_root": corpus_root}

    @app.get("/health")
    def health():
        snap = state["snapshot"]
        return _reply(snap, {
            "status": "ok",
            "checksum": snap.checksum,
            "built_at": snap.built_at,
            "entities": len(snap.graph.entities),
            "links": len(snap.graph.links),
        })

    @app.get("/entities/{entity_id}")
    def get_entity(entity_id: str):
        snap = state["snapshot"]
        graph = snap.graph
        try:
            eid = EntityId.parse(entity_id)
            view = model.entity_view(graph, eid)
        except (ValueError, UnknownEntity):
            return _error(snap, 404, "UnknownEntity", f"no entity {entity_id!r}")
        panels = {
            key: [{"id": m["id"], "kind": m["id"].split(":", 1)[0], "title": m["title"]} for m in members]
            for key, members in view.neighbor_panels.items()
        }
        payload = _entity_payload(graph, eid)
        payload["panels"] = panels
        if eid.kind == "theme":
            agg = themes.theme_rollup(graph, eid)
            payload["aggregate"] = {
                "staff": [str(s) for s in agg.staff],
                "projects": [str(p) for p in agg.projects],
                "outputs": [str(o) for o in agg.outputs],
            }
        if eid.kind == "staff":
            profile = snap.profiles.get(eid)
            payload["expertise"] = [
                {"term": term, "weight": weight}
                for term, weight in (expertise.profile_summary(profile, 10) if profile else [])
            ]
        return _reply(snap, payload)

    @app.get("/browse/{kind}")
    def browse(kind: str, request: Request):
        snap = state["snapshot"]
        if kind not in model.KINDS:
            return _error(snap, 400, "BadFilter", f"unknown kind {kind!r}")
        filters = {
            k: v for k, v in request.query_params.items() if k not in ("offset", "limit")
        }
        bad = sorted(set(filters) - set(BROWSE_FILTERS[kind]))
        if bad:
            return _error(snap, 400, "BadFilter", f"filters not applicable to {kind}: {bad}")
        try:
            offset, limit = _paging(request)
        except ValueError as exc:
            return _error(snap, 400, "BadPaging", str(exc))
        try:
            matched = _browse(snap, kind, filters)
        except UnknownTheme as exc:
            return _error(snap, 400, "UnknownTheme", str(exc))
        page = matched[offset:offset + limit]
        return _reply(snap, {
            "total": len(matched),
            "offset": offset,
            "limit": limit,
            "items": [
                {"id": str(e), "kind": e.kind, "title": model.display_title(snap.graph.entities[e])}
                for e in page
            ],
        })

    @app.get("/search")
    def search(request: Request):
        snap = state["snapshot"]
        q = request.query_params.get("q", "")
        try:
            offset, limit = _paging(request)
        except ValueError as exc:
            return _error(snap, 400, "BadPaging", str(exc))
        try:
            ast = parse_query(q)
        except EmptyQuery as exc:
            return _error(snap, 400, "EmptyQuery", str(exc))
        except QuerySyntaxError as exc:
            return _error(snap, 400, "SyntaxError", str(exc), detail={"position": exc.position})
        try:
            hits = searchindex.evaluate(snap.index, ast)
        except UnknownTheme as exc:
            return _error(snap, 400, "UnknownTheme", str(exc))
        page = hits[offset:offset + limit]
        graph = snap.graph
        return _reply(snap, {
            "query": print_query(ast),
            "total": len(hits),
            "offset": offset,
            "limit": limit,
            "hits": [
                {
                    "id": str(h.entity),
                    "kind": h.entity.kind,
                    "title": model.display_title(graph.entities[h.entity]),
                    "score": h.score,
                }
                for h in page
            ],
        })

    @app.get("/themes/tree")
    def tree():
        snap = state["snapshot"]
        return _reply(snap, {"facets": themes.theme_tree(snap.graph)})

    @app.get("/themes/{theme_id}/rollup")
    def rollup(theme_id: str):
        snap = state["snapshot"]
        graph = snap.graph
        try:
            eid = themes.resolve_theme(graph, theme_id)
            agg = themes.theme_rollup(graph, eid)
        except (UnknownTheme, UnknownEntity) as exc:
            return _error(snap, 404, "UnknownTheme", str(exc))
        def summaries(ids):
            return [{"id": str(e), "kind": e.kind, "title": model.display_title(graph.entities[e])} for e in ids]
        return _reply(snap, {
            "theme": str(eid),
            "label": graph.entities[eid].label,
            "staff": summaries(agg.staff),
            "projects": summaries(agg.projects),
            "outputs": summaries(agg.outputs),
        })

    @app.get("/experts")
    def experts(request: Request):
        snap = state["snapshot"]
        q = request.query_params.get("q", "")
        try:
            k = int(request.query_params.get("k", "10"))
            if k < 1:
                raise ValueError
        except ValueError:
            return _error(snap, 400, "BadPaging", "k must be a positive integer")
        terms = tokenize(q)
        if not terms:
            return _error(snap, 400, "EmptyQuery", "no query terms")
        ranked = expertise.find_experts(snap.profiles, terms, k)
        graph = snap.graph
        return _reply(snap, {
            "terms": terms,
            "experts": [
                {"id": str(s), "title": model.display_title(graph.entities[s]), "score": score}
                for s, score in ranked
            ],
        })

    @app.post("/admin/reload")
    async def reload(request: Request):
        snap = state["snapshot"]
        body = await request.json()
        path = body.get("path") if isinstance(body, dict) else None
        if not path:
            return _error(snap, 400, "BadRequest", "body must be {\"path\": ...}")
        try:
            replacement = load_api_snapshot(path, state["corpus_root"])
        except SnapshotInvalid as exc:
            return _error(
                snap, 400, "SnapshotInvalid", str(exc),
                detail=[{"code": v.code, "subject": v.subject, "message": v.message} for v in exc.violations],
            )
        state["snapshot"] = replacement  # single reference assignment: atomic swap
        return _reply(replacement, {"status": "reloaded", "checksum": replacement.checksum})

    return app
