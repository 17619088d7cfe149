"""Operator command line: ingest, validate, index, query, experts, serve, export.

Machine output is JSON Lines on stdout (--pretty switches the human form);
errors go to stderr as JSON objects. Exit codes: 0 success, 1 data error,
2 usage error, 3 I/O error.
"""

from __future__ import annotations

import json
import pickle
import sys

import click

from . import expertise as expertise_mod, ingest as ingest_mod, model, searchindex, snapshot as snapshot_mod
from .errors import (
    ConfigError,
    EmptyQuery,
    OrgAtlasError,
    ParseError,
    QuerySyntaxError,
    SnapshotInvalid,
)
from .querylang import parse_query, print_query
from .text import tokenize

SNAPSHOT_ENVVAR = "ORGATLAS_SNAPSHOT"


def _emit(obj, pretty=False):
    if pretty:
        click.echo(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        click.echo(json.dumps(obj, sort_keys=True, ensure_ascii=False))


def _fail(code, error_code, message):
    print(json.dumps({"code": error_code, "message": message}, sort_keys=True), file=sys.stderr)
    sys.exit(code)


def _load_graph(snapshot_path):
    try:
        return snapshot_mod.read_snapshot(snapshot_path)
    except OSError as exc:
        _fail(3, "IOError", str(exc))
    except ParseError as exc:
        _fail(1, "ParseError", str(exc))


@click.group()
def main():
    """Organisation knowledge and expertise finder."""


snapshot_option = click.option(
    "--snapshot", "snapshot_path", envvar=SNAPSHOT_ENVVAR, required=True,
    help=f"Snapshot file (or ${SNAPSHOT_ENVVAR}).",
)
pretty_option = click.option("--pretty", is_flag=True, help="Human-readable output.")


@main.command()
@click.option("--sources", "sources_dir", required=True, help="Source bundle directory.")
@click.option("--config", "config_path", required=True, help="Ingest config file.")
@click.option("--out", "out_path", required=True, help="Snapshot output path.")
@click.option("--report", "report_path", default=None, help="Merge report path (default <out>.report.jsonl).")
@pretty_option
def ingest(sources_dir, config_path, out_path, report_path, pretty):
    """Run the full ingest pipeline and write a canonical snapshot."""
    try:
        config = ingest_mod.load_config(config_path)
        sources = ingest_mod.discover_sources(sources_dir, config)
        graph, report = ingest_mod.ingest_all(sources, config)
        data = snapshot_mod.write_snapshot(graph, out_path)
        ingest_mod.write_merge_report(report, report_path or out_path + ".report.jsonl")
    except (ConfigError, ParseError) as exc:
        _fail(1, type(exc).__name__, str(exc))
    except OSError as exc:
        _fail(3, "IOError", str(exc))
    _emit({
        "snapshot": out_path,
        "checksum": snapshot_mod.checksum(data),
        "entities": len(graph.entities),
        "links": len(graph.links),
        "clusters": report.clusters_formed,
        "conflicts": len(report.conflicts_resolved),
        "unmatched_link_hints": len(report.unmatched_link_hints),
        "violations": len(report.violations),
    }, pretty)
    if report.violations:
        sys.exit(1)


@main.command()
@snapshot_option
@pretty_option
def validate(snapshot_path, pretty):
    """Check a snapshot against every graph invariant."""
    graph = _load_graph(snapshot_path)
    violations = model.validate_graph(graph)
    for v in violations:
        _emit({"code": v.code, "subject": v.subject, "message": v.message}, pretty)
    sys.exit(1 if violations else 0)


@main.command()
@snapshot_option
@click.option("--corpus-root", default=None, help="Directory holding attached documents.")
@click.option("--cache", "cache_path", default=None, help="Index cache path (default <snapshot>.index.pkl).")
@pretty_option
def index(snapshot_path, corpus_root, cache_path, pretty):
    """Build the search index and cache it beside the snapshot."""
    import os

    graph = _load_graph(snapshot_path)
    root = corpus_root or os.path.dirname(os.path.abspath(snapshot_path))
    idx = searchindex.build_index(graph, root)
    cache_path = cache_path or snapshot_path + ".index.pkl"
    try:
        with open(cache_path, "wb") as fh:
            pickle.dump(idx, fh)
    except OSError as exc:
        _fail(3, "IOError", str(exc))
    _emit({
        "cache": cache_path,
        "doc_units": idx.doc_count,
        "terms": len(idx.postings),
        "avg_doc_len": idx.avg_doc_len,
        "warnings": idx.warnings,
    }, pretty)


@main.command()
@snapshot_option
@click.option("--q", "query_text", required=True, help="Query in the search language.")
@click.option("--corpus-root", default=None)
@pretty_option
def query(snapshot_path, query_text, corpus_root, pretty):
    """Evaluate a query and print ranked hits as JSON Lines."""
    import os

    try:
        ast = parse_query(query_text)
    except (QuerySyntaxError, EmptyQuery) as exc:
        _fail(2, type(exc).__name__, str(exc))
    graph = _load_graph(snapshot_path)
    root = corpus_root or os.path.dirname(os.path.abspath(snapshot_path))
    idx = searchindex.build_index(graph, root)
    try:
        hits = searchindex.evaluate(idx, ast)
    except OrgAtlasError as exc:
        _fail(1, type(exc).__name__, str(exc))
    for hit in hits:
        _emit({
            "id": str(hit.entity),
            "kind": hit.entity.kind,
            "title": model.display_title(graph.entities[hit.entity]),
            "score": hit.score,
            "query": print_query(ast),
        }, pretty)


@main.command()
@snapshot_option
@click.option("--q", "query_text", required=True, help="Space-separated expertise terms.")
@click.option("-k", "top_k", default=10, show_default=True)
@click.option("--corpus-root", default=None)
@pretty_option
def experts(snapshot_path, query_text, top_k, corpus_root, pretty):
    """Rank staff by derived expertise for the given terms."""
    import os

    terms = tokenize(query_text)
    if not terms:
        _fail(2, "EmptyQuery", "no query terms")
    graph = _load_graph(snapshot_path)
    root = corpus_root or os.path.dirname(os.path.abspath(snapshot_path))
    idx = searchindex.build_index(graph, root)
    profiles = expertise_mod.build_profiles(graph, idx)
    for staff_id, score in expertise_mod.find_experts(profiles, terms, top_k):
        _emit({
            "id": str(staff_id),
            "title": model.display_title(graph.entities[staff_id]),
            "score": score,
        }, pretty)


@main.command()
@snapshot_option
@click.option("--port", default=8040, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--corpus-root", default=None)
def serve(snapshot_path, port, host, corpus_root):
    """Serve the HTTP/JSON API over the snapshot."""
    import uvicorn

    from .api import create_app

    try:
        app = create_app(snapshot_path, corpus_root)
    except SnapshotInvalid as exc:
        _fail(1, "SnapshotInvalid", str(exc))
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@snapshot_option
@click.option("--format", "fmt", default="jsonl", type=click.Choice(["jsonl"]), show_default=True)
def export(snapshot_path, fmt):
    """Re-emit the snapshot in canonical bytes (idempotent)."""
    graph = _load_graph(snapshot_path)
    sys.stdout.buffer.write(snapshot_mod.snapshot_bytes(graph))


if __name__ == "__main__":
    main()
