"""Inverted index over entity metadata and attached document text, plus a
naive scan evaluator used as a verification oracle for the indexed path."""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field

from . import querylang, themes
from .text import normalize_structured, tokenize

BM25_K1 = 1.2
BM25_B = 0.75


@dataclass
class DocUnit:
    entity: object  # EntityId
    text_fields: dict  # field name -> text
    structured_fields: dict  # field name -> set of normalized values
    token_count: int = 0

    def term_frequencies(self):
        counts = Counter()
        for text in self.text_fields.values():
            counts.update(tokenize(text))
        return counts


@dataclass
class Index:
    postings: dict = field(default_factory=dict)  # term -> {entity: tf}
    doc_freq: dict = field(default_factory=dict)
    doc_count: int = 0
    avg_doc_len: float = 0.0
    structured: dict = field(default_factory=dict)  # (field, value) -> set of entities
    theme_tags: dict = field(default_factory=dict)  # theme id -> set of entities
    doc_units: dict = field(default_factory=dict)  # entity -> DocUnit
    graph: object = None
    warnings: list = field(default_factory=list)

    def idf(self, term):
        df = self.doc_freq.get(term, 0)
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))


def _read_documents(output, corpus_root, warnings):
    chunks = []
    root = os.path.realpath(corpus_root)
    for doc in output.documents:
        path = os.path.realpath(os.path.join(root, doc.path))
        if not path.startswith(root + os.sep) or not os.path.isfile(path):
            warnings.append({"entity": str(output.id), "path": doc.path, "reason": "missing document"})
            continue
        try:
            with open(path, encoding="utf-8") as fh:
                chunks.append(fh.read())
        except UnicodeDecodeError:
            warnings.append({"entity": str(output.id), "path": doc.path, "reason": "not UTF-8 text"})
    return "\n".join(chunks)


def _linked_unit_names(graph, eid, link_type):
    names = set()
    for link in graph.links:
        if link.link_type == link_type and link.from_id == eid:
            names.add(graph.entities[link.to_id].name)
    return names


def build_doc_unit(graph, eid, corpus_root, warnings=None):
    """Assemble one entity's searchable text and structured values."""
    if warnings is None:
        warnings = []
    entity = graph.entities[eid]
    texts = {}
    structured = {"id": {normalize_structured(str(eid)), normalize_structured(eid.local_id)}}
    if eid.kind == "staff":
        texts["name"] = entity.full_name
        for name in ("bio", "interests"):
            value = getattr(entity, name)
            if value:
                texts[name] = value
        structured["name"] = {normalize_structured(entity.full_name)}
        if entity.site:
            structured["site"] = {normalize_structured(entity.site)}
        units = _linked_unit_names(graph, eid, "member_of")
        if units:
            structured["unit"] = {normalize_structured(u) for u in units}
    elif eid.kind == "project":
        texts["title"] = entity.title
        for name in ("abstract_text", "overview", "background"):
            value = getattr(entity, name)
            if value:
                texts[name] = value
        structured["title"] = {normalize_structured(entity.title)}
        structured["status"] = {normalize_structured(entity.status)}
        units = _linked_unit_names(graph, eid, "tasked_to")
        if units:
            structured["unit"] = {normalize_structured(u) for u in units}
    elif eid.kind == "output":
        texts["title"] = entity.title
        if entity.abstract_text:
            texts["abstract_text"] = entity.abstract_text
        doc_text = _read_documents(entity, corpus_root, warnings)
        if doc_text:
            texts["documents"] = doc_text
        structured["title"] = {normalize_structured(entity.title)}
        structured["type"] = {normalize_structured(entity.doc_type)}
        if entity.year is not None:
            structured["year"] = {normalize_structured(entity.year)}
    elif eid.kind == "unit":
        texts["name"] = entity.name
        structured["name"] = {normalize_structured(entity.name)}
    else:  # theme
        texts["name"] = entity.label
        structured["name"] = {normalize_structured(entity.label)}
    token_count = sum(len(tokenize(t)) for t in texts.values())
    return DocUnit(entity=eid, text_fields=texts, structured_fields=structured, token_count=token_count)


def build_index(graph, corpus_root="."):
    index = Index(graph=graph)
    total_len = 0
    for eid in graph.sorted_ids():
        unit = build_doc_unit(graph, eid, corpus_root, index.warnings)
        index.doc_units[eid] = unit
        total_len += unit.token_count
        for term, tf in unit.term_frequencies().items():
            index.postings.setdefault(term, {})[eid] = tf
        for name, values in unit.structured_fields.items():
            for value in values:
                index.structured.setdefault((name, value), set()).add(eid)
    index.doc_count = len(index.doc_units)
    index.avg_doc_len = total_len / index.doc_count if index.doc_count else 0.0
    index.doc_freq = {term: len(entry) for term, entry in index.postings.items()}
    tagged = {}
    for link in graph.links:
        if link.link_type == "tagged":
            tagged.setdefault(link.to_id, set()).add(link.from_id)
    for eid in graph.entities:
        if eid.kind == "theme":
            members = set()
            for descendant in themes.theme_descendants(graph, eid):
                members |= tagged.get(descendant, set())
            index.theme_tags[eid] = members
    return index


@dataclass(frozen=True)
class RankedHit:
    entity: object
    score: float


def _bm25(index, term, eid, tf):
    dl = index.doc_units[eid].token_count
    denom = tf + BM25_K1 * (1.0 - BM25_B + BM25_B * dl / index.avg_doc_len)
    return index.idf(term) * tf * (BM25_K1 + 1.0) / denom


def _term_scores(index, term):
    return {eid: _bm25(index, term, eid, tf) for eid, tf in index.postings.get(term, {}).items()}


def _evaluate_scores(index, ast):
    if isinstance(ast, querylang.Term):
        return _term_scores(index, ast.token)
    if isinstance(ast, querylang.Phrase):
        return _evaluate_scores(index, querylang.And(tuple(querylang.Term(t) for t in ast.tokens)))
    if isinstance(ast, querylang.Field):
        members = index.structured.get((ast.name, normalize_structured(ast.value)), set())
        return {eid: 1.0 for eid in members}
    if isinstance(ast, querylang.ThemeRef):
        theme_id = themes.resolve_theme(index.graph, ast.path_or_id)
        return {eid: 1.0 for eid in index.theme_tags.get(theme_id, set())}
    if isinstance(ast, querylang.And):
        child_scores = [_evaluate_scores(index, c) for c in ast.children]
        keep = set(child_scores[0])
        for scores in child_scores[1:]:
            keep &= set(scores)
        return {eid: sum(scores[eid] for scores in child_scores) for eid in keep}
    if isinstance(ast, querylang.Or):
        combined = {}
        for scores in (_evaluate_scores(index, c) for c in ast.children):
            for eid, score in scores.items():
                combined[eid] = combined.get(eid, 0.0) + score
        return combined
    raise TypeError(f"not a query node: {ast!r}")


def evaluate(index, ast):
    scores = _evaluate_scores(index, ast)
    return [
        RankedHit(entity=eid, score=score)
        for eid, score in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    ]


def oracle_scan(graph, corpus_root):
    """Per-entity scan table for the oracle: term counts, structured values,
    token length. Built by direct extraction, no postings."""
    table = {}
    for eid in graph.entities:
        unit = build_doc_unit(graph, eid, corpus_root)
        counts = Counter()
        for text in unit.text_fields.values():
            counts.update(tokenize(text))
        table[eid] = {
            "terms": counts,
            "structured": unit.structured_fields,
            "length": unit.token_count,
        }
    return table


def oracle_evaluate(graph, corpus_root, ast, scan=None):
    """Index-free evaluator: linear scan over every entity. Returns the match
    set only; used to cross-check evaluate(). A precomputed oracle_scan may
    be passed when evaluating many queries over one graph."""
    if scan is None:
        scan = oracle_scan(graph, corpus_root)
    if isinstance(ast, querylang.And):
        result = oracle_evaluate(graph, corpus_root, ast.children[0], scan)
        for child in ast.children[1:]:
            result &= oracle_evaluate(graph, corpus_root, child, scan)
        return result
    if isinstance(ast, querylang.Or):
        result = set()
        for child in ast.children:
            result |= oracle_evaluate(graph, corpus_root, child, scan)
        return result
    if isinstance(ast, querylang.Phrase):
        result = oracle_evaluate(graph, corpus_root, querylang.Term(ast.tokens[0]), scan)
        for token in ast.tokens[1:]:
            result &= oracle_evaluate(graph, corpus_root, querylang.Term(token), scan)
        return result
    if isinstance(ast, querylang.ThemeRef):
        theme_id = themes.resolve_theme(graph, ast.path_or_id)
        included = set(themes.theme_descendants(graph, theme_id))
        return {
            link.from_id
            for link in graph.links
            if link.link_type == "tagged" and link.to_id in included
        }
    matches = set()
    for eid, entry in scan.items():
        if isinstance(ast, querylang.Term):
            if entry["terms"].get(ast.token, 0) > 0:
                matches.add(eid)
        elif isinstance(ast, querylang.Field):
            if normalize_structured(ast.value) in entry["structured"].get(ast.name, set()):
                matches.add(eid)
        else:
            raise TypeError(f"not a query node: {ast!r}")
    return matches
