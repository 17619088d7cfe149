"""Derived staff expertise profiles: tf-idf aggregation over the text of the
projects and outputs each staff member is linked to, plus their own bio.

The weighting lives entirely in build_profiles so an alternative derivation
can replace it without touching callers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import themes
from .errors import EmptyQuery
from .text import tokenize


@dataclass
class ExpertiseProfile:
    staff: object  # EntityId
    term_weights: dict = field(default_factory=dict)
    theme_scores: dict = field(default_factory=dict)

    def top_terms(self, k):
        ranked = sorted(self.term_weights.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:k]


def _linked_entities(graph, staff_id):
    return sorted(
        link.to_id
        for link in graph.links
        if link.from_id == staff_id and link.link_type in ("authored", "contributes_to")
    )


def build_profiles(graph, index):
    """One profile per staff member; idf comes from the whole-corpus index."""
    descendant_cache = {}

    def descendants(theme_id):
        if theme_id not in descendant_cache:
            descendant_cache[theme_id] = set(themes.theme_descendants(graph, theme_id))
        return descendant_cache[theme_id]

    tagged = {}
    for link in graph.links:
        if link.link_type == "tagged":
            tagged.setdefault(link.from_id, set()).add(link.to_id)

    theme_ids = [eid for eid in graph.entities if eid.kind == "theme"]
    profiles = {}
    for staff_id in graph.entities:
        if staff_id.kind != "staff":
            continue
        linked = _linked_entities(graph, staff_id)
        term_weights = {}
        for eid in linked:
            for term, tf in index.doc_units[eid].term_frequencies().items():
                term_weights[term] = term_weights.get(term, 0.0) + tf * index.idf(term)
        # own page contributes its descriptive text (bio/interests), not the name
        own = index.doc_units[staff_id]
        own_counts = Counter()
        for name, text in own.text_fields.items():
            if name != "name":
                own_counts.update(tokenize(text))
        for term, tf in own_counts.items():
            term_weights[term] = term_weights.get(term, 0.0) + tf * index.idf(term)
        term_weights = {t: w for t, w in term_weights.items() if w > 0.0}
        theme_scores = {}
        for theme_id in theme_ids:
            included = descendants(theme_id)
            count = sum(1 for eid in linked if tagged.get(eid, set()) & included)
            if count:
                theme_scores[theme_id] = count
        profiles[staff_id] = ExpertiseProfile(
            staff=staff_id, term_weights=term_weights, theme_scores=theme_scores
        )
    return profiles


def find_experts(profiles, query_terms, k):
    if not query_terms:
        raise EmptyQuery("no query terms")
    if k < 1:
        raise ValueError("k must be >= 1")
    scored = []
    for staff_id, profile in profiles.items():
        score = sum(profile.term_weights.get(t, 0.0) for t in query_terms)
        if score > 0.0:
            scored.append((staff_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]


def profile_summary(profile, k):
    if k < 1:
        raise ValueError("k must be >= 1")
    return profile.top_terms(k)
