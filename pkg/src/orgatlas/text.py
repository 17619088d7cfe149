"""Shared text normalization helpers."""

from __future__ import annotations

import re

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def tokenize(text):
    """Casefold, split on non-alphanumerics, drop empties. No stemming or stopwords."""
    return [t for t in _NON_ALNUM.split(text.casefold()) if t]


def normalize_structured(value):
    """Exact-match form for structured field values: casefold, collapse whitespace."""
    return " ".join(str(value).split()).casefold()
