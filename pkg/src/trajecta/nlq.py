"""Natural-language query parsing into typed words and constraints.

A dictionary classifier splits a sentence into conjunctions, temporal
words (day parts and dates) and spatial words; unknown words default to
spatial so any location-like term can be queried. Consecutive spatial
words between conjunctions form one keyword group; "before"/"after"
between groups impose a visit order.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass

from .core import TimeWindow, datetime_to_epoch
from .dictionaries import Dictionaries, defaults as default_dictionaries
from .errors import EmptySentence, UnparsableDate

KIND_CONJUNCTION = "conjunction"
KIND_TEMPORAL = "temporal"
KIND_SPATIAL = "spatial"

_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_MONTHS = {
    name: i + 1
    for i, name in enumerate(
        ["january", "february", "march", "april", "may", "june", "july",
         "august", "september", "october", "november", "december"]
    )
}
_MONTHS.update({
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7,
    "aug": 8, "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
})


@dataclass
class TypedWord:
    text: str
    kind: str


@dataclass
class SpatialGroup:
    keywords: list[str]
    order_index: int | None = None


@dataclass
class QueryDefaults:
    alpha: float = 1.0
    beta: float = 0.0
    k: int = 10
    topic_weights: list[float] | None = None


@dataclass
class QueryConstraints:
    windows: list[TimeWindow]
    groups: list[SpatialGroup]
    combinator: str = "and"
    topic_weights: list[float] | None = None
    alpha: float = 1.0
    beta: float = 0.0
    k: int = 10


def _clean(token: str) -> str:
    return token.strip(".,;:!?()[]'\"")


def _try_date(tokens: list[str], i: int) -> tuple[str, int] | None:
    """Match a date starting at token i; return (surface text, token span)."""
    head = _clean(tokens[i]).lower()
    if _ISO_DATE_RE.match(head):
        return tokens[i], 1
    month = _MONTHS.get(head.rstrip(".").lower())
    if month is not None and i + 2 < len(tokens):
        day = _clean(tokens[i + 1])
        year = _clean(tokens[i + 2])
        if day.isdigit() and year.isdigit() and len(year) == 4:
            return " ".join(tokens[i : i + 3]), 3
    return None


def _date_window(text: str) -> TimeWindow:
    cleaned = _clean(text)
    if _ISO_DATE_RE.match(cleaned):
        try:
            day = dt.date.fromisoformat(cleaned)
        except ValueError:
            raise UnparsableDate(text) from None
    else:
        parts = text.split()
        month = _MONTHS.get(_clean(parts[0]).rstrip(".").lower()) if parts else None
        try:
            day = dt.date(int(_clean(parts[2])), month, int(_clean(parts[1])))
        except (TypeError, ValueError, IndexError):
            raise UnparsableDate(text) from None
    start = datetime_to_epoch(dt.datetime(day.year, day.month, day.day))
    return TimeWindow(start, start + 86400)


def classify_words(
    sentence: str,
    dictionaries: Dictionaries | None = None,
    overrides: dict[str, str] | None = None,
) -> list[TypedWord]:
    """Assign every word of the sentence exactly one kind.

    Multi-token dates ("Jan. 10 2014") collapse into a single temporal
    word. ``overrides`` maps lowercased words to a kind and wins over the
    dictionaries (the console lets users reassign word types).
    """
    if not sentence or not sentence.strip():
        raise EmptySentence()
    dicts = dictionaries or default_dictionaries()
    overrides = overrides or {}
    valid_kinds = (KIND_CONJUNCTION, KIND_TEMPORAL, KIND_SPATIAL)
    for word, kind in overrides.items():
        if kind not in valid_kinds:
            raise ValueError(f"override for {word!r}: unknown kind {kind!r}")

    tokens = sentence.split()
    words: list[TypedWord] = []
    i = 0
    while i < len(tokens):
        surface = _clean(tokens[i])
        if not surface:
            i += 1
            continue
        lower = surface.lower()
        if lower in overrides:
            words.append(TypedWord(surface, overrides[lower]))
            i += 1
            continue
        date = _try_date(tokens, i)
        if date is not None:
            text, span = date
            words.append(TypedWord(_clean(text) if span == 1 else text, KIND_TEMPORAL))
            i += span
            continue
        if lower in dicts.temporal:
            words.append(TypedWord(surface, KIND_TEMPORAL))
        elif lower in dicts.conjunctions:
            words.append(TypedWord(surface, KIND_CONJUNCTION))
        else:
            words.append(TypedWord(surface, KIND_SPATIAL))
        i += 1
    return words


def _merge_windows(windows: list[TimeWindow]) -> list[TimeWindow]:
    """Sort and merge overlapping windows, separately per kind."""
    merged: list[TimeWindow] = []
    for daily in (False, True):
        same = sorted(
            (w for w in windows if w.daily == daily), key=lambda w: (w.start, w.end)
        )
        for win in same:
            if merged and merged[-1].daily == daily and win.start <= merged[-1].end:
                if win.end > merged[-1].end:
                    merged[-1] = TimeWindow(merged[-1].start, win.end, daily)
            else:
                merged.append(win)
    return merged


def parse_temporal(
    words: list[TypedWord],
    dictionaries: Dictionaries | None = None,
) -> list[TimeWindow]:
    """Resolve temporal words into time windows.

    Dates become full-day windows; day-part words become daily windows
    (seconds-of-day) that repeat on every queried day; a date plus a
    day-part intersect into the day part of that specific day. Without
    any temporal word the single unbounded window is returned.
    """
    dicts = dictionaries or default_dictionaries()
    date_windows: list[TimeWindow] = []
    day_parts: list[tuple[int, int]] = []
    for word in words:
        if word.kind != KIND_TEMPORAL:
            continue
        lower = _clean(word.text).lower()
        if lower in dicts.temporal:
            day_parts.append(dicts.temporal[lower])
        else:
            date_windows.append(_date_window(word.text))

    if not date_windows and not day_parts:
        return [TimeWindow.unbounded()]
    if not date_windows:
        windows = [TimeWindow(lo * 3600, hi * 3600, daily=True) for lo, hi in day_parts]
        return _merge_windows(windows)
    if not day_parts:
        return _merge_windows(date_windows)
    windows = [
        TimeWindow(day.start + lo * 3600, day.start + hi * 3600)
        for day in date_windows
        for lo, hi in day_parts
    ]
    return _merge_windows(windows)


def extract_constraints(
    sentence: str,
    query_defaults: QueryDefaults | None = None,
    dictionaries: Dictionaries | None = None,
    overrides: dict[str, str] | None = None,
) -> QueryConstraints:
    """Parse a sentence into windows, ordered keyword groups and knobs.

    Zero spatial groups is a legal outcome here; downstream POI scoring
    raises NoSpatialConstraint when asked to run on it.
    """
    from .docgen import tokenize

    d = query_defaults or QueryDefaults()
    words = classify_words(sentence, dictionaries, overrides)
    windows = parse_temporal(words, dictionaries)

    groups: list[list[str]] = []
    ranks: list[int] = []
    ordered = False
    pending_connector: str | None = None
    combinator = "and"
    current: list[str] | None = None
    for word in words:
        if word.kind == KIND_SPATIAL:
            keywords = tokenize(word.text)
            if not keywords:
                continue
            if current is None:
                current = []
                rank = ranks[-1] if ranks else 0
                if pending_connector == "before":
                    rank += 1
                    ordered = True
                elif pending_connector == "after":
                    rank -= 1
                    ordered = True
                groups.append(current)
                ranks.append(rank)
                pending_connector = None
            current.extend(keywords)
        else:
            lower = _clean(word.text).lower()
            if current is not None:
                current = None
            if lower in ("before", "after"):
                pending_connector = lower
            elif lower == "or":
                combinator = "or"

    if ordered:
        order = sorted(range(len(groups)), key=lambda i: (ranks[i], i))
        spatial_groups = [
            SpatialGroup(groups[gi], order_index=pos) for pos, gi in enumerate(order)
        ]
    else:
        spatial_groups = [SpatialGroup(g) for g in groups]

    return QueryConstraints(
        windows=windows,
        groups=spatial_groups,
        combinator=combinator,
        topic_weights=list(d.topic_weights) if d.topic_weights else None,
        alpha=d.alpha,
        beta=d.beta,
        k=d.k,
    )
