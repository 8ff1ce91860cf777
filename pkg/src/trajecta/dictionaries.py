"""Word-type dictionaries shared by query parsing and document generation.

The same day-part words must match at both ends of the pipeline: a
trajectory point stamped "morning" has to be found by a query saying
"morning". Users can extend the defaults through a JSON config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

DEFAULT_CONJUNCTIONS = [
    "query", "trajectories", "trajectory", "that", "the", "of",
    "pass", "passed", "through", "stay", "during", "after", "before",
    "and", "or", "from", "to", "in",
]

# day-part word -> [start hour, end hour), half-open
DEFAULT_TEMPORAL = {
    "morning": (6, 9),
    "noon": (11, 14),
    "evening": (18, 24),
}


@dataclass
class Dictionaries:
    conjunctions: set[str] = field(default_factory=lambda: set(DEFAULT_CONJUNCTIONS))
    temporal: dict[str, tuple[int, int]] = field(
        default_factory=lambda: dict(DEFAULT_TEMPORAL)
    )

    def time_word_for(self, seconds_of_day: float) -> str:
        """Day-part word covering this time of day, or "" when uncovered."""
        hour = seconds_of_day / 3600.0
        for word, (start, end) in sorted(self.temporal.items(), key=lambda kv: (kv[1][0], kv[0])):
            if start <= hour < end:
                return word
        return ""


def defaults() -> Dictionaries:
    return Dictionaries()


def load(path) -> Dictionaries:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return Dictionaries(
        conjunctions=set(raw["conjunctions"]),
        temporal={word: (int(lo), int(hi)) for word, (lo, hi) in raw["temporal"].items()},
    )


def save(dicts: Dictionaries, path) -> None:
    payload = {
        "conjunctions": sorted(dicts.conjunctions),
        "temporal": {word: list(hours) for word, hours in sorted(dicts.temporal.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
