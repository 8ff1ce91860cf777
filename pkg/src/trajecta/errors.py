"""Exception types shared across the package.

Every error carries its identifying arguments as attributes so callers
(CLI, HTTP service) can render them without parsing messages.
"""


class TrajectaError(Exception):
    """Base class for all package errors."""


# --- ingestion -----------------------------------------------------------

class MalformedRow(TrajectaError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DuplicateId(TrajectaError):
    def __init__(self, entity_id: str):
        self.entity_id = entity_id
        super().__init__(f"duplicate id {entity_id!r}")


class UnknownStation(TrajectaError):
    def __init__(self, station_id: str):
        self.station_id = station_id
        super().__init__(f"unknown station {station_id!r}")


# --- spatial partitioning ------------------------------------------------

class NoStations(TrajectaError):
    def __init__(self):
        super().__init__("at least one station is required")


class DuplicateStationPosition(TrajectaError):
    def __init__(self, id_a: str, id_b: str):
        self.id_a = id_a
        self.id_b = id_b
        super().__init__(f"stations {id_a!r} and {id_b!r} share a position")


# --- topic modeling ------------------------------------------------------

class EmptyCorpus(TrajectaError):
    def __init__(self, what: str = "corpus"):
        super().__init__(f"{what} contains no usable documents")


class TooFewTopics(TrajectaError):
    def __init__(self, count: int):
        self.count = count
        super().__init__(f"need at least 2 topics, got {count}")


class UnknownRegion(TrajectaError):
    def __init__(self, region_id: str):
        self.region_id = region_id
        super().__init__(f"region {region_id!r} has no trained topic row")


# --- word embeddings -----------------------------------------------------

class DimTooLarge(TrajectaError):
    def __init__(self, dim: int, vocab_size: int):
        self.dim = dim
        self.vocab_size = vocab_size
        super().__init__(f"dim {dim} exceeds vocabulary size {vocab_size}")


class BadHeader(TrajectaError):
    def __init__(self, reason: str):
        super().__init__(f"bad vector file header: {reason}")


class RowDimMismatch(TrajectaError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: row width does not match header dim")


class UnknownWord(TrajectaError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word {word!r} not in embedding space")


class ZeroVector(TrajectaError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word {word!r} has an all-zero vector")


# --- query parsing -------------------------------------------------------

class EmptySentence(TrajectaError):
    def __init__(self):
        super().__init__("query sentence is empty")


class UnparsableDate(TrajectaError):
    def __init__(self, text: str):
        self.text = text
        super().__init__(f"cannot parse date {text!r}")


class NoSpatialConstraint(TrajectaError):
    def __init__(self):
        super().__init__("query contains no spatial constraint words")


# --- retrieval -----------------------------------------------------------

class NoCandidates(TrajectaError):
    def __init__(self, group_index: int):
        self.group_index = group_index
        super().__init__(f"spatial group {group_index} has no candidate POIs")


# --- trajectory operations -----------------------------------------------

class DimensionMismatch(TrajectaError):
    def __init__(self, dim_a: int, dim_b: int):
        super().__init__(f"topic vector dims differ: {dim_a} vs {dim_b}")


class BadTopicIndex(TrajectaError):
    def __init__(self, index: int, count: int):
        super().__init__(f"topic index {index} out of range for {count} topics")


class KTooLarge(TrajectaError):
    def __init__(self, k: int, n: int):
        super().__init__(f"k={k} exceeds number of points {n}")


# --- workspace / CLI -----------------------------------------------------

class MissingArtifact(TrajectaError):
    def __init__(self, what: str, path: str, hint: str):
        self.what = what
        self.path = path
        self.hint = hint
        super().__init__(f"{what} missing at {path} (run `trajecta {hint}` first)")
