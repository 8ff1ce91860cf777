"""Semantic search over spatially uncertain, station-referenced trajectories.

Pipeline: ingest CSVs -> Voronoi region assignment -> trajectory/region/POI
documents -> LDA regional topics + word vectors -> time-partitioned
inverted index -> natural-language querying, ranking and trajectory
operations. Shipped as a library, CLI (`trajecta`) and HTTP service.
"""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    Poi,
    Record,
    Station,
    TimeWindow,
    Trajectory,
    TrajectoryPoint,
    assemble_trajectories,
    load_dataset,
)
from .errors import TrajectaError  # noqa: F401
