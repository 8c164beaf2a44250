"""Compact index over a connected planar embedding with topological queries.

Typical use::

    from topoplan import parse_rotation_system, TopoIndex

    rs = parse_rotation_system(open("graph.txt").read())
    ix = TopoIndex.build(rs)
    ix.neighbor(1, 3), ix.list_face_nodes(2), ix.count_node(1, "faces", distinct=True)
"""

from .core import Navigator, Topology
from .embedding import (
    DisconnectedError,
    EmbeddingError,
    MultiplicityError,
    NotPlanarError,
    ParseError,
    RootError,
    RotationSystem,
    TuranIndex,
    build_turan,
    face_trace,
    parse_rotation_system,
)
from .index import BuildOptions, IndexFormatError, TopoIndex
from .levels import MultiLevel, NeighborParams, ParameterError
from .oracle import NaiveTopology, oracle_query
from .verify import run_battery

__all__ = [
    "BuildOptions",
    "DisconnectedError",
    "EmbeddingError",
    "IndexFormatError",
    "MultiLevel",
    "MultiplicityError",
    "NaiveTopology",
    "Navigator",
    "NeighborParams",
    "NotPlanarError",
    "ParameterError",
    "ParseError",
    "RootError",
    "RotationSystem",
    "TopoIndex",
    "Topology",
    "TuranIndex",
    "build_turan",
    "face_trace",
    "oracle_query",
    "parse_rotation_system",
    "run_battery",
]
