"""The complete query index and its on-disk format.

:class:`TopoIndex` bundles the core sequence, the primal and dual level
structures, incidence and counting tables, the optional heavy-pair
matrices and the id sidecar, and exposes every query under one name.

File layout (all integers little-endian)::

    b"TOPOPLAN"  uint32 version  uint32 header_len  uint32 header_crc
    header JSON (utf-8)
    section bytes, concatenated in header order

The header lists each section's name, dtype, shape, byte offset, length
and CRC32. Only payloads are stored; rank/select directories are rebuilt
on load.
"""

import json
import struct
import zlib
from dataclasses import asdict, dataclass

import numpy as np

from .bits import BalancedSeq, BitSeq
from .core import Topology, canonical
from .embedding import RotationSystem, Sidecar, TuranIndex, build_turan
from .heavy import HeavyPairIndex, PairMatrix, default_f_hp
from .incidence import KINDS, CountIndex, IncidenceIndex, default_f_inc
from .levels import LevelStructure, MultiLevel, NeighborParams, base_codes, default_params
from .phash import StaticDict

MAGIC = b"TOPOPLAN"
VERSION = 1


class IndexFormatError(ValueError):
    pass


@dataclass
class BuildOptions:
    """Thresholds; ``None`` picks the size-dependent default."""

    f: int = None
    k: int = None
    f_inc: int = None
    f_cnt: int = 16
    f_hp: int = None
    heavy_pairs: bool = False
    with_witness: bool = False
    strict: bool = True
    block_size: int = 512

    def resolve(self, m: int) -> "BuildOptions":
        d = default_params(m)
        heavy_f = self.f_hp or default_f_hp(m)
        return BuildOptions(
            f=self.f or d.f,
            k=self.k or d.k,
            f_inc=self.f_inc or default_f_inc(m),
            f_cnt=self.f_cnt or 16,
            f_hp=heavy_f,
            heavy_pairs=self.heavy_pairs or self.with_witness,
            with_witness=self.with_witness,
            strict=self.strict,
            block_size=self.block_size,
        )


# query name -> (argument kinds, result shape); kinds: n node, x face, e edge, k count kind
QUERIES = {
    "edges-share-node": ("ee", "bool"),
    "edges-share-face": ("ee", "bool"),
    "neighbor": ("nn", "bool"),
    "connecting-edge": ("nn", "edge"),
    "faces-adjacent": ("xx", "bool"),
    "separating-edge": ("xx", "edge"),
    "nodes-share-face": ("nn", "witness"),
    "faces-share-node": ("xx", "witness"),
    "nodes-share-neighbor": ("nn", "witness"),
    "faces-share-adjacent-face": ("xx", "witness"),
    "edge-incident-node": ("en", "bool"),
    "edge-borders-face": ("ex", "bool"),
    "node-on-face": ("nx", "bool"),
    "edge-endpoints": ("e", "tuple"),
    "edge-faces": ("e", "tuple"),
    "list-node-edges": ("n", "pairs"),
    "list-node-faces": ("n", "list"),
    "list-face-faces": ("x", "list"),
    "list-face-nodes": ("x", "list"),
    "list-face-edges": ("x", "list"),
    "count-node": ("nk", "int"),
    "count-face": ("xk", "int"),
    "mate": ("e", "int"),
    "node-of": ("e", "int"),
    "face-of": ("e", "int"),
}


class TopoIndex:
    def __init__(self, core: TuranIndex, sidecar: Sidecar, options: BuildOptions, primal_levels, dual_levels, incidence_pairs, counts, heavy_matrices):
        self.core = core
        self.sidecar = sidecar
        self.options = options
        self.topo = Topology(core)
        self.primal = primal_levels
        self.dual = dual_levels
        self.incidence = IncidenceIndex(self.topo, options.f_inc, incidence_pairs)
        self.counts = counts
        self.counts.topo = self.topo
        self.heavy = self._heavy_from(heavy_matrices)

    def _heavy_from(self, matrices):
        o = self.options
        if matrices is None:
            # no matrices: a threshold above every degree makes all arguments light
            f = 2 * self.core.m + 2
            empty = PairMatrix.from_dense([], np.zeros((0, 0), dtype=bool))
            matrices = {k: empty for k in ("share_face", "share_node", "node_neighbor", "face_neighbor")}
            return HeavyPairIndex(self.topo, self.incidence, self.primal, self.dual, f, matrices)
        return HeavyPairIndex(self.topo, self.incidence, self.primal, self.dual, o.f_hp, matrices, o.with_witness)

    # -- construction -----------------------------------------------------------
    @classmethod
    def build(cls, rs: RotationSystem, options: BuildOptions = None) -> "TopoIndex":
        """Build every structure for a validated rotation system."""
        o = (options or BuildOptions()).resolve(rs.m)
        core, sidecar = build_turan(rs, o.block_size)
        topo = Topology(core)
        sym = core.symbols()
        params = NeighborParams(o.f, o.k)
        primal = MultiLevel.build(topo.primal, base_codes(sym, False), params, o.strict, o.block_size)
        dual = MultiLevel.build(topo.dual, base_codes(sym, True), params, o.strict, o.block_size)
        incidence = IncidenceIndex.build(topo, o.f_inc)
        counts = CountIndex.build(topo, o.f_cnt)
        heavy = None
        if o.heavy_pairs:
            heavy = HeavyPairIndex.build(topo, incidence, primal, dual, o.f_hp, o.with_witness).matrices
        return cls(core, sidecar, o, primal, dual, incidence.heavy_pairs, counts, heavy)

    # -- sizes -----------------------------------------------------------------
    @property
    def n(self):
        return self.core.n

    @property
    def m(self):
        return self.core.m

    @property
    def nfaces(self):
        return self.core.faces

    def space_report(self) -> dict:
        """Bits per structure; ``core_payload`` is exactly ``4m + 8``."""
        rep = {
            "core_payload": self.core.payload_bits(),
            "core_directories": self.core.directory_bits(),
        }
        for name, ml in (("primal", self.primal), ("dual", self.dual)):
            for k, v in ml.space_bits().items():
                rep[f"{name}_{k}"] = v
        rep["incidence_pairs"] = self.incidence.size_bits()
        rep["explicit_counts"] = self.counts.size_bits()
        if self.options.heavy_pairs:
            rep["heavy_pair_matrices"] = self.heavy.size_bits()
        return rep

    # -- argument checks ---------------------------------------------------------
    def _edge(self, e):
        e = int(e)
        if not 3 <= e <= self.core.length - 2:
            raise IndexError(f"edge position {e} outside 3..{self.core.length - 2}")
        return e

    def _node(self, u):
        u = int(u)
        if not 1 <= u <= self.n:
            raise IndexError(f"node {u} outside 1..{self.n}")
        return u

    def _face(self, x):
        x = int(x)
        if not 1 <= x <= self.nfaces:
            raise IndexError(f"face {x} outside 1..{self.nfaces}")
        return x

    # -- queries -------------------------------------------------------------------
    def edges_share_node(self, e, f):
        return self.topo.edges_share_node(self._edge(e), self._edge(f))

    def edges_share_face(self, e, f):
        return self.topo.edges_share_face(self._edge(e), self._edge(f))

    def neighbor(self, u, v):
        return self.primal.neighbor(self._node(u), self._node(v))

    def connecting_edge(self, u, v):
        return self.primal.connecting_edge(self._node(u), self._node(v))

    def faces_adjacent(self, x, y):
        return self.dual.neighbor(self._face(x), self._face(y))

    def separating_edge(self, x, y):
        return self.dual.connecting_edge(self._face(x), self._face(y))

    def nodes_share_face(self, u, v):
        return self.heavy.nodes_share_face(self._node(u), self._node(v))

    def faces_share_node(self, x, y):
        return self.heavy.faces_share_node(self._face(x), self._face(y))

    def nodes_share_neighbor(self, u, v):
        return self.heavy.nodes_share_neighbor(self._node(u), self._node(v))

    def faces_share_adjacent_face(self, x, y):
        return self.heavy.faces_share_adjacent_face(self._face(x), self._face(y))

    def edge_incident_node(self, e, u):
        return self.topo.edge_incident_node(self._edge(e), self._node(u))

    def edge_borders_face(self, e, x):
        return self.topo.edge_borders_face(self._edge(e), self._face(x))

    def node_on_face(self, u, x):
        return self.incidence.node_on_face(self._node(u), self._face(x))

    def edge_endpoints(self, e):
        return self.topo.edge_endpoints(self._edge(e))

    def edge_faces(self, e):
        return self.topo.edge_faces(self._edge(e))

    def list_node_edges(self, u):
        return list(self.topo.list_node_edges(self._node(u)))

    def list_node_faces(self, u):
        return list(self.topo.list_node_faces(self._node(u)))

    def list_face_faces(self, x):
        return list(self.topo.list_face_faces(self._face(x)))

    def list_face_nodes(self, x):
        return list(self.topo.list_face_nodes(self._face(x)))

    def list_face_edges(self, x):
        return list(self.topo.list_face_edges(self._face(x)))

    def count_node(self, u, kind, distinct=False):
        return self.counts.count_node(self._node(u), kind, distinct)

    def count_face(self, x, kind, distinct=False):
        return self.counts.count_face(self._face(x), kind, distinct)

    def mate(self, e):
        return self.topo.mate(self._edge(e))

    def node_of(self, e):
        return self.topo.node_of(self._edge(e))

    def face_of(self, e):
        return self.topo.face_of(self._edge(e))

    def query(self, name: str, *args, distinct: bool = False):
        """Run query ``name`` (dashed form, see :data:`QUERIES`) on string or int args."""
        if name not in QUERIES:
            raise KeyError(f"unknown query {name!r}")
        kinds, _ = QUERIES[name]
        if len(args) != len(kinds):
            raise TypeError(f"{name} takes {len(kinds)} argument(s), got {len(args)}")
        conv = []
        for k, a in zip(kinds, args):
            if k == "k":
                if a not in KINDS:
                    raise ValueError(f"count kind must be one of {', '.join(KINDS)}")
                conv.append(a)
            else:
                conv.append(int(a))
        fn = getattr(self, name.replace("-", "_"))
        if name in ("count-node", "count-face"):
            return fn(*conv, distinct=distinct)
        return fn(*conv)

    # -- input-id translation -----------------------------------------------------
    def node_id(self, input_node: int) -> int:
        return int(self.sidecar.node_from_input[input_node])

    def input_node(self, node: int) -> int:
        return int(self.sidecar.node_to_input[node])

    def edge_position(self, input_edge: int) -> int:
        return int(self.sidecar.edge_pos[input_edge])

    # -- serialization --------------------------------------------------------------
    def _sections(self) -> dict:
        s = {}
        for name in ("A", "B", "Bstar"):
            s[f"core.{name}"] = getattr(self.core, name).to_array()
        for prefix, ml in (("primal", self.primal), ("dual", self.dual)):
            for i, S in enumerate(ml.levels[1:], start=1):
                s[f"{prefix}.level{i}"] = S.codes
            for i, d in enumerate(ml.D):
                s[f"{prefix}.D{i}"] = d.to_array()
            for i, c in enumerate(ml.C):
                s[f"{prefix}.C{i}"] = c.to_array()
            for k, v in ml.top.to_arrays().items():
                s[f"{prefix}.top.{k}"] = v
            s[f"{prefix}.sizes"] = np.asarray(ml.stats["sizes"], dtype=np.int64).reshape(-1, 4)
        for k, v in self.incidence.heavy_pairs.to_arrays().items():
            s[f"incidence.{k}"] = v
        c = self.counts
        s["counts.node_ids"], s["counts.node_counts"] = c.node_ids, c.node_counts
        s["counts.face_ids"], s["counts.face_counts"] = c.face_ids, c.face_counts
        if self.options.heavy_pairs:
            for name, mx in self.heavy.matrices.items():
                s[f"heavy.{name}.ids"] = mx.ids
                s[f"heavy.{name}.bits"] = mx.bits
                if mx.witness is not None:
                    s[f"heavy.{name}.witness"] = mx.witness
        for k, v in self.sidecar.to_arrays().items():
            s[f"sidecar.{k}"] = v
        return s

    def save(self, path) -> None:
        sections = self._sections()
        table = []
        blobs = []
        offset = 0
        for name, arr in sections.items():
            arr = np.asarray(arr)
            dt = arr.dtype.newbyteorder("<") if arr.dtype.itemsize > 1 else arr.dtype
            raw = np.ascontiguousarray(arr, dtype=dt).tobytes()
            table.append({"name": name, "dtype": dt.str, "shape": list(arr.shape), "offset": offset, "length": len(raw), "crc32": zlib.crc32(raw)})
            blobs.append(raw)
            offset += len(raw)
        header = {
            "n": self.n,
            "m": self.m,
            "options": asdict(self.options),
            "features": {"heavy_pairs": self.options.heavy_pairs, "witness": self.options.with_witness},
            "primal": {"levels": len(self.primal.levels) - 1, "D": len(self.primal.D), "truncated": self.primal.stats["truncated"], "top_edges": self.primal.stats["top_edges"]},
            "dual": {"levels": len(self.dual.levels) - 1, "D": len(self.dual.D), "truncated": self.dual.stats["truncated"], "top_edges": self.dual.stats["top_edges"]},
            "sections": table,
        }
        hb = json.dumps(header, sort_keys=True).encode()
        with open(path, "wb") as fh:
            fh.write(MAGIC + struct.pack("<III", VERSION, len(hb), zlib.crc32(hb)))
            fh.write(hb)
            for raw in blobs:
                fh.write(raw)

    @classmethod
    def load(cls, path) -> "TopoIndex":
        with open(path, "rb") as fh:
            data = fh.read()
        if data[:8] != MAGIC:
            raise IndexFormatError("not an index file (bad magic)")
        version, hlen, hcrc = struct.unpack_from("<III", data, 8)
        if version != VERSION:
            raise IndexFormatError(f"unsupported format version {version}")
        start = 20
        hb = data[start : start + hlen]
        if zlib.crc32(hb) != hcrc:
            raise IndexFormatError("header checksum mismatch")
        header = json.loads(hb)
        base = start + hlen
        s = {}
        for ent in header["sections"]:
            raw = data[base + ent["offset"] : base + ent["offset"] + ent["length"]]
            if len(raw) != ent["length"] or zlib.crc32(raw) != ent["crc32"]:
                raise IndexFormatError(f"checksum mismatch in section {ent['name']}")
            s[ent["name"]] = np.frombuffer(raw, dtype=np.dtype(ent["dtype"])).reshape(ent["shape"])
        o = BuildOptions(**header["options"])
        bs = o.block_size
        core = TuranIndex(BitSeq(s["core.A"]), BalancedSeq(s["core.B"], bs), BalancedSeq(s["core.Bstar"], bs), header["n"], header["m"])
        topo = Topology(core)
        mls = []
        for prefix, nav in (("primal", topo.primal), ("dual", topo.dual)):
            meta = header[prefix]
            levels = [None] + [LevelStructure(s[f"{prefix}.level{i}"], bs) for i in range(1, meta["levels"] + 1)]
            D = [BitSeq(s[f"{prefix}.D{i}"]) for i in range(meta["D"])]
            C = [BitSeq(s[f"{prefix}.C{i}"]) for i in range(meta["D"])]
            top = StaticDict.from_arrays({k: s[f"{prefix}.top.{k}"] for k in ("disp", "keys", "vals")})
            stats = {"sizes": [tuple(int(v) for v in r) for r in s[f"{prefix}.sizes"]], "top_edges": meta["top_edges"], "truncated": meta["truncated"]}
            mls.append(MultiLevel(nav, NeighborParams(o.f, o.k), levels, D, C, top, stats))
        pairs = StaticDict.from_arrays({k: s[f"incidence.{k}"] for k in ("disp", "keys", "vals")})
        counts = CountIndex(topo, o.f_cnt, s["counts.node_ids"], s["counts.node_counts"], s["counts.face_ids"], s["counts.face_counts"])
        heavy = None
        if header["features"]["heavy_pairs"]:
            heavy = {}
            for name in ("share_face", "share_node", "node_neighbor", "face_neighbor"):
                heavy[name] = PairMatrix(s[f"heavy.{name}.ids"], s[f"heavy.{name}.bits"], s.get(f"heavy.{name}.witness"))
        sidecar = Sidecar.from_arrays({k: s[f"sidecar.{k}"] for k in Sidecar.__dataclass_fields__})
        return cls(core, sidecar, o, mls[0], mls[1], pairs, counts, heavy)


def edge_key(index: TopoIndex, e: int) -> int:
    """Canonical position of the edge at position ``e``."""
    return canonical(index.topo.primal, e)
