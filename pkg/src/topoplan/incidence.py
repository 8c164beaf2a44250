"""Node-on-face incidence and degree-style counting.

Both structures follow the same pattern: entities below a degree threshold
are answered by listing their O(threshold) incident items on the fly, and
only the few heavy entities get explicit storage.
"""

import math

import numpy as np

from .core import Topology
from .phash import StaticDict, pair_key

KINDS = ("edges", "nodes", "faces")


def default_f_inc(m: int) -> int:
    """``ceil(log2(m) ** 2)``, at least 2."""
    return max(2, math.ceil(math.log2(max(m, 2)) ** 2))


def _bounded(it, limit):
    """First ``limit`` items of ``it``, or None when there are more."""
    out = []
    for x in it:
        if len(out) == limit:
            return None
        out.append(x)
    return out


class IncidenceIndex:
    """Answers "is node ``u`` on the boundary of face ``x``".

    A node with fewer than ``f_inc`` edge ends has fewer than ``f_inc``
    corners, so its faces are listed directly; likewise for a face with a
    short boundary. Pairs where both sides are heavy live in a static
    dictionary. In a planar graph there are few of those: at most
    ``16 m / f_inc``.
    """

    def __init__(self, topo: Topology, f_inc: int, heavy_pairs: StaticDict):
        self.topo = topo
        self.f_inc = f_inc
        self.heavy_pairs = heavy_pairs

    @classmethod
    def build(cls, topo: Topology, f_inc: int = None):
        f_inc = f_inc or default_f_inc(topo.m)
        if f_inc < 1:
            raise ValueError("f_inc must be positive")
        heavy_faces = {x for x in range(1, topo.nfaces + 1) if topo.dual.degree_at_least(x, f_inc)}
        keys = {}
        for u in range(1, topo.n + 1):
            if not topo.primal.degree_at_least(u, f_inc):
                continue
            for x in topo.list_node_faces(u):
                if x in heavy_faces:
                    keys[pair_key(u, x)] = 1
        return cls(topo, f_inc, StaticDict(keys))

    def __len__(self):
        return len(self.heavy_pairs)

    def node_on_face(self, u: int, x: int) -> bool:
        topo = self.topo
        if not 1 <= u <= topo.n or not 1 <= x <= topo.nfaces:
            raise IndexError("node or face id out of range")
        faces = _bounded(topo.list_node_faces(u), self.f_inc - 1)
        if faces is not None:
            return x in faces
        nodes = _bounded(topo.list_face_nodes(x), self.f_inc - 1)
        if nodes is not None:
            return u in nodes
        return pair_key(u, x) in self.heavy_pairs

    def size_bits(self) -> int:
        return self.heavy_pairs.size_bits()


class CountIndex:
    """Counts of edges, nodes and faces around a node or a face.

    With ``distinct=False`` every corner contributes one item, so all three
    counts equal the rotation (or boundary) length. With ``distinct=True``
    repeated nodes or faces are counted once. Entities with at least
    ``f_cnt`` edge ends keep their three distinct counts explicitly; the
    rest list and deduplicate at query time.
    """

    def __init__(self, topo: Topology, f_cnt: int, node_ids, node_counts, face_ids, face_counts):
        self.topo = topo
        self.f_cnt = f_cnt
        self.node_ids = np.asarray(node_ids, dtype=np.int64)
        self.node_counts = np.asarray(node_counts, dtype=np.int64).reshape(-1, 3)
        self.face_ids = np.asarray(face_ids, dtype=np.int64)
        self.face_counts = np.asarray(face_counts, dtype=np.int64).reshape(-1, 3)

    @classmethod
    def build(cls, topo: Topology, f_cnt: int = 16):
        if f_cnt < 1:
            raise ValueError("f_cnt must be positive")
        node_ids, node_counts, face_ids, face_counts = [], [], [], []
        for u in range(1, topo.n + 1):
            if topo.primal.degree_at_least(u, f_cnt):
                node_ids.append(u)
                node_counts.append(cls._direct(topo, u, False))
        for x in range(1, topo.nfaces + 1):
            if topo.dual.degree_at_least(x, f_cnt):
                face_ids.append(x)
                face_counts.append(cls._direct(topo, x, True))
        return cls(topo, f_cnt, node_ids, node_counts, face_ids, face_counts)

    @staticmethod
    def _direct(topo, v, face):
        if face:
            edges = list(topo.list_face_edges(v))
            nodes = set(topo.list_face_nodes(v))
            faces = set(topo.list_face_faces(v))
        else:
            edges = list(topo.list_node_edges(v))
            nodes = {w for _, w in edges}
            faces = set(topo.list_node_faces(v))
        return len(edges), len(nodes), len(faces)

    def _lookup(self, ids, counts, v):
        j = np.searchsorted(ids, v)
        if j < len(ids) and ids[j] == v:
            return counts[j]
        return None

    def _count(self, v, kind, distinct, face):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {', '.join(KINDS)}")
        topo = self.topo
        limit = topo.nfaces if face else topo.n
        if not 1 <= v <= limit:
            raise IndexError(f"id {v} outside 1..{limit}")
        ids, counts = (self.face_ids, self.face_counts) if face else (self.node_ids, self.node_counts)
        stored = self._lookup(ids, counts, v)
        col = KINDS.index(kind)
        if stored is not None:
            return int(stored[col] if distinct else stored[0])
        if not distinct or kind == "edges":
            nav = topo.dual if face else topo.primal
            return sum(1 for _ in nav.rotation(v))
        if face:
            items = topo.list_face_nodes(v) if kind == "nodes" else topo.list_face_faces(v)
        else:
            items = (w for _, w in topo.list_node_edges(v)) if kind == "nodes" else topo.list_node_faces(v)
        return len(np.unique(np.fromiter(items, dtype=np.int64)))

    def count_node(self, u: int, kind: str, distinct: bool = False) -> int:
        return self._count(u, kind, distinct, False)

    def count_face(self, x: int, kind: str, distinct: bool = False) -> int:
        return self._count(x, kind, distinct, True)

    def size_bits(self) -> int:
        return 64 * (self.node_ids.size + self.node_counts.size + self.face_ids.size + self.face_counts.size)
