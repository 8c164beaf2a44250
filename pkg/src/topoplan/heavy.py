"""Pair queries that need more than one incidence test.

Do two nodes lie on a common face, do two faces share a node, do two nodes
have a common neighbor, do two faces touch a common face. A light argument
(fewer than ``f_hp`` edge ends) is answered by walking its O(f_hp) incident
items and testing each with the cheaper queries. Pairs of heavy arguments
are looked up in a bit matrix over the heavy ids, of which there are at
most ``2m / f_hp``.
"""

import math

import numpy as np

from .incidence import _bounded


def default_f_hp(m: int) -> int:
    """``ceil(sqrt(m) * log2(m))``, at least 2."""
    return max(2, math.ceil(math.sqrt(m) * math.log2(max(m, 2))))


class PairMatrix:
    """Symmetric boolean matrix over a sorted set of heavy ids.

    Bits are packed row-major, ``ceil(h*h/8)`` bytes. When ``witness`` is
    given it holds, per true cell, the id of a shared item (0 elsewhere).
    """

    def __init__(self, ids, bits, witness=None):
        self.ids = np.asarray(ids, dtype=np.int64)
        self.bits = np.asarray(bits, dtype=np.uint8)
        self.witness = None if witness is None else np.asarray(witness, dtype=np.int64)

    @classmethod
    def from_dense(cls, ids, dense, witness=None):
        return cls(ids, np.packbits(np.asarray(dense, dtype=bool).ravel()), witness)

    @property
    def h(self):
        return len(self.ids)

    def index(self, v):
        j = int(np.searchsorted(self.ids, v))
        if j < len(self.ids) and self.ids[j] == v:
            return j
        return None

    def lookup(self, a: int, b: int):
        """``(answer, witness)`` for two heavy ids; witness is None if not stored."""
        i, j = self.index(a), self.index(b)
        if i is None or j is None:
            raise KeyError(f"({a}, {b}) is not a heavy pair")
        cell = i * self.h + j
        bit = bool((self.bits[cell >> 3] >> (7 - (cell & 7))) & 1)
        w = None
        if bit and self.witness is not None:
            w = int(self.witness[i, j])
        return bit, w

    def size_bits(self) -> int:
        bits = 64 * self.ids.size + 8 * self.bits.size
        if self.witness is not None:
            bits += self.h * self.h * max(1, int(self.witness.max(initial=0)).bit_length())
        return bits


def _build_matrix(heavy, around, members, with_witness):
    """Matrix of "some item around ``a`` has ``b`` as a member".

    ``around(a)`` lists the items (faces or neighbors) of ``a`` in rotation
    order; ``members(t)`` lists the heavy ids related to item ``t``. The
    witness of a cell is the first item found around the smaller id.
    """
    h = len(heavy)
    pos = {v: i for i, v in enumerate(heavy)}
    dense = np.zeros((h, h), dtype=bool)
    wit = np.zeros((h, h), dtype=np.int64) if with_witness else None
    cache = {}
    for i, a in enumerate(heavy):
        for t in around(a):
            if t not in cache:
                cache[t] = [pos[b] for b in members(t)]
            for j in cache[t]:
                if not dense[i, j]:
                    dense[i, j] = dense[j, i] = True
                    if wit is not None:
                        wit[i, j] = wit[j, i] = t
    return PairMatrix.from_dense(heavy, dense, wit)


class HeavyPairIndex:
    """The four pair queries with optional witnesses.

    Args:
        topo: core :class:`~topoplan.core.Topology`.
        incidence: :class:`~topoplan.incidence.IncidenceIndex` for node-on-face tests.
        primal, dual: :class:`~topoplan.levels.MultiLevel` adjacency on nodes / faces.
        f_hp: heaviness threshold.
        matrices: dict with keys ``share_face``, ``share_node``,
            ``node_neighbor``, ``face_neighbor``.
    """

    def __init__(self, topo, incidence, primal, dual, f_hp, matrices, with_witness=False):
        self.topo = topo
        self.incidence = incidence
        self.primal = primal
        self.dual = dual
        self.f_hp = f_hp
        self.matrices = matrices
        self.with_witness = with_witness

    @classmethod
    def build(cls, topo, incidence, primal, dual, f_hp=None, with_witness=False):
        f_hp = f_hp or default_f_hp(topo.m)
        hn = [u for u in range(1, topo.n + 1) if topo.primal.degree_at_least(u, f_hp)]
        hf = [x for x in range(1, topo.nfaces + 1) if topo.dual.degree_at_least(x, f_hp)]
        assert len(hn) <= 2 * topo.m / f_hp and len(hf) <= 2 * topo.m / f_hp
        hn_set, hf_set = set(hn), set(hf)

        def node_nbrs(u):
            return [w for _, w in topo.list_node_edges(u)]

        heavy_nbrs = {}
        for u in hn:
            for w in dict.fromkeys(node_nbrs(u)):
                heavy_nbrs.setdefault(w, []).append(u)
        face_nbrs = {}
        for x in hf:
            for z in dict.fromkeys(topo.list_face_faces(x)):
                face_nbrs.setdefault(z, []).append(x)

        matrices = {
            "share_face": _build_matrix(
                hn, topo.list_node_faces, lambda x: [v for v in dict.fromkeys(topo.list_face_nodes(x)) if v in hn_set], with_witness
            ),
            "share_node": _build_matrix(
                hf, topo.list_face_nodes, lambda v: [x for x in dict.fromkeys(topo.list_node_faces(v)) if x in hf_set], with_witness
            ),
            "node_neighbor": _build_matrix(hn, node_nbrs, lambda w: heavy_nbrs.get(w, []), with_witness),
            "face_neighbor": _build_matrix(hf, topo.list_face_faces, lambda z: face_nbrs.get(z, []), with_witness),
        }
        return cls(topo, incidence, primal, dual, f_hp, matrices, with_witness)

    def _query(self, a, b, items, test, matrix, limit):
        if not (1 <= a <= limit and 1 <= b <= limit):
            raise IndexError(f"ids must lie in 1..{limit}")
        around_a = _bounded(items(a), self.f_hp - 1)
        around_b = _bounded(items(b), self.f_hp - 1)
        if around_a is not None and around_b is not None:
            # both light: intersect the two short lists, first hit around a
            other = set(around_b)
            for z in around_a:
                if z in other:
                    return True, z
            return False, None
        for t, around in ((b, around_a), (a, around_b)):
            if around is not None:
                for z in around:
                    if test(t, z):
                        return True, z
                return False, None
        return self.matrices[matrix].lookup(a, b)

    def nodes_share_face(self, u: int, v: int):
        """``(answer, face)``: a face with both ``u`` and ``v`` on its boundary."""
        return self._query(u, v, self.topo.list_node_faces, self.incidence.node_on_face, "share_face", self.topo.n)

    def faces_share_node(self, x: int, y: int):
        """``(answer, node)``: a node lying on both faces."""
        inc = self.incidence
        return self._query(x, y, self.topo.list_face_nodes, lambda f, w: inc.node_on_face(w, f), "share_node", self.topo.nfaces)

    def nodes_share_neighbor(self, u: int, v: int):
        """``(answer, node)``: a node adjacent to both ``u`` and ``v``."""
        nbrs = lambda s: (w for _, w in self.topo.list_node_edges(s))
        return self._query(u, v, nbrs, lambda t, w: self.primal.neighbor(w, t), "node_neighbor", self.topo.n)

    def faces_share_adjacent_face(self, x: int, y: int):
        """``(answer, face)``: a face adjacent to both ``x`` and ``y``."""
        return self._query(
            x, y, self.topo.list_face_faces, lambda t, z: self.dual.neighbor(z, t), "face_neighbor", self.topo.nfaces
        )

    def size_bits(self) -> int:
        return sum(mx.size_bits() for mx in self.matrices.values())
