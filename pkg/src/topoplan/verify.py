"""Compare every query of a :class:`TopoIndex` with the brute-force oracle.

Index ids are translated to input ids through the sidecar: nodes directly,
edges through the dart visited at a position, faces through a dart known
to lie on them. Argument domains small enough (at most ``budget`` tuples)
are checked exhaustively; larger ones are sampled with a seeded RNG.
"""

import itertools
import random
from dataclasses import dataclass, field

from .oracle import NaiveTopology

FAMILIES = (
    "id-maps",
    "edges-share-node",
    "edges-share-face",
    "neighbor",
    "faces-adjacent",
    "nodes-share-face",
    "faces-share-node",
    "nodes-share-neighbor",
    "faces-share-adjacent-face",
    "edge-incident-node",
    "edge-borders-face",
    "node-on-face",
    "edge-endpoints",
    "edge-faces",
    "list-node-edges",
    "list-node-faces",
    "list-face-faces",
    "list-face-nodes",
    "list-face-edges",
    "count-node",
    "count-face",
)


@dataclass
class FamilyResult:
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


@dataclass
class BatteryReport:
    results: dict

    @property
    def ok(self):
        return all(r.ok for r in self.results.values())

    @property
    def total_checked(self):
        return sum(r.checked for r in self.results.values())

    def lines(self, details: int = 3):
        out = []
        for name, r in self.results.items():
            out.append(f"{name:28s} {'PASS' if r.ok else 'FAIL'}  checked={r.checked} mismatches={len(r.mismatches)}")
            for mm in r.mismatches[:details]:
                out.append(f"    {mm}")
        return out


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(all(a[(s + t) % n] == b[t] for t in range(n)) for s in range(n) if a[s] == b[0])


class _Checker:
    def __init__(self, index, rs, oracle, budget, rng):
        self.ix = index
        self.rs = rs
        self.o = oracle
        self.budget = budget
        self.rng = rng
        sc = index.sidecar
        self.node_map = [int(v) for v in sc.node_to_input]
        self.face_map = [None] + [oracle.face_of.get(tuple(int(t) for t in sc.face_rep[x])) for x in range(1, index.nfaces + 1)]
        L = index.core.length
        self.pos_dart = [tuple(int(t) for t in sc.pos_dart[i]) for i in range(L + 1)]
        self.edge_positions = list(index.topo.edges())
        self.broken = []
        if index.n != oracle.n or index.m != oracle.m:
            self.broken.append(f"index has n={index.n} m={index.m}, input has n={oracle.n} m={oracle.m}")
        elif None in self.face_map[1:] or any(self.pos_dart[i] not in oracle.edge_of for i in range(3, L - 1)):
            self.broken.append("sidecar darts do not exist in the input embedding")

    def edge_of(self, pos):
        return self.o.edge_of[self.pos_dart[pos]]

    def tuples(self, *domains):
        total = 1
        for d in domains:
            total *= len(d)
        if total <= self.budget:
            return itertools.product(*domains)
        return (tuple(self.rng.choice(d) for d in domains) for _ in range(self.budget))


def run_battery(index, rs, budget: int = 100_000, seed: int = 0, families=None, oracle=None) -> BatteryReport:
    """Check ``index`` (built from ``rs``) against the oracle.

    Args:
        budget: largest argument domain checked exhaustively; larger
            domains get this many random tuples.
        families: subset of :data:`FAMILIES` to run (default all).
    """
    o = oracle or NaiveTopology(rs)
    ck = _Checker(index, rs, o, budget, random.Random(seed))
    results = {}
    if ck.broken:
        # ids cannot be translated, so no other family is meaningful
        res = FamilyResult(checked=1)
        for msg in ck.broken:
            _fail(res, msg)
        return BatteryReport({"id-maps": res})
    for fam in families or FAMILIES:
        res = FamilyResult()
        _RUNNERS[fam](ck, res)
        results[fam] = res
    return BatteryReport(results)


def _fail(res, desc):
    if len(res.mismatches) < 1000:
        res.mismatches.append(desc)


# -- families --------------------------------------------------------------------
def _id_maps(ck, res):
    ix, o = ck.ix, ck.o
    res.checked += 3
    if sorted(ck.node_map[1:]) != list(range(1, o.n + 1)):
        _fail(res, "node ids are not a bijection onto input nodes")
    if sorted(ck.face_map[1:]) != list(range(o.nfaces)):
        _fail(res, f"face ids are not a bijection onto {o.nfaces} oracle faces")
    if ix.nfaces != o.nfaces or ix.m != o.m:
        _fail(res, f"sizes differ: index m={ix.m} faces={ix.nfaces}, oracle m={o.m} faces={o.nfaces}")
    for e in range(1, o.m + 1):
        res.checked += 1
        p = int(ix.sidecar.edge_pos[e])
        if ck.edge_of(p) != e:
            _fail(res, f"input edge {e} maps to position {p} holding edge {ck.edge_of(p)}")


def _pairs_bool(ck, res, dom_a, dom_b, got, want, label):
    for a, b in ck.tuples(dom_a, dom_b):
        res.checked += 1
        g, w = bool(got(a, b)), bool(want(a, b))
        if g != w:
            _fail(res, f"{label}({a}, {b}): index {g}, oracle {w}")


def _edges_share_node(ck, res):
    E = ck.edge_positions
    o = ck.o
    _pairs_bool(ck, res, E, E, ck.ix.edges_share_node, lambda a, b: o.edges_share_node(ck.edge_of(a), ck.edge_of(b)), "edges-share-node")


def _edges_share_face(ck, res):
    E = ck.edge_positions
    o = ck.o
    _pairs_bool(ck, res, E, E, ck.ix.edges_share_face, lambda a, b: o.edges_share_face(ck.edge_of(a), ck.edge_of(b)), "edges-share-face")


def _adjacency(ck, res, dual):
    ix, o = ck.ix, ck.o
    N = ix.nfaces if dual else ix.n
    idmap = ck.face_map if dual else ck.node_map
    query = ix.separating_edge if dual else ix.connecting_edge
    truth = o.separating_edges if dual else o.connecting_edges
    name = "faces-adjacent" if dual else "neighbor"
    dom = range(1, N + 1)
    tuples = list(ck.tuples(dom, dom))
    # make sure true pairs are represented when sampling
    if N * N > ck.budget:
        for p in ck.rng.sample(ck.edge_positions, min(len(ck.edge_positions), ck.budget // 10)):
            tuples.append(tuple(ix.edge_faces(p) if dual else ix.edge_endpoints(p)))
    for a, b in tuples:
        res.checked += 1
        pos = query(a, b)
        want = truth(idmap[a], idmap[b])
        if pos is None:
            if want:
                _fail(res, f"{name}({a}, {b}): index false, oracle edges {sorted(want)}")
        elif ck.edge_of(pos) not in want:
            _fail(res, f"{name}({a}, {b}): index edge at position {pos} (input {ck.edge_of(pos)}), oracle {sorted(want)}")


def _witness_family(ck, res, kind):
    ix, o = ck.ix, ck.o
    if kind in ("nodes-share-face", "nodes-share-neighbor"):
        N, amap = ix.n, ck.node_map
    else:
        N, amap = ix.nfaces, ck.face_map
    wmap = ck.face_map if kind in ("nodes-share-face", "faces-share-adjacent-face") else ck.node_map
    truth = {
        "nodes-share-face": o.shared_faces,
        "faces-share-node": o.shared_nodes,
        "nodes-share-neighbor": o.common_neighbors,
        "faces-share-adjacent-face": o.common_adjacent_faces,
    }[kind]
    fn = getattr(ix, kind.replace("-", "_"))
    dom = range(1, N + 1)
    for a, b in ck.tuples(dom, dom):
        res.checked += 1
        ans, wit = fn(a, b)
        want = truth(amap[a], amap[b])
        if bool(ans) != bool(want):
            _fail(res, f"{kind}({a}, {b}): index {bool(ans)}, oracle {bool(want)}")
        elif ans and wit is not None and wmap[wit] not in want:
            _fail(res, f"{kind}({a}, {b}): witness {wit} invalid")


def _incidences(ck, res, kind):
    ix, o = ck.ix, ck.o
    E = ck.edge_positions
    nodes = range(1, ix.n + 1)
    faces = range(1, ix.nfaces + 1)
    if kind == "edge-incident-node":
        _pairs_bool(ck, res, E, nodes, ix.edge_incident_node, lambda e, u: o.edge_incident_node(ck.edge_of(e), ck.node_map[u]), kind)
    elif kind == "edge-borders-face":
        _pairs_bool(ck, res, E, faces, ix.edge_borders_face, lambda e, x: o.edge_borders_face(ck.edge_of(e), ck.face_map[x]), kind)
    else:
        _pairs_bool(ck, res, nodes, faces, ix.node_on_face, lambda u, x: o.node_on_face(ck.node_map[u], ck.face_map[x]), kind)


def _edge_decode(ck, res, faces):
    ix, o = ck.ix, ck.o
    for p in ck.edge_positions:
        for q in (p, ix.mate(p)):
            res.checked += 1
            e = ck.edge_of(q)
            if faces:
                got = sorted(ck.face_map[x] for x in ix.edge_faces(q))
                want = sorted(o.edge_faces(e))
            else:
                got = sorted(ck.node_map[u] for u in ix.edge_endpoints(q))
                want = sorted(o.edge_endpoints(e))
            if got != want:
                _fail(res, f"edge at {q}: index {got}, oracle {want}")


def _list_node_edges(ck, res):
    ix, o, rs = ck.ix, ck.o, ck.rs
    for u in range(1, ix.n + 1):
        res.checked += 1
        vin = ck.node_map[u]
        items = ix.list_node_edges(u)
        rot = list(ix.topo.primal.rotation(u))
        darts = [ck.pos_dart[i] for i in rot]
        deg = len(o.rot[vin])
        ok = len(items) == deg and all(d[0] == vin for d in darts)
        ok = ok and all(darts[t][1] == (darts[0][1] + t) % deg for t in range(deg))
        want = o.node_rotation(vin)
        if ok:
            s0 = darts[0][1]
            got = [(ck.edge_of(e), ck.node_map[w]) for e, w in items]
            ok = got == want[s0:] + want[:s0]
        if ok and vin == rs.root:
            ok = darts[0][1] == rs.root_start - 1
        elif ok:
            # the rotation of a non-root node ends with its parent edge
            parent_pos = ix.topo.primal.close_of(u)
            ok = rot[-1] == parent_pos
        if not ok:
            _fail(res, f"list-node-edges({u}) = {items} does not follow the input rotation {want}")


def _list_node_faces(ck, res):
    ix, o = ck.ix, ck.o
    for u in range(1, ix.n + 1):
        res.checked += 1
        vin = ck.node_map[u]
        rot = list(ix.topo.primal.rotation(u))
        got = [ck.face_map[x] for x in ix.list_node_faces(u)]
        want = [o.face_of[ck.pos_dart[i]] for i in rot]
        if got != want or sorted(got) != sorted(o.node_faces[vin]):
            _fail(res, f"list-node-faces({u}) = {got}, oracle corners {want}")


def _list_face(ck, res, what):
    ix, o = ck.ix, ck.o
    for x in range(1, ix.nfaces + 1):
        res.checked += 1
        fo = ck.face_map[x]
        cyc = o.faces[fo]
        if what == "nodes":
            got = [ck.node_map[v] for v in ix.list_face_nodes(x)]
            want = [v for v, _ in cyc]
        elif what == "edges":
            got = [ck.edge_of(e) for e in ix.list_face_edges(x)]
            want = [o.edge_of[d] for d in cyc]
        else:
            got = [ck.face_map[y] for y in ix.list_face_faces(x)]
            want = [o.face_of[o.twin[d]] for d in cyc]
        if not _cyclic_equal(got, want):
            _fail(res, f"list-face-{what}({x}) = {got}, oracle cycle {want}")


def _counts(ck, res, face):
    ix, o = ck.ix, ck.o
    N = ix.nfaces if face else ix.n
    for v in range(1, N + 1):
        for kind in ("edges", "nodes", "faces"):
            for distinct in (False, True):
                res.checked += 1
                if face:
                    got = ix.count_face(v, kind, distinct)
                    want = o.count_face(ck.face_map[v], kind, distinct)
                else:
                    got = ix.count_node(v, kind, distinct)
                    want = o.count_node(ck.node_map[v], kind, distinct)
                if got != want:
                    _fail(res, f"count-{'face' if face else 'node'}({v}, {kind}, distinct={distinct}): index {got}, oracle {want}")


_RUNNERS = {
    "id-maps": _id_maps,
    "edges-share-node": _edges_share_node,
    "edges-share-face": _edges_share_face,
    "neighbor": lambda ck, res: _adjacency(ck, res, False),
    "faces-adjacent": lambda ck, res: _adjacency(ck, res, True),
    "nodes-share-face": lambda ck, res: _witness_family(ck, res, "nodes-share-face"),
    "faces-share-node": lambda ck, res: _witness_family(ck, res, "faces-share-node"),
    "nodes-share-neighbor": lambda ck, res: _witness_family(ck, res, "nodes-share-neighbor"),
    "faces-share-adjacent-face": lambda ck, res: _witness_family(ck, res, "faces-share-adjacent-face"),
    "edge-incident-node": lambda ck, res: _incidences(ck, res, "edge-incident-node"),
    "edge-borders-face": lambda ck, res: _incidences(ck, res, "edge-borders-face"),
    "node-on-face": lambda ck, res: _incidences(ck, res, "node-on-face"),
    "edge-endpoints": lambda ck, res: _edge_decode(ck, res, False),
    "edge-faces": lambda ck, res: _edge_decode(ck, res, True),
    "list-node-edges": _list_node_edges,
    "list-node-faces": _list_node_faces,
    "list-face-faces": lambda ck, res: _list_face(ck, res, "faces"),
    "list-face-nodes": lambda ck, res: _list_face(ck, res, "nodes"),
    "list-face-edges": lambda ck, res: _list_face(ck, res, "edges"),
    "count-node": lambda ck, res: _counts(ck, res, False),
    "count-face": lambda ck, res: _counts(ck, res, True),
}
