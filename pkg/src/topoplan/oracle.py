"""Brute-force ground truth for every query, built with plain Python containers.

Only the raw tables of a parsed :class:`RotationSystem` are read (rotations,
endpoints, root); darts and faces are re-derived here so that no logic is
shared with the succinct path. Ids are input ids; faces are numbered by
order of discovery starting from the root start dart (face 0 is outer).
"""

from collections import Counter


class NaiveTopology:
    def __init__(self, rs):
        self.n = rs.n
        self.m = rs.m
        rot = {v: list(rs.rotations[v - 1]) for v in range(1, rs.n + 1)}
        self.rot = rot
        self.endpoints = {e: tuple(rs.endpoints[e - 1]) for e in range(1, rs.m + 1)}
        ends = {}
        for v, r in rot.items():
            for s, e in enumerate(r):
                ends.setdefault(e, []).append((v, s))
        self.twin = {}
        for e, (a, b) in ends.items():
            self.twin[a] = b
            self.twin[b] = a
        self.edge_of = {(v, s): e for v, r in rot.items() for s, e in enumerate(r)}

        # faces: walk twin then step counter-clockwise at the far node
        self.face_of = {}
        self.faces = []
        order = [(rs.root, rs.root_start - 1)] + sorted(self.edge_of)
        for d0 in order:
            if d0 in self.face_of:
                continue
            fid = len(self.faces)
            cyc = []
            d = d0
            while d not in self.face_of:
                self.face_of[d] = fid
                cyc.append(d)
                w, t = self.twin[d]
                d = (w, (t + 1) % len(rot[w]))
            self.faces.append(cyc)

        self.adj = {v: Counter() for v in rot}
        for e, (u, v) in self.endpoints.items():
            self.adj[u][v] += 1
            if u != v:
                self.adj[v][u] += 1
            else:
                self.adj[u][u] += 1
        self.edge_faces_map = {}
        for e in self.endpoints:
            a, b = ends[e]
            self.edge_faces_map[e] = (self.face_of[a], self.face_of[b])
        self.face_nodes = [[v for v, _ in cyc] for cyc in self.faces]
        self.face_edges = [[self.edge_of[d] for d in cyc] for cyc in self.faces]
        self.node_faces = {v: [self.face_of[(v, s)] for s in range(len(r))] for v, r in rot.items()}
        self.pair_edges = {}
        for e, (a, b) in self.endpoints.items():
            self.pair_edges.setdefault(frozenset((a, b)), set()).add(e)
        self.face_pair_edges = {}
        for e, (a, b) in self.edge_faces_map.items():
            self.face_pair_edges.setdefault(frozenset((a, b)), set()).add(e)
        self.face_adj = [Counter() for _ in self.faces]
        for e, (x, y) in self.edge_faces_map.items():
            self.face_adj[x][y] += 1
            self.face_adj[y][x] += 1

    @property
    def nfaces(self):
        return len(self.faces)

    # 1.a–1.f
    def edges_share_node(self, e, f):
        return bool(set(self.endpoints[e]) & set(self.endpoints[f]))

    def edges_share_face(self, e, f):
        return bool(set(self.edge_faces_map[e]) & set(self.edge_faces_map[f]))

    def neighbor(self, u, v):
        return self.adj[u][v] > 0

    def connecting_edges(self, u, v):
        return self.pair_edges.get(frozenset((u, v)), set())

    def faces_adjacent(self, x, y):
        return self.face_adj[x][y] > 0

    def separating_edges(self, x, y):
        return self.face_pair_edges.get(frozenset((x, y)), set())

    def nodes_share_face(self, u, v):
        return bool(set(self.node_faces[u]) & set(self.node_faces[v]))

    def shared_faces(self, u, v):
        return set(self.node_faces[u]) & set(self.node_faces[v])

    def faces_share_node(self, x, y):
        return bool(set(self.face_nodes[x]) & set(self.face_nodes[y]))

    def shared_nodes(self, x, y):
        return set(self.face_nodes[x]) & set(self.face_nodes[y])

    def common_neighbors(self, u, v):
        return {w for w in self.adj[u] if self.adj[u][w] and self.adj[w][v]}

    def common_adjacent_faces(self, x, y):
        return {z for z in self.face_adj[x] if self.face_adj[x][z] and self.face_adj[z][y]}

    # 2.a–2.c
    def edge_incident_node(self, e, u):
        return u in self.endpoints[e]

    def edge_borders_face(self, e, x):
        return x in self.edge_faces_map[e]

    def node_on_face(self, u, x):
        return u in self.face_nodes[x]

    # 3.a–3.f
    def edge_endpoints(self, e):
        return self.endpoints[e]

    def edge_faces(self, e):
        return self.edge_faces_map[e]

    def node_rotation(self, v):
        return [(self.edge_of[(v, s)], self.twin[(v, s)][0]) for s in range(len(self.rot[v]))]

    # 4.a / 4.b
    def count_node(self, u, kind, distinct=False):
        if kind == "edges":
            return len(self.rot[u])
        items = [self.twin[(u, s)][0] for s in range(len(self.rot[u]))] if kind == "nodes" else self.node_faces[u]
        return len(set(items)) if distinct else len(items)

    def count_face(self, x, kind, distinct=False):
        if kind == "edges":
            return len(self.faces[x])
        if kind == "nodes":
            items = self.face_nodes[x]
        else:
            items = [y for e in self.face_edges[x] for y in _other(self.edge_faces_map[e], x)]
        return len(set(items)) if distinct else len(items)


def _other(pair, x):
    a, b = pair
    return [b] if a == x else [a]


def oracle_query(topo: NaiveTopology, name: str, *args):
    """Answer a query by name, e.g. ``oracle_query(t, "neighbor", 1, 2)``."""
    return getattr(topo, name.replace("-", "_"))(*args)
