"""Synthetic connected planar embeddings for tests, demos and benchmarks."""

import math
import random

from .embedding import RotationSystem, face_trace


def _from_neighbor_rotations(rot, root, root_first):
    """Rotation system from ccw neighbor lists of a simple graph (0-based nodes).

    ``root_first`` is the neighbor of ``root`` whose edge starts the traversal.
    """
    eid = {}
    endpoints = []
    rotations = []
    for u, nbrs in enumerate(rot):
        row = []
        for v in nbrs:
            key = (min(u, v), max(u, v))
            if key not in eid:
                endpoints.append((key[0] + 1, key[1] + 1))
                eid[key] = len(endpoints)
            row.append(eid[key])
        rotations.append(row)
    start = rot[root].index(root_first) + 1
    return RotationSystem(len(rot), len(endpoints), rotations, endpoints, root + 1, start)


def _ccw(points, u, nbrs):
    x0, y0 = points[u]
    return sorted(nbrs, key=lambda v: math.atan2(points[v][1] - y0, points[v][0] - x0) % (2 * math.pi))


def grid(rows: int, cols: int) -> RotationSystem:
    """``rows x cols`` grid graph; ``n = rows*cols``, ``m = rows(cols-1) + cols(rows-1)``."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two nodes")
    return _grid_from_edges(rows, cols, None)


def _grid_edges(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return edges


def _grid_from_edges(rows, cols, edges):
    if edges is None:
        edges = _grid_edges(rows, cols)
    n = rows * cols
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    points = [(u % cols, u // cols) for u in range(n)]
    rot = [_ccw(points, u, adj[u]) for u in range(n)]
    # node 0 sits at the lower-left corner; its first edge by angle follows the outer corner
    return _from_neighbor_rotations(rot, 0, rot[0][0])


def random_deletion(rows: int, cols: int, fraction: float = 0.3, seed: int = 0) -> RotationSystem:
    """Grid with a random share of its non-bridge edges removed, kept connected.

    A random spanning tree is protected; ``fraction`` of the remaining edges
    is deleted.
    """
    if rows * cols < 2:
        raise ValueError("grid needs at least two nodes")
    rng = random.Random(seed)
    edges = _grid_edges(rows, cols)
    order = edges[:]
    rng.shuffle(order)
    parent = list(range(rows * cols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, rest = [], []
    for u, v in order:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            tree.append((u, v))
        else:
            rest.append((u, v))
    kept = [e for e in rest if rng.random() >= fraction]
    keep = set(tree) | set(kept)
    return _grid_from_edges(rows, cols, [e for e in edges if e in keep])


def triangulation(n: int, seed: int = 0) -> RotationSystem:
    """Maximal planar graph on ``n >= 3`` nodes (``m = 3n - 6``).

    Built by repeatedly placing a new node inside a uniformly chosen inner
    triangle, which produces a wide spread of degrees.
    """
    if n < 3:
        raise ValueError("a triangulation needs at least 3 nodes")
    rng = random.Random(seed)
    rot = [[1, 2], [2, 0], [0, 1]]
    inner = [(0, 1, 2)]
    for d in range(3, n):
        t = rng.randrange(len(inner))
        u, v, w = inner[t]
        rot[v].insert(rot[v].index(u) + 1, d)
        rot[w].insert(rot[w].index(v) + 1, d)
        rot[u].insert(rot[u].index(w) + 1, d)
        rot.append([w, v, u])
        inner[t] = (u, v, d)
        inner.append((v, w, d))
        inner.append((w, u, d))
    # dart 0 -> 2 lies on the outer triangle (1, 0, 2)
    return _from_neighbor_rotations(rot, 0, 2)


def with_extras(rs: RotationSystem, loops: int = 0, parallels: int = 0, seed: int = 0) -> RotationSystem:
    """Add self-loops and parallel edges at random corners of ``rs``."""
    rng = random.Random(seed)
    rotations = [list(r) for r in rs.rotations]
    endpoints = list(rs.endpoints)
    root, start = rs.root, rs.root_start
    root_edge = rotations[root - 1][start - 1]
    # which occurrence of root_edge (two for a loop) starts the traversal
    nth = rotations[root - 1][: start - 1].count(root_edge)
    for _ in range(loops):
        v = rng.randrange(1, rs.n + 1)
        e = len(endpoints) + 1
        endpoints.append((v, v))
        pos = rng.randrange(len(rotations[v - 1]) + 1)
        rotations[v - 1][pos:pos] = [e, e]
    plain = [e for e, (u, v) in enumerate(endpoints, 1) if u != v]
    for _ in range(parallels if plain else 0):
        base = rng.choice(plain)
        u, v = endpoints[base - 1]
        e = len(endpoints) + 1
        endpoints.append((u, v))
        # new copy sits just before the original at u and just after it at v
        ru, rv = rotations[u - 1], rotations[v - 1]
        ru.insert(ru.index(base), e)
        rv.insert(rv.index(base) + 1, e)
    # keep the traversal starting at the same edge end of the root
    r = rotations[root - 1]
    start = [i for i, e in enumerate(r) if e == root_edge][nth] + 1
    return RotationSystem(rs.n, len(endpoints), rotations, endpoints, root, start)


def outer_face_size(rs: RotationSystem) -> int:
    return len(face_trace(rs)[0])


def dual_rotation_system(rs: RotationSystem):
    """The dual embedding: one node per face, one edge per edge of ``rs``.

    Dual node ``i + 1`` is face ``face_trace(rs)[i]`` (so node 1 is the face
    of the root start dart). Its rotation lists the crossing edges in
    boundary-walk order, which gives every dual node the same orientation.
    Returns ``(dual, faces)``.
    """
    faces = face_trace(rs)
    face_of = {}
    for i, cyc in enumerate(faces):
        for d in cyc:
            face_of[d] = i + 1
    rotations = []
    for cyc in faces:
        rotations.append([rs.rotations[v - 1][s] for v, s in cyc])
    endpoints = [None] * rs.m
    for v, rot in enumerate(rs.rotations, 1):
        for s, e in enumerate(rot):
            x = face_of[(v, s)]
            if endpoints[e - 1] is None:
                endpoints[e - 1] = (x,)
            else:
                endpoints[e - 1] = (endpoints[e - 1][0], x)
    endpoints = [tuple(sorted(p)) for p in endpoints]
    dual = RotationSystem(len(faces), rs.m, rotations, endpoints, 1, 1)
    return dual, faces
