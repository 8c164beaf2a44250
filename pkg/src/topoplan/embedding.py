"""Rotation systems, the PLANAREMB v1 text format and the Turán traversal.

A rotation system lists, for every node, its incident edge ends in
counter-clockwise order. Darts are edge ends, addressed as ``(node, slot)``
with a 0-based slot into the node's rotation. Faces are traced with
``next(d) = successor of twin(d) in the rotation of its node``, so the face
of a dart is the one lying in the corner just before it (clockwise side).
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .bits import BalancedSeq, BitSeq

# symbols of the traversal sequence
OPEN_PAREN, CLOSE_PAREN, OPEN_BRACKET, CLOSE_BRACKET = 0, 1, 2, 3
_SYMBOL_CHARS = "()[]"


class EmbeddingError(ValueError):
    """Base class for invalid PLANAREMB input."""


class ParseError(EmbeddingError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if line is not None else "input"
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}")


class MultiplicityError(EmbeddingError):
    pass


class DisconnectedError(EmbeddingError):
    pass


class NotPlanarError(EmbeddingError):
    pass


class RootError(EmbeddingError):
    pass


@dataclass
class RotationSystem:
    """A connected planar embedding given by counter-clockwise rotations.

    Node and edge ids are the 1-based ids of the text format.
    ``rotations[v - 1]`` is node ``v``'s cyclic list of edge ids, where a
    self-loop occurs twice. ``root_start`` is the 1-based slot of the root's
    rotation where the traversal begins; the corner just before that slot
    is the outer face.
    """

    n: int
    m: int
    rotations: list
    endpoints: list
    root: int = 1
    root_start: int = 1
    _twin: list = field(default=None, repr=False, compare=False)
    _offset: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.rotations = [list(r) for r in self.rotations]
        self.endpoints = [tuple(p) for p in self.endpoints]
        self.validate()

    # -- darts ------------------------------------------------------------
    def degree(self, v: int) -> int:
        return len(self.rotations[v - 1])

    def dart(self, v: int, slot: int) -> int:
        return self._offset[v - 1] + slot

    def dart_node_slot(self, d: int):
        v = int(np.searchsorted(self._offset, d, side="right"))
        return v, d - self._offset[v - 1]

    def twin(self, v: int, slot: int):
        """The opposite end of the edge at ``(v, slot)``."""
        return self._twin[self._offset[v - 1] + slot]

    def succ(self, v: int, slot: int):
        return v, (slot + 1) % len(self.rotations[v - 1])

    def face_next(self, v: int, slot: int):
        w, t = self.twin(v, slot)
        return self.succ(w, t)

    # -- validation -------------------------------------------------------
    def validate(self):
        n, m = self.n, self.m
        if n < 1 or m < 1:
            raise EmbeddingError("need at least one node and one edge")
        if len(self.rotations) != n or len(self.endpoints) != m:
            raise EmbeddingError("rotation/endpoint table sizes do not match n, m")
        seen = [[] for _ in range(m + 1)]
        for v, rot in enumerate(self.rotations, 1):
            for s, e in enumerate(rot):
                if not 1 <= e <= m:
                    raise MultiplicityError(f"node {v} lists unknown edge {e}")
                seen[e].append((v, s))
        twin = [None] * (2 * m)
        offset = [0] * n
        acc = 0
        for v in range(n):
            offset[v] = acc
            acc += len(self.rotations[v])
        for e in range(1, m + 1):
            u, v = self.endpoints[e - 1]
            if not (1 <= u <= n and 1 <= v <= n):
                raise EmbeddingError(f"edge {e} has an endpoint outside 1..{n}")
            ends = seen[e]
            if len(ends) != 2:
                raise MultiplicityError(f"edge {e} appears {len(ends)} times, expected 2")
            if sorted(x for x, _ in ends) != sorted((u, v)):
                raise MultiplicityError(f"edge {e} is listed at nodes other than its endpoints {u}, {v}")
            (a, sa), (b, sb) = ends
            twin[offset[a - 1] + sa] = (b, sb)
            twin[offset[b - 1] + sb] = (a, sa)
        self._twin = twin
        self._offset = offset

        # connectivity
        adj = [set() for _ in range(n + 1)]
        for u, v in self.endpoints:
            adj[u].add(v)
            adj[v].add(u)
        seen_nodes = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen_nodes:
                    seen_nodes.add(w)
                    queue.append(w)
        if len(seen_nodes) != n:
            raise DisconnectedError(f"graph is disconnected ({len(seen_nodes)} of {n} nodes reachable from 1)")

        faces = face_trace(self)
        if len(faces) != m - n + 2:
            raise NotPlanarError(f"face tracing gives {len(faces)} faces, a planar embedding has {m - n + 2}")

        if not 1 <= self.root <= n:
            raise RootError(f"root {self.root} outside 1..{n}")
        if not 1 <= self.root_start <= len(self.rotations[self.root - 1]):
            raise RootError(f"root start {self.root_start} outside node {self.root}'s rotation")

    # -- text format ------------------------------------------------------
    def to_text(self) -> str:
        lines = ["PLANAREMB 1", f"{self.n} {self.m}"]
        for rot in self.rotations:
            lines.append(" ".join(map(str, [len(rot), *rot])))
        for u, v in self.endpoints:
            lines.append(f"{u} {v}")
        lines.append(f"root {self.root} {self.root_start}")
        return "\n".join(lines) + "\n"


def face_trace(rs: RotationSystem) -> list:
    """Partition the ``2m`` darts into face cycles.

    Returns a list of faces, each a list of ``(node, slot)`` darts in
    traversal order. The face containing the root start dart comes first.
    """
    done = set()
    faces = []
    starts = [(rs.root, rs.root_start - 1)] if 1 <= rs.root <= rs.n else []
    starts += [(v, s) for v in range(1, rs.n + 1) for s in range(len(rs.rotations[v - 1]))]
    for d0 in starts:
        if d0 in done or d0[1] >= len(rs.rotations[d0[0] - 1]):
            continue
        cycle = []
        d = d0
        while d not in done:
            done.add(d)
            cycle.append(d)
            d = rs.face_next(*d)
        faces.append(cycle)
    return faces


def parse_rotation_system(text) -> RotationSystem:
    """Parse PLANAREMB v1 text (str or bytes) into a validated RotationSystem."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, raw))
    it = iter(rows)

    def next_row(what):
        try:
            return next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input, expected {what}") from None

    def ints(lineno, raw, tokens):
        out = []
        col = 0
        for tok in tokens:
            col = raw.index(tok, col) + 1
            try:
                out.append(int(tok))
            except ValueError:
                raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None
            col += len(tok) - 1
        return out

    lineno, raw = next_row("header")
    if raw.split() != ["PLANAREMB", "1"]:
        raise ParseError("header must be 'PLANAREMB 1'", lineno, 1)
    lineno, raw = next_row("'<n> <m>'")
    toks = raw.split()
    if len(toks) != 2:
        raise ParseError("expected '<n> <m>'", lineno, 1)
    n, m = ints(lineno, raw, toks)
    if n < 1 or m < 1:
        raise ParseError("n and m must be positive", lineno, 1)

    rotations = []
    for v in range(1, n + 1):
        lineno, raw = next_row(f"rotation of node {v}")
        vals = ints(lineno, raw, raw.split())
        if not vals or vals[0] != len(vals) - 1:
            raise ParseError(f"node {v}: degree does not match the number of listed edges", lineno, 1)
        rotations.append(vals[1:])
    endpoints = []
    for e in range(1, m + 1):
        lineno, raw = next_row(f"endpoints of edge {e}")
        vals = ints(lineno, raw, raw.split())
        if len(vals) != 2:
            raise ParseError(f"edge {e}: expected '<u> <v>'", lineno, 1)
        endpoints.append(tuple(vals))
    lineno, raw = next_row("'root <r> <k>'")
    toks = raw.split()
    if len(toks) != 3 or toks[0] != "root":
        raise ParseError("expected 'root <r> <k>'", lineno, 1)
    r, k = ints(lineno, raw, toks[1:])
    extra = next(it, None)
    if extra is not None:
        raise ParseError("trailing content after root line", extra[0], 1)
    return RotationSystem(n, m, rotations, endpoints, r, k)


@dataclass
class TuranIndex:
    """The traversal sequence split into the three core bitvectors.

    ``A[i] = 1`` for parentheses (tree edges) and ``0`` for brackets;
    ``B`` and ``Bstar`` hold the parenthesis and bracket subsequences with
    ``0`` = open.
    """

    A: BitSeq
    B: BalancedSeq
    Bstar: BalancedSeq
    n: int
    m: int

    @property
    def length(self) -> int:
        return len(self.A)

    @property
    def faces(self) -> int:
        return self.m - self.n + 2

    def payload_bits(self) -> int:
        return len(self.A) + len(self.B) + len(self.Bstar)

    def directory_bits(self) -> int:
        return self.A.directory_bits() + self.B.directory_bits() + self.Bstar.directory_bits()

    def symbols(self) -> str:
        """The sequence as a string over ``()[]``."""
        a = self.A.to_array()
        b = self.B.to_array()
        bs = self.Bstar.to_array()
        out = []
        pi = bi = 0
        for bit in a:
            if bit:
                out.append(")" if b[pi] else "(")
                pi += 1
            else:
                out.append("]" if bs[bi] else "[")
                bi += 1
        return "".join(out)

    @classmethod
    def from_symbols(cls, seq: str, block_size: int = 512) -> "TuranIndex":
        a = np.array([c in "()" for c in seq], dtype=np.uint8)
        b = np.array([c == ")" for c in seq if c in "()"], dtype=np.uint8)
        bs = np.array([c == "]" for c in seq if c in "[]"], dtype=np.uint8)
        n = len(b) // 2
        m = len(seq) // 2 - 2
        return cls(BitSeq(a), BalancedSeq(b, block_size), BalancedSeq(bs, block_size), n, m)


@dataclass
class Sidecar:
    """Translation tables between input ids and index ids.

    Kept next to the index, never consulted by the succinct queries.
    ``pos_dart[i]`` is the input dart ``(node, slot)`` visited at position
    ``i`` of the sequence (``(-1, -1)`` for the four enclosing symbols);
    ``face_rep[x]`` is a dart lying on face ``x``.
    """

    node_to_input: np.ndarray  # index id -> input id, entry 0 unused
    node_from_input: np.ndarray  # input id -> index id
    pos_dart: np.ndarray  # (L + 1, 2)
    face_rep: np.ndarray  # (F + 1, 2)
    edge_pos: np.ndarray  # input edge id -> smaller position

    def to_arrays(self) -> dict:
        return {k: np.ascontiguousarray(getattr(self, k), dtype="<i8") for k in self.__dataclass_fields__}

    @classmethod
    def from_arrays(cls, arrays: dict) -> "Sidecar":
        return cls(**{k: arrays[k] for k in cls.__dataclass_fields__})


@dataclass
class BuildTrace:
    """Per-position facts recorded during the traversal, used only while
    building auxiliary structures and discarded afterwards."""

    symbols: np.ndarray  # OPEN_PAREN etc., index 0 unused
    pos_node: np.ndarray  # node at which position i is visited
    pos_face: np.ndarray  # face lying just before position i
    mate: np.ndarray


def traverse(rs: RotationSystem):
    """Run the depth-first traversal and return ``(symbols, sidecar, trace)``."""
    n, m = rs.n, rs.m
    L = 2 * (m + 2)
    rot = rs.rotations
    deg = [len(r) for r in rot]
    sym = [0] * (L + 1)
    pos_node = [0] * (L + 1)
    pos_face = [0] * (L + 1)
    pos_dart = [(-1, -1)] * (L + 1)
    mate = [0] * (L + 1)
    dfs_id = [0] * (n + 1)
    edge_first = [0] * (m + 1)
    is_tree = [False] * (m + 1)
    face_rep = [(-1, -1), (rs.root, rs.root_start - 1)]

    pos = 0

    def emit(s, v, face, dart):
        nonlocal pos
        pos += 1
        sym[pos] = s
        pos_node[pos] = v
        pos_face[pos] = face
        pos_dart[pos] = dart

    root = rs.root
    dfs_id[root] = 1
    next_node = 2
    emit(OPEN_PAREN, 1, 0, (-1, -1))
    emit(OPEN_BRACKET, 1, 0, (-1, -1))
    faces = [1]
    next_face = 2
    # frame: [input node, first slot, steps taken, steps total]
    stack = [[root, rs.root_start - 1, 0, deg[root - 1]]]
    while stack:
        frame = stack[-1]
        v, start, t, total = frame
        if t == total:
            stack.pop()
            continue
        frame[2] = t + 1
        d = deg[v - 1]
        s = (start + t) % d
        e = rot[v - 1][s]
        vid = dfs_id[v]
        if edge_first[e] == 0:
            w, ts = rs.twin(v, s)
            if w == v or dfs_id[w]:
                emit(OPEN_BRACKET, vid, faces[-1], (v, s))
                edge_first[e] = pos
                faces.append(next_face)
                face_rep.append((v, (s + 1) % d))
                next_face += 1
            else:
                emit(OPEN_PAREN, vid, faces[-1], (v, s))
                edge_first[e] = pos
                is_tree[e] = True
                dfs_id[w] = next_node
                next_node += 1
                stack.append([w, ts + 1, 0, deg[w - 1]])
        else:
            p = edge_first[e]
            if is_tree[e]:
                emit(CLOSE_PAREN, vid, faces[-1], (v, s))
            else:
                emit(CLOSE_BRACKET, vid, faces[-1], (v, s))
                faces.pop()
            mate[p] = pos
            mate[pos] = p
    emit(CLOSE_BRACKET, 1, 0, (-1, -1))
    emit(CLOSE_PAREN, 1, 0, (-1, -1))
    mate[1], mate[L] = L, 1
    mate[2], mate[L - 1] = L - 1, 2
    if pos != L or faces != [1] or next_node != n + 1 or next_face != m - n + 3:
        raise NotPlanarError("traversal did not produce interdigitating trees")

    node_to_input = np.zeros(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        node_to_input[dfs_id[v]] = v
    edge_pos = np.zeros(m + 1, dtype=np.int64)
    for e in range(1, m + 1):
        edge_pos[e] = edge_first[e]
    sidecar = Sidecar(
        node_to_input=node_to_input,
        node_from_input=np.asarray(dfs_id, dtype=np.int64),
        pos_dart=np.asarray(pos_dart, dtype=np.int64),
        face_rep=np.asarray(face_rep, dtype=np.int64),
        edge_pos=edge_pos,
    )
    trace = BuildTrace(
        symbols=np.asarray(sym, dtype=np.int8),
        pos_node=np.asarray(pos_node, dtype=np.int64),
        pos_face=np.asarray(pos_face, dtype=np.int64),
        mate=np.asarray(mate, dtype=np.int64),
    )
    return sym, sidecar, trace


def build_turan(rs: RotationSystem, block_size: int = 512):
    """Build the core index of ``rs``; returns ``(TuranIndex, Sidecar)``."""
    index, sidecar, _ = build_turan_traced(rs, block_size)
    return index, sidecar


def build_turan_traced(rs: RotationSystem, block_size: int = 512):
    sym, sidecar, trace = traverse(rs)
    s = np.asarray(sym[1:], dtype=np.int8)
    is_paren = (s == OPEN_PAREN) | (s == CLOSE_PAREN)
    A = BitSeq(is_paren.astype(np.uint8))
    B = BalancedSeq((s[is_paren] == CLOSE_PAREN).astype(np.uint8), block_size)
    Bstar = BalancedSeq((s[~is_paren] == CLOSE_BRACKET).astype(np.uint8), block_size)
    return TuranIndex(A, B, Bstar, rs.n, rs.m), sidecar, trace


def symbols_to_str(sym) -> str:
    return "".join(_SYMBOL_CHARS[x] for x in sym)
