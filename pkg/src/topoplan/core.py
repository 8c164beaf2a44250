"""Constant-time navigation over the core index and the O(1)-per-item queries.

:class:`Navigator` implements first/last/mate/next/prev/node_of on the
sequence for one reading of it. The primal reading takes parentheses as
the tree T (node ids are ranks of opening parentheses); the dual reading
swaps the roles of parentheses and brackets, so the same code walks faces
(face ids are ranks of opening brackets). :class:`Topology` combines both.
"""

from .embedding import TuranIndex


class Navigator:
    """Navigation on the sequence where ``A[i] == tree_bit`` marks tree edges.

    ``tree`` is the balanced sequence of tree symbols, ``other`` that of
    the crossing (non-tree) symbols. The four enclosing symbols are not
    edges: the root's rotation spans positions ``3 .. L - 2``.
    """

    def __init__(self, A, tree, other, tree_bit: int):
        self.A = A
        self.tree = tree
        self.other = other
        self.tree_bit = tree_bit
        self.L = len(A)
        self.count = len(tree) // 2  # nodes of this reading

    # -- positions ----------------------------------------------------------
    def is_edge(self, i: int) -> bool:
        return 3 <= i <= self.L - 2

    def _check(self, i: int):
        if not 3 <= i <= self.L - 2:
            raise IndexError(f"edge position {i} outside 3..{self.L - 2}")

    def _check_node(self, v: int):
        if not 1 <= v <= self.count:
            raise IndexError(f"id {v} outside 1..{self.count}")

    def is_tree(self, i: int) -> bool:
        return self.A[i] == self.tree_bit

    def is_open(self, i: int) -> bool:
        """Whether position ``i`` is the first visit of its edge."""
        if self.A[i] == self.tree_bit:
            return self.tree[self.A.rank(self.tree_bit, i)] == 0
        return self.other[self.A.rank(1 - self.tree_bit, i)] == 0

    def open_of(self, v: int) -> int:
        """Position of the opening tree symbol of node ``v``."""
        return self.A.select(self.tree_bit, self.tree.select0(v))

    def close_of(self, v: int) -> int:
        return self.A.select(self.tree_bit, self.tree.close(self.tree.select0(v)))

    def first(self, v: int) -> int:
        self._check_node(v)
        if v == 1:
            return 3
        return self.A.select(self.tree_bit, self.tree.select0(v)) + 1

    def last(self, v: int) -> int:
        self._check_node(v)
        if v == 1:
            # the root owns L - 2 unless a child's subtree closes there
            j = self.L - 2
            if self.A[j] == self.tree_bit:
                r = self.A.rank(self.tree_bit, j)
                if self.tree[r] == 1:
                    return self.A.select(self.tree_bit, self.tree.open(r))
            return j
        return self.close_of(v)

    def mate(self, i: int) -> int:
        self._check(i)
        a = self.A[i]
        bp = self.tree if a == self.tree_bit else self.other
        r = self.A.rank(a, i)
        j = bp.open(r) if bp[r] else bp.close(r)
        return self.A.select(a, j)

    def next(self, i: int):
        """Next edge counter-clockwise around ``node_of(i)``; None past ``last``."""
        v = self.node_of(i)
        if i == self.last(v):
            return None
        if self.A[i] == self.tree_bit and self.tree[self.A.rank(self.tree_bit, i)] == 0:
            return self.mate(i) + 1
        return i + 1

    def prev(self, i: int):
        v = self.node_of(i)
        if i == self.first(v):
            return None
        j = i - 1
        if self.A[j] == self.tree_bit:
            r = self.A.rank(self.tree_bit, j)
            if self.tree[r] == 1:
                return self.A.select(self.tree_bit, self.tree.open(r))
        return j

    def node_of(self, i: int) -> int:
        """Node whose rotation contains position ``i``."""
        self._check(i)
        tb = self.tree_bit
        tree = self.tree
        p = self.A.rank(tb, i)
        if self.A[i] == tb:
            if tree[p] == 0:
                return tree.rank0(tree.enclose(p))
            return tree.rank0(tree.open(p))
        if tree[p] == 0:
            return tree.rank0(p)
        return tree.rank0(tree.enclose(tree.open(p)))

    def endpoints(self, i: int):
        """The two nodes joined by the edge at position ``i``."""
        self._check(i)
        tb = self.tree_bit
        tree = self.tree
        if self.A[i] == tb:
            p = self.A.rank(tb, i)
            if tree[p] == 1:
                p = tree.open(p)
            return tree.rank0(p), tree.rank0(tree.enclose(p))
        out = []
        for q in (i, self.mate(i)):
            p = self.A.rank(tb, q)
            if tree[p] == 1:
                p = tree.enclose(tree.open(p))
            out.append(tree.rank0(p))
        return out[0], out[1]

    def rotation(self, v: int):
        """Positions of ``v``'s incident edges, counter-clockwise."""
        i = self.first(v)
        last = self.last(v)
        tb = self.tree_bit
        while True:
            yield i
            if i == last:
                return
            if self.A[i] == tb and self.tree[self.A.rank(tb, i)] == 0:
                i = self.mate(i) + 1
            else:
                i += 1

    def degree_at_least(self, v: int, k: int) -> bool:
        """Whether ``v`` has ``k`` or more incident edge ends; O(k) steps."""
        c = 0
        for _ in self.rotation(v):
            c += 1
            if c >= k:
                return True
        return False


def canonical(nav: Navigator, i: int) -> int:
    return min(i, nav.mate(i))


class Topology:
    """Queries answered directly from the core index (rows 1.a/b, 2.a/b, 3.a–3.f).

    Edges are identified by either of their two positions; results report
    the smaller one.
    """

    def __init__(self, core: TuranIndex):
        self.core = core
        self.primal = Navigator(core.A, core.B, core.Bstar, 1)
        self.dual = Navigator(core.A, core.Bstar, core.B, 0)
        self.n = core.n
        self.m = core.m
        self.nfaces = core.faces

    # -- single positions ---------------------------------------------------
    def first(self, v):
        return self.primal.first(v)

    def last(self, v):
        return self.primal.last(v)

    def mate(self, i):
        return self.primal.mate(i)

    def next(self, i):
        return self.primal.next(i)

    def prev(self, i):
        return self.primal.prev(i)

    def node_of(self, i):
        return self.primal.node_of(i)

    def face_of(self, i):
        """Face in the corner just before position ``i`` at ``node_of(i)``."""
        return self.dual.node_of(i)

    def edge_id(self, i):
        return canonical(self.primal, i)

    def edges(self):
        """Canonical positions of all ``m`` edges."""
        for i in range(3, self.primal.L - 1):
            if self.primal.is_open(i):
                yield i

    # -- edge decoding --------------------------------------------------------
    def edge_endpoints(self, i):
        return self.primal.endpoints(i)

    def edge_faces(self, i):
        return self.dual.endpoints(i)

    def edges_share_node(self, e, f) -> bool:
        return bool(set(self.edge_endpoints(e)) & set(self.edge_endpoints(f)))

    def edges_share_face(self, e, f) -> bool:
        return bool(set(self.edge_faces(e)) & set(self.edge_faces(f)))

    def edge_incident_node(self, e, u) -> bool:
        return u in self.edge_endpoints(e)

    def edge_borders_face(self, e, x) -> bool:
        return x in self.edge_faces(e)

    # -- listings -------------------------------------------------------------
    def list_node_edges(self, u):
        """``(edge, neighbor)`` for each incident edge end, counter-clockwise."""
        nav = self.primal
        for i in nav.rotation(u):
            j = nav.mate(i)
            yield min(i, j), nav.node_of(j)

    def list_node_faces(self, u, dedup: bool = True):
        """Faces around ``u`` counter-clockwise.

        With ``dedup`` each corner contributes its face once. Without it,
        every incident edge contributes the faces on both its sides, so
        each face comes out twice in a row.
        """
        nav = self.primal
        if dedup:
            for i in nav.rotation(u):
                yield self.dual.node_of(i)
            return
        first = prev = None
        for i in nav.rotation(u):
            x = self.dual.node_of(i)
            if prev is None:
                first = x
            else:
                yield prev
                yield x
            prev = x
        if prev is not None:
            yield prev
            yield first

    def list_face_edges(self, x):
        """Edges on the boundary of face ``x``, in boundary order (clockwise)."""
        nav = self.dual
        for i in nav.rotation(x):
            yield canonical(nav, i)

    def list_face_nodes(self, x):
        """Nodes on the boundary of face ``x``, one per corner, clockwise."""
        for i in self.dual.rotation(x):
            yield self.primal.node_of(i)

    def list_face_faces(self, x):
        """Face across each boundary edge of ``x``, in boundary order."""
        nav = self.dual
        for i in nav.rotation(x):
            yield nav.node_of(nav.mate(i))
