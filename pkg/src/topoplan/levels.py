"""Multi-level contraction for adjacency tests between nodes (or faces).

Level 0 is the core sequence. Each further level keeps only the nodes
with at least ``f`` incident edges in the previous level: edges touching a
removed node are dropped (brackets) or, for tree edges, the removed node's
parentheses turn into angles so surviving descendants are not re-parented.
Angles are then normalized: adjacent sibling angles merge, an angle whose
only content is an angle collapses, empty angles vanish. Bitvectors ``D``
and ``C`` map node ids and bracket ranks between consecutive levels and
the last graph is kept in a static dictionary.

The same machinery serves faces by reading the core sequence with the
roles of parentheses and brackets exchanged.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bits import ANGLE, BRACKET, PAREN, BalancedSeq, BitSeq, TernarySeq
from .core import Navigator
from .phash import StaticDict, pair_key

# level symbol codes: role * 2 + is_close
EDGE_OPEN, EDGE_CLOSE, NODE_OPEN, NODE_CLOSE, ANGLE_OPEN, ANGLE_CLOSE = range(6)
_CODE_CHARS = "[]()<>"


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class NeighborParams:
    f: int = 9
    k: int = 9

    def check(self, strict: bool = True):
        if self.k < 1:
            raise ParameterError("k must be at least 1")
        if self.f < 1 or (strict and self.f < 9):
            raise ParameterError(f"f = {self.f}; the level bounds need f >= 9")


def default_params(m: int) -> NeighborParams:
    """``f = k = max(9, ceil(1.5 lglg m / lglglg m))``, 9 for m < 2**16."""
    if m < 1 << 16:
        return NeighborParams(9, 9)
    llm = math.log2(math.log2(m))
    v = max(9, math.ceil(1.5 * llm / math.log2(llm)))
    return NeighborParams(v, v)


def codes_to_str(codes) -> str:
    return "".join(_CODE_CHARS[c] for c in codes)


def base_codes(symbols: str, dual: bool) -> list:
    """Level-0 codes from the ``()[]`` string; ``dual`` swaps the roles."""
    table = {"(": NODE_OPEN, ")": NODE_CLOSE, "[": EDGE_OPEN, "]": EDGE_CLOSE}
    if dual:
        table = {"(": EDGE_OPEN, ")": EDGE_CLOSE, "[": NODE_OPEN, "]": NODE_CLOSE}
    return [table[c] for c in symbols]


def _is_frame(p0: int, length: int) -> bool:
    return p0 <= 1 or p0 >= length - 2


class _Analysis:
    """Owners, mates and degrees of one level's sequence (0-based positions)."""

    def __init__(self, codes):
        L = len(codes)
        self.length = L
        owner = [0] * L
        mate = [0] * L
        node_at = {}
        tree_pairs = []
        parent = [0]
        stack = []  # (code, node id or 0)
        edge_stack = []
        nid = 0
        for p, c in enumerate(codes):
            if c == EDGE_OPEN or c == EDGE_CLOSE:
                # tightest enclosing container; angles own nothing
                if stack and stack[-1][0] == NODE_OPEN:
                    owner[p] = stack[-1][1]
                if c == EDGE_OPEN:
                    edge_stack.append(p)
                else:
                    q = edge_stack.pop()
                    mate[p], mate[q] = q, p
            elif c == NODE_OPEN:
                nid += 1
                node_at[nid] = p
                par = stack[-1][1] if stack and stack[-1][0] == NODE_OPEN else 0
                parent.append(par)
                if par:
                    tree_pairs.append((par, nid))
                stack.append((c, nid))
            elif c == ANGLE_OPEN:
                stack.append((c, 0))
            else:
                stack.pop()
        self.n = nid
        self.owner = owner
        self.mate = mate
        self.parent = parent
        self.tree_pairs = tree_pairs
        deg = [0] * (nid + 1)
        for a, b in tree_pairs:
            deg[a] += 1
            deg[b] += 1
        self.edge_pairs = []  # (open position, owner at open, owner at close)
        for p, c in enumerate(codes):
            if c == EDGE_OPEN and not _is_frame(p, L):
                a, b = owner[p], owner[mate[p]]
                deg[a] += 1
                deg[b] += 1
                self.edge_pairs.append((p, a, b))
        self.deg = deg
        self.m = len(tree_pairs) + len(self.edge_pairs)


def _normalize(codes) -> list:
    """Apply the three angle rules to a fixed point and flatten."""
    root = [None, []]
    stack = [root]
    for c in codes:
        if c == EDGE_OPEN or c == EDGE_CLOSE:
            stack[-1][1].append(c)
        elif c == NODE_OPEN or c == ANGLE_OPEN:
            stack.append([c, []])
        else:
            box = stack.pop()
            items = stack[-1][1]
            if box[0] == ANGLE_OPEN:
                if not box[1]:
                    continue
                if len(box[1]) == 1 and isinstance(box[1][0], list) and box[1][0][0] == ANGLE_OPEN:
                    box = box[1][0]
                if items and isinstance(items[-1], list) and items[-1][0] == ANGLE_OPEN:
                    _merge(items[-1], box)
                    continue
            items.append(box)
    out = []
    work = [iter(root[1])]
    closers = [None]
    while work:
        nxt = next(work[-1], None)
        if nxt is None:
            work.pop()
            c = closers.pop()
            if c is not None:
                out.append(c)
            continue
        if isinstance(nxt, list):
            out.append(nxt[0])
            work.append(iter(nxt[1]))
            closers.append(nxt[0] + 1)
        else:
            out.append(nxt)
    return out


def _merge(a, b):
    """Append angle ``b``'s content to angle ``a``, merging at the seam."""
    while True:
        ai, bi = a[1], b[1]
        if not (
            ai and bi
            and isinstance(ai[-1], list) and ai[-1][0] == ANGLE_OPEN
            and isinstance(bi[0], list) and bi[0][0] == ANGLE_OPEN
        ):
            ai.extend(bi)
            return
        last = ai[-1]
        ai.extend(bi[1:])
        a, b = last, bi[0]


def _unwrap_root(codes) -> list:
    """Collapse ``< [ <X> ] >`` to ``< [ X ] >``: the frame brackets do not
    count as content when the removed root holds a single angle."""
    L = len(codes)
    if L < 6 or codes[0] != ANGLE_OPEN or codes[1] != EDGE_OPEN or codes[2] != ANGLE_OPEN:
        return codes
    depth = 0
    for p in range(2, L - 2):
        c = codes[p]
        if c in (NODE_OPEN, ANGLE_OPEN):
            depth += 1
        elif c in (NODE_CLOSE, ANGLE_CLOSE):
            depth -= 1
            if depth == 0:
                if p == L - 3:
                    return codes[:2] + codes[3 : L - 3] + codes[L - 2 :]
                return codes
    return codes


def _contract(codes, info: _Analysis, f: int):
    """Next level's codes plus survivor bitvectors, or None if nobody survives."""
    L = len(codes)
    surv = [False] + [info.deg[v] >= f for v in range(1, info.n + 1)]
    d_bits = np.array(surv[1:], dtype=np.uint8)
    if not d_bits.any():
        return None, d_bits, None
    tree_keys = {(a, b) if a < b else (b, a) for a, b in info.tree_pairs if surv[a] and surv[b]}
    keep = [False] * L
    seen = set()
    looped = set()
    for p, a, b in info.edge_pairs:
        if not (surv[a] and surv[b]):
            continue
        if a == b:
            if a in looped:
                continue
            looped.add(a)
        else:
            key = (a, b) if a < b else (b, a)
            if key in tree_keys or key in seen:
                continue
            seen.add(key)
        keep[p] = keep[info.mate[p]] = True
    new = []
    c_bits = []
    nid = 0
    for p, c in enumerate(codes):
        if c == EDGE_OPEN or c == EDGE_CLOSE:
            kept = keep[p] or _is_frame(p, L)
            if c == EDGE_OPEN:
                c_bits.append(1 if kept else 0)
            if kept:
                new.append(c)
        elif c == NODE_OPEN:
            nid += 1
            new.append(NODE_OPEN if surv[nid] else ANGLE_OPEN)
        elif c == NODE_CLOSE:
            # closes match opens in reverse; recover the id from the open
            new.append(None)
        else:
            new.append(c)
    # fill node closes from the matching opens
    stack = []
    for idx, c in enumerate(new):
        if c is None:
            new[idx] = stack.pop() + 1
        elif c in (NODE_OPEN, ANGLE_OPEN):
            stack.append(c)
        elif c in (NODE_CLOSE, ANGLE_CLOSE):
            stack.pop()
    return _unwrap_root(_normalize(new)), d_bits, np.array(c_bits, dtype=np.uint8)


class LevelStructure:
    """One stored contraction level: ternary sequence plus three projections."""

    def __init__(self, codes, block_size: int = 512):
        arr = np.asarray(codes, dtype=np.uint8)
        self.codes = arr
        roles = arr >> 1
        closes = arr & 1
        self.L = int(arr.size)
        self.A = TernarySeq(roles)
        self.B = BalancedSeq(closes[roles == PAREN], block_size)
        self.Bstar = BalancedSeq(closes[roles == BRACKET], block_size)
        self.Bangle = BalancedSeq(closes[roles == ANGLE], block_size)
        self.n = len(self.B) // 2

    def _bp(self, role):
        return (self.Bstar, self.B, self.Bangle)[role]

    def node_span(self, u: int):
        k = self.B.select0(u)
        return self.A.select(PAREN, k), self.A.select(PAREN, self.B.close(k))

    def mate(self, p: int) -> int:
        r = self.A[p]
        bp = self._bp(r)
        k = self.A.rank(r, p)
        return self.A.select(r, bp.mate(k))

    def node_of(self, p: int) -> int:
        """Owner of the bracket at ``p``: tightest enclosing parenthesis pair."""
        B = self.B
        k = self.A.rank(PAREN, p)
        if B[k] == 0:
            return B.rank0(k)
        return B.rank0(B.enclose(B.open(k)))

    def bracket_rank(self, p: int) -> int:
        return self.Bstar.rank0(self.A.rank(BRACKET, p))

    def payload_bits(self) -> int:
        return self.A.payload_bits() + len(self.B) + len(self.Bstar) + len(self.Bangle)

    def directory_bits(self) -> int:
        return self.A.directory_bits() + self.B.directory_bits() + self.Bstar.directory_bits() + self.Bangle.directory_bits()


class MultiLevel:
    """Adjacency tests on one reading (primal or dual) of the core index.

    Build with :meth:`build`; query with :meth:`neighbor`,
    :meth:`connecting_edge` or :meth:`trace` (which also reports the
    number of probes spent).
    """

    def __init__(self, base: Navigator, params: NeighborParams, levels, D, C, top, stats):
        self.base = base
        self.params = params
        self.levels = levels  # levels[i] for i = 1 .. len(D) - 1; levels[0] is None
        self.D = D
        self.C = C
        self.top = top
        self.stats = stats

    @classmethod
    def build(cls, base: Navigator, codes, params: NeighborParams = None, strict: bool = True, block_size: int = 512):
        params = params or default_params(base.L // 2 - 2)
        params.check(strict)
        levels = [None]
        D, C = [], []
        sizes = []  # (n_i, m_i, |S_i|, angle pairs)
        cur = list(codes)
        info = _Analysis(cur)
        sizes.append((info.n, info.m, len(cur), 0))
        top_codes = None
        for i in range(params.k):
            nxt, d_bits, c_bits = _contract(cur, info, params.f)
            D.append(BitSeq(d_bits))
            if nxt is None:
                C.append(BitSeq(np.zeros(sum(1 for c in cur if c == EDGE_OPEN), dtype=np.uint8)))
                break
            C.append(BitSeq(c_bits))
            cur = nxt
            info = _Analysis(cur)
            sizes.append((info.n, info.m, len(cur), sum(1 for c in cur if c == ANGLE_OPEN)))
            if i + 1 < params.k:
                levels.append(LevelStructure(cur, block_size))
            else:
                top_codes = cur
        entries = {}
        if top_codes is not None:
            ranks = {}
            r = 0
            for p, c in enumerate(top_codes):
                if c == EDGE_OPEN:
                    r += 1
                    ranks[p] = r
            for p, a, b in info.edge_pairs:
                key = pair_key(min(a, b), max(a, b))
                entries.setdefault(key, ranks[p])
        top = StaticDict(entries)
        stats = {"sizes": sizes, "top_edges": len(entries), "truncated": top_codes is None}
        return cls(base, params, levels, D, C, top, stats)

    # -- queries ------------------------------------------------------------
    def neighbor(self, u: int, v: int) -> bool:
        return self.trace(u, v)[0] is not None

    def connecting_edge(self, u: int, v: int):
        return self.trace(u, v)[0]

    def trace(self, u: int, v: int):
        """Return ``(edge position or None, probes)`` for the pair ``u, v``."""
        nav = self.base
        tree = nav.tree
        tb = nav.tree_bit
        if not (1 <= u <= nav.count and 1 <= v <= nav.count):
            raise IndexError(f"ids must lie in 1..{nav.count}")
        probes = 1
        if u != v:
            for a, b in ((u, v), (v, u)):
                if b != 1:
                    pb = tree.select0(b)
                    if tree.rank0(tree.enclose(pb)) == a:
                        return nav.A.select(tb, pb), probes + 1
            probes += 2
        # level 0: scan the rotation of a low-degree endpoint
        D0 = self.D[0]
        for a, b in ((u, v), (v, u)):
            if not D0[a]:
                for i in nav.rotation(a):
                    probes += 1
                    if nav.A[i] != tb:
                        j = nav.mate(i)
                        probes += 2
                        if nav.node_of(j) == b:
                            return min(i, j), probes
                return None, probes
        a, b = D0.rank1(u), D0.rank1(v)
        probes += 1
        for lvl in range(1, len(self.D)):
            S = self.levels[lvl]
            Dl = self.D[lvl]
            for x, y in ((a, b), (b, a)):
                if not Dl[x]:
                    p, end = S.node_span(x)
                    p += 1
                    Ls = S.L
                    while p < end:
                        probes += 1
                        r = S.A[p]
                        if r != BRACKET:
                            p = S.mate(p) + 1
                            continue
                        if p <= 2 or p >= Ls - 1:
                            p += 1
                            continue
                        j = S.mate(p)
                        probes += 2
                        if S.node_of(j) == y:
                            return self._descend(lvl, S.bracket_rank(min(p, j))), probes + lvl
                        p += 1
                    return None, probes
            a, b = Dl.rank1(a), Dl.rank1(b)
            probes += 1
        if len(self.D) < self.params.k or self.stats["truncated"]:
            return None, probes
        rank = self.top.get(pair_key(min(a, b), max(a, b)))
        probes += 1
        if rank is None:
            return None, probes
        return self._descend(len(self.D), rank), probes + len(self.D)

    def _descend(self, lvl: int, rank: int) -> int:
        """Map a bracket rank at level ``lvl`` to its level-0 opening position."""
        for i in range(lvl - 1, -1, -1):
            rank = self.C[i].select1(rank)
        nav = self.base
        ob = 1 - nav.tree_bit
        return nav.A.select(ob, nav.other.select0(rank))

    # -- accounting -----------------------------------------------------------
    def level_sizes(self):
        return list(self.stats["sizes"])

    def aux_symbols(self) -> int:
        """Total length of the stored sequences S_1 .. S_{k-1}."""
        return sum(S.L for S in self.levels[1:])

    def space_bits(self) -> dict:
        return {
            "levels": sum(S.payload_bits() + S.directory_bits() for S in self.levels[1:]),
            "D": sum(len(d) + d.directory_bits() for d in self.D),
            "C": sum(len(c) + c.directory_bits() for c in self.C),
            "top": self.top.size_bits(),
            "D0_C0_entropy": (self.D[0].entropy_bound_bits() + self.C[0].entropy_bound_bits()) if self.D else 0.0,
        }


def lint_level(codes) -> list:
    """Structural violations of the angle rules in one level's codes."""
    L = len(codes)
    problems = []
    nodes = 0
    angles = 0
    stack = []  # [code, items(kind list)]
    for p, c in enumerate(codes):
        if c in (EDGE_OPEN, EDGE_CLOSE):
            if stack:
                stack[-1][1].append("E")
                if stack[-1][0] == ANGLE_OPEN and not _is_frame(p, L):
                    problems.append(f"bracket at {p + 1} sits at the top level of an angle")
        elif c in (NODE_OPEN, ANGLE_OPEN):
            stack.append([c, []])
            if c == NODE_OPEN:
                nodes += 1
            else:
                angles += 1
        else:
            kind, items = stack.pop()
            if stack:
                stack[-1][1].append("N" if kind == NODE_OPEN else "A")
            if kind == ANGLE_OPEN:
                body = [x for x in items if x != "E"] if p >= L - 2 else items
                if not items:
                    problems.append(f"empty angle closing at {p + 1}")
                elif body == ["A"]:
                    problems.append(f"angle closing at {p + 1} only holds an angle")
                if "N" not in items:
                    problems.append(f"angle closing at {p + 1} holds no parenthesis pair at top level")
            for x, y in zip(items, items[1:]):
                if x == "A" and y == "A":
                    problems.append(f"adjacent sibling angles inside the pair closing at {p + 1}")
                    break
    if angles > nodes:
        problems.append(f"{angles} angle pairs exceed {nodes} parenthesis pairs")
    return problems
