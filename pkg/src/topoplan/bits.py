"""Rank/select bitvectors, a three-symbol sequence and balanced parentheses.

All positions are 1-based: ``rank(b, i)`` counts occurrences of ``b`` in
``seq[1..i]`` and ``select(b, j)`` returns the position of the ``j``-th
occurrence. This keeps the navigation formulas in :mod:`topoplan.core`
identical to their textbook form.
"""

from bisect import bisect_left

import numpy as np

WORD = 64
WORDS_PER_SUPER = 8
SUPER = WORD * WORDS_PER_SUPER
_MASK64 = (1 << 64) - 1

# byte tables shared by select and the excess scans
_POP8 = [bin(x).count("1") for x in range(256)]
_SEL8 = [[j for j in range(8) if (x >> j) & 1] for x in range(256)]


def _excess_tables():
    # open=0 contributes +1, close=1 contributes -1
    total = []
    low = []
    prefix = []
    for x in range(256):
        e, lo, pre = 0, 9, []
        for j in range(8):
            e += -1 if (x >> j) & 1 else 1
            pre.append(e)
            lo = min(lo, e)
        total.append(e)
        low.append(lo)
        prefix.append(pre)
    return total, low, prefix


_EXC_TOTAL, _EXC_MIN, _EXC_PREFIX = _excess_tables()


def _as_bit_array(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence may only hold 0 and 1")
    return arr


class BitSeq:
    """Static bitvector with a two-level rank directory.

    Superblocks of 512 bits keep absolute counts, words of 64 bits keep
    counts relative to their superblock. Select binary-searches the
    superblock counts and finishes inside one word.
    """

    def __init__(self, bits):
        arr = _as_bit_array(bits)
        self.length = int(arr.size)
        nwords = self.length // WORD + 1
        packed = np.packbits(arr, bitorder="little")
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[: packed.size] = packed
        self._packed = buf[: (self.length + 7) // 8].copy()
        words = buf.view("<u8")
        self._words = [int(w) for w in words.tolist()]

        pops = np.array([w.bit_count() for w in self._words], dtype=np.int64)
        cum = np.concatenate(([0], np.cumsum(pops)))[:-1]
        nsuper = (nwords + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
        sup = cum[::WORDS_PER_SUPER][:nsuper]
        self._super1 = [int(x) for x in sup]
        self._sub1 = [int(cum[w] - sup[w // WORDS_PER_SUPER]) for w in range(nwords)]
        self._super0 = [s * SUPER - c for s, c in enumerate(self._super1)]
        self.ones = int(pops.sum())
        self.zeros = self.length - self.ones

    # -- access ---------------------------------------------------------
    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise IndexError(f"position {i} outside 1..{self.length}")
        q = i - 1
        return (self._words[q >> 6] >> (q & 63)) & 1

    def to_array(self) -> np.ndarray:
        return np.unpackbits(self._packed, count=self.length, bitorder="little")

    def __iter__(self):
        return iter(self.to_array().tolist())

    def __repr__(self):
        body = "".join(map(str, self.to_array()[:64].tolist()))
        more = "..." if self.length > 64 else ""
        return f"BitSeq({body}{more}, n={self.length})"

    # -- rank/select ----------------------------------------------------
    def rank1(self, i: int) -> int:
        if i <= 0:
            if i == 0:
                return 0
            raise IndexError(f"rank position {i} < 0")
        if i > self.length:
            raise IndexError(f"rank position {i} > {self.length}")
        w = i >> 6
        r = self._super1[w >> 3] + self._sub1[w]
        rem = i & 63
        if rem:
            r += (self._words[w] & ((1 << rem) - 1)).bit_count()
        return r

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, b: int, i: int) -> int:
        return self.rank1(i) if b else self.rank0(i)

    def select1(self, j: int) -> int:
        if not 1 <= j <= self.ones:
            raise IndexError(f"select1({j}) outside 1..{self.ones}")
        s = bisect_left(self._super1, j) - 1
        base = self._super1[s]
        w = s * WORDS_PER_SUPER
        end = min(w + WORDS_PER_SUPER, len(self._words))
        while w + 1 < end and base + self._sub1[w + 1] < j:
            w += 1
        return w * WORD + _select_in_word(self._words[w], j - base - self._sub1[w]) + 1

    def select0(self, j: int) -> int:
        if not 1 <= j <= self.zeros:
            raise IndexError(f"select0({j}) outside 1..{self.zeros}")
        s = bisect_left(self._super0, j) - 1
        base = self._super0[s]
        w0 = s * WORDS_PER_SUPER
        w = w0
        end = min(w0 + WORDS_PER_SUPER, len(self._words))
        while w + 1 < end and base + (w + 1 - w0) * WORD - self._sub1[w + 1] < j:
            w += 1
        before = base + (w - w0) * WORD - self._sub1[w]
        return w * WORD + _select_in_word(~self._words[w] & _MASK64, j - before) + 1

    def select(self, b: int, j: int) -> int:
        return self.select1(j) if b else self.select0(j)

    # -- accounting -------------------------------------------------------
    def payload_bits(self) -> int:
        return self.length

    def directory_bits(self) -> int:
        # 32-bit superblock counters (both polarities) + 16-bit word counters
        return 64 * len(self._super1) + 16 * len(self._sub1)

    def entropy_bound_bits(self) -> float:
        """Space of a compressed encoding, ``k lg(n/k) + k`` for ``k`` ones."""
        k = min(self.ones, self.zeros)
        if k == 0:
            return 0.0
        return k * np.log2(self.length / k) + k


def _select_in_word(x: int, k: int) -> int:
    """0-based offset of the k-th (1-based) set bit of a 64-bit word."""
    for byte_idx in range(8):
        b = (x >> (8 * byte_idx)) & 0xFF
        c = _POP8[b]
        if k <= c:
            return 8 * byte_idx + _SEL8[b][k - 1]
        k -= c
    raise AssertionError("select ran past the word")


BRACKET, PAREN, ANGLE = 0, 1, 2


class TernarySeq:
    """Sequence over {BRACKET, PAREN, ANGLE} stored as a two-level wavelet tree.

    The first level separates brackets from the rest, the second level
    separates parentheses from angles among the non-brackets.
    """

    def __init__(self, symbols):
        sym = np.asarray(symbols, dtype=np.uint8)
        if sym.size and sym.max() > 2:
            raise ValueError("ternary symbols must be 0, 1 or 2")
        self.length = int(sym.size)
        self._top = BitSeq((sym != BRACKET).astype(np.uint8))
        self._low = BitSeq((sym[sym != BRACKET] == ANGLE).astype(np.uint8))

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if self._top[i] == 0:
            return BRACKET
        return PAREN + self._low[self._top.rank1(i)]

    def to_array(self) -> np.ndarray:
        top = self._top.to_array()
        out = np.zeros(self.length, dtype=np.uint8)
        out[top == 1] = 1 + self._low.to_array()
        return out

    def rank(self, sym: int, i: int) -> int:
        r = self._top.rank1(i)
        if sym == BRACKET:
            return i - r
        a = self._low.rank1(r)
        return a if sym == ANGLE else r - a

    def select(self, sym: int, j: int) -> int:
        if sym == BRACKET:
            return self._top.select0(j)
        if sym == PAREN:
            return self._top.select1(self._low.select0(j))
        if sym == ANGLE:
            return self._top.select1(self._low.select1(j))
        raise ValueError(f"unknown symbol {sym}")

    def count(self, sym: int) -> int:
        return self.rank(sym, self.length)

    def payload_bits(self) -> int:
        return self._top.payload_bits() + self._low.payload_bits()

    def directory_bits(self) -> int:
        return self._top.directory_bits() + self._low.directory_bits()


class BalancedSeq(BitSeq):
    """Balanced parentheses (0 = open, 1 = close) with open/close/enclose.

    Navigation searches the excess function. A min-tree over fixed-size
    blocks locates the target block; inside a block the scan advances a
    byte at a time through precomputed excess tables.
    """

    def __init__(self, bits, block_size: int = 512):
        super().__init__(bits)
        if block_size <= 0 or block_size % 8:
            raise ValueError("block_size must be a positive multiple of 8")
        arr = self.to_array().astype(np.int64)
        excess = np.cumsum(1 - 2 * arr)
        if self.length and (excess.min() < 0 or excess[-1] != 0):
            raise ValueError("sequence is not balanced")
        self.block_size = block_size
        self.nblocks = max(1, (self.length + block_size - 1) // block_size)
        size = 1
        while size < self.nblocks:
            size *= 2
        self._tsize = size
        inf = self.length + 1
        tree = [inf] * (2 * size)
        if self.length:
            pad = np.full(self.nblocks * block_size, inf, dtype=np.int64)
            pad[: self.length] = excess
            mins = pad.reshape(self.nblocks, block_size).min(axis=1)
            tree[size : size + self.nblocks] = [int(x) for x in mins]
        for node in range(size - 1, 0, -1):
            tree[node] = min(tree[2 * node], tree[2 * node + 1])
        self._tree = tree
        # per 64-bit word: lowest prefix excess and total excess change
        nw = (self.length + WORD - 1) // WORD
        steps = np.zeros(nw * WORD, dtype=np.int64)
        steps[: self.length] = 1 - 2 * arr
        pre = np.cumsum(steps.reshape(nw, WORD), axis=1) if nw else np.zeros((0, WORD), dtype=np.int64)
        self._wmin = pre.min(axis=1).tolist() if nw else []
        self._wtot = pre[:, -1].tolist() if nw else []

    def excess(self, i: int) -> int:
        return i - 2 * self.rank1(i)

    def is_open(self, i: int) -> bool:
        return self[i] == 0

    # -- searches ---------------------------------------------------------
    def _fwd(self, i: int, target: int):
        """Smallest j > i with excess(j) <= target, or None."""
        n = self.length
        cur = self.excess(i)
        data = self._packed
        q = i  # 0-based index of position i + 1
        block_end = min(n, (i // self.block_size + 1) * self.block_size)
        while q < block_end and q & 7:
            cur += -1 if (data[q >> 3] >> (q & 7)) & 1 else 1
            q += 1
            if cur <= target:
                return q
        wmin, wtot = self._wmin, self._wtot
        while q + 8 <= block_end:
            if not q & 63 and q + 64 <= block_end:
                w = q >> 6
                if cur + wmin[w] > target:
                    cur += wtot[w]
                    q += 64
                    continue
            b = data[q >> 3]
            if cur + _EXC_MIN[b] <= target:
                pre = _EXC_PREFIX[b]
                for j in range(8):
                    if cur + pre[j] <= target:
                        return q + j + 1
            cur += _EXC_TOTAL[b]
            q += 8
        while q < block_end:
            cur += -1 if (data[q >> 3] >> (q & 7)) & 1 else 1
            q += 1
            if cur <= target:
                return q
        # position i+1 lives in block i // bs; continue strictly after it
        blk = self._next_block(i // self.block_size, target)
        if blk is None:
            return None
        return self._fwd(blk * self.block_size, target)

    def _bwd(self, i: int, target: int):
        """Largest k < i with excess(k) <= target (k >= 0), or None."""
        data = self._packed
        cur = self.excess(i - 1) if i >= 1 else 0
        k = i - 1
        block_start = ((k - 1) // self.block_size) * self.block_size if k >= 1 else 0
        # k is a candidate; positions k, k-1, ... down to block_start + 1 live in this block
        while k > block_start and k & 7:
            if cur <= target:
                return k
            cur += 1 if (data[(k - 1) >> 3] >> ((k - 1) & 7)) & 1 else -1
            k -= 1
        wmin, wtot = self._wmin, self._wtot
        while k - 8 >= block_start:
            if not k & 63 and k - 64 >= block_start:
                w = (k - 64) >> 6
                base = cur - wtot[w]
                # positions k - 63 .. k; position k - 64 is checked next round
                if base + wmin[w] > target:
                    cur = base
                    k -= 64
                    continue
            b = data[(k - 8) >> 3]
            base = cur - _EXC_TOTAL[b]
            if base + _EXC_MIN[b] <= target:
                pre = _EXC_PREFIX[b]
                for j in range(7, -1, -1):
                    if base + pre[j] <= target:
                        return k - 8 + j + 1
            cur = base
            k -= 8
        while k > block_start:
            if cur <= target:
                return k
            cur += 1 if (data[(k - 1) >> 3] >> ((k - 1) & 7)) & 1 else -1
            k -= 1
        if k == 0:
            return 0 if target >= 0 else None
        # k == block_start > 0, excess there is cur
        if cur <= target:
            return k
        blk = self._prev_block(k // self.block_size, target)
        if blk is None:
            return 0 if target >= 0 else None
        return self._bwd((blk + 1) * self.block_size + 1, target)

    def _next_block(self, b: int, target: int):
        tree, size = self._tree, self._tsize
        node = size + b
        while node > 1:
            if node % 2 == 0 and tree[node + 1] <= target:
                node += 1
                while node < size:
                    node = 2 * node if tree[2 * node] <= target else 2 * node + 1
                blk = node - size
                return blk if blk < self.nblocks else None
            node //= 2
        return None

    def _prev_block(self, b: int, target: int):
        tree, size = self._tree, self._tsize
        node = size + b
        while node > 1:
            if node % 2 == 1 and tree[node - 1] <= target:
                node -= 1
                while node < size:
                    node = 2 * node + 1 if tree[2 * node + 1] <= target else 2 * node
                return node - size
            node //= 2
        return None

    # -- navigation -------------------------------------------------------
    def close(self, i: int) -> int:
        """Position of the close matching the open at ``i``."""
        if self[i] != 0:
            raise IndexError(f"position {i} is not an open parenthesis")
        return self._fwd(i, self.excess(i) - 1)

    def open(self, j: int) -> int:
        """Position of the open matching the close at ``j``."""
        if self[j] != 1:
            raise IndexError(f"position {j} is not a close parenthesis")
        return self._bwd(j, self.excess(j)) + 1

    def enclose(self, i: int):
        """Open of the tightest pair strictly enclosing the open at ``i``."""
        if self[i] != 0:
            raise IndexError(f"position {i} is not an open parenthesis")
        k = self._bwd(i, self.excess(i) - 2)
        return None if k is None else k + 1

    def mate(self, i: int) -> int:
        return self.close(i) if self[i] == 0 else self.open(i)

    def directory_bits(self) -> int:
        return super().directory_bits() + 32 * len(self._tree) + 16 * len(self._wmin)
