"""Static dictionary with constant-time lookups (hash-and-displace).

Keys are bucketed by a first hash; buckets are placed largest first, each
bucket searching for a displacement seed under which all its keys land in
free slots. A lookup costs two hash evaluations and one key comparison.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_EMPTY = -1


def _mix(key: int, seed: int) -> int:
    z = (key + (seed + 1) * _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def pair_key(a: int, b: int) -> int:
    """Pack two ids below 2**31 into a single dictionary key."""
    return (a << 31) | b


class StaticDict:
    """Immutable int -> int map built once from ``items``.

    >>> d = StaticDict({5: 50, 7: 70})
    >>> d.get(5), d.get(6)
    (50, None)
    """

    def __init__(self, items=None, load: float = 0.8, bucket_load: float = 4.0):
        items = dict(items or {})
        for k in items:
            if not 0 <= k < (1 << 62):
                raise ValueError(f"key {k} out of range")
        n = len(items)
        self.n = n
        self.nbuckets = max(1, int(np.ceil(n / bucket_load)))
        self.nslots = max(1, int(np.ceil(n / load)))
        self._disp = [0] * self.nbuckets
        self._keys = [_EMPTY] * self.nslots
        self._vals = [0] * self.nslots
        buckets = [[] for _ in range(self.nbuckets)]
        for k in items:
            buckets[_mix(k, -1) % self.nbuckets].append(k)
        order = sorted(range(self.nbuckets), key=lambda b: -len(buckets[b]))
        for b in order:
            keys = buckets[b]
            if not keys:
                break
            d = 0
            while True:
                slots = [_mix(k, d) % self.nslots for k in keys]
                if len(set(slots)) == len(slots) and all(self._keys[s] == _EMPTY for s in slots):
                    break
                d += 1
                if d > 1_000_000:
                    raise RuntimeError("no displacement found; lower the load factor")
            self._disp[b] = d
            for k, s in zip(keys, slots):
                self._keys[s] = k
                self._vals[s] = items[k]

    def _slot(self, key: int) -> int:
        d = self._disp[_mix(key, -1) % self.nbuckets]
        return _mix(key, d) % self.nslots

    def get(self, key: int, default=None):
        if key < 0:
            return default
        s = self._slot(key)
        return self._vals[s] if self._keys[s] == key else default

    def __contains__(self, key: int) -> bool:
        return key >= 0 and self._keys[self._slot(key)] == key

    def __len__(self):
        return self.n

    def items(self):
        for k, v in zip(self._keys, self._vals):
            if k != _EMPTY:
                yield k, v

    def size_bits(self) -> int:
        # displacements + keys + values, at 64 bits each
        return 64 * (self.nbuckets + 2 * self.nslots)

    def to_arrays(self) -> dict:
        return {
            "disp": np.asarray(self._disp, dtype="<i8"),
            "keys": np.asarray(self._keys, dtype="<i8"),
            "vals": np.asarray(self._vals, dtype="<i8"),
        }

    @classmethod
    def from_arrays(cls, arrays: dict) -> "StaticDict":
        self = cls.__new__(cls)
        self._disp = arrays["disp"].tolist()
        self._keys = arrays["keys"].tolist()
        self._vals = arrays["vals"].tolist()
        self.nbuckets = len(self._disp)
        self.nslots = len(self._keys)
        self.n = sum(1 for k in self._keys if k != _EMPTY)
        return self
