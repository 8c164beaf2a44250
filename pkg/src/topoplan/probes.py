"""Count sequence primitives spent by core navigation.

A probe is one call to a bitvector primitive (access, rank, select,
open/close/enclose). :func:`counted_topology` returns a
:class:`~topoplan.core.Topology` whose bitvectors are wrapped in counters,
so listings can be charged per emitted item.
"""

from .core import Topology
from .embedding import TuranIndex

_COUNTED = {"rank", "rank0", "rank1", "select", "select0", "select1", "close", "open", "enclose", "mate", "__getitem__"}


class ProbeCounter:
    def __init__(self):
        self.count = 0

    def reset(self):
        c, self.count = self.count, 0
        return c


class _CountedSeq:
    def __init__(self, seq, counter):
        self._seq = seq
        self._counter = counter

    def __len__(self):
        return len(self._seq)

    def __getitem__(self, i):
        self._counter.count += 1
        return self._seq[i]

    def __getattr__(self, name):
        attr = getattr(self._seq, name)
        if name not in _COUNTED:
            return attr
        counter = self._counter

        def wrapped(*args):
            counter.count += 1
            return attr(*args)

        return wrapped


def counted_topology(core: TuranIndex):
    """``(topology, counter)`` sharing ``core``'s payload."""
    counter = ProbeCounter()
    wrapped = TuranIndex(
        _CountedSeq(core.A, counter), _CountedSeq(core.B, counter), _CountedSeq(core.Bstar, counter), core.n, core.m
    )
    return Topology(wrapped), counter


def probes_per_item(topo: Topology, counter: ProbeCounter, name: str, arg: int):
    """Run listing ``name`` (e.g. ``"list_face_nodes"``) and return ``(items, max probes per item)``.

    The probes spent before the first item (locating the start) are
    charged to the first item.
    """
    counter.reset()
    worst = 0
    items = 0
    for _ in getattr(topo, name)(arg):
        worst = max(worst, counter.reset())
        items += 1
    return items, worst
