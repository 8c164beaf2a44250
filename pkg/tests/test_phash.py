import numpy as np
import pytest

from topoplan.phash import StaticDict, pair_key


def test_lookup_hits_and_misses():
    rng = np.random.default_rng(3)
    keys = {int(k) for k in rng.integers(0, 1 << 60, 5000)}
    items = {k: i for i, k in enumerate(sorted(keys))}
    d = StaticDict(items)
    assert len(d) == len(items)
    for k, v in items.items():
        assert d.get(k) == v and k in d
    for k in rng.integers(0, 1 << 60, 2000):
        k = int(k)
        if k not in items:
            assert d.get(k) is None and k not in d


def test_empty_and_roundtrip():
    d = StaticDict({})
    assert d.get(5) is None and len(d) == 0
    src = StaticDict({pair_key(3, 9): 1, pair_key(9, 3): 2, 7: 3})
    back = StaticDict.from_arrays(src.to_arrays())
    assert dict(back.items()) == {pair_key(3, 9): 1, pair_key(9, 3): 2, 7: 3}


def test_pair_key_is_ordered():
    assert pair_key(1, 2) != pair_key(2, 1)
    with pytest.raises(ValueError):
        StaticDict({-1: 0})
