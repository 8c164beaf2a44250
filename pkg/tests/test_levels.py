import itertools

import pytest

from conftest import SAMPLE8, K3, P2
from topoplan import MultiLevel, NeighborParams, ParameterError, Topology, build_turan, parse_rotation_system
from topoplan.generate import grid, random_deletion, triangulation, with_extras
from topoplan.levels import (
    _normalize,
    _unwrap_root,
    base_codes,
    codes_to_str,
    default_params,
    lint_level,
)
from topoplan.oracle import NaiveTopology


def _levels(rs, f, k, strict=True):
    core, sc = build_turan(rs)
    topo = Topology(core)
    sym = core.symbols()
    p = MultiLevel.build(topo.primal, base_codes(sym, False), NeighborParams(f, k), strict)
    d = MultiLevel.build(topo.dual, base_codes(sym, True), NeighborParams(f, k), strict)
    return topo, sc, p, d


def _parse_codes(s):
    return ["[]()<>".index(c) for c in s]


def test_default_params():
    assert default_params(10) == NeighborParams(9, 9)
    assert default_params(10**12).f >= 9


def test_small_f_needs_opt_in():
    with pytest.raises(ParameterError):
        NeighborParams(3, 3).check()
    NeighborParams(3, 3).check(strict=False)
    with pytest.raises(ParameterError):
        NeighborParams(9, 0).check()


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("(<>)", "()"),  # empty angle vanishes
        ("(<<()>>)", "(<()>)"),  # angle holding only an angle collapses
        ("(<()><()>)", "(<()()>)"),  # adjacent sibling angles merge
        ("(<<()><()>>)", "(<()()>)"),
    ],
)
def test_angle_rules(raw, expected):
    assert codes_to_str(_normalize(_parse_codes(raw))) == expected


def test_removed_root_is_unwrapped():
    codes = _parse_codes("<[<(()())>]>")
    assert codes_to_str(_unwrap_root(codes)) == "<[(()())]>"


def test_linter_flags_each_rule():
    assert lint_level(_parse_codes("([(<>)])"))
    assert lint_level(_parse_codes("([(<<()>>)])"))
    assert lint_level(_parse_codes("([(<()><()>)])"))
    assert lint_level(_parse_codes("([(<()()>)])")) == []


def test_k3_has_no_survivors():
    _, _, p, d = _levels(parse_rotation_system(K3), 9, 9)
    assert p.stats["truncated"] and d.stats["truncated"]
    assert p.neighbor(1, 2) and p.neighbor(3, 1) and not p.neighbor(1, 1)


def test_p2_bridge_is_a_dual_self_loop():
    _, _, p, d = _levels(parse_rotation_system(P2), 9, 9)
    assert d.neighbor(1, 1) and d.connecting_edge(1, 1) == 3
    assert p.neighbor(1, 2) and not p.neighbor(2, 2)


def _check_against_oracle(rs, f, k, strict=True):
    topo, sc, p, d = _levels(rs, f, k, strict)
    o = NaiveTopology(rs)
    nmap = sc.node_to_input
    fmap = [None] + [o.face_of[tuple(int(t) for t in sc.face_rep[x])] for x in range(1, topo.nfaces + 1)]
    edge_of = lambda pos: o.edge_of[tuple(int(t) for t in sc.pos_dart[pos])]
    for ml, N, idmap, truth in ((p, topo.n, nmap, o.connecting_edges), (d, topo.nfaces, fmap, o.separating_edges)):
        for a, b in itertools.product(range(1, N + 1), repeat=2):
            pos, probes = ml.trace(a, b)
            want = truth(int(idmap[a]), int(idmap[b]))
            assert (pos is None) == (not want), (a, b)
            if pos is not None:
                assert edge_of(pos) in want
            assert probes <= 8 * (f + k)
        for lvl in ml.levels[1:]:
            assert lint_level(lvl.codes.tolist()) == []
    return p, d


def test_sample8_with_small_threshold():
    p, d = _check_against_oracle(parse_rotation_system(SAMPLE8), 3, 3, strict=False)
    assert len(p.level_sizes()) >= 2


@pytest.mark.parametrize(
    "rs, f, k",
    [
        (triangulation(150, 1), 9, 9),
        (triangulation(150, 2), 4, 3),
        (with_extras(triangulation(60, 3), loops=8, parallels=12, seed=2), 3, 4),
        (random_deletion(10, 10, 0.3, 4), 3, 3),
        (grid(6, 7), 3, 2),
    ],
)
def test_adjacency_matches_oracle(rs, f, k):
    _check_against_oracle(rs, f, k, strict=False)


def test_level_size_laws():
    rs = triangulation(3000, 11)
    _, _, p, d = _levels(rs, 9, 9)
    for ml in (p, d):
        sizes = ml.level_sizes()
        for (n0, m0, s0, a0), (n1, m1, s1, a1) in zip(sizes, sizes[1:]):
            assert m1 <= 8 * m0 / 9
            assert a1 <= n1 + 1
        assert ml.aux_symbols() <= 20 * rs.m / (9 - 8) + 4 * 9
