import itertools

import numpy as np
import pytest

from conftest import SAMPLE8, K3, P2
from topoplan import BuildOptions, TopoIndex, parse_rotation_system
from topoplan.generate import triangulation, with_extras
from topoplan.heavy import PairMatrix, default_f_hp
from topoplan.oracle import NaiveTopology


def test_pair_matrix_packing():
    dense = np.array([[1, 0, 1], [0, 0, 1], [1, 1, 1]], dtype=bool)
    wit = np.array([[5, 0, 6], [0, 0, 7], [6, 7, 8]])
    mx = PairMatrix.from_dense([2, 4, 9], dense, wit)
    assert mx.bits.size == 2  # ceil(9 / 8) bytes
    assert mx.lookup(2, 9) == (True, 6)
    assert mx.lookup(4, 2) == (False, None)
    with pytest.raises(KeyError):
        mx.lookup(3, 4)


def test_default_threshold():
    assert default_f_hp(256) == 128


@pytest.mark.parametrize("witness", [False, True])
def test_pair_queries_match_oracle(witness):
    rs = with_extras(triangulation(45, 6), loops=4, parallels=6, seed=8)
    ix = TopoIndex.build(rs, BuildOptions(f_hp=6, f_inc=4, heavy_pairs=True, with_witness=witness))
    o = NaiveTopology(rs)
    sc = ix.sidecar
    nmap = [int(v) for v in sc.node_to_input]
    fmap = [None] + [o.face_of[tuple(int(t) for t in sc.face_rep[x])] for x in range(1, ix.nfaces + 1)]
    for mx in ix.heavy.matrices.values():
        assert mx.h <= 2 * rs.m / 6
        assert mx.bits.size == (mx.h * mx.h + 7) // 8
    checks = [
        (ix.nodes_share_face, ix.n, nmap, o.shared_faces, fmap),
        (ix.nodes_share_neighbor, ix.n, nmap, o.common_neighbors, nmap),
        (ix.faces_share_node, ix.nfaces, fmap, o.shared_nodes, nmap),
        (ix.faces_share_adjacent_face, ix.nfaces, fmap, o.common_adjacent_faces, fmap),
    ]
    for fn, N, amap, truth, wmap in checks:
        for a, b in itertools.product(range(1, N + 1), repeat=2):
            ans, wit = fn(a, b)
            want = truth(amap[a], amap[b])
            assert ans == bool(want)
            assert ans == fn(b, a)[0]
            if ans and wit is not None:
                assert wmap[wit] in want
            if ans and witness:
                assert wit is not None


def test_spec_examples():
    k3 = TopoIndex.build(parse_rotation_system(K3))
    assert all(k3.nodes_share_face(u, v)[0] for u in (1, 2, 3) for v in (1, 2, 3))
    assert k3.nodes_share_neighbor(1, 2) == (True, 3)
    p2 = TopoIndex.build(parse_rotation_system(P2))
    assert p2.nodes_share_neighbor(1, 2) == (False, None)
    assert p2.faces_share_node(1, 1)[0]


def test_sample8_shared_face_and_node():
    rs = parse_rotation_system(SAMPLE8)
    ix = TopoIndex.build(rs)
    o = NaiveTopology(rs)
    node = {ix.input_node(u): u for u in range(1, ix.n + 1)}
    ans, face = ix.nodes_share_face(node[1], node[7])
    assert ans
    boundary = {ix.input_node(v) for v in ix.list_face_nodes(face)}
    assert boundary == {1, 8, 7, 6}
    face_d = next(x for x in range(1, ix.nfaces + 1) if sorted(ix.input_node(v) for v in ix.list_face_nodes(x)) == [3, 6, 7])
    ans, shared = ix.faces_share_node(face_d, face)
    assert ans and ix.input_node(shared) in (6, 7)
