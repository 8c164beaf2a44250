"""
Encoding a plane graph in 4m+8 bits
===================================

A triangle is encoded as one parenthesis/bracket sequence and then walked
around using nothing but rank/select/match on three bitvectors.
"""

from topoplan import Topology, build_turan, parse_rotation_system

# three nodes, three edges; each node lists its incident edges clockwise
text = """PLANAREMB 1
3 3
2 1 3
2 2 1
2 3 2
1 2
2 3
3 1
root 1 1
"""
rs = parse_rotation_system(text)
core, sidecar = build_turan(rs)

print("sequence :", core.symbols())
print("A        :", "".join(map(str, core.A)))
print("B        :", "".join(map(str, core.B)))
print("B*       :", "".join(map(str, core.Bstar)))
print("payload  :", core.payload_bits(), "bits for m =", rs.m)

topo = Topology(core)

# edges are named by the smaller of their two positions
for e in topo.edges():
    print(f"edge {e}: nodes {topo.edge_endpoints(e)}, faces {topo.edge_faces(e)}")

# rotations and face boundaries come out in input order
for u in range(1, topo.n + 1):
    print("node", u, "rotation ->", [int(sidecar.node_to_input[v]) for _, v in topo.list_node_edges(u)])
for x in range(1, topo.nfaces + 1):
    print("face", x, "boundary ->", list(topo.list_face_nodes(x)))
